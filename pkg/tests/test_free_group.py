import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conedyn.errors import NotInDerivedSubgroup, SchemaError
from conedyn.free_group import (
    A,
    B,
    IDENTITY,
    LaurentPoly,
    ProjMat2,
    RatFunc,
    Word,
    alpha,
    beta,
    commutator,
    derived_level,
    derived_words,
    non_fg_witness,
    phi,
    phi_prime_consistency,
    reduce,
    reduced_words,
    to_laurent,
)

AB = commutator(A, B)
LETTERS = [("a", 1), ("a", -1), ("b", 1), ("b", -1)]
words = st.lists(st.sampled_from(LETTERS), max_size=10).map(lambda x: Word(tuple(x)))


def fox_a(w):
    """Abelianized Fox derivative with respect to ``a``, as a dict of monomials."""
    x = y = 0
    out = {}
    for g, e in w.letters:
        if g == "a":
            key = (x, y) if e == 1 else (x - 1, y)
            out[key] = out.get(key, 0) + e
            x += e
        else:
            y += e
    return LaurentPoly(out)


ONE_MINUS_ETA = LaurentPoly({(0, 0): 1, (0, 1): -1})


def derived_word(draw_letters):
    # pad with the inverse abelianization to land in F'
    w = Word(tuple(draw_letters))
    sa, sb = w.exponent_sums()
    return w * (A ** -sa) * (B ** -sb)


f_prime = st.lists(st.sampled_from(LETTERS), max_size=8).map(derived_word)


class TestWords:
    def test_reduce(self):
        assert reduce("a a-") == Word()
        assert reduce("a b b- a") == Word.parse("a a")
        assert str(reduce("a b a- b-")) == "a b a- b-"
        assert reduce("A B a b") == Word.parse("a- b- a b")

    def test_bad_letter(self):
        with pytest.raises(SchemaError):
            Word.parse("a c")

    def test_inverse_and_power(self):
        assert AB * AB.inverse() == Word()
        assert len(A**3) == 3 and (A**-2) == Word.parse("a- a-")

    def test_counts(self):
        # 1 + 4 * (3^k - 1) / 2 reduced words of length <= k
        assert len(reduced_words(4)) == 1 + 4 + 12 + 36 + 108
        ws = derived_words(6)
        assert all(w.exponent_sums() == (0, 0) for w in ws)
        assert len(ws) == len({w.letters for w in ws})
        assert len(ws) == sum(1 for w in reduced_words(6) if w.exponent_sums() == (0, 0))

    def test_derived_level(self):
        assert derived_level(A) == 0
        assert derived_level(AB) == 1
        a2b = commutator(A**2, B)
        assert derived_level(commutator(AB, a2b)) == 2


class TestLaurent:
    def test_examples(self):
        assert to_laurent(AB) == LaurentPoly.one()
        assert to_laurent(A * AB * A.inverse()) == LaurentPoly.monomial(1, 0)
        assert to_laurent(commutator(A**2, B)) == LaurentPoly({(0, 0): 1, (1, 0): 1})
        assert to_laurent(B * AB * B.inverse()) == LaurentPoly.monomial(0, 1)
        assert to_laurent(Word()).is_zero()

    def test_not_derived(self):
        with pytest.raises(NotInDerivedSubgroup):
            to_laurent(A)

    def test_arithmetic(self):
        p = LaurentPoly({(1, 0): 2, (0, -1): -1})
        assert p - p == 0
        assert p * LaurentPoly.one() == p
        assert LaurentPoly.from_json(p.to_json()) == p
        assert str(LaurentPoly.monomial(1, 2, -3)) == "-3*xi*eta^2"

    @given(f_prime)
    def test_fox_derivative_oracle(self, w):
        assert to_laurent(w) * ONE_MINUS_ETA == fox_a(w)

    @given(f_prime, f_prime)
    def test_additive(self, w1, w2):
        assert to_laurent(w1 * w2) == to_laurent(w1) + to_laurent(w2)

    @given(f_prime, words)
    def test_conjugation_is_module_action(self, w, g):
        sa, sb = g.exponent_sums()
        assert to_laurent(g * w * g.inverse()) == LaurentPoly.monomial(sa, sb) * to_laurent(w)


class TestPhi:
    def test_generators(self):
        assert phi(A) == ProjMat2([[alpha, 1], [0, 1]])
        assert phi(B) == ProjMat2([[1, 0], [0, beta]])
        assert phi(Word()) == IDENTITY

    def test_commutator(self):
        assert phi(AB) == ProjMat2([[1, 1 - 1 / beta], [0, 1]])

    def test_normal_form(self):
        m = ProjMat2([[2 * alpha, 2], [0, 2]])
        assert m == ProjMat2([[alpha, 1], [0, 1]])
        assert m.rows[0] == [1, 1 / alpha]
        with pytest.raises(SchemaError):
            ProjMat2([[1, 1], [1, 1]])

    @settings(max_examples=25)
    @given(words, words)
    def test_homomorphism(self, w1, w2):
        assert phi(w1 * w2) == phi(w1) @ phi(w2)

    @settings(max_examples=15)
    @given(f_prime, f_prime)
    def test_second_derived_is_trivial(self, w1, w2):
        c = commutator(w1, w2)
        assert derived_level(c) == 2
        assert phi(c).is_identity()

    def test_eta_acts_by_inverse_beta(self):
        m = phi(B * AB * B.inverse())
        assert m == ProjMat2([[1, (1 - 1 / beta) / beta], [0, 1]])
        assert m != ProjMat2([[1, (1 - 1 / beta) * beta], [0, 1]])


class TestConsistency:
    def test_examples(self):
        assert phi_prime_consistency(AB)
        assert phi_prime_consistency(A * AB * A.inverse())
        assert phi(A * AB * A.inverse()) == ProjMat2([[1, alpha * (1 - 1 / beta)], [0, 1]])

    def test_requires_derived(self):
        with pytest.raises(NotInDerivedSubgroup):
            phi_prime_consistency(Word.parse("a b"))

    def test_exhaustive_short(self):
        assert all(phi_prime_consistency(w) for w in derived_words(8))

    def test_detects_wrong_entry(self, monkeypatch):
        import conedyn.free_group as fg

        # swapping the orientation of eta must break the square
        monkeypatch.setattr(fg, "COMMUTATOR_ENTRY", RatFunc(1) - beta)
        assert not fg.phi_prime_consistency(AB)


def _in_rational_span(vectors, target):
    if not vectors:
        return all(x == 0 for x in target)
    m = sympy.Matrix(vectors).T
    return m.rank() == m.row_join(sympy.Matrix(target)).rank()


class TestWitness:
    def test_examples(self):
        assert non_fg_witness([]).witness == LaurentPoly.one()
        assert non_fg_witness([LaurentPoly.one()]).witness == LaurentPoly.monomial(1, 0)
        span = [LaurentPoly.monomial(i, 0) for i in range(3)]
        assert non_fg_witness(span).witness == LaurentPoly.monomial(3, 0)

    @settings(max_examples=25)
    @given(st.integers(0, 10**6))
    def test_random_spans(self, seed):
        rng = random.Random(seed)
        span = [
            LaurentPoly({(rng.randint(-3, 3), rng.randint(-2, 2)): rng.randint(-4, 4) for _ in range(rng.randint(1, 4))})
            for _ in range(rng.randint(0, 5))
        ]
        w = non_fg_witness(span)
        assert w.verify()
        assert not _in_rational_span(w.span_vectors, w.target)
        assert w.to_json()["verified"]
