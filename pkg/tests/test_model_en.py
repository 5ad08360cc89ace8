import random
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conedyn.cones import is_salient
from conedyn.errors import ArityMismatch, DimensionMismatch, NotAmple, SchemaError, TestSetNotSpanning
from conedyn.exact import linalg
from conedyn.exact.matrix import ExactMatrix
from conedyn.model_en import (
    FormalProduct,
    IntersectionProfile,
    ModelAutomorphism,
    NumericalRingModel,
    SymClass,
    hodge_form,
    hodge_gram,
    intersect,
    is_positive_definite,
    is_positive_semidefinite,
    nef_cone_model,
    pullback,
    sym_action,
    sym_basis,
    weak_num_trivial,
)

from conftest import random_unimodular


def oracle_intersect(mats):
    """Coefficient of x_1 ... x_n in det(x_1 M_1 + ... + x_n M_n)."""
    n = len(mats)
    xs = sympy.symbols(f"x0:{n}")
    m = sympy.zeros(n, n)
    for x, a in zip(xs, mats):
        m += x * sympy.Matrix(a)
    poly = sympy.Poly(sympy.expand(m.det()), *xs)
    return Fraction(str(poly.coeff_monomial(sympy.Mul(*xs))))


def oracle_permutation(mats):
    """n! times the mixed discriminant via the column-assignment expansion."""
    n = len(mats)
    total = Fraction(0)
    for perm in permutations(range(n)):
        cols = [[Fraction(mats[perm[j]][i][j]) for j in range(n)] for i in range(n)]
        total += linalg.det(cols)
    return total


sym_ints = st.integers(1, 4).flatmap(
    lambda n: st.lists(
        st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n).map(
            lambda b: [[b[i][j] + b[j][i] for j in range(len(b))] for i in range(len(b))]
        ),
        min_size=n,
        max_size=n,
    )
)


def random_pd(rng, n):
    b = np.array([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)], dtype=object)
    return (b @ b.T + np.eye(n, dtype=object)).tolist()


class TestPullback:
    def test_identity(self):
        m = [[1, 2], [2, 5]]
        assert pullback(ExactMatrix.identity(2), m) == SymClass(m)

    def test_fibonacci(self):
        assert pullback([[2, 1], [1, 1]], ExactMatrix.identity(2)) == SymClass([[5, 3], [3, 2]])

    def test_swap(self):
        assert pullback([[0, 1], [1, 0]], [[1, 0], [0, 2]]) == SymClass([[2, 0], [0, 1]])

    def test_size_mismatch(self):
        with pytest.raises(DimensionMismatch):
            pullback([[1, 0], [0, 1]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    def test_automorphism_checks(self):
        with pytest.raises(SchemaError):
            ModelAutomorphism([[2, 0], [0, 1]])
        with pytest.raises(SchemaError):
            ModelAutomorphism([["1/2", 0], [0, 2]])
        assert ModelAutomorphism([[0, 1], [1, 0]]).pullback([[1, 0], [0, 2]]) == SymClass([[2, 0], [0, 1]])

    def test_symmetric_required(self):
        with pytest.raises(SchemaError):
            SymClass([[1, 2], [3, 4]])


class TestSymAction:
    def test_basis_order(self):
        # E_11, E_22, E_12 + E_21
        assert [b for b in sym_basis(2)] == [[[1, 0], [0, 0]], [[0, 0], [0, 1]], [[0, 1], [1, 0]]]
        assert sym_action([[0, 1], [1, 0]]).tolist() == [[0, 1, 0], [1, 0, 0], [0, 0, 1]]

    @given(st.integers(0, 10**6), st.integers(2, 4))
    def test_eigenvalues_are_pair_products(self, seed, n):
        a = random_unimodular(random.Random(seed), n)
        lam = np.linalg.eigvals(np.array(a, float))
        prods = [lam[i] * lam[j] for i in range(n) for j in range(i, n)]
        expected = np.real_if_close(np.poly(prods))
        got = [float(c) for c in reversed(linalg.char_poly(sym_action(a).tolist()))]
        scale = max(1.0, max(abs(expected)))
        assert np.allclose(got, np.real(expected), atol=1e-9 * scale)


class TestIntersect:
    def test_identity_n2(self):
        assert intersect([[[1, 0], [0, 1]]] * 2) == 2

    def test_mixed_n2(self):
        assert intersect([[[1, 0], [0, 1]], [[1, 0], [0, 0]]]) == 1

    def test_identity_n3(self):
        assert intersect([ExactMatrix.identity(3).tolist()] * 3) == 6

    def test_arity(self):
        with pytest.raises(ArityMismatch):
            intersect([[[1, 0], [0, 1]]])

    @given(sym_ints)
    def test_matches_permutation_expansion(self, mats):
        assert intersect(mats) == oracle_permutation(mats)

    @given(sym_ints.filter(lambda m: len(m) <= 3))
    def test_matches_symbolic_coefficient(self, mats):
        assert intersect(mats) == oracle_intersect(mats)

    @given(sym_ints)
    def test_diagonal_is_factorial_det(self, mats):
        import math

        m = mats[0]
        assert intersect([m] * len(m)) == math.factorial(len(m)) * linalg.det(m)

    @given(sym_ints, st.integers(0, 10**6))
    def test_unimodular_invariance(self, mats, seed):
        a = random_unimodular(random.Random(seed), len(mats))
        assert intersect([pullback(a, m) for m in mats]) == intersect(mats)

    @given(sym_ints, st.randoms())
    def test_symmetric(self, mats, r):
        shuffled = list(mats)
        r.shuffle(shuffled)
        assert intersect(shuffled) == intersect(mats)

    def test_profile_cache(self):
        prof = IntersectionProfile(2)
        i = [[1, 0], [0, 1]]
        d = [[1, 0], [0, 0]]
        assert prof.value([i, d]) == prof.value([d, i]) == 1


class TestPositivity:
    def test_definite(self):
        assert is_positive_definite([[2, 1], [1, 2]])
        assert not is_positive_definite([[1, 2], [2, 1]])

    def test_semidefinite(self):
        assert is_positive_semidefinite([[1, 1], [1, 1]])
        assert not is_positive_semidefinite([[1, 0], [0, -1]])

    @given(sym_ints)
    def test_semidefinite_matches_numpy(self, mats):
        m = mats[0]
        ev = np.linalg.eigvalsh(np.array(m, float))
        if min(abs(ev)) < 1e-9 and min(ev) > -1e-9:
            return
        assert is_positive_semidefinite(m) == (min(ev) > 0)


class TestWeakTriviality:
    TESTS2 = [[[1, 0], [0, 1]], [[2, 0], [0, 1]], [[2, 1], [1, 2]]]

    def test_zero(self):
        assert weak_num_trivial([[[0, 0], [0, 0]]], self.TESTS2)

    def test_traceless_is_detected(self):
        # pairs to 0 with I but to -1 with diag(2, 1)
        assert intersect([[[1, 0], [0, -1]], [[1, 0], [0, 1]]]) == 0
        assert intersect([[[1, 0], [0, -1]], [[2, 0], [0, 1]]]) == -1
        assert not weak_num_trivial([[[1, 0], [0, -1]]], self.TESTS2)

    def test_identity(self):
        assert not weak_num_trivial([[[1, 0], [0, 1]]], self.TESTS2)

    def test_formal_difference(self):
        d = [[1, 0], [0, 0]]
        z = FormalProduct([(1, [d]), (-1, [d])])
        assert weak_num_trivial(z, self.TESTS2)

    def test_top_degree_product(self):
        d = [[1, 0], [0, 0]]
        assert weak_num_trivial([d, d], self.TESTS2)

    def test_not_spanning(self):
        with pytest.raises(TestSetNotSpanning):
            weak_num_trivial([[[1, 0], [0, 1]]], [[[1, 0], [0, 1]], [[2, 0], [0, 2]]])


class TestHodge:
    def test_n2_identity(self):
        assert hodge_form([[1, 0], [0, 1]], [[1, 0], [0, 1]], []) == -2

    def test_n2_primitive(self):
        assert hodge_form([[1, 0], [0, -1]], [[1, 0], [0, -1]], []) == 2

    def test_n3_traceless(self):
        d = [[1, 0, 0], [0, -1, 0], [0, 0, 0]]
        i = ExactMatrix.identity(3).tolist()
        assert hodge_form(d, d, [i]) == -oracle_intersect([d, d, i]) == 2

    def test_not_ample(self):
        with pytest.raises(NotAmple):
            hodge_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[[1, 0, 0], [0, 0, 0], [0, 0, 0]]])

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_gram_positive_definite(self, n):
        rng = random.Random(n)
        for _ in range(3):
            hs = [random_pd(rng, n) for _ in range(n - 1)]
            basis, gram = hodge_gram(hs)
            assert len(basis) == n * (n + 1) // 2 - 1
            assert is_positive_definite(gram)


class TestNefModel:
    def test_n1(self):
        c = nef_cone_model(1)
        assert [list(r) for r in c.rays] == [[1]]

    def test_n2_sample(self):
        c = nef_cone_model(2, [[1, 0], [0, 1], [1, 1], [1, -1]])
        assert len(c.rays) == 4 and c.full_dim and is_salient(c)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_rays_psd(self, n):
        for r in nef_cone_model(n).rays:
            assert is_positive_semidefinite(SymClass.from_vector(r, n))


class TestNumericalRing:
    @pytest.mark.parametrize("n,ranks", [(1, [1, 1]), (2, [1, 3, 1]), (3, [1, 6, 6, 1])])
    def test_ranks(self, n, ranks):
        m = NumericalRingModel(n)
        assert [m.rank(k) for k in range(n + 1)] == ranks

    def test_identity_action(self):
        acts = NumericalRingModel(3).graded_action(ExactMatrix.identity(3))
        assert all(a == ExactMatrix.identity(a.dim) for a in acts)

    def test_degree_one_is_sym_action_up_to_basis(self):
        a = [[2, 1], [1, 1]]
        acts = NumericalRingModel(2).graded_action(a)
        assert linalg.char_poly(acts[1].tolist()) == linalg.char_poly(sym_action(a).tolist())

    def test_action_is_multiplicative(self):
        a = ExactMatrix([[0, 1, 0], [0, 0, 1], [1, 1, 0]])
        b = ExactMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
        m = NumericalRingModel(3)
        ga, gb, gab = m.graded_action(a), m.graded_action(b), m.graded_action(a @ b)
        # (ab)^* = b^* a^* on every grade
        for k in range(4):
            assert gab[k] == gb[k] @ ga[k]

    def test_sigma_pairs(self):
        m = NumericalRingModel(2)
        assert m.sigma([], [1, 1, 0]) == [intersect([b, [[1, 0], [0, 1]]]) for b in sym_basis(2)]
