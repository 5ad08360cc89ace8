"""The free group on ``a, b``, its second abelianization and a PGL(2) representation.

Words are tuples of ``(generator, +-1)``. The class of a word ``w`` in ``F'``
modulo ``F''`` is a Laurent polynomial ``p`` in ``xi, eta`` with
``class(w) = p . [a, b]``; ``xi`` and ``eta`` act by conjugation with ``a`` and
``b``.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from sympy import ZZ, field

from .errors import NotInDerivedSubgroup, SchemaError, VerificationError
from .exact import linalg

GENERATORS = ("a", "b")

# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Word:
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _free_reduce(self.letters))

    @classmethod
    def parse(cls, text):
        """``"a b a- b-"``; ``A`` and ``B`` are accepted for inverses too."""
        letters = []
        for tok in text.replace(",", " ").split():
            if tok in ("a", "b"):
                letters.append((tok, 1))
            elif tok in ("a-", "b-"):
                letters.append((tok[0], -1))
            elif tok in ("A", "B"):
                letters.append((tok.lower(), -1))
            else:
                raise SchemaError(f"bad letter {tok!r}: use a, b, a-, b-")
        return cls(tuple(letters))

    def __mul__(self, other):
        return Word(self.letters + other.letters)

    def inverse(self):
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, k):
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def __len__(self):
        return len(self.letters)

    def exponent_sums(self):
        sa = sum(e for g, e in self.letters if g == "a")
        sb = sum(e for g, e in self.letters if g == "b")
        return sa, sb

    def __str__(self):
        return " ".join(g if e == 1 else g + "-" for g, e in self.letters)


def _free_reduce(letters):
    out = []
    for g, e in letters:
        if g not in GENERATORS or e not in (1, -1):
            raise SchemaError(f"bad letter {(g, e)!r}")
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def reduce(raw):
    """Freely reduced normal form of a letter list or a word string."""
    if isinstance(raw, Word):
        return raw
    if isinstance(raw, str):
        return Word.parse(raw)
    return Word(tuple(raw))


A = Word((("a", 1),))
B = Word((("b", 1),))


def commutator(x, y):
    return x * y * x.inverse() * y.inverse()


def reduced_words(max_len):
    """All reduced words of length at most ``max_len``."""
    letters = [("a", 1), ("a", -1), ("b", 1), ("b", -1)]
    out = [Word()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1][0] == x[0] and w[-1][1] == -x[1]:
                    continue
                nxt.append(w + (x,))
        out.extend(Word(w) for w in nxt)
        frontier = nxt
    return out


def derived_words(max_len):
    """Reduced words of length at most ``max_len`` with both exponent sums zero."""
    letters = [("a", 1), ("a", -1), ("b", 1), ("b", -1)]
    out = []

    def walk(w, sa, sb):
        if sa == 0 and sb == 0:
            out.append(Word(tuple(w)))
        left = max_len - len(w)
        for x in letters:
            if w and w[-1][0] == x[0] and w[-1][1] == -x[1]:
                continue
            na = sa + x[1] * (x[0] == "a")
            nb = sb + x[1] * (x[0] == "b")
            if abs(na) + abs(nb) <= left - 1:
                w.append(x)
                walk(w, na, nb)
                w.pop()

    walk([], 0, 0)
    return out


# ---------------------------------------------------------------------------
# Laurent polynomials in xi, eta
# ---------------------------------------------------------------------------


class LaurentPoly:
    """Integer Laurent polynomial; ``terms`` maps ``(i, j)`` to the coefficient of ``xi^i eta^j``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: int(v) for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def monomial(cls, i=0, j=0, c=1):
        return cls({(i, j): c})

    @classmethod
    def one(cls):
        return cls.monomial()

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return LaurentPoly(t)

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return LaurentPoly({k: v * other for k, v in self.terms.items()})
        t = {}
        for (i, j), v in self.terms.items():
            for (k, l), w in other.terms.items():
                key = (i + k, j + l)
                t[key] = t.get(key, 0) + v * w
        return LaurentPoly(t)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.monomial(c=other) if other else LaurentPoly()
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def xi_degree(self):
        return max((i for i, _ in self.terms), default=None)

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items()):
            mono = "*".join(
                s for s in (_power("xi", i), _power("eta", j)) if s
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        return [[i, j, c] for (i, j), c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data):
        if isinstance(data, dict):
            data = data.get("terms", [])
        try:
            return cls({(int(i), int(j)): int(c) for i, j, c in data})
        except (TypeError, ValueError) as exc:
            raise SchemaError("Laurent polynomial must be a list of [i, j, coeff]") from exc


def _power(var, k):
    if k == 0:
        return ""
    return var if k == 1 else f"{var}^{k}"


# ---------------------------------------------------------------------------
# Second abelianization
# ---------------------------------------------------------------------------


def to_laurent(w):
    """Coefficient polynomial of ``w`` in ``F'/F''`` relative to ``[a, b]``.

    A word in ``F'`` traces a closed path in the grid ``Z^2`` (a steps move
    right, b steps move up). The unit square with lower-left corner ``(i, j)``
    is ``xi^i eta^j [a, b]``, so the class is the sum of squares weighted by
    winding number. The winding numbers are collected column by column from
    the horizontal steps.
    """
    w = reduce(w)
    if w.exponent_sums() != (0, 0):
        raise NotInDerivedSubgroup(f"{w} has nonzero exponent sums")
    x = y = 0
    columns = {}
    for g, e in w.letters:
        if g == "a":
            col = x if e == 1 else x - 1
            columns.setdefault(col, {})
            columns[col][y] = columns[col].get(y, 0) + e
            x += e
        else:
            y += e
    terms = {}
    for i, steps in columns.items():
        # square (i, k) winds sum over horizontal steps above it, negated
        heights = sorted(steps)
        acc = 0
        for lo, hi in zip(heights, heights[1:]):
            acc -= steps[lo]
            for k in range(lo, hi):
                terms[(i, k)] = terms.get((i, k), 0) - acc
    return LaurentPoly(terms)


def derived_level(w):
    """0 outside ``F'``, 1 in ``F' \\ F''``, 2 meaning "at least 2"."""
    w = reduce(w)
    if w.exponent_sums() != (0, 0):
        return 0
    return 2 if to_laurent(w).is_zero() else 1


# ---------------------------------------------------------------------------
# Rational functions and PGL(2)
# ---------------------------------------------------------------------------

_K, ALPHA, BETA = field("alpha,beta", ZZ)


class RatFunc:
    """Element of Q(alpha, beta) in lowest terms with a canonical denominator sign."""

    __slots__ = ("v",)

    def __init__(self, value):
        if isinstance(value, RatFunc):
            value = value.v
        self.v = _K(value)

    @property
    def numerator(self):
        return self.v.numer

    @property
    def denominator(self):
        return self.v.denom

    def __add__(self, o):
        return RatFunc(self.v + _v(o))

    __radd__ = __add__

    def __sub__(self, o):
        return RatFunc(self.v - _v(o))

    def __rsub__(self, o):
        return RatFunc(_v(o) - self.v)

    def __mul__(self, o):
        return RatFunc(self.v * _v(o))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return RatFunc(self.v / _v(o))

    def __rtruediv__(self, o):
        return RatFunc(_v(o) / self.v)

    def __neg__(self):
        return RatFunc(-self.v)

    def __pow__(self, k):
        return RatFunc(self.v**k)

    def is_zero(self):
        return self.v == 0

    def __eq__(self, o):
        if isinstance(o, (RatFunc, int, Fraction)):
            return self.v == _v(o)
        return NotImplemented

    def __hash__(self):
        return hash(self.v)

    def __str__(self):
        return str(self.v.as_expr())

    __repr__ = __str__


def _v(o):
    if isinstance(o, RatFunc):
        return o.v
    if isinstance(o, Fraction):
        return _K(o.numerator) / o.denominator
    return _K(o)


alpha = RatFunc(ALPHA)
beta = RatFunc(BETA)


class ProjMat2:
    """A 2x2 invertible matrix over Q(alpha, beta) up to scalars.

    The representative has first nonzero entry (row-major) equal to 1.
    """

    __slots__ = ("e",)

    def __init__(self, rows):
        e = [RatFunc(x) for row in rows for x in row]
        if len(e) != 4:
            raise SchemaError("need a 2x2 matrix")
        if (e[0] * e[3] - e[1] * e[2]).is_zero():
            raise SchemaError("singular matrix")
        lead = next(x for x in e if not x.is_zero())
        self.e = tuple(x / lead for x in e)

    @property
    def rows(self):
        return [[self.e[0], self.e[1]], [self.e[2], self.e[3]]]

    def __matmul__(self, o):
        a, b, c, d = self.e
        p, q, r, s = o.e
        return ProjMat2([[a * p + b * r, a * q + b * s], [c * p + d * r, c * q + d * s]])

    def inverse(self):
        a, b, c, d = self.e
        return ProjMat2([[d, -b], [-c, a]])

    def __eq__(self, o):
        return isinstance(o, ProjMat2) and self.e == o.e

    def __hash__(self):
        return hash(self.e)

    def is_identity(self):
        return self == IDENTITY

    def __repr__(self):
        return f"ProjMat2({[[str(x) for x in r] for r in self.rows]})"

    def to_json(self):
        return [[str(x) for x in r] for r in self.rows]


IDENTITY = ProjMat2([[1, 0], [0, 1]])
MAT_A = ProjMat2([[ALPHA, 1], [0, 1]])
MAT_B = ProjMat2([[1, 0], [0, BETA]])

# polynomial representatives; products stay in Z[alpha, beta] until normalization
_R = _K.ring
_PA, _PB = _R.gens
_POLY = {
    ("a", 1): (_PA, _R(1), _R(0), _R(1)),
    ("a", -1): (_R(1), -_R(1), _R(0), _PA),
    ("b", 1): (_R(1), _R(0), _R(0), _PB),
    ("b", -1): (_PB, _R(0), _R(0), _R(1)),
}


def _phi_poly(w):
    a, b, c, d = _R(1), _R(0), _R(0), _R(1)
    for x in reduce(w).letters:
        p, q, r, s = _POLY[x]
        a, b, c, d = a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s
    return a, b, c, d


def phi(w):
    """Image of ``w`` under ``a -> [[alpha, 1], [0, 1]]``, ``b -> [[1, 0], [0, beta]]``."""
    a, b, c, d = _phi_poly(w)
    return ProjMat2([[_K(a), _K(b)], [_K(c), _K(d)]])


def evaluate_laurent(p):
    """``xi -> alpha``, ``eta -> 1/beta``: how the module acts on unipotent entries."""
    if p.is_zero():
        return RatFunc(0)
    lo_a = min(i for i, _ in p.terms)
    hi_b = max(j for _, j in p.terms)
    # clear denominators: alpha^i beta^-j = alpha^(i - lo_a) beta^(hi_b - j) / (alpha^-lo_a beta^hi_b)
    num = _R.zero
    for (i, j), c in p.terms.items():
        num += c * _PA ** (i - lo_a) * _PB ** (hi_b - j)
    return RatFunc(_K(num) * _K(_PA) ** lo_a / _K(_PB) ** hi_b)


COMMUTATOR_ENTRY = RatFunc(1) - beta ** (-1)


def phi_prime_consistency(w):
    """``phi(w)`` is ``[[1, n], [0, 1]]`` with ``n = p(alpha, 1/beta) (1 - 1/beta)``, ``p = to_laurent(w)``."""
    p = to_laurent(w)
    entry = (evaluate_laurent(p) * COMMUTATOR_ENTRY).v
    a, b, c, d = _phi_poly(w)
    # projectively [[a, b], [c, d]] ~ [[1, b/a], [0, 1]]; compare b/a with the entry crosswise
    return c == 0 and a == d and b * entry.denom == entry.numer * a


# ---------------------------------------------------------------------------
# Non-finite-generation witness
# ---------------------------------------------------------------------------


@dataclass
class SpanWitness:
    """``witness (1 - eta)`` lies outside the Z-span of ``s (1 - eta)``, ``s in span``.

    ``certificate`` is an integer functional on ``support`` that vanishes on
    every spanning vector and is nonzero on the witness.
    """

    witness: LaurentPoly
    support: list
    span_vectors: list
    target: list
    certificate: list

    def verify(self):
        if any(sum(y * v for y, v in zip(self.certificate, vec)) for vec in self.span_vectors):
            return False
        return sum(y * t for y, t in zip(self.certificate, self.target)) != 0

    def to_json(self):
        return {
            "witness": self.witness.to_json(),
            "witness_str": str(self.witness),
            "support": [list(s) for s in self.support],
            "certificate": self.certificate,
            "verified": self.verify(),
        }


ONE_MINUS_ETA = LaurentPoly({(0, 0): 1, (0, 1): -1})


def non_fg_witness(span):
    """``xi^N`` with ``N`` beyond every xi-degree in ``span``, plus an exact certificate."""
    span = list(span)
    degs = [p.xi_degree() for p in span if not p.is_zero()]
    n = max(degs) + 1 if degs else 0
    witness = LaurentPoly.monomial(n, 0)
    expanded = [p * ONE_MINUS_ETA for p in span]
    target_poly = witness * ONE_MINUS_ETA
    support = sorted({k for p in expanded + [target_poly] for k in p.terms})
    vecs = [[p.terms.get(k, 0) for k in support] for p in expanded]
    target = [target_poly.terms.get(k, 0) for k in support]
    cert = _separating_functional(vecs, target, len(support))
    if cert is None:
        raise VerificationError("witness lies in the span")
    return SpanWitness(witness, support, vecs, target, cert)


def _separating_functional(vecs, target, dim):
    """Integer ``y`` with ``y.v = 0`` for all ``v`` in ``vecs`` and ``y.target != 0``."""
    rows = [[Fraction(x) for x in v] for v in vecs]
    kernel = linalg.nullspace(rows, dim) if rows else [
        [Fraction(int(i == j)) for j in range(dim)] for i in range(dim)
    ]
    for y in kernel:
        if sum(a * b for a, b in zip(y, target)) != 0:
            den = math.lcm(*(x.denominator for x in y))
            return [int(x * den) for x in y]
    return None


__all__ = [
    "A",
    "B",
    "LaurentPoly",
    "ProjMat2",
    "RatFunc",
    "SpanWitness",
    "Word",
    "alpha",
    "beta",
    "commutator",
    "derived_level",
    "derived_words",
    "evaluate_laurent",
    "non_fg_witness",
    "phi",
    "phi_prime_consistency",
    "reduce",
    "reduced_words",
    "to_laurent",
]
