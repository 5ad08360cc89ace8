"""Characteristic polynomials, certified spectral radii and eigenspaces.

The spectral radius is bracketed by an exact test: ``rho(p) < r`` holds iff
``p(r z)`` has every root in the open unit disk, decided by the Schur
transform recursion on integer coefficients. Bisection on dyadic ``r`` then
yields rational bounds of any requested width.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd

import numpy as np

from .errors import DimensionMismatch, NonIntegerEntries, NonSquare
from .exact import linalg
from .exact import poly as P
from .exact.field import RealField
from .exact.matrix import ExactMatrix, as_rows


def char_poly(m):
    """``det(x I - m)`` as Fraction coefficients, constant term first."""
    rows = as_rows(m)
    if any(len(r) != len(rows) for r in rows):
        raise NonSquare("characteristic polynomial needs a square matrix")
    return [Fraction(c) for c in linalg.char_poly(rows)]


def int_char_poly(m):
    """Integer coefficients of ``det(x I - m)`` for an integer matrix."""
    cp = char_poly(m)
    if not P.is_integer_poly(cp):
        raise NonIntegerEntries("characteristic polynomial has non-integer coefficients")
    return [int(c) for c in cp]


# --------------------------------------------------------------------------
# Schur-Cohn stability
# --------------------------------------------------------------------------


def _leading_minors_positive(a):
    """Sylvester's test on a symmetric integer matrix via fraction-free elimination."""
    a = [list(r) for r in a]
    n = len(a)
    prev = 1
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return True


def schur_cohn_matrix(b):
    """Integer Schur-Cohn form of the integer polynomial ``b`` (constant first)."""
    d = len(b) - 1
    s = [[0] * d for _ in range(d)]
    for i in range(1, d + 1):
        for j in range(i, d + 1):
            acc = 0
            for k in range(1, i + 1):
                acc += b[d - i + k] * b[d - j + k] - b[i - k] * b[j - k]
            s[i - 1][j - 1] = s[j - 1][i - 1] = acc
    return s


def is_schur_stable_hermitian(p):
    """Schur stability from positive definiteness of the Schur-Cohn form."""
    b = P.primitive_integer(p)
    if len(b) <= 1:
        return bool(b)
    return _leading_minors_positive(schur_cohn_matrix(b))


def is_schur_stable(p):
    """True iff every root of ``p`` lies in the open unit disk.

    Schur transform recursion: with ``p*`` the reversed polynomial,
    ``(a_n p - a_0 p*) / z`` keeps the count of roots inside the disk as long as
    ``|a_0| < |a_n|`` (Rouche on the unit circle).
    """
    b = [int(c) for c in P.primitive_integer(p)]
    if len(b) <= 1:
        return bool(b)
    while len(b) > 1:
        a0, an = b[0], b[-1]
        if abs(a0) >= abs(an):
            return False
        q = [an * x - a0 * y for x, y in zip(b, reversed(b))][1:]
        g = gcd(*q)
        b = [x // g for x in q]
    return True


def radius_below(p, r):
    """Exact decision of ``rho(p) < r`` for rational ``r > 0``."""
    r = Fraction(r)
    u, v = r.numerator, r.denominator
    p = P.to_fractions(p)
    d = len(p) - 1
    scaled = [c * u**k * v ** (d - k) for k, c in enumerate(p)]
    return is_schur_stable(scaled)


# --------------------------------------------------------------------------
# Radius equal to one, decided factor by factor
# --------------------------------------------------------------------------


def _chebyshev_reduction(f):
    """For self-reciprocal ``f`` of degree 2m return ``g`` with ``f = x^m g(x + 1/x)``."""
    f = list(f)
    m = (len(f) - 1) // 2
    g = [Fraction(0)] * (m + 1)
    # peel off the top term using (x + 1/x)^k expansions
    work = f[:]
    for k in range(m, -1, -1):
        c = work[m + k]
        g[k] = c
        if c == 0:
            continue
        # subtract c * x^m (x + 1/x)^k
        for t in range(k + 1):
            work[m + k - 2 * t] -= c * comb(k, t)
    if any(work):
        raise ValueError("polynomial is not self-reciprocal")
    return P.trim(g)


def _factor_position(f):
    """Compare the largest root modulus of an irreducible factor with 1: -1, 0 or +1."""
    if is_schur_stable(f):
        return -1
    if len(f) == 2:
        return 0 if abs(f[0]) == abs(f[1]) else 1
    rev = P.reverse(f)
    recip = rev == f
    if not recip or (len(f) - 1) % 2:
        # an irreducible factor with a root on the circle is self-reciprocal of even degree
        return 1
    g = _chebyshev_reduction(f)
    deg_g = len(g) - 1
    inside = P.count_real_roots(g, Fraction(-2), Fraction(2))
    # -2 itself is excluded: it would give x = -1, a linear factor
    return 0 if inside == deg_g else 1


def radius_is_one(p):
    """``rho(p) == 1`` via rational factorisation, independent of cyclotomic division."""
    p = P.to_fractions(p)
    while p and p[0] == 0:
        p = p[1:]
    if len(p) <= 1:
        return False
    positions = [_factor_position(f) for f, _ in P.factor_rational(p)]
    return max(positions) == 0


# --------------------------------------------------------------------------
# Spectral radius
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RadiusBound:
    """Certified enclosure ``lower <= rho <= upper`` of a spectral radius."""

    value: float
    error: float
    exact_one: bool
    lower: Fraction = field(repr=False)
    upper: Fraction = field(repr=False)

    def contains(self, x):
        return self.lower <= Fraction(x) <= self.upper

    def to_json(self):
        return {"value": self.value, "error": self.error, "exact_one": self.exact_one}


def _dyadic(x, bits=40):
    return Fraction(round(x * 2**bits), 2**bits)


def _numeric_radius(p):
    coeffs = [float(c) for c in reversed(p)]
    try:
        roots = np.roots(coeffs)
        est = float(np.max(np.abs(roots))) if len(roots) else 0.0
    except (np.linalg.LinAlgError, ValueError, OverflowError):
        est = 1.0
    return est if np.isfinite(est) else 1.0


def polynomial_radius(p, eps):
    """Certified bracket of the largest root modulus of the rational polynomial ``p``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    p = P.to_fractions(p)
    while p and p[0] == 0:
        p = p[1:]
    if len(p) <= 1:
        zero = Fraction(0)
        return RadiusBound(0.0, 0.0, False, zero, zero)
    if radius_is_one(p):
        one = Fraction(1)
        return RadiusBound(1.0, 0.0, True, one, one)
    est = max(_numeric_radius(p), 2.0**-30)
    hi = _dyadic(est * (1 + 1e-9) + 2.0**-40)
    while not radius_below(p, hi):
        hi *= 2
    lo = _dyadic(est * (1 - 1e-9))
    while lo > 0 and radius_below(p, lo):
        lo /= 2
    if lo < 0:
        lo = Fraction(0)
    # invariant: lo <= rho < hi
    while hi - lo > eps:
        mid = (lo + hi) / 2
        if radius_below(p, mid):
            hi = mid
        else:
            lo = mid
    value = (lo + hi) / 2
    return RadiusBound(float(value), float((hi - lo) / 2), False, lo, hi)


def spectral_radius(m, eps=1e-9):
    """:class:`RadiusBound` for ``m`` with ``upper - lower <= eps``."""
    rows = as_rows(m)
    if any(len(r) != len(rows) for r in rows):
        raise NonSquare("spectral radius needs a square matrix")
    return polynomial_radius(char_poly(rows), eps)


def is_spectral_radius_one(m):
    """Kronecker test: the characteristic polynomial is ``x^k`` times cyclotomics.

    A nilpotent matrix (radius zero) is reported as ``False``.
    """
    rows = as_rows(m)
    if any(Fraction(x).denominator != 1 for r in rows for x in r):
        raise NonIntegerEntries("matrix entries must be integers")
    cp = char_poly(rows)
    while cp and cp[0] == 0:
        cp = cp[1:]
    if len(cp) <= 1:
        return False
    return P.is_kronecker_product(cp)


# --------------------------------------------------------------------------
# Eigenspaces over real number fields
# --------------------------------------------------------------------------


def eigenspace(m, lambda_poly, root_interval):
    """Basis of ``ker(m - lambda I)`` over ``Q(lambda)``.

    ``lambda`` is the real root of ``lambda_poly`` isolated by ``root_interval``.
    Entries are :class:`~conedyn.exact.field.FieldElem`.
    """
    rows = as_rows(m)
    if any(len(r) != len(rows) for r in rows):
        raise NonSquare("eigenspace needs a square matrix")
    return eigenspace_over(rows, RealField.root_of(lambda_poly, root_interval, name="l"))


def eigenspace_over(rows, lam):
    """Kernel of ``rows - lam I`` with entries in the field of ``lam``."""
    k = lam.field
    n = len(rows)
    shifted = [[k(rows[i][j]) - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    return [[k(x) for x in v] for v in linalg.nullspace(shifted, n)]


def matvec_exact(m, v):
    rows = as_rows(m)
    if len(rows[0]) != len(v):
        raise DimensionMismatch("matrix and vector sizes differ")
    return linalg.matvec(rows, list(v))


__all__ = [
    "ExactMatrix",
    "RadiusBound",
    "char_poly",
    "eigenspace",
    "is_schur_stable",
    "is_schur_stable_hermitian",
    "is_spectral_radius_one",
    "polynomial_radius",
    "radius_below",
    "radius_is_one",
    "spectral_radius",
]
