"""Polynomials over a real number field: factoring, real roots, field extension.

Factoring over ``K = Q(theta)`` follows Trager: shift ``x -> x - k theta`` until
the norm is squarefree, factor the norm over Q and take gcds back over K.
A root outside K is adjoined through a primitive element ``beta + k theta``.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

import sympy

from ..errors import VerificationError
from . import poly as P
from .field import RATIONALS, FieldElem, RealField

_X, _Y = sympy.symbols("x y")


def _elem_coeffs(c, k):
    if isinstance(c, FieldElem):
        return k(c).coeffs()
    return k(Fraction(c)).coeffs()


def to_field_poly(p, k):
    return P.trim(k(c) for c in p)


def norm(p, k):
    """``Res_y(minpoly(y), p(x, y))``: a rational polynomial vanishing on all conjugate roots."""
    if k.degree == 1:
        return P.to_fractions(_rational(c) for c in p)
    expr = 0
    for j, c in enumerate(p):
        for i, q in enumerate(_elem_coeffs(c, k)):
            if q:
                expr += sympy.Rational(q.numerator, q.denominator) * _Y**i * _X**j
    f = sum(sympy.Rational(q.numerator, q.denominator) * _Y**i for i, q in enumerate(k.minpoly))
    res = sympy.Poly(sympy.resultant(f, expr, _Y), _X)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(res.all_coeffs())]
    return P.trim(coeffs)


def _rational(c):
    if isinstance(c, FieldElem):
        return c.rational()
    return Fraction(c)


def taylor_shift(p, s):
    """``p(x + s)``."""
    out = []
    for c in reversed(p):
        out = P.add(P.mul(out, [s, s * 0 + 1]), [c])
    return out


def _is_squarefree(q):
    return len(P.gcd_poly(q, P.derivative(q))) == 1


def factor_over(p, k):
    """Monic irreducible factors over ``k`` of the squarefree polynomial ``p``."""
    p = P.monic(to_field_poly(p, k))
    if len(p) <= 2:
        return [p] if len(p) == 2 else []
    if k.degree == 1:
        return [[k(c) for c in f] for f, _ in P.factor_rational([_rational(c) for c in p])]
    theta = k.gen()
    for shift in range(0, 50):
        q = taylor_shift(p, -shift * theta) if shift else p
        nq = norm(q, k)
        if _is_squarefree(nq):
            break
    else:
        raise VerificationError("no squarefree norm found for Trager factoring")
    out = []
    for fac, _ in P.factor_rational(nq):
        g = P.gcd_poly(q, [k(c) for c in fac])
        if len(g) > 1:
            out.append(P.monic(taylor_shift(g, shift * theta)) if shift else g)
    return out


def _poly_enclosure(p, lo, hi, width):
    """Interval containing ``p(x)`` for all ``x`` in ``[lo, hi]``; coefficients enclosed to ``width``."""
    acc_lo = acc_hi = Fraction(0)
    for c in reversed(p):
        if isinstance(c, FieldElem):
            clo, chi = c.enclosure(width)
        else:
            clo = chi = Fraction(c)
        cands = (acc_lo * lo, acc_lo * hi, acc_hi * lo, acc_hi * hi)
        acc_lo, acc_hi = min(cands) + clo, max(cands) + chi
    return acc_lo, acc_hi


@dataclass
class RealRoot:
    """A real root of ``factor`` (monic, irreducible over ``field``).

    ``minpoly`` is its minimal polynomial over Q and ``(lo, hi)`` isolates it
    among the real roots of ``minpoly``.
    """

    field: RealField
    factor: list
    minpoly: list
    lo: Fraction
    hi: Fraction

    def in_field(self):
        return len(self.factor) == 2

    def refine(self, width):
        if self.lo != self.hi and self.hi - self.lo > width:
            self.lo, self.hi = P.refine_root(self.minpoly, self.lo, self.hi, width)
        return self.lo, self.hi

    def approx(self):
        lo, hi = self.refine(Fraction(1, 2**60))
        return float((lo + hi) / 2)

    def materialize(self):
        """``(L, embed, value)`` with ``value`` the root as an element of ``L``."""
        if self.in_field():
            return self.field, (lambda x: x), -self.factor[0]
        return extend(self)


def real_roots_over(p, k):
    """Distinct real roots of ``p`` (coefficients in ``k``), largest first."""
    p = P.monic(to_field_poly(p, k))
    sqf = P.monic(P.divmod_poly(p, P.gcd_poly(p, P.derivative(p)))[0])
    roots = []
    for fac in factor_over(sqf, k):
        if len(fac) == 2:
            val = -fac[0]
            if val.is_rational():
                q = val.rational()
                roots.append(RealRoot(k, fac, [-q, Fraction(1)], q, q))
            else:
                mp = _elem_minpoly(val)
                lo, hi = _locate(mp, lambda w: val.enclosure(w))
                roots.append(RealRoot(k, fac, mp, lo, hi))
            continue
        m = P.monic(P.squarefree_part(norm(fac, k)))
        cofactor = P.divmod_poly([k(c) for c in m], fac)[0]
        for lo, hi in P.isolate_real_roots(m):
            if _vanishes_first(fac, cofactor, m, lo, hi):
                roots.append(RealRoot(k, fac, m, lo, hi))
    return _sort_desc(roots)


def _elem_minpoly(val):
    """Minimal polynomial over Q of a field element."""
    k = val.field
    n = norm([-val, k.one()], k)
    for fac, _ in P.factor_rational(n):
        if P.evaluate([k(c) for c in fac], val) == 0:
            return fac
    raise VerificationError("element annihilated by no factor of its norm")


def _locate(mp, encl):
    """Isolating interval of ``mp`` containing the value enclosed by ``encl(width)``."""
    cands = P.isolate_real_roots(mp)
    width = Fraction(1, 2**20)
    while True:
        vlo, vhi = encl(width)
        hits = [(a, b) for a, b in cands if not (b < vlo or a > vhi)]
        if len(hits) == 1:
            return hits[0]
        if not hits:
            raise VerificationError("root enclosure meets no isolating interval")
        cands = [P.refine_root(mp, a, b, (b - a) / 4) if a != b else (a, b) for a, b in cands]
        width /= 2**8


def _vanishes_first(f, g, m, lo, hi):
    """Decide which of ``f`` or ``g`` (with ``f g = m``) vanishes at the root in ``(lo, hi)``."""
    if lo == hi:
        return P.evaluate(f, lo) == 0
    width = (hi - lo) / 2
    for _ in range(200):
        lo, hi = P.refine_root(m, lo, hi, width)
        if lo == hi:
            return P.evaluate(f, lo) == 0
        flo, fhi = _poly_enclosure(f, lo, hi, width * width)
        if flo > 0 or fhi < 0:
            return False
        glo, ghi = _poly_enclosure(g, lo, hi, width * width)
        if glo > 0 or ghi < 0:
            return True
        width /= 2**16
    raise VerificationError("could not separate conjugate roots")


def _sort_desc(roots):
    def key_cmp(a, b):
        width = Fraction(1, 2**20)
        while True:
            alo, ahi = a.refine(width)
            blo, bhi = b.refine(width)
            if alo > bhi:
                return -1
            if blo > ahi:
                return 1
            if alo == ahi == blo == bhi:
                return 0
            width /= 2**16

    return sorted(roots, key=cmp_to_key(key_cmp))


def extend(root):
    """Adjoin a real root of a nonlinear factor; returns ``(L, embed, beta)``."""
    k, fac = root.field, root.factor
    if k.degree == 1:
        big = RealField(root.minpoly, (root.lo, root.hi), name="a", check=False)
        return big, (lambda x: big(x)), big.gen()
    theta = k.gen()
    for shift in range(0, 50):
        g = taylor_shift(fac, -shift * theta) if shift else fac
        ng = P.monic(norm(g, k))
        if _is_squarefree(ng):
            break
    else:
        raise VerificationError("no primitive element found")

    def gamma_encl(width):
        blo, bhi = root.refine(width / 2)
        tlo, thi = k.refine(width / (2 * shift)) if shift else (Fraction(0), Fraction(0))
        return blo + shift * tlo, bhi + shift * thi

    lo, hi = _locate(ng, gamma_encl)
    big = RealField(ng, (lo, hi), name="a", check=False)
    gamma = big.gen()
    # theta is the common root of minpoly_K(y) and sum_j fac_j(y) (gamma - shift y)^j
    r = []
    for j, c in enumerate(fac):
        cj = [big(q) for q in _elem_coeffs(c, k)]
        term = [big(1)]
        for _ in range(j):
            term = P.mul(term, [gamma, big(-shift)])
        r = P.add(r, P.mul(P.trim(cj), term))
    h = P.gcd_poly([big(q) for q in k.minpoly], r)
    if len(h) != 2:
        raise VerificationError("primitive element does not determine the base generator")
    theta_big = -h[0]
    tlo, thi = theta_big.enclosure((k._hi - k._lo) / 4 if k._hi != k._lo else Fraction(1, 2**40))
    if thi < k._lo or tlo > k._hi:
        raise VerificationError("embedding of the base field is inconsistent")

    def embed(x):
        if isinstance(x, FieldElem) and x.field.degree > 1:
            acc = big(0)
            for q in reversed(x.coeffs()):
                acc = acc * theta_big + q
            return acc
        return big(x)

    beta = gamma - shift * theta_big
    return big, embed, beta


def embed_matrix(m, embed):
    return [[embed(x) for x in row] for row in m]


__all__ = [
    "RATIONALS",
    "RealRoot",
    "extend",
    "factor_over",
    "norm",
    "real_roots_over",
    "taylor_shift",
]
