"""Real algebraic number fields ``Q(theta)`` with a fixed real embedding.

A field is given by the monic minimal polynomial of ``theta`` over Q together
with a rational interval isolating the chosen real root. Elements are
polynomials in ``theta`` of degree below the field degree; equality is exact
(polynomial identity modulo the minimal polynomial) and signs are decided by
interval evaluation on a refined isolating interval, which always terminates
because a nonzero element cannot vanish at ``theta``.
"""

from fractions import Fraction

import mpmath

from ..errors import IntervalNotIsolating, VerificationError
from . import poly as P


class RealField:
    """``Q(theta)`` for a real root ``theta`` of an irreducible rational polynomial."""

    def __init__(self, minpoly, interval, name="t", check=True):
        minpoly = P.monic(P.to_fractions(minpoly))
        if len(minpoly) < 2:
            raise ValueError("minimal polynomial must have positive degree")
        lo, hi = Fraction(interval[0]), Fraction(interval[1])
        if check:
            if len(minpoly) > 2 and len(P.factor_rational(minpoly)) != 1:
                raise ValueError(f"{P.to_str(minpoly)} is not irreducible over Q")
            if len(minpoly) > 2 and P.factor_rational(minpoly)[0][1] != 1:
                raise ValueError("minimal polynomial must be squarefree")
            _check_isolating(minpoly, lo, hi)
        if len(minpoly) == 2:
            lo = hi = -minpoly[0]
        self.minpoly = tuple(minpoly)
        self.degree = len(minpoly) - 1
        self.name = name
        self._lo, self._hi = lo, hi

    # -- construction -----------------------------------------------------

    @classmethod
    def rationals(cls):
        return RATIONALS

    @classmethod
    def from_root(cls, p, interval, name="t"):
        """Field generated by the real root of ``p`` isolated by ``interval``."""
        return cls.root_of(p, interval, name).field

    @classmethod
    def root_of(cls, p, interval, name="t"):
        """The real root of ``p`` isolated by ``interval``, as an element of ``Q(root)``."""
        lo, hi = Fraction(interval[0]), Fraction(interval[1])
        p = P.to_fractions(p)
        if lo == hi:
            if P.evaluate(p, lo) != 0:
                raise IntervalNotIsolating(f"{lo} is not a root")
            return RATIONALS.from_rational(lo)
        _check_isolating(P.squarefree_part(p), lo, hi)
        for fac, _ in P.factor_rational(p):
            if len(fac) == 2:
                r = -fac[0] / fac[1]
                if lo < r < hi:
                    return RATIONALS.from_rational(r)
                continue
            if P.count_real_roots(fac, lo, hi) == 1:
                return cls(fac, (lo, hi), name=name, check=False).gen()
        raise IntervalNotIsolating("no factor has a root in the interval")

    # -- elements ---------------------------------------------------------

    def __call__(self, value):
        if isinstance(value, FieldElem):
            if value.field is self or value.field == self:
                return value
            if value.field.degree == 1:
                return self.from_rational(value.rational())
            raise ValueError("element belongs to a different field")
        if isinstance(value, (list, tuple)):
            return self.from_coeffs(value)
        return self.from_rational(value)

    def from_rational(self, q):
        q = Fraction(q)
        return FieldElem(self, (q,) if q != 0 else ())

    def from_coeffs(self, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        rem = P.rem_poly(P.trim(coeffs), list(self.minpoly))
        return FieldElem(self, tuple(rem))

    def gen(self):
        if self.degree == 1:
            return self.from_rational(-self.minpoly[0])
        return FieldElem(self, (Fraction(0), Fraction(1)))

    def zero(self):
        return FieldElem(self, ())

    def one(self):
        return FieldElem(self, (Fraction(1),))

    # -- root enclosure ---------------------------------------------------

    def interval(self):
        return self._lo, self._hi

    def refine(self, width):
        width = Fraction(width)
        if self._hi - self._lo > width:
            self._lo, self._hi = P.refine_root(list(self.minpoly), self._lo, self._hi, width)
        return self._lo, self._hi

    def approx(self, dps=30):
        lo, hi = self.refine(Fraction(1, 10 ** (dps + 5)))
        with mpmath.workdps(dps + 10):
            return (mpmath.mpf(lo.numerator) / lo.denominator + mpmath.mpf(hi.numerator) / hi.denominator) / 2

    # -- identity ---------------------------------------------------------

    def same_root(self, other):
        if self.minpoly != other.minpoly:
            return False
        if self.degree == 1:
            return True
        lo, hi = max(self._lo, other._lo), min(self._hi, other._hi)
        if lo > hi:
            return False
        if lo == hi:
            return P.evaluate(list(self.minpoly), lo) == 0
        return P.count_real_roots(list(self.minpoly), lo, hi) == 1 or (
            P.evaluate(list(self.minpoly), lo) == 0
        )

    def __eq__(self, other):
        return isinstance(other, RealField) and (self is other or self.same_root(other))

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        if self.degree == 1:
            return "RealField(Q)"
        return f"RealField({P.to_str(list(self.minpoly), self.name)} = 0, {self.name} ~ {float(self.approx(15)):.12g})"

    def describe(self):
        return {
            "minpoly": [str(c) for c in self.minpoly],
            "interval": [str(self._lo), str(self._hi)],
            "approx": mpmath.nstr(self.approx(20), 20),
        }


def _check_isolating(p, lo, hi):
    if lo == hi:
        if P.evaluate(p, lo) != 0:
            raise IntervalNotIsolating(f"{lo} is not a root")
        return
    if lo > hi:
        raise IntervalNotIsolating("empty interval")
    flo, fhi = P.evaluate(p, lo), P.evaluate(p, hi)
    if flo == 0 or fhi == 0 or (flo > 0) == (fhi > 0):
        raise IntervalNotIsolating("interval endpoints do not bracket a sign change")
    if P.count_real_roots(p, lo, hi) != 1:
        raise IntervalNotIsolating("interval contains more than one root")


RATIONALS = RealField([Fraction(0), Fraction(1)], (0, 0), name="q", check=False)


def _interval_horner(coeffs, lo, hi):
    """Enclosure of ``sum c_i x^i`` for ``x`` in ``[lo, hi]``."""
    acc_lo = acc_hi = Fraction(0)
    for c in reversed(coeffs):
        cands = (acc_lo * lo, acc_lo * hi, acc_hi * lo, acc_hi * hi)
        acc_lo, acc_hi = min(cands) + c, max(cands) + c
    return acc_lo, acc_hi


class FieldElem:
    """Element of a :class:`RealField`; immutable and hashable."""

    __slots__ = ("field", "c")

    def __init__(self, field, coeffs):
        self.field = field
        self.c = coeffs

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field is self.field:
                return other
            if other.field.degree == 1:
                return self.field.from_rational(other.rational())
            if self.field.degree == 1 and self.is_rational():
                return other.field(other)
            if other.field == self.field:
                return FieldElem(self.field, other.c)
            raise ValueError("cannot mix elements of different number fields")
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    def _promote(self, other):
        """Return the pair lifted to a common field (handles Q elements on the left)."""
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented, NotImplemented
        if self.field.degree == 1 and isinstance(other, FieldElem) and other.field.degree > 1:
            return other.field.from_rational(self.rational()), other
        return self, o

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        a, b = self._promote(other)
        if a is NotImplemented:
            return NotImplemented
        return FieldElem(a.field, tuple(P.add(list(a.c), list(b.c))))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, tuple(-x for x in self.c))

    def __sub__(self, other):
        a, b = self._promote(other)
        if a is NotImplemented:
            return NotImplemented
        return FieldElem(a.field, tuple(P.sub(list(a.c), list(b.c))))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._promote(other)
        if a is NotImplemented:
            return NotImplemented
        if not a.c or not b.c:
            return a.field.zero()
        if len(b.c) == 1:
            return FieldElem(a.field, tuple(x * b.c[0] for x in a.c))
        if len(a.c) == 1:
            return FieldElem(a.field, tuple(x * a.c[0] for x in b.c))
        prod = P.mul(list(a.c), list(b.c))
        return FieldElem(a.field, tuple(P.rem_poly(prod, list(a.field.minpoly))))

    __rmul__ = __mul__

    def inverse(self):
        if not self.c:
            raise ZeroDivisionError("division by zero in number field")
        if len(self.c) == 1:
            return FieldElem(self.field, (1 / self.c[0],))
        # extended Euclid: s*self + t*minpoly = 1
        r0, r1 = list(self.field.minpoly), list(self.c)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = P.divmod_poly(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, P.sub(s0, P.mul(q, s1))
        if not r1:
            raise VerificationError("minimal polynomial is not irreducible")
        inv = P.scale(s1, 1 / r1[0])
        return FieldElem(self.field, tuple(P.rem_poly(inv, list(self.field.minpoly))))

    def __truediv__(self, other):
        a, b = self._promote(other)
        if a is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison -------------------------------------------------------

    def is_zero(self):
        return not self.c

    def is_rational(self):
        return len(self.c) <= 1

    def rational(self):
        if not self.is_rational():
            raise ValueError("element is irrational")
        return self.c[0] if self.c else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.rational() == other
        if isinstance(other, FieldElem):
            if self.is_rational() and other.is_rational():
                return self.rational() == other.rational()
            try:
                return (self - other).is_zero()
            except ValueError:
                return False
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.rational())
        return hash((self.field.minpoly, self.c))

    def sign(self):
        if not self.c:
            return 0
        if len(self.c) == 1:
            return 1 if self.c[0] > 0 else -1
        width = Fraction(1, 2**30)
        while True:
            lo, hi = self.field.refine(width)
            vlo, vhi = _interval_horner(self.c, lo, hi)
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            width /= 2**32

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return bool(self.c)

    # -- numerics ---------------------------------------------------------

    def enclosure(self, width):
        """Rational interval of width at most ``width`` containing the value."""
        width = Fraction(width)
        if len(self.c) <= 1:
            v = self.c[0] if self.c else Fraction(0)
            return v, v
        w = width
        while True:
            lo, hi = self.field.refine(w)
            vlo, vhi = _interval_horner(self.c, lo, hi)
            if vhi - vlo <= width:
                return vlo, vhi
            w /= 2**16

    def to_mpf(self, dps=30):
        lo, hi = self.enclosure(Fraction(1, 10 ** (dps + 5)))
        with mpmath.workdps(dps + 10):
            return (mpmath.mpf(lo.numerator) / lo.denominator + mpmath.mpf(hi.numerator) / hi.denominator) / 2

    def __float__(self):
        if len(self.c) <= 1:
            return float(self.c[0]) if self.c else 0.0
        return float(self.to_mpf(20))

    def coeffs(self):
        """Coefficients in the power basis ``1, theta, theta^2, ...`` padded to the degree."""
        return list(self.c) + [Fraction(0)] * (self.field.degree - len(self.c))

    def __repr__(self):
        if self.is_rational():
            return f"{self.rational()}"
        return f"[{P.to_str(list(self.c), self.field.name)} ~ {float(self):.12g}]"

    def to_json(self):
        if self.is_rational():
            q = self.rational()
            return str(q)
        return {"coeffs": [str(c) for c in self.coeffs()], "approx": mpmath.nstr(self.to_mpf(20), 18)}


def lift(value, field):
    """Coerce a rational or field element into ``field``."""
    return field(value)


def common_field(values):
    """The unique non-rational field among ``values`` (or Q)."""
    found = RATIONALS
    for v in values:
        if isinstance(v, FieldElem) and v.field.degree > 1:
            if found.degree > 1 and not (v.field is found or v.field == found):
                raise ValueError("values live in different number fields")
            found = v.field
    return found


def sign(x):
    if isinstance(x, FieldElem):
        return x.sign()
    return (x > 0) - (x < 0)


def enclosure(x, width):
    if isinstance(x, FieldElem):
        return x.enclosure(width)
    x = Fraction(x)
    return x, x


def to_mpf(x, dps=30):
    if isinstance(x, FieldElem):
        return x.to_mpf(dps)
    x = Fraction(x)
    with mpmath.workdps(dps + 10):
        return mpmath.mpf(x.numerator) / x.denominator
