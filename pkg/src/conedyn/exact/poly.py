"""Dense univariate polynomials with exact rational coefficients.

A polynomial is a list of coefficients ordered from the constant term upward
with no trailing zeros; the zero polynomial is ``[]``. Most helpers accept any
coefficient type closed under ``+ - * /`` (``Fraction`` or number-field
elements), the root-isolation routines require rationals.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath


def _recip(x):
    return Fraction(1, x) if isinstance(x, int) else 1 / x


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def to_fractions(p):
    return trim(Fraction(c) for c in p)


def degree(p):
    return len(p) - 1


def add(p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else 0
        b = q[i] if i < len(q) else 0
        out.append(a + b)
    return trim(out)


def sub(p, q):
    return add(p, [-c for c in q])


def scale(p, c):
    return trim(c * a for a in p)


def mul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def divmod_poly(p, q):
    """Euclidean division ``p = quo*q + rem`` over a field."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    lead = q[-1]
    dq = len(q) - 1
    if len(rem) - 1 < dq:
        return [], trim(rem)
    quo = [0] * (len(rem) - dq)
    inv = _recip(lead)
    for k in range(len(rem) - 1 - dq, -1, -1):
        c = rem[k + dq] * inv
        quo[k] = c
        if c != 0:
            for j, b in enumerate(q):
                rem[k + j] = rem[k + j] - c * b
    return trim(quo), trim(rem[:dq])


def rem_poly(p, q):
    return divmod_poly(p, q)[1]


def monic(p):
    if not p:
        return []
    lead = p[-1]
    inv = _recip(lead)
    return [c * inv for c in p]


def gcd_poly(p, q):
    """Monic gcd over a field."""
    p, q = trim(p), trim(q)
    while q:
        p, q = q, rem_poly(p, q)
    return monic(p)


def derivative(p):
    return trim(i * c for i, c in enumerate(p) if i > 0)


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def squarefree_part(p):
    g = gcd_poly(p, derivative(p))
    return monic(divmod_poly(p, g)[0]) if len(g) > 1 else monic(p)


def compose_scale(p, r):
    """Return ``p(r*x)``."""
    out, rk = [], Fraction(1)
    for c in p:
        out.append(c * rk)
        rk *= r
    return trim(out)


def reverse(p):
    """Reciprocal polynomial ``x^deg p(1/x)`` (trailing zeros of ``p`` are dropped)."""
    return trim(reversed(p))


def primitive_integer(p):
    """Scale a rational polynomial to a primitive integer polynomial with positive lead."""
    p = to_fractions(p)
    if not p:
        return []
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def is_integer_poly(p):
    return all(Fraction(c).denominator == 1 for c in p)


def to_str(p, var="x"):
    terms = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and c == 1:
            terms.append(mono)
        elif mono and c == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{c}*{mono}" if mono else f"{c}")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


# --------------------------------------------------------------------------
# Factorisation over Q
# --------------------------------------------------------------------------


def factor_rational(p):
    """Irreducible factorisation over Q as ``[(monic factor, multiplicity), ...]``.

    Backed by sympy's Zassenhaus implementation.
    """
    import sympy

    p = to_fractions(p)
    if len(p) <= 1:
        return []
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(primitive_integer(p))), x, domain="ZZ")
    _, factors = poly.factor_list()
    out = []
    for fac, mult in factors:
        coeffs = [Fraction(int(c)) for c in reversed(fac.all_coeffs())]
        out.append((monic(coeffs), mult))
    out.sort(key=lambda fm: (len(fm[0]), [str(c) for c in fm[0]]))
    return out


# --------------------------------------------------------------------------
# Cyclotomic polynomials
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def cyclotomic(n):
    """Integer coefficients of the n-th cyclotomic polynomial."""
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            num = divmod_poly(num, [Fraction(c) for c in cyclotomic(d)])[0]
    return tuple(int(c) for c in num)


def euler_phi(n):
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def is_kronecker_product(p):
    """True iff the monic integer polynomial ``p`` is ``x^k`` times cyclotomic factors."""
    p = to_fractions(p)
    while p and p[0] == 0:
        p = p[1:]
    if not p:
        return False
    p = monic(p)
    if not is_integer_poly(p):
        return False
    deg = len(p) - 1
    # phi(m) >= sqrt(m/2), so phi(m) <= deg forces m <= 2*deg^2
    m = 1
    while len(p) > 1 and m <= 2 * deg * deg + 2:
        if euler_phi(m) <= len(p) - 1:
            cyc = [Fraction(c) for c in cyclotomic(m)]
            while len(p) >= len(cyc):
                quo, rem = divmod_poly(p, cyc)
                if rem:
                    break
                p = quo
        m += 1
    return len(p) == 1


# --------------------------------------------------------------------------
# Sturm sequences and real root isolation
# --------------------------------------------------------------------------


def sturm_sequence(p):
    p = to_fractions(p)
    seq = [p, derivative(p)]
    while seq[-1]:
        r = rem_poly(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def sign_variations(seq, x):
    signs = []
    for q in seq:
        v = evaluate(q, x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p, lo, hi, seq=None):
    """Number of distinct real roots of ``p`` in the half-open interval ``(lo, hi]``."""
    seq = seq or sturm_sequence(p)
    return sign_variations(seq, Fraction(lo)) - sign_variations(seq, Fraction(hi))


def root_bound(p):
    """Cauchy bound: every complex root has modulus strictly below the result."""
    p = to_fractions(p)
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def _split_point(q, lo, hi):
    n = len(q) + 1
    for k in range(1, n + 1):
        for num in (k, n + 1 - k):
            x = lo + (hi - lo) * Fraction(num, n + 1)
            if evaluate(q, x) != 0:
                return x
    raise AssertionError("no split point found")  # cannot happen: q has < n roots


def isolate_real_roots(p):
    """Disjoint isolating intervals for the distinct real roots, in increasing order.

    Each interval is ``(a, b)``: either ``a == b`` and that rational is a root, or
    ``a < b``, neither endpoint is a root and exactly one root lies in between.
    """
    q = squarefree_part(to_fractions(p))
    if len(q) <= 1:
        return []
    seq = sturm_sequence(q)
    bound = root_bound(q)
    out = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = count_real_roots(q, lo, hi, seq)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = _split_point(q, lo, hi)
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.sort()
    return [_tighten(q, a, b) for a, b in out]


def _tighten(q, a, b):
    """Shrink to a sign-change bracket; return an exact point if the root is rational."""
    fa, fb = evaluate(q, a), evaluate(q, b)
    if fb == 0:
        return (b, b)
    if fa * fb < 0:
        return (a, b)
    raise AssertionError("isolating interval without sign change")  # squarefree q


def refine_root(p, a, b, width):
    """Shrink the bracket ``(a, b)`` of a simple root of ``p`` until ``b - a <= width``."""
    a, b = Fraction(a), Fraction(b)
    if a == b:
        return a, b
    p = to_fractions(p)
    fa = evaluate(p, a)
    sa = fa > 0
    # Newton at high precision, then verify by an exact sign change
    while b - a > width:
        step = _newton_bracket(p, a, b, width)
        if step is not None:
            a, b = step
            if a == b:
                return a, b
            continue
        mid = (a + b) / 2
        fm = evaluate(p, mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == sa:
            a = mid
        else:
            b = mid
    return a, b


def _newton_bracket(p, a, b, width):
    width = Fraction(width)
    if width <= 0:
        return None
    bits = max(64, width.denominator.bit_length() - width.numerator.bit_length() + 40)
    with mpmath.workprec(bits + 20):
        coeffs = [_fraction_to_mpf(c) for c in reversed(p)]
        dcoeffs = [_fraction_to_mpf(c) for c in reversed(derivative(p))]
        x = (_fraction_to_mpf(a) + _fraction_to_mpf(b)) / 2
        tol = mpmath.mpf(2) ** (-bits)
        for _ in range(200):
            dfx = mpmath.polyval(dcoeffs, x)
            if dfx == 0:
                return None
            nx = x - mpmath.polyval(coeffs, x) / dfx
            done = abs(nx - x) <= tol * (1 + abs(x))
            x = nx
            if done or not mpmath.isfinite(x):
                break
        if not mpmath.isfinite(x):
            return None
        xr = _mpf_to_fraction(x)
    delta = min(width / 4, (b - a) / 4)
    lo, hi = xr - delta, xr + delta
    if not (a < lo and hi < b):
        return None
    flo, fhi = evaluate(p, lo), evaluate(p, hi)
    if flo == 0:
        return lo, lo
    if fhi == 0:
        return hi, hi
    if (flo > 0) != (fhi > 0):
        return lo, hi
    return None


def _fraction_to_mpf(c):
    c = Fraction(c)
    return mpmath.mpf(c.numerator) / c.denominator


def _mpf_to_fraction(x):
    man, exp = mpmath.mpf(x).man_exp
    if exp >= 0:
        return Fraction(int(man) * 2**exp)
    return Fraction(int(man), 2 ** (-exp))
