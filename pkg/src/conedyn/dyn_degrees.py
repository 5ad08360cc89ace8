"""Dynamical degrees, entropy class and log-concavity checks."""

from dataclasses import dataclass, replace
from fractions import Fraction

import mpmath

from .errors import DimensionMismatch, InvariantViolation
from .exact import linalg
from .exact.matrix import ExactMatrix
from .exact_linalg import RadiusBound, is_spectral_radius_one, spectral_radius
from .model_en import NumericalRingModel, SymClass, intersect, pullback


@dataclass(frozen=True)
class GradedActionData:
    """Matrices of ``g^*`` on ``N^0, ..., N^n``."""

    n: int
    actions: tuple

    def __init__(self, n, actions):
        actions = tuple(a if isinstance(a, ExactMatrix) else ExactMatrix(a) for a in actions)
        if len(actions) != n + 1:
            raise DimensionMismatch(f"need {n + 1} actions for n = {n}, got {len(actions)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "actions", actions)

    @classmethod
    def from_model(cls, a, model=None):
        a = a if isinstance(a, ExactMatrix) else ExactMatrix(a)
        model = model or NumericalRingModel(a.dim)
        return cls(a.dim, model.graded_action(a))

    def conjugate(self, bases):
        """Same data in new coordinates: ``P_k^{-1} A_k P_k`` for each grade."""
        return GradedActionData(self.n, [p.inverse() @ a @ p for a, p in zip(self.actions, bases)])


@dataclass(frozen=True)
class DynDegreeProfile:
    degrees: tuple
    entropy_class: str
    plateau: tuple

    def values(self):
        return [d.value for d in self.degrees]

    def to_json(self):
        return {
            "degrees": [d.to_json() for d in self.degrees],
            "entropy": self.entropy_class,
            "plateau": list(self.plateau),
        }


def _radius_is_one(m):
    if m.is_integer():
        return is_spectral_radius_one(m)
    return spectral_radius(m, Fraction(1, 2**20)).exact_one


def _same(a, b):
    return not (a.upper < b.lower or b.upper < a.lower)


def plateau_of(degrees):
    """Indices ``(r, s)`` of the first and last maximal degree (ties by overlapping enclosures)."""
    top = max(degrees, key=lambda d: d.lower)
    hits = [k for k, d in enumerate(degrees) if _same(d, top)]
    return hits[0], hits[-1]


def dynamical_degrees(data, eps=1e-9):
    """Spectral radii of the graded action and the entropy class."""
    n = data.n
    for k in (0, n):
        if data.actions[k] != ExactMatrix([[1]]):
            raise InvariantViolation(f"the action on N^{k} must be the identity (1)")
    degrees = tuple(spectral_radius(a, eps) for a in data.actions)
    positive = n >= 1 and not _radius_is_one(data.actions[1])
    return DynDegreeProfile(degrees, "positive" if positive else "null", plateau_of(list(degrees)))


def model_profile(a, eps=1e-9, model=None):
    return dynamical_degrees(GradedActionData.from_model(a, model), eps)


def check_log_concavity(profile):
    """``(ok, index)``; ``index`` is the first ``k`` with a certified violation of ``d_k^2 >= d_{k-1} d_{k+1}``."""
    ds = profile.degrees
    for k in range(1, len(ds) - 1):
        if ds[k].upper ** 2 < ds[k - 1].lower * ds[k + 1].lower:
            return False, k
    return True, None


def check_degree_bound(profile):
    """``(ok, index)`` for ``d_k <= d_1^k``."""
    ds = profile.degrees
    if len(ds) < 2:
        return True, None
    for k in range(2, len(ds)):
        if ds[k].lower > ds[1].upper**k:
            return False, k
    return True, None


def corrupt(profile, k, factor):
    """Copy of ``profile`` with ``d_k`` scaled by ``factor`` (for exercising the checks)."""
    d = profile.degrees[k]
    f = Fraction(factor)
    nd = replace(d, value=d.value * float(f), lower=d.lower * f, upper=d.upper * f)
    degrees = tuple(nd if i == k else x for i, x in enumerate(profile.degrees))
    return replace(profile, degrees=degrees)


def degrees_via_limit(a, k, m_max, h=None, dps=30):
    """``s_m = ((g^m)^* H^k . H^{n-k})^{1/m}`` for ``m = 1..m_max``.

    ``H`` defaults to the identity class; any nef and big class may be passed.
    """
    a = a if isinstance(a, ExactMatrix) else ExactMatrix(a)
    n = a.dim
    if not 0 <= k <= n:
        raise DimensionMismatch(f"k must lie in 0..{n}")
    h = SymClass(h if h is not None else linalg.identity(n))
    out = []
    power = ExactMatrix.identity(n)
    with mpmath.workdps(dps):
        for m in range(1, m_max + 1):
            power = power @ a
            pulled = pullback(power, h)
            val = intersect([pulled] * k + [h] * (n - k))
            q = Fraction(val)
            out.append(float(mpmath.power(mpmath.mpf(q.numerator) / q.denominator, mpmath.mpf(1) / m)))
    return out


def smoothed(series, window=3):
    """Geometric mean over a trailing window."""
    out = []
    for i in range(len(series)):
        chunk = series[max(0, i - window + 1) : i + 1]
        prod = mpmath.mpf(1)
        for x in chunk:
            prod *= x
        out.append(float(prod ** (mpmath.mpf(1) / len(chunk))))
    return out


__all__ = [
    "DynDegreeProfile",
    "GradedActionData",
    "RadiusBound",
    "check_degree_bound",
    "check_log_concavity",
    "corrupt",
    "degrees_via_limit",
    "dynamical_degrees",
    "model_profile",
    "smoothed",
]
