"""Polyhedral cones, Perron-Frobenius eigenvectors and common eigenvectors in a cone.

A cone is given by finitely many rays. Rays and matrices may carry rational or
real-algebraic entries from a single number field; every decision is an exact
linear program over that field.
"""

from dataclasses import dataclass
from dataclasses import field as dc_field
from fractions import Fraction

from .errors import (
    ConePreservationViolated,
    DimensionMismatch,
    EigenvectorNotFound,
    PreconditionViolation,
    SchemaError,
    SolvabilityNotWitnessed,
)
from .exact import linalg, lp
from .exact import poly as P
from .exact.algebraic import real_roots_over
from .exact.field import RATIONALS, FieldElem, common_field
from .exact.matrix import as_rows, parse_rational


def to_scalar(x, k):
    """Represent ``x`` in the field ``k``; plain Fractions when ``k`` is Q."""
    if k.degree == 1:
        if isinstance(x, FieldElem):
            return x.rational()
        return Fraction(x)
    return k(x)


def _field_of(*groups):
    return common_field(x for g in groups for row in g for x in row)


class PolyCone:
    """Finitely generated cone ``{sum mu_i r_i : mu >= 0}`` in dimension ``dim``."""

    def __init__(self, dim, rays):
        rays = [list(r) for r in rays]
        if dim < 1:
            raise ValueError("cone dimension must be positive")
        for r in rays:
            if len(r) != dim:
                raise DimensionMismatch(f"ray of length {len(r)} in a cone of dimension {dim}")
        k = common_field(x for r in rays for x in r)
        rays = [[to_scalar(x, k) for x in r] for r in rays]
        if any(all(x == 0 for x in r) for r in rays):
            raise ValueError("rays must be nonzero")
        self.dim = dim
        self.rays = tuple(tuple(r) for r in rays)
        self.field = k

    @classmethod
    def orthant(cls, dim):
        return cls(dim, [[1 if i == j else 0 for i in range(dim)] for j in range(dim)])

    @property
    def full_dim(self):
        return bool(self.rays) and linalg.rank([list(r) for r in self.rays]) == self.dim

    def ray_matrix(self, k=None):
        """``dim x len(rays)`` matrix whose columns are the rays."""
        k = k or self.field
        return [[to_scalar(r[i], k) for r in self.rays] for i in range(self.dim)]

    def contains(self, v):
        return cone_contains(self, v)

    def is_salient(self):
        return is_salient(self)

    def __repr__(self):
        return f"PolyCone(dim={self.dim}, rays={len(self.rays)})"

    def to_json(self):
        return {"dim": self.dim, "rays": [[_scalar_json(x) for x in r] for r in self.rays]}

    @classmethod
    def from_json(cls, data):
        try:
            dim = int(data["dim"])
            rays = [[parse_rational(x) for x in r] for r in data["rays"]]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad cone description: {exc}") from exc
        return cls(dim, rays)


def _scalar_json(x):
    if isinstance(x, FieldElem):
        return x.to_json()
    x = Fraction(x)
    return str(x)


# --------------------------------------------------------------------------
# LP decisions
# --------------------------------------------------------------------------


def _membership_coeffs(c, v):
    if len(v) != c.dim:
        raise DimensionMismatch(f"vector of length {len(v)} against a cone of dimension {c.dim}")
    if not c.rays:
        return None if any(x != 0 for x in v) else []
    k = common_field([*(x for r in c.rays for x in r), *v])
    r = c.ray_matrix(k)
    return lp.feasible_point(r, [to_scalar(x, k) for x in v])


def cone_contains(c, v):
    """Exact LP test ``v in c``."""
    return _membership_coeffs(c, list(v)) is not None


def is_salient(c):
    """True iff ``c`` contains no line."""
    if not c.rays:
        return True
    r = c.ray_matrix()
    a = r + [[1] * len(c.rays)]
    b = [0] * c.dim + [1]
    return lp.feasible_point(a, b) is None


def preserves_cone(g, c):
    """True iff ``g`` maps every ray of ``c`` into ``c``."""
    rows = as_rows(g)
    if len(rows) != c.dim:
        raise DimensionMismatch(f"{len(rows)}x{len(rows)} matrix on a cone of dimension {c.dim}")
    return all(cone_contains(c, linalg.matvec(rows, list(r))) for r in c.rays)


def cone_point_in_subspace(c, basis, k):
    """Lexicographically smallest ``mu`` with ``sum mu = 1`` and ``R mu`` in ``span(basis)``.

    Returns ``(vector, mu)`` or ``None`` when the subspace meets the cone only at 0.
    """
    d = c.dim
    if not basis or not c.rays:
        return None
    ann = linalg.nullspace([list(v) for v in basis], d)
    r = c.ray_matrix(k)
    rows = linalg.matmul(ann, r) if ann else []
    a = rows + [[to_scalar(1, k)] * len(c.rays)]
    b = [0] * len(rows) + [1]
    mu = lp.lexmin(a, b)
    if mu is None:
        return None
    return linalg.matvec(r, mu), mu


# --------------------------------------------------------------------------
# Eigenvectors
# --------------------------------------------------------------------------


def _identity(x):
    return x


@dataclass
class ConeEigenvector:
    vector: list
    eigenvalue: object
    residual_witness: str
    coefficients: list = dc_field(default_factory=list)
    field: object = RATIONALS
    embed: object = _identity

    def to_json(self):
        return {
            "vector": [_scalar_json(x) for x in self.vector],
            "eigenvalue": _scalar_json(self.eigenvalue),
            "residual_witness": self.residual_witness,
        }


@dataclass
class CommonEigenvector:
    vector: list
    chi: list
    residual_witness: str
    coefficients: list = dc_field(default_factory=list)
    field: object = RATIONALS
    embed: object = _identity

    def to_json(self):
        return {
            "vector": [_scalar_json(x) for x in self.vector],
            "chi": [_scalar_json(x) for x in self.chi],
            "residual_witness": self.residual_witness,
        }


def _matrix_in(m, k):
    return [[to_scalar(x, k) for x in row] for row in as_rows(m)]


def _embed_all(m, embed, k):
    return [[to_scalar(embed(x) if isinstance(x, FieldElem) else x, k) for x in row] for row in m]


def _certify(gens, v, lams, c, mu, k):
    r = c.ray_matrix(k)
    if linalg.matvec(r, mu) != v or any(x < 0 for x in mu):
        raise EigenvectorNotFound("cone certificate does not reproduce the vector")
    for g, lam in zip(gens, lams):
        if linalg.matvec(g, v) != [lam * x for x in v]:
            raise EigenvectorNotFound("eigenvector residual is not exactly zero")


def pf_eigenvector(g, c):
    """Eigenvector for the spectral radius inside a salient full-dimensional invariant cone."""
    rows = as_rows(g)
    if len(rows) != c.dim:
        raise DimensionMismatch("matrix and cone dimensions differ")
    if not is_salient(c):
        raise PreconditionViolation("cone is not salient")
    if not c.full_dim:
        raise PreconditionViolation("cone is not full-dimensional")
    if not preserves_cone(rows, c):
        raise PreconditionViolation("matrix does not preserve the cone")
    k = _field_of(rows, c.rays)
    m = _matrix_in(rows, k)
    # the spectral radius is an eigenvalue, hence the largest real root
    top = real_roots_over(linalg.char_poly(m), k)[0]
    big, embed, lam = top.materialize()
    lam = to_scalar(lam, big)
    mb = _embed_all(m, embed, big)
    cb = c if big is k else PolyCone(c.dim, [[embed(x) for x in r] for r in c.rays])
    basis = _eigen_basis(mb, lam, big)
    found = cone_point_in_subspace(cb, basis, big)
    if found is None:
        raise EigenvectorNotFound("no eigenvector for the spectral radius in the cone")
    v, mu = found
    _certify([mb], v, [lam], cb, mu, big)
    return ConeEigenvector(v, lam, "exact: g v = rho v and v = R mu with mu >= 0", mu, big, embed)


def _eigen_basis(m, lam, k):
    n = len(m)
    shifted = [[m[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    return [[to_scalar(x, k) for x in v] for v in linalg.nullspace(shifted, n)]


def _commutator(a, b):
    ai, bi = linalg.inverse(a), linalg.inverse(b)
    return linalg.matmul(linalg.matmul(a, b), linalg.matmul(ai, bi))


def derived_fixed_space(gens, k):
    """Basis of the subspace fixed pointwise by the commutator subgroup."""
    n = len(gens[0])
    one = to_scalar(1, k)
    ident = linalg.identity(n, one)
    ann = []
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            comm = _commutator(gens[i], gens[j])
            ann.extend(linalg.madd(comm, linalg.mscale(ident, -one)))
    ann = _row_basis(ann)
    invs = [linalg.inverse(g) for g in gens]
    while ann:
        grown = list(ann)
        for g, gi in zip(gens, invs):
            grown.extend(linalg.matmul(ann, gi))
            grown.extend(linalg.matmul(ann, g))
        grown = _row_basis(grown)
        if len(grown) == len(ann):
            break
        ann = grown
    return linalg.nullspace(ann, n) if ann else linalg.identity(n, one)


def _row_basis(rows):
    if not rows:
        return []
    red, piv = linalg.rref(rows)
    return red[: len(piv)]


def _restrict(g, basis):
    """Matrix of ``g`` on the invariant span of ``basis`` (in basis coordinates)."""
    b = linalg.transpose(basis)  # columns are basis vectors
    gb = linalg.matmul(g, b)
    # rows of b at the pivot columns of the basis form an invertible block
    rows = linalg.rref(basis)[1]
    x = linalg.matmul(linalg.inverse([b[i] for i in rows]), [gb[i] for i in rows])
    if linalg.matmul(b, x) != gb:
        raise EigenvectorNotFound("subspace is not invariant")
    return x


def _generic_weights(count):
    yield [1] * count
    for t in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29):
        yield [t**j for j in range(count)]


def _trace(m):
    acc = 0
    for i in range(len(m)):
        acc = acc + m[i][i]
    return acc


def _is_nilpotent(m):
    n = len(m)
    p = m
    for _ in range(n - 1):
        p = linalg.matmul(p, m)
    return linalg.is_zero_matrix(p)


def common_eigenvector(gens, c):
    """Common eigenvector of the generators inside ``c`` with positive eigenvalues.

    The search works on the subspace fixed by the commutator subgroup, on which
    the group acts through an abelian quotient. Joint eigenvalues are separated
    by a generic combination of the generators; each candidate joint eigenspace
    is tested against the cone by an exact LP.
    """
    gens = [as_rows(g) for g in gens]
    if not gens:
        raise PreconditionViolation("at least one generator is required")
    for g in gens:
        if len(g) != c.dim:
            raise DimensionMismatch("generator and cone dimensions differ")
        if not preserves_cone(g, c):
            raise ConePreservationViolated("a generator does not preserve the cone")
    if len(gens) > 1 and any(linalg.det(g) == 0 for g in gens):
        raise PreconditionViolation("group generators must be invertible")
    if len(gens) == 1 and c.full_dim and is_salient(c):
        pf = pf_eigenvector(gens[0], c)
        return CommonEigenvector(pf.vector, [pf.eigenvalue], pf.residual_witness, pf.coefficients,
                                 pf.field, pf.embed)
    k = _field_of(*gens, c.rays)
    gk = [_matrix_in(g, k) for g in gens]
    v0 = derived_fixed_space(gk, k)
    if not v0 or cone_point_in_subspace(c, v0, k) is None:
        raise SolvabilityNotWitnessed("the commutator subgroup fixes no nonzero vector of the cone")
    xs = [_restrict(g, v0) for g in gk]
    for weights in _generic_weights(len(xs)):
        h = xs[0] if len(xs) == 1 else None
        if h is None:
            h = linalg.mscale(xs[0], to_scalar(weights[0], k))
            for w, x in zip(weights[1:], xs[1:]):
                h = linalg.madd(h, linalg.mscale(x, to_scalar(w, k)))
        result = _search_weight(h, xs, gk, v0, c, k)
        if result == "degenerate":
            continue
        if result is None:
            raise SolvabilityNotWitnessed("no joint eigenvector of the generators lies in the cone")
        return result
    raise EigenvectorNotFound("no generic combination separated the joint eigenvalues")


def _search_weight(h, xs, gk, v0, c, k):
    m = len(h)
    for root in real_roots_over(linalg.char_poly(h), k):
        big, embed, mu = root.materialize()
        mu = to_scalar(mu, big)
        hb = _embed_all(h, embed, big)
        shifted = [[hb[i][j] - (mu if i == j else 0) for j in range(m)] for i in range(m)]
        power = shifted
        for _ in range(m - 1):
            power = linalg.matmul(power, shifted)
        gen_space = [[to_scalar(x, big) for x in v] for v in linalg.nullspace(power, m)]
        xb = [_embed_all(x, embed, big) for x in xs]
        ys = [_restrict(x, gen_space) for x in xb]
        w = len(gen_space)
        lams = [_trace(y) / w for y in ys]
        for y, lam in zip(ys, lams):
            if not _is_nilpotent([[y[i][j] - (lam if i == j else 0) for j in range(w)] for i in range(w)]):
                return "degenerate"
        ann = []
        for y, lam in zip(ys, lams):
            ann.extend([[y[i][j] - (lam if i == j else 0) for j in range(w)] for i in range(w)])
        joint = linalg.nullspace(ann, w)
        # back to ambient coordinates
        v0b = [[to_scalar(embed(x) if isinstance(x, FieldElem) else x, big) for x in v] for v in v0]
        amb = []
        for coeffs in joint:
            inner = [sum((coeffs[a] * gen_space[a][i] for a in range(w)), to_scalar(0, big)) for i in range(len(v0))]
            amb.append([sum((inner[i] * v0b[i][j] for i in range(len(v0))), to_scalar(0, big)) for j in range(c.dim)])
        cb = c if big is k else PolyCone(c.dim, [[embed(x) if isinstance(x, FieldElem) else x for x in r] for r in c.rays])
        found = cone_point_in_subspace(cb, amb, big)
        if found is None:
            continue
        v, coef = found
        gb = [_embed_all(g, embed, big) for g in gk]
        if any(lam <= 0 for lam in lams):
            raise EigenvectorNotFound("nonpositive eigenvalue on a cone vector")
        _certify(gb, v, lams, cb, coef, big)
        return CommonEigenvector(v, lams, "exact: g_i v = chi_i v for every generator, v = R mu with mu >= 0",
                                 coef, big, embed)
    return None
