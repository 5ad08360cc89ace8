"""Quasi-nef sequences, group characters and the dynamical rank.

Stage ``r`` works on the image of ``x -> D_1 ... D_r x``. That image is
represented by a set of independent pairing coordinates; the group acts there
through the unique matrices ``h`` with ``h P = P g``. A common eigenvector of
these matrices inside the image of the cone yields ``D_{r+1}`` and the next
character.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import mpmath
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .cones import PolyCone, common_eigenvector, preserves_cone, to_scalar
from .errors import (
    ConePreservationViolated,
    EigenvectorNotFound,
    NoSolution,
    NonUnique,
    OracleMissing,
    PreconditionViolation,
    SchemaError,
    SolvabilityNotWitnessed,
    StageEigenvectorNotFound,
    UnknownGenerator,
    UnverifiedRelation,
    VerificationError,
)
from .exact import linalg
from .exact import poly as P
from .exact.algebraic import real_roots_over
from .exact.field import RATIONALS, FieldElem, to_mpf
from .exact.matrix import ExactMatrix, as_rows
from .exact_linalg import is_spectral_radius_one, spectral_radius
from .model_en import NumericalRingModel, nef_cone_model, sym_action, to_vector

DEFAULT_DPS = 60
RELATION_DPS = 200


# --------------------------------------------------------------------------
# Group data
# --------------------------------------------------------------------------


@dataclass
class GroupRep:
    """Generators acting on ``N^1`` (dimension ``dim``) of an ``n``-dimensional variety."""

    dim: int
    generators: dict
    cone: PolyCone
    n: int
    graded_lift: dict = field(default_factory=dict)
    check: bool = True

    def __post_init__(self):
        gens = {}
        for name, g in self.generators.items():
            m = g if isinstance(g, ExactMatrix) else ExactMatrix(g)
            if m.dim != self.dim:
                raise PreconditionViolation(f"generator {name} is not {self.dim}x{self.dim}")
            if m.det() == 0:
                raise PreconditionViolation(f"generator {name} is not invertible")
            gens[name] = m
        self.generators = gens
        if self.cone.dim != self.dim:
            raise PreconditionViolation("cone dimension differs from the group dimension")
        if self.check:
            for name, g in gens.items():
                if not preserves_cone(g.tolist(), self.cone):
                    raise ConePreservationViolated(f"generator {name} does not preserve the cone")

    @classmethod
    def from_model(cls, automorphisms, cone=None):
        """Group on ``N^1(E^n) = Sym_n`` induced by integer matrices ``A``."""
        automorphisms = {k: a if isinstance(a, ExactMatrix) else ExactMatrix(a) for k, a in automorphisms.items()}
        n = next(iter(automorphisms.values())).dim
        gens = {k: sym_action(a) for k, a in automorphisms.items()}
        if cone is None:
            cone = model_invariant_cone(list(automorphisms.values()))
        return cls(n * (n + 1) // 2, gens, cone, n, {"model": "en", "automorphisms": automorphisms})

    def names(self):
        return list(self.generators)

    def model(self):
        if self.graded_lift.get("model") == "en":
            return NumericalRingModel(self.n)
        return None


def model_invariant_cone(automorphisms):
    """A polyhedral nef sub-cone of ``Sym_n`` preserved by every ``A^T . A``.

    The rank-one sample cone is used when it is preserved (signed permutations);
    otherwise the cone spanned by ``w w^T`` over common real eigenvectors ``w`` of
    the transposes, which requires those eigenvectors to share one real field.
    """
    n = automorphisms[0].dim
    sample = nef_cone_model(n)
    if all(preserves_cone(sym_action(a).tolist(), sample) for a in automorphisms):
        return sample
    rows = [linalg.transpose(a.tolist()) for a in automorphisms]
    weights = [3**j for j in range(len(rows))]
    h = linalg.zeros(n, n)
    for w, r in zip(weights, rows):
        h = linalg.madd(h, linalg.mscale(r, Fraction(w)))
    roots = real_roots_over(linalg.char_poly(h), RATIONALS)
    if not roots:
        raise PreconditionViolation("no real eigenvector: supply an invariant cone")
    k, _, _ = roots[0].materialize()
    vectors = []
    for root in real_roots_over(linalg.char_poly(h), k):
        if not root.in_field():
            raise PreconditionViolation("eigenvectors do not share a real field: supply an invariant cone")
        lam = to_scalar(-root.factor[0], k)
        shifted = [[to_scalar(h[i][j], k) - (lam if i == j else 0) for j in range(n)] for i in range(n)]
        vectors.extend(linalg.nullspace(shifted, n))
    rays = []
    for w in vectors:
        w = [to_scalar(x, k) for x in w]
        rays.append(to_vector([[a * b for b in w] for a in w]))
    cone = PolyCone(n * (n + 1) // 2, rays)
    for a in automorphisms:
        if not preserves_cone(sym_action(a).tolist(), cone):
            raise PreconditionViolation("rank-one eigen-cone is not invariant: supply an invariant cone")
    return cone


def wedge_oracle(ds, x):
    """Toy multiplication on a 2-dimensional ``N^1``: ``D . x = det[D, x]``."""
    (d,) = ds
    return [d[0] * x[1] - d[1] * x[0]]


# --------------------------------------------------------------------------
# Stage construction
# --------------------------------------------------------------------------


@dataclass
class QuasiNefSequence:
    classes: list
    images: list
    coefficients: list

    @property
    def length(self):
        return len(self.classes)


@dataclass
class CharacterSystem:
    chis: dict
    field: object
    n: int
    product_one: dict

    def chi(self, name):
        try:
            return self.chis[name]
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}") from None

    def psi(self, name, dps=DEFAULT_DPS):
        return [_log(x, dps) for x in self.chi(name)[: self.n - 1]]

    def to_json(self, dps=20):
        return {
            "chi": {k: [_json_scalar(x) for x in v] for k, v in self.chis.items()},
            "psi": {k: [mpmath.nstr(x, dps) for x in self.psi(k, dps + 10)] for k in self.chis},
            "product_one": self.product_one,
        }


def _json_scalar(x):
    if isinstance(x, FieldElem):
        return x.to_json()
    return str(Fraction(x))


def _log(x, dps):
    with mpmath.workdps(dps + 10):
        v = to_mpf(x, dps + 10)
        return mpmath.log(v)


def _stage_matrix(oracle, ds, dim):
    if hasattr(oracle, "sigma_matrix"):
        return oracle.sigma_matrix(ds)
    cols = []
    for j in range(dim):
        e = [1 if i == j else 0 for i in range(dim)]
        cols.append(list(oracle(ds, e)))
    return linalg.transpose(cols)


def _lift(x, embed, k):
    return to_scalar(embed(x) if isinstance(x, FieldElem) else x, k)


def build_quasi_nef_sequence(rep, oracle=None):
    """Run the stage construction; returns ``(QuasiNefSequence, CharacterSystem)``."""
    n = rep.n
    if oracle is None:
        oracle = rep.model()
    if oracle is None and n > 1:
        raise OracleMissing("a multiplication oracle is required outside the E^n model")
    names = rep.names()
    k = rep.cone.field
    gens = [[[to_scalar(x, k) for x in row] for row in rep.generators[nm].tolist()] for nm in names]
    rays = [list(r) for r in rep.cone.rays]
    if not names:
        raise PreconditionViolation("the group needs at least one generator")
    try:
        res = common_eigenvector(gens, rep.cone)
    except (SolvabilityNotWitnessed, EigenvectorNotFound) as exc:
        raise StageEigenvectorNotFound(f"stage 1: {exc}") from exc
    classes, images, coeffs = [res.vector], [None], [res.coefficients]
    chis = [[x] for x in res.chi]
    k, embed = res.field, res.embed

    def lift_all(embed, k):
        nonlocal gens, rays, classes, chis
        gens = [[[_lift(x, embed, k) for x in row] for row in g] for g in gens]
        rays = [[_lift(x, embed, k) for x in r] for r in rays]
        classes = [[_lift(x, embed, k) for x in d] for d in classes]
        chis = [[_lift(x, embed, k) for x in c] for c in chis]

    lift_all(embed, k)
    for r in range(1, n):
        s = _stage_matrix(oracle, classes, rep.dim)
        s = [[to_scalar(x, k) for x in row] for row in s]
        rpiv = linalg.rref(linalg.transpose(s))[1] if s else []
        if not rpiv:
            raise StageEigenvectorNotFound(f"stage {r + 1}: the product D_1...D_{r} vanishes")
        p = [s[i] for i in rpiv]
        cpiv = linalg.rref(p)[1]
        qinv = linalg.inverse([[row[j] for j in cpiv] for row in p])
        hats = []
        for g in gens:
            pg = linalg.matmul(p, g)
            hat = linalg.matmul([[row[j] for j in cpiv] for row in pg], qinv)
            if linalg.matmul(hat, p) != pg:
                raise VerificationError("the multiplication map is not compatible with the group action")
            hats.append(hat)
        img, src = [], []
        for ray in rays:
            v = linalg.matvec(p, ray)
            if any(x != 0 for x in v):
                img.append(v)
                src.append(ray)
        if not img:
            raise StageEigenvectorNotFound(f"stage {r + 1}: the cone maps to zero")
        cone_r = PolyCone(len(p), img)
        try:
            res = common_eigenvector(hats, cone_r)
        except (SolvabilityNotWitnessed, EigenvectorNotFound) as exc:
            raise StageEigenvectorNotFound(f"stage {r + 1}: {exc}") from exc
        if res.field is not k:
            lift_all(res.embed, res.field)
            src = [[_lift(x, res.embed, res.field) for x in ray] for ray in src]
            k = res.field
        mu = [to_scalar(x, k) for x in res.coefficients]
        d_next = [sum((m * ray[i] for m, ray in zip(mu, src)), to_scalar(0, k)) for i in range(rep.dim)]
        classes.append(d_next)
        images.append(cone_r)
        coeffs.append(mu)
        for c, x in zip(chis, res.chi):
            c.append(to_scalar(x, k))
    chi_map = {nm: tuple(c) for nm, c in zip(names, chis)}
    prod_one = {}
    for nm, c in chi_map.items():
        acc = to_scalar(1, k)
        for x in c:
            acc = acc * x
        prod_one[nm] = acc == 1
    return QuasiNefSequence(classes, images, coeffs), CharacterSystem(chi_map, k, n, prod_one)


# --------------------------------------------------------------------------
# Words, characters and psi
# --------------------------------------------------------------------------


def parse_word(word):
    """``"g1 g2- g1"`` or ``[("g1", 1), ("g2", -1)]`` into a list of ``(name, +-1)``."""
    if isinstance(word, str):
        out = []
        for tok in word.split():
            if tok.endswith("-"):
                out.append((tok[:-1], -1))
            else:
                out.append((tok, 1))
        return out
    out = []
    for item in word:
        if isinstance(item, str):
            out.extend(parse_word(item))
        else:
            name, e = item
            if e not in (1, -1):
                raise SchemaError("word exponents must be +1 or -1")
            out.append((name, e))
    return out


def word_string(word):
    return " ".join(nm if e == 1 else nm + "-" for nm, e in word)


def word_character(cs, word):
    """Exact ``(chi_1(w), ..., chi_n(w))``."""
    k = cs.field
    acc = [to_scalar(1, k)] * cs.n
    for name, e in parse_word(word):
        vals = cs.chi(name)
        acc = [a * (v if e == 1 else 1 / v) for a, v in zip(acc, vals)]
    return acc


def psi(rep, cs, word, dps=DEFAULT_DPS):
    """``(log chi_1(w), ..., log chi_{n-1}(w))``."""
    for name, _ in parse_word(word):
        if name not in rep.generators:
            raise UnknownGenerator(f"unknown generator {name!r}")
    return [_log(x, dps) for x in word_character(cs, word)[: cs.n - 1]]


def word_matrix(rep, word):
    m = ExactMatrix.identity(rep.dim)
    for name, e in parse_word(word):
        try:
            g = rep.generators[name]
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}") from None
        m = m @ (g if e == 1 else g.inverse())
    return m


def null_entropy_test(rep, word):
    """Exact test that the word acts on ``N^1`` with spectral radius one."""
    m = word_matrix(rep, word)
    if m.is_integer():
        return is_spectral_radius_one(m)
    return spectral_radius(m, Fraction(1, 2**30)).exact_one


def enumerate_words(names, max_len, rep=None):
    """Reduced words up to ``max_len``, deduplicated by their matrix when ``rep`` is given."""
    letters = [(nm, 1) for nm in names] + [(nm, -1) for nm in names]
    seen = set()
    out = []
    for length in range(0, max_len + 1):
        for w in product(letters, repeat=length):
            if any(a[0] == b[0] and a[1] == -b[1] for a, b in zip(w, w[1:])):
                continue
            w = list(w)
            if rep is not None:
                key = word_matrix(rep, w)
                if key in seen:
                    continue
                seen.add(key)
            out.append(w)
    return out


def kernel_check(rep, cs, max_len=6, tol=mpmath.mpf(10) ** -20, dps=DEFAULT_DPS):
    """Compare the exact null-entropy test with ``psi(w) = 0`` on sampled words."""
    rows = []
    for w in enumerate_words(rep.names(), max_len, rep):
        null = null_entropy_test(rep, w)
        vec = psi(rep, cs, w, dps)
        norm = mpmath.sqrt(sum(x * x for x in vec)) if vec else mpmath.mpf(0)
        rows.append({"word": word_string(w), "null_entropy": null, "psi_norm": norm, "agree": null == (norm < tol)})
    return rows


# --------------------------------------------------------------------------
# Dynamical rank
# --------------------------------------------------------------------------


@dataclass
class RankReport:
    rank: int
    null_entropy_kernel_witnesses: list
    relation_basis: list
    precision: int

    def to_json(self):
        return {
            "rank": self.rank,
            "relation_basis": self.relation_basis,
            "null_entropy_kernel_witnesses": self.null_entropy_kernel_witnesses,
            "precision_digits": self.precision,
        }


def _relation_holds(cs, names, rel):
    word = []
    for nm, e in zip(names, rel):
        word.extend([(nm, 1 if e > 0 else -1)] * abs(e))
    return all(x == 1 for x in word_character(cs, word)[: cs.n - 1])


def _numeric_rank(vectors, tol):
    if not vectors or not vectors[0]:
        return 0
    m = mpmath.matrix(vectors)
    s = mpmath.svd_r(m, compute_uv=False)
    return sum(1 for x in s if abs(x) > tol)


def _lll_candidates(vectors, dps):
    k = len(vectors)
    width = len(vectors[0]) if vectors else 0
    scale = mpmath.mpf(10) ** (dps // 2)
    rows = []
    for j, v in enumerate(vectors):
        row = [1 if i == j else 0 for i in range(k)]
        row += [int(mpmath.nint(x * scale)) for x in v]
        rows.append(row)
    reduced = DomainMatrix([[ZZ(x) for x in r] for r in rows], (k, k + width), ZZ).lll().to_list()
    bound = 10 ** (dps // 4)
    out = []
    for row in reduced:
        head, tail = [int(x) for x in row[:k]], [int(x) for x in row[k:]]
        if all(abs(t) <= bound for t in tail) and any(head):
            out.append(head)
    return out


def dynamical_rank(rep, cs, dps=RELATION_DPS, escalations=3, kernel_words=0):
    """Rank of the subgroup of ``R^{n-1}`` generated by the ``psi`` images of the generators.

    Integer relations are proposed by LLL on high-precision logarithms and
    accepted only after the product of characters is checked to equal one
    exactly. Precision is doubled when proposals fail, at most ``escalations``
    times.
    """
    names = rep.names()
    k = len(names)
    if k == 0 or cs.n <= 1:
        return RankReport(0, [], [], dps)
    digits = dps
    for _ in range(escalations + 1):
        with mpmath.workdps(digits + 20):
            vectors = [cs.psi(nm, digits + 20) for nm in names]
            numeric = _numeric_rank(vectors, mpmath.mpf(10) ** (-(digits // 2)))
            cands = _lll_candidates(vectors, digits)
        verified = [c for c in cands if _relation_holds(cs, names, c)]
        rel_rank = linalg.rank([[Fraction(x) for x in c] for c in verified]) if verified else 0
        if len(verified) == len(cands) and rel_rank + numeric == k:
            rank = k - rel_rank
            if rank > cs.n - 1:
                raise VerificationError("rank exceeds n - 1")
            witnesses = []
            if kernel_words:
                for row in kernel_check(rep, cs, kernel_words):
                    if row["psi_norm"] < mpmath.mpf(10) ** -20:
                        witnesses.append({"word": row["word"], "null_entropy": row["null_entropy"]})
            basis = [c for c in verified]
            return RankReport(rank, witnesses, _independent(basis), digits)
        digits *= 2
    raise UnverifiedRelation("integer relations could not be verified exactly")


def _independent(rels):
    out = []
    for r in rels:
        if linalg.rank([[Fraction(x) for x in v] for v in out + [r]]) > len(out):
            out.append(r)
    return out


# --------------------------------------------------------------------------
# The unique scalar b
# --------------------------------------------------------------------------


def unique_b_solver(seq, ds, dps, model):
    """Unique ``b`` with ``D_1 ... D_{s-1} (D_s + b D'_s)`` weakly numerically trivial.

    ``seq`` holds ``D_1, ..., D_{s-1}`` (a :class:`QuasiNefSequence` or a list).
    Weak triviality is tested by pairing against the products of ``n - s``
    basis classes, which span the same space as products of ample classes.
    """
    prefix = list(seq.classes if isinstance(seq, QuasiNefSequence) else seq)
    if not hasattr(model, "sigma_matrix"):
        raise OracleMissing("the model must provide sigma_matrix")
    m = model.sigma_matrix(prefix)
    u = linalg.matvec(m, list(ds))
    w = linalg.matvec(m, list(dps))
    if all(x == 0 for x in w):
        if all(x == 0 for x in u):
            raise NonUnique("every b works: both products are weakly trivial")
        raise NoSolution("D'_s product is weakly trivial but D_s product is not")
    i = next(i for i, x in enumerate(w) if x != 0)
    b = -u[i] / w[i]
    if any(x + b * y != 0 for x, y in zip(u, w)):
        raise NoSolution("the two products are not proportional")
    if b == 0:
        raise NoSolution("b = 0 is excluded")
    return b


__all__ = [
    "CharacterSystem",
    "GroupRep",
    "QuasiNefSequence",
    "RankReport",
    "build_quasi_nef_sequence",
    "dynamical_rank",
    "kernel_check",
    "model_invariant_cone",
    "null_entropy_test",
    "psi",
    "unique_b_solver",
    "wedge_oracle",
    "word_character",
]
