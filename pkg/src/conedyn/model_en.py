"""Numerical ring of ``E^n`` for an elliptic curve ``E`` without complex multiplication.

Divisor classes are symmetric ``n x n`` matrices. An automorphism ``A`` in
``GL_n(Z)`` pulls a class back by ``M -> A^T M A``. The top intersection of
``n`` classes is the coefficient of ``x_1 ... x_n`` in ``det(sum x_i M_i)``,
so ``D^n = n! det(M)``.

Coordinates on ``Sym_n``: the diagonal entries ``E_ii`` in order, then the
off-diagonal pairs ``E_ij + E_ji`` for ``i < j`` in lexicographic order.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement

from .cones import PolyCone
from .errors import ArityMismatch, DimensionMismatch, NotAmple, SchemaError, TestSetNotSpanning
from .exact import linalg
from .exact.matrix import ExactMatrix, as_rows, parse_rational


def sym_dim(n):
    return n * (n + 1) // 2


@lru_cache(maxsize=None)
def sym_index_pairs(n):
    """Index pairs ``(i, j)`` of the coordinate basis, in order."""
    return tuple([(i, i) for i in range(n)] + list(combinations(range(n), 2)))


def sym_basis(n):
    """Basis matrices of ``Sym_n`` matching :func:`sym_index_pairs`."""
    out = []
    for i, j in sym_index_pairs(n):
        m = [[0] * n for _ in range(n)]
        m[i][j] = m[j][i] = 1
        out.append(m)
    return out


def to_vector(m):
    n = len(m)
    return [m[i][j] for i, j in sym_index_pairs(n)]


def from_vector(v, n):
    if len(v) != sym_dim(n):
        raise DimensionMismatch(f"Sym_{n} has dimension {sym_dim(n)}, got {len(v)}")
    m = [[0] * n for _ in range(n)]
    for x, (i, j) in zip(v, sym_index_pairs(n)):
        m[i][j] = m[j][i] = x
    return m


class SymClass:
    """A divisor class on ``E^n``: a symmetric matrix."""

    __slots__ = ("n", "mat")

    def __init__(self, mat):
        rows = [list(r) for r in as_rows(mat)]
        rows = [[x if not isinstance(x, (int, str)) else parse_rational(x) for x in r] for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("class matrix must be square")
        if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(i)):
            raise SchemaError("class matrix must be symmetric")
        self.n = n
        self.mat = rows

    @classmethod
    def from_vector(cls, v, n):
        return cls(from_vector(list(v), n))

    def vector(self):
        return to_vector(self.mat)

    def __eq__(self, other):
        return isinstance(other, SymClass) and self.mat == other.mat

    def __add__(self, other):
        return SymClass(linalg.madd(self.mat, other.mat))

    def scale(self, c):
        return SymClass(linalg.mscale(self.mat, c))

    def __repr__(self):
        return f"SymClass({self.mat!r})"

    def to_json(self):
        return [[str(x) for x in r] for r in self.mat]


class ModelAutomorphism:
    """An element of ``GL_n(Z)`` acting on ``E^n``."""

    def __init__(self, a):
        a = a if isinstance(a, ExactMatrix) else ExactMatrix(a)
        if not a.is_integer():
            raise SchemaError("automorphism matrix must have integer entries")
        if abs(a.det()) != 1:
            raise SchemaError("automorphism matrix must be unimodular")
        self.A = a
        self.n = a.dim

    def pullback(self, d):
        return pullback(self, d)

    def sym_action(self):
        return sym_action(self.A)


def _as_class(d):
    return d if isinstance(d, SymClass) else SymClass(d)


def pullback(g, d):
    """``A^T M A``."""
    a = g.A if isinstance(g, ModelAutomorphism) else ExactMatrix(g) if not isinstance(g, ExactMatrix) else g
    d = _as_class(d)
    if a.dim != d.n:
        raise DimensionMismatch(f"{a.dim}x{a.dim} automorphism on a class of size {d.n}")
    rows = a.tolist()
    return SymClass(linalg.matmul(linalg.matmul(linalg.transpose(rows), d.mat), rows))


def sym_action(a):
    """Matrix of ``M -> A^T M A`` on ``Sym_n`` coordinates."""
    rows = as_rows(a)
    n = len(rows)
    at = linalg.transpose(rows)
    cols = [to_vector(linalg.matmul(linalg.matmul(at, b), rows)) for b in sym_basis(n)]
    return ExactMatrix(linalg.transpose(cols))


# --------------------------------------------------------------------------
# Intersection numbers
# --------------------------------------------------------------------------


def intersect(classes):
    """Top intersection number of ``n`` classes on ``E^n``.

    Inclusion-exclusion over subsets reads off the multilinear coefficient of
    ``det(x_1 M_1 + ... + x_n M_n)``.
    """
    mats = [_as_class(c).mat for c in classes]
    if not mats:
        raise ArityMismatch("need at least one class")
    n = len(mats[0])
    if len(mats) != n:
        raise ArityMismatch(f"E^{n} needs exactly {n} classes, got {len(mats)}")
    if any(len(m) != n for m in mats):
        raise DimensionMismatch("classes of different sizes")
    total = 0
    for size in range(1, n + 1):
        sign = -1 if (n - size) % 2 else 1
        for subset in combinations(range(n), size):
            s = mats[subset[0]]
            for idx in subset[1:]:
                s = linalg.madd(s, mats[idx])
            total = total + sign * linalg.det(s)
    return total


class IntersectionProfile:
    """Symmetric multilinear intersection form, evaluated and cached on multisets."""

    def __init__(self, n):
        self.n = n
        self._cache = {}

    def value(self, classes):
        key = tuple(sorted(tuple(tuple(r) for r in _as_class(c).mat) for c in classes))
        if key not in self._cache:
            self._cache[key] = intersect([[list(r) for r in m] for m in key])
        return self._cache[key]


def is_positive_definite(m):
    """Sylvester's criterion with exact leading minors."""
    rows = _as_class(m).mat
    return all(linalg.det([r[:k] for r in rows[:k]]) > 0 for k in range(1, len(rows) + 1))


def is_positive_semidefinite(m):
    """All eigenvalues ``>= 0``: coefficients of ``det(x I - M)`` alternate in sign."""
    rows = _as_class(m).mat
    cp = linalg.char_poly(rows)
    n = len(rows)
    return all((c * (-1) ** (n - i)) >= 0 for i, c in enumerate(cp))


# --------------------------------------------------------------------------
# Weak numerical triviality and the Hodge form
# --------------------------------------------------------------------------


class FormalProduct:
    """A formal sum ``sum c_t D_{t,1} ... D_{t,k}`` of degree-``k`` products."""

    def __init__(self, terms):
        terms = [(c, [_as_class(d) for d in ds]) for c, ds in terms]
        degrees = {len(ds) for _, ds in terms}
        if len(degrees) > 1:
            raise ArityMismatch("all terms must have the same degree")
        self.terms = terms
        self.degree = degrees.pop() if degrees else 0

    @classmethod
    def of(cls, *classes):
        return cls([(1, list(classes))])

    def pair(self, others):
        total = 0
        for c, ds in self.terms:
            total = total + c * intersect(ds + list(others))
        return total


def weak_num_trivial(z, ample_test_set):
    """True iff ``z`` pairs to zero against every product of test classes.

    ``z`` is a :class:`FormalProduct` or a list of classes (a single product).
    The test set must span ``Sym_n``; by multilinearity products from a
    spanning set detect every ample product.
    """
    if not isinstance(z, FormalProduct):
        z = FormalProduct.of(*z)
    tests = [_as_class(h) for h in ample_test_set]
    if not tests:
        raise TestSetNotSpanning("empty test set")
    n = tests[0].n
    if linalg.rank([t.vector() for t in tests]) != sym_dim(n):
        raise TestSetNotSpanning(f"test classes do not span Sym_{n}")
    slots = n - z.degree
    if slots < 0:
        raise ArityMismatch("product has degree above the dimension")
    if not z.terms:
        return True
    for combo in combinations_with_replacement(range(len(tests)), slots):
        if z.pair([tests[i] for i in combo]) != 0:
            return False
    return True


def hodge_form(d1, d2, h):
    """``-D_1 D_2 H_1 ... H_{n-2}``."""
    d1, d2 = _as_class(d1), _as_class(d2)
    hs = [_as_class(x) for x in h]
    if len(hs) != d1.n - 2:
        raise ArityMismatch(f"need {d1.n - 2} classes in h")
    for x in hs:
        if not is_positive_definite(x):
            raise NotAmple("a class in h is not positive definite")
    return -intersect([d1, d2, *hs])


def primitive_basis(hs):
    """Basis (as classes) of ``{D : D H_1 ... H_{n-1} = 0}``."""
    hs = [_as_class(x) for x in hs]
    n = hs[0].n
    if len(hs) != n - 1:
        raise ArityMismatch(f"need {n - 1} classes")
    functional = [intersect([SymClass(b), *hs]) for b in sym_basis(n)]
    return [SymClass.from_vector(v, n) for v in linalg.nullspace([functional], sym_dim(n))]


def hodge_gram(hs):
    """Gram matrix of the Hodge form on the primitive hyperplane of ``H_1 ... H_{n-1}``.

    The form uses ``H_1 ... H_{n-2}``; returns ``(basis, gram)``.
    """
    hs = [_as_class(x) for x in hs]
    basis = primitive_basis(hs)
    inner = hs[:-1]
    gram = [[hodge_form(a, b, inner) for b in basis] for a in basis]
    return basis, gram


# --------------------------------------------------------------------------
# Nef cone stand-in
# --------------------------------------------------------------------------


def default_sample(n):
    vs = []
    for i in range(n):
        vs.append([1 if k == i else 0 for k in range(n)])
    for i, j in combinations(range(n), 2):
        vs.append([1 if k in (i, j) else 0 for k in range(n)])
        vs.append([1 if k == i else -1 if k == j else 0 for k in range(n)])
    return vs


def nef_cone_model(n, sample=None):
    """Polyhedral inner approximation of the PSD cone by rank-one rays ``v v^T``."""
    if n < 1:
        raise ValueError("n must be positive")
    sample = default_sample(n) if sample is None else sample
    rays = []
    for v in sample:
        v = [Fraction(x) for x in v]
        if len(v) != n:
            raise DimensionMismatch("sample vector of wrong length")
        if any(v):
            rays.append(to_vector([[a * b for b in v] for a in v]))
    return PolyCone(sym_dim(n), rays)


# --------------------------------------------------------------------------
# Graded numerical ring
# --------------------------------------------------------------------------


class NumericalRingModel:
    """Graded pairing data of ``E^n`` built from products of basis classes.

    ``N^k`` is spanned by degree-``k`` monomials in the ``Sym_n`` basis modulo
    the kernel of the pairing with degree-``(n-k)`` monomials.
    """

    def __init__(self, n):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.N = sym_dim(n)
        self._basis = sym_basis(n)
        self._table = {}
        self._grades = {}

    def top(self, idx):
        """Intersection of basis classes indexed by the multiset ``idx``."""
        key = tuple(sorted(idx))
        val = self._table.get(key)
        if val is None:
            val = intersect([self._basis[i] for i in key])
            self._table[key] = val
        return val

    def monomials(self, k):
        return list(combinations_with_replacement(range(self.N), k))

    def _grade(self, k):
        if k not in self._grades:
            rows = self.monomials(k)
            cols = self.monomials(self.n - k)
            pairing = [[self.top(r + c) for c in cols] for r in rows]
            rpiv = linalg.rref(linalg.transpose(pairing))[1]
            sub = [pairing[i] for i in rpiv]
            cpiv = linalg.rref(sub)[1]
            q = [[row[j] for j in cpiv] for row in sub]
            self._grades[k] = ([rows[i] for i in rpiv], [cols[j] for j in cpiv], linalg.inverse(q))
        return self._grades[k]

    def rank(self, k):
        return len(self._grade(k)[0])

    def graded_action(self, a):
        """Matrices of ``g^*`` on ``N^0, ..., N^n``."""
        t = sym_action(a).tolist()
        return [ExactMatrix(self._action_on(k, t)) for k in range(self.n + 1)]

    def _action_on(self, k, t):
        mons, cols, qinv = self._grade(k)
        images = []
        for mon in mons:
            expansion = {(): Fraction(1)}
            for i in mon:
                nxt = {}
                for key, c in expansion.items():
                    for j in range(self.N):
                        if t[j][i] != 0:
                            nk = tuple(sorted(key + (j,)))
                            nxt[nk] = nxt.get(nk, 0) + c * t[j][i]
                expansion = nxt
            images.append([sum(c * self.top(key + b) for key, c in expansion.items()) for b in cols])
        # images = M^T Q, so M = (images Q^{-1})^T
        return linalg.transpose(linalg.matmul(images, qinv))

    def sigma_matrix(self, ds):
        """Matrix of ``x -> D_1 ... D_r x`` paired against degree-``(n-r-1)`` monomials."""
        r = len(ds)
        if r > self.n - 1:
            raise ArityMismatch("too many classes for a stage map")
        cols = self.monomials(self.n - r - 1)
        # contract the table with D_1, ..., D_r one class at a time
        partial = {(): 1}
        for d in ds:
            if len(d) != self.N:
                raise DimensionMismatch("class vector has the wrong length")
            nxt = {}
            for key, c in partial.items():
                for i, x in enumerate(d):
                    if x != 0:
                        nk = tuple(sorted(key + (i,)))
                        nxt[nk] = nxt.get(nk, 0) + c * x
            partial = nxt
        out = []
        for b in cols:
            row = []
            for j in range(self.N):
                acc = 0
                for key, c in partial.items():
                    v = self.top(key + (j,) + b)
                    if v != 0:
                        acc = acc + c * v
                row.append(acc)
            out.append(row)
        return out

    def sigma(self, ds, x):
        return linalg.matvec(self.sigma_matrix(ds), list(x))

    def pair(self, ds, tests):
        """``D_1 ... D_k . T_1 ... T_{n-k}`` for coordinate vectors."""
        partial = {(): 1}
        for d in list(ds) + list(tests):
            nxt = {}
            for key, c in partial.items():
                for i, x in enumerate(d):
                    if x != 0:
                        nk = tuple(sorted(key + (i,)))
                        nxt[nk] = nxt.get(nk, 0) + c * x
            partial = nxt
        acc = 0
        for key, c in partial.items():
            acc = acc + c * self.top(key)
        return acc
