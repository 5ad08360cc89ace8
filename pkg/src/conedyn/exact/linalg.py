"""Dense linear algebra over an exact field.

Matrices are lists of rows. Entries may be ``Fraction`` or any number-field
element supporting ``+ - * /`` and ``== 0``; nothing here inspects the type.
"""

from fractions import Fraction

from ..errors import DimensionMismatch, NonSquare


def shape(m):
    return len(m), (len(m[0]) if m else 0)


def identity(n, one=1):
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


def zeros(r, c):
    return [[0] * c for _ in range(r)]


def transpose(m):
    return [list(col) for col in zip(*m)] if m else []


def matmul(a, b):
    if a and len(a[0]) != len(b):
        raise DimensionMismatch(f"cannot multiply {shape(a)} by {shape(b)}")
    bt = transpose(b)
    return [[_dot(row, col) for col in bt] for row in a]


def matvec(a, v):
    if a and len(a[0]) != len(v):
        raise DimensionMismatch(f"cannot apply {shape(a)} matrix to length-{len(v)} vector")
    return [_dot(row, v) for row in a]


def reciprocal(x):
    """``1/x`` that stays exact for plain ints."""
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


def _dot(u, v):
    acc = 0
    for x, y in zip(u, v):
        if x != 0 and y != 0:
            acc = acc + x * y
    return acc


def dot(u, v):
    return _dot(u, v)


def madd(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mscale(a, c):
    return [[c * x for x in row] for row in a]


def is_zero_matrix(m):
    return all(x == 0 for row in m for x in row)


def rref(m):
    """Reduced row echelon form; returns ``(rows, pivot_columns)``."""
    a = [list(row) for row in m]
    nrows, ncols = shape(a)
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = reciprocal(a[r][c])
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m):
    return len(rref(m)[1]) if m else 0


def nullspace(m, ncols=None):
    """Basis of ``{x : m x = 0}``; each vector has a 1 at its free column."""
    ncols = ncols if ncols is not None else shape(m)[1]
    if not m:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(a, b):
    """One solution of ``a x = b`` or ``None`` if the system is inconsistent."""
    nrows, ncols = shape(a)
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


def det(m):
    n, c = shape(m)
    if n != c:
        raise NonSquare(f"determinant of a {n}x{c} matrix")
    a = [list(row) for row in m]
    result = 1
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return 0 * result
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = -result
        p = a[col][col]
        result = result * p
        inv = reciprocal(p)
        for i in range(col + 1, n):
            if a[i][col] != 0:
                f = a[i][col] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return result


def inverse(m):
    n, c = shape(m)
    if n != c:
        raise NonSquare(f"inverse of a {n}x{c} matrix")
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def char_poly(m):
    """Coefficients (constant term first) of ``det(x I - m)`` by Berkowitz's algorithm.

    Division free, so integer input yields integer output.
    """
    n, c = shape(m)
    if n != c:
        raise NonSquare(f"characteristic polynomial of a {n}x{c} matrix")
    poly = [1]  # high-to-low, char poly of the trailing 0x0 block
    for k in range(n - 1, -1, -1):
        a = m[k][k]
        row = m[k][k + 1 :]
        col = [m[i][k] for i in range(k + 1, n)]
        sub_block = [r[k + 1 :] for r in m[k + 1 :]]
        size = n - k - 1
        toeplitz_col = [1, -a]
        v = col
        for _ in range(size):
            toeplitz_col.append(-_dot(row, v))
            v = [_dot(r, v) for r in sub_block]
        new = []
        for i in range(size + 2):
            acc = 0
            for j in range(size + 1):
                if i - j >= 0:
                    acc = acc + toeplitz_col[i - j] * poly[j]
            new.append(acc)
        poly = new
    return list(reversed(poly))


def column_space_basis(m):
    """Indices of columns forming a basis of the column space."""
    return rref(m)[1]


def orthogonal_complement_rows(basis, dim):
    """Rows spanning ``{w : w . b = 0 for all b in basis}``."""
    if not basis:
        return [[1 if i == j else 0 for i in range(dim)] for j in range(dim)]
    return nullspace(basis, dim)


def to_fraction_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]
