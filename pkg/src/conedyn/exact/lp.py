"""Exact two-phase simplex over an ordered field.

Entries may be Fractions or real number-field elements; only ``+ - * /`` and
sign comparisons are used. Bland's rule prevents cycling, so every call
terminates with an exact answer.
"""

from .linalg import reciprocal


class Unbounded(Exception):
    pass


def _pivot(t, r, c):
    inv = reciprocal(t[r][c])
    t[r] = [x * inv for x in t[r]]
    for i, row in enumerate(t):
        if i != r and row[c] != 0:
            f = row[c]
            t[i] = [x - f * y for x, y in zip(row, t[r])]


def _run(t, basis, ncols, allowed):
    """Minimise the objective stored in the last row of ``t`` (reduced-cost form)."""
    m = len(basis)
    while True:
        obj = t[-1]
        enter = next((j for j in range(ncols) if allowed[j] and obj[j] < 0), None)
        if enter is None:
            return
        best, leave = None, None
        for i in range(m):
            a = t[i][enter]
            if a > 0:
                ratio = t[i][-1] * reciprocal(a)
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise Unbounded()
        _pivot(t, leave, enter)
        basis[leave] = enter


def _phase_one(a, b):
    m = len(a)
    n = len(a[0]) if m else 0
    rows = []
    for row, bi in zip(a, b):
        if bi < 0:
            row, bi = [-x for x in row], -bi
        rows.append(list(row) + [bi])
    # tableau columns: n originals, m artificials, rhs
    t = []
    for i, row in enumerate(rows):
        t.append(row[:n] + [1 if k == i else 0 for k in range(m)] + [row[n]])
    obj = [0] * (n + m + 1)
    for row in t:
        for j in range(n):
            obj[j] = obj[j] - row[j]
        obj[-1] = obj[-1] - row[-1]
    t.append(obj)
    basis = [n + i for i in range(m)]
    _run(t, basis, n + m, [True] * (n + m))
    if t[-1][-1] != 0:
        return None
    # drive artificials out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if t[i][j] != 0), None)
            if col is None:
                continue
            _pivot(t, i, col)
            basis[i] = col
        keep.append(i)
    t = [t[i][:n] + [t[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    return t, basis, n


def feasible_point(a, b):
    """Some ``x >= 0`` with ``a x = b``, or ``None`` if none exists."""
    n = len(a[0]) if a else 0
    res = _phase_one(a, b)
    if res is None:
        return None
    t, basis, n = res
    x = [0] * n
    for i, j in enumerate(basis):
        x[j] = t[i][-1]
    return x


def minimize(a, b, c):
    """Optimal ``x`` of ``min c.x`` subject to ``a x = b, x >= 0``; ``None`` if infeasible.

    Raises :class:`Unbounded` when the objective is unbounded below.
    """
    res = _phase_one(a, b)
    if res is None:
        return None
    t, basis, n = res
    obj = list(c) + [0]
    for i, j in enumerate(basis):
        if obj[j] != 0:
            f = obj[j]
            obj = [x - f * y for x, y in zip(obj, t[i])]
    t.append(obj)
    _run(t, basis, n, [True] * n)
    x = [0] * n
    for i, j in enumerate(basis):
        x[j] = t[i][-1]
    return x


def lexmin(a, b):
    """Lexicographically smallest ``x >= 0`` with ``a x = b`` (bounded feasible set)."""
    a = [list(r) for r in a]
    b = list(b)
    x = feasible_point(a, b)
    if x is None:
        return None
    n = len(x)
    for i in range(n):
        c = [1 if j == i else 0 for j in range(n)]
        x = minimize(a, b, c)
        a.append(c)
        b.append(x[i])
    return x
