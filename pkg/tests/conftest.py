import os
import random

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("HYPOTHESIS_MAX_EXAMPLES", 40)),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def int_matrices(min_dim=2, max_dim=4, bound=3):
    return st.integers(min_dim, max_dim).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=n, max_size=n
        )
    )


def random_unimodular(rng, n, steps=None, bound=3):
    """Product of elementary matrices with entries kept small."""
    if n == 1:
        return [[rng.choice([-1, 1])]]
    while True:
        m = np.eye(n, dtype=object)
        for _ in range(steps or 2 * n):
            i, j = rng.sample(range(n), 2)
            c = rng.choice([-1, 1])
            e = np.eye(n, dtype=object)
            e[i, j] = c
            cand = m @ e
            if max(abs(int(x)) for x in cand.flat) <= bound:
                m = cand
        if rng.random() < 0.5:
            perm = list(range(n))
            rng.shuffle(perm)
            m = m[perm]
            if round(float(sympy.Matrix(m.tolist()).det())) == -1:
                m[0] = -m[0]
        return [[int(x) for x in row] for row in m.tolist()]


def oracle_roots(m, dps=50):
    """Roots of the characteristic polynomial by sympy + mpmath (square-free part)."""
    x = sympy.symbols("x")
    p = sympy.Matrix(m).charpoly(x).as_expr()
    q = sympy.Poly(p, x).sqf_part()
    coeffs = [int(c) for c in q.all_coeffs()]
    if len(coeffs) <= 1:
        return []
    with mpmath.workdps(dps):
        return mpmath.polyroots(coeffs, maxsteps=300, extraprec=200)


def oracle_radius(m, dps=50):
    roots = oracle_roots(m, dps)
    return max((abs(r) for r in roots), default=mpmath.mpf(0))


@pytest.fixture
def rng():
    return random.Random(0)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
