import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conedyn.cones import (
    PolyCone,
    common_eigenvector,
    cone_contains,
    derived_fixed_space,
    is_salient,
    pf_eigenvector,
    preserves_cone,
)
from conedyn.errors import (
    ConePreservationViolated,
    DimensionMismatch,
    PreconditionViolation,
    SolvabilityNotWitnessed,
)
from conedyn.exact import linalg
from conedyn.exact.matrix import ExactMatrix
from conedyn.exact_linalg import spectral_radius

ORTHANT2 = PolyCone.orthant(2)

nonneg_matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 4), min_size=n, max_size=n), min_size=n, max_size=n)
)


def residual_zero(g, v, lam):
    return linalg.matvec(g, v) == [lam * x for x in v]


class TestMembership:
    def test_orthant(self):
        assert cone_contains(ORTHANT2, [1, 1])
        assert not cone_contains(ORTHANT2, [1, -1])

    def test_two_rays(self):
        assert cone_contains(PolyCone(2, [[1, 0], [1, 1]]), [2, 1])
        assert not cone_contains(PolyCone(2, [[1, 0], [1, 1]]), [1, 2])

    def test_dimension(self):
        with pytest.raises(DimensionMismatch):
            cone_contains(ORTHANT2, [1, 1, 1])

    @given(st.lists(st.integers(-5, 5), min_size=3, max_size=3))
    def test_orthant_is_sign_test(self, v):
        assert cone_contains(PolyCone.orthant(3), v) == all(x >= 0 for x in v)


class TestSalience:
    def test_orthant(self):
        assert is_salient(ORTHANT2)

    def test_line(self):
        assert not is_salient(PolyCone(2, [[1, 0], [-1, 0]]))

    def test_three_rays(self):
        assert is_salient(PolyCone(2, [[1, 0], [1, 1], [0, 1]]))

    def test_hidden_line(self):
        # (1,1) + (-1,-1) hides a line even though no two rays are opposite
        assert not is_salient(PolyCone(2, [[1, 1], [-1, 0], [0, -1], [1, 0]]))

    def test_full_dim(self):
        assert ORTHANT2.full_dim
        assert not PolyCone(2, [[1, 1]]).full_dim

    def test_json_roundtrip(self):
        c = PolyCone(2, [["1/2", 0], [1, 1]])
        assert PolyCone.from_json(c.to_json()).rays == c.rays


class TestPreservation:
    def test_identity(self):
        assert preserves_cone(ExactMatrix.identity(2), PolyCone(2, [[1, 0], [1, 1]]))

    def test_fibonacci(self):
        assert preserves_cone([[2, 1], [1, 1]], ORTHANT2)

    def test_rotation(self):
        assert not preserves_cone([[0, -1], [1, 0]], ORTHANT2)

    @given(nonneg_matrices)
    def test_nonnegative_preserve_orthant(self, m):
        assert preserves_cone(m, PolyCone.orthant(len(m)))


class TestPerronFrobenius:
    def test_identity(self):
        res = pf_eigenvector(ExactMatrix.identity(2), ORTHANT2)
        assert res.eigenvalue == 1 and cone_contains(ORTHANT2, res.vector)

    def test_fibonacci(self):
        res = pf_eigenvector([[2, 1], [1, 1]], ORTHANT2)
        lam = res.eigenvalue
        assert lam * lam - 3 * lam + 1 == 0 and lam > 2
        v = res.vector
        assert v[0] / v[1] == lam - 1  # = (1 + sqrt5)/2
        assert abs(float(v[0] / v[1]) - (1 + 5**0.5) / 2) < 1e-14

    def test_swap(self):
        res = pf_eigenvector([[0, 1], [1, 0]], ORTHANT2)
        assert res.eigenvalue == 1
        assert res.vector[0] == res.vector[1] != 0

    def test_non_salient(self):
        with pytest.raises(PreconditionViolation):
            pf_eigenvector(ExactMatrix.identity(2), PolyCone(2, [[1, 0], [-1, 0], [0, 1]]))

    def test_not_full(self):
        with pytest.raises(PreconditionViolation):
            pf_eigenvector(ExactMatrix.identity(2), PolyCone(2, [[1, 0]]))

    def test_not_preserved(self):
        with pytest.raises(PreconditionViolation):
            pf_eigenvector([[0, -1], [1, 0]], ORTHANT2)

    def test_non_orthant_cone(self):
        c = PolyCone(2, [[1, 0], [1, 1]])
        g = [[1, 1], [0, 2]]  # e1 -> e1, (1,1) -> (2,2)
        assert preserves_cone(g, c)
        res = pf_eigenvector(g, c)
        assert res.eigenvalue == 2 and cone_contains(c, res.vector)

    @given(nonneg_matrices)
    def test_random_nonnegative(self, m):
        c = PolyCone.orthant(len(m))
        res = pf_eigenvector(m, c)
        k = res.field
        g = [[k(x) if k.degree > 1 else Fraction(x) for x in row] for row in m]
        assert residual_zero(g, res.vector, res.eigenvalue)
        assert any(x != 0 for x in res.vector)
        assert cone_contains(c, res.vector)
        rb = spectral_radius(m, 1e-12)
        lam = float(res.eigenvalue)
        assert rb.lower - Fraction(1, 10**9) <= Fraction(lam) <= rb.upper + Fraction(1, 10**9)
        ev = max(abs(np.linalg.eigvals(np.array(m, float))))
        assert abs(lam - ev) < 1e-6 * max(1, ev)


def upper_triangular(rng, n):
    return [[rng.randint(1, 4) if i == j else (rng.randint(0, 3) if j > i else 0) for j in range(n)] for i in range(n)]


class TestCommonEigenvector:
    def test_single_generator(self):
        res = common_eigenvector([[[2, 1], [1, 1]]], ORTHANT2)
        pf = pf_eigenvector([[2, 1], [1, 1]], ORTHANT2)
        assert res.chi == [pf.eigenvalue]

    def test_diagonal_pair(self):
        res = common_eigenvector([np.diag([2, 1, 1]).tolist(), np.diag([1, 3, 1]).tolist()], PolyCone.orthant(3))
        v = res.vector
        assert sum(1 for x in v if x != 0) == 1
        i = next(i for i, x in enumerate(v) if x != 0)
        assert res.chi == [[2, 1, 1][i], [1, 3, 1][i]]

    def test_triangular_pair(self):
        res = common_eigenvector([[[1, 1], [0, 1]], [[2, 0], [0, 1]]], ORTHANT2)
        assert res.vector[1] == 0 and res.vector[0] > 0
        assert res.chi == [1, 2]

    def test_free_pair_refused(self):
        with pytest.raises(SolvabilityNotWitnessed):
            common_eigenvector([[[1, 1], [0, 1]], [[1, 0], [1, 1]]], ORTHANT2)

    def test_free_pair_hyperbolic(self):
        with pytest.raises(SolvabilityNotWitnessed):
            common_eigenvector([[[2, 1], [1, 1]], [[1, 1], [0, 1]]], ORTHANT2)

    def test_singular_generators(self):
        with pytest.raises(PreconditionViolation):
            common_eigenvector([[[1, 1], [1, 1]], [[1, 0], [0, 1]]], ORTHANT2)

    def test_cone_not_preserved(self):
        with pytest.raises(ConePreservationViolated):
            common_eigenvector([[[0, -1], [1, 0]], [[1, 0], [0, 1]]], ORTHANT2)

    def test_derived_fixed_space_abelian(self):
        gens = [[[Fraction(2), 0], [0, Fraction(1)]], [[Fraction(1), 0], [0, Fraction(3)]]]
        from conedyn.exact.field import RATIONALS

        assert len(derived_fixed_space(gens, RATIONALS)) == 2

    @given(st.integers(0, 10**6), st.integers(2, 4))
    def test_commuting_polynomials(self, seed, n):
        rng = random.Random(seed)
        while True:
            a = [[rng.randint(0, 2) for _ in range(n)] for _ in range(n)]
            a2 = linalg.matmul(a, a)
            b = [[a2[i][j] + (1 if i == j else 0) + a[i][j] for j in range(n)] for i in range(n)]
            if linalg.det(a) != 0 and linalg.det(b) != 0:
                break
        c = PolyCone.orthant(n)
        res = common_eigenvector([a, b], c)
        k = res.field
        for g, chi in zip([a, b], res.chi):
            gk = [[k(x) if k.degree > 1 else Fraction(x) for x in row] for row in g]
            assert residual_zero(gk, res.vector, chi)
        assert cone_contains(c, res.vector)

    @given(st.integers(0, 10**6), st.integers(2, 4))
    def test_triangular(self, seed, n):
        rng = random.Random(seed)
        gens = [upper_triangular(rng, n) for _ in range(2)]
        res = common_eigenvector(gens, PolyCone.orthant(n))
        for g, chi in zip(gens, res.chi):
            assert residual_zero(g, res.vector, chi)
        assert all(x >= 0 for x in res.vector) and any(res.vector)
