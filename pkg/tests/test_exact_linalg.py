from fractions import Fraction

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conedyn.errors import IntervalNotIsolating, NonIntegerEntries, NonSquare
from conedyn.exact import poly as P
from conedyn.exact.algebraic import real_roots_over
from conedyn.exact.field import RATIONALS
from conedyn.exact.matrix import ExactMatrix, parse_rational
from conedyn.exact_linalg import (
    char_poly,
    eigenspace,
    eigenspace_over,
    is_schur_stable,
    is_schur_stable_hermitian,
    is_spectral_radius_one,
    polynomial_radius,
    radius_below,
    radius_is_one,
    spectral_radius,
)

from conftest import int_matrices, oracle_radius, random_unimodular

def sympy_charpoly(m):
    x = sympy.symbols("x")
    return [Fraction(int(c)) for c in reversed(sympy.Matrix(m).charpoly(x).all_coeffs())]


class TestCharPoly:
    def test_identity(self):
        assert char_poly([[1, 0], [0, 1]]) == [1, -2, 1]

    def test_fibonacci(self):
        assert char_poly([[2, 1], [1, 1]]) == [1, -3, 1]

    def test_rotation(self):
        assert char_poly([[0, 1], [-1, 0]]) == [1, 0, 1]

    def test_rational_entries(self):
        m = ExactMatrix([["1/2", "1/3"], ["-1", "2"]])
        assert char_poly(m) == [Fraction(1) + Fraction(1, 3), Fraction(-5, 2), 1]

    def test_non_square(self):
        with pytest.raises(NonSquare):
            char_poly([[1, 2, 3], [4, 5, 6]])

    @given(int_matrices(1, 5, 4))
    def test_matches_sympy(self, m):
        assert char_poly(m) == sympy_charpoly(m)

    @given(int_matrices(2, 4), st.integers(0, 10**6))
    def test_similarity_invariant(self, m, seed):
        import random

        p = random_unimodular(random.Random(seed), len(m))
        pm = ExactMatrix(p)
        conj = pm @ ExactMatrix(m) @ pm.inverse()
        assert char_poly(conj) == char_poly(m)


class TestSpectralRadius:
    def test_identity(self):
        r = spectral_radius(ExactMatrix.identity(3))
        assert r.value == 1.0 and r.exact_one

    def test_fibonacci(self):
        r = spectral_radius([[2, 1], [1, 1]], 1e-12)
        target = (3 + mpmath.sqrt(5)) / 2
        assert abs(r.value - float(target)) <= 1e-12
        assert r.contains(Fraction(2618033988749894, 10**15))
        assert not r.exact_one
        assert r.upper - r.lower <= Fraction(1, 10**12)

    def test_rotation(self):
        r = spectral_radius([[0, 1], [-1, 0]])
        assert r.exact_one and r.value == 1.0

    def test_nilpotent(self):
        r = spectral_radius([[0, 1], [0, 0]])
        assert r.value == 0.0 and not r.exact_one

    def test_non_square(self):
        with pytest.raises(NonSquare):
            spectral_radius([[1, 2]])

    def test_bad_eps(self):
        with pytest.raises(ValueError):
            polynomial_radius([1, -3, 1], 0)

    @given(int_matrices(2, 5, 3))
    def test_enclosure_contains_oracle(self, m):
        r = spectral_radius(m, 1e-10)
        rho = oracle_radius(m)
        assert r.lower - Fraction(1, 10**20) <= Fraction(str(mpmath.nstr(rho, 30))) <= r.upper + Fraction(1, 10**20)
        assert r.error <= 1e-10

    @given(int_matrices(2, 5, 3))
    def test_power_iteration_when_dominant(self, m):
        ev = np.linalg.eigvals(np.array(m, dtype=float))
        mods = sorted(abs(ev), reverse=True)
        top = ev[np.argmax(abs(ev))]
        # power iteration only converges with a real, strictly dominant eigenvalue
        if len(mods) < 2 or mods[0] < 1e-6 or mods[1] > 0.8 * mods[0] or abs(top.imag) > 1e-9:
            return
        v = np.ones(len(m))
        a = np.array(m, dtype=float)
        rng = np.random.default_rng(0)
        v = rng.standard_normal(len(m))
        for _ in range(200):
            v = a @ v
            v /= np.linalg.norm(v)
        est = np.linalg.norm(a @ v)
        eps = 1e-9
        assert abs(spectral_radius(m, eps).value - est) <= 2 * eps * max(1.0, est) + 1e-9

    @given(st.integers(0, 10**6), st.integers(2, 5))
    def test_unimodular_radius_at_least_one(self, seed, n):
        import random

        m = random_unimodular(random.Random(seed), n)
        r = spectral_radius(m)
        assert r.upper >= 1


class TestRadiusOne:
    def test_identity(self):
        assert is_spectral_radius_one(ExactMatrix.identity(2))

    def test_fibonacci(self):
        assert not is_spectral_radius_one([[2, 1], [1, 1]])

    def test_unipotent(self):
        assert is_spectral_radius_one([[1, 1], [0, 1]])

    def test_companion_quartic(self):
        # x^4 - x^3 - x^2 - x + 1 has a real root near 1.7221 (oracle below)
        m = ExactMatrix.companion([1, -1, -1, -1, 1])
        rho = oracle_radius(m.tolist())
        assert abs(rho - mpmath.mpf("1.72208380573904")) < 1e-9
        assert is_spectral_radius_one(m) is False
        assert abs(spectral_radius(m, 1e-12).value - 1.72208380573904) < 1e-11

    def test_non_integer(self):
        with pytest.raises(NonIntegerEntries):
            is_spectral_radius_one([["1/2", 0], [0, 1]])

    def test_nilpotent_is_not_radius_one(self):
        assert not is_spectral_radius_one([[0, 1], [0, 0]])

    def test_zero_root_with_cyclotomic_part(self):
        assert is_spectral_radius_one([[1, 0], [0, 0]])

    @given(int_matrices(2, 6, 3))
    def test_two_routes_agree(self, m):
        # Kronecker trial division against the Chebyshev / Schur-Cohn factor classification
        cp = char_poly(m)
        assert is_spectral_radius_one(m) == radius_is_one(cp)

    @given(int_matrices(2, 5, 3))
    def test_matches_root_oracle(self, m):
        rho = oracle_radius(m)
        assert is_spectral_radius_one(m) == (abs(rho - 1) < 1e-12)

    def test_products_of_cyclotomics(self):
        for n in range(1, 13):
            phi = P.cyclotomic(n)
            assert radius_is_one(phi)
            assert P.is_kronecker_product(P.mul(phi, P.cyclotomic(3)))

    def test_salem_factor_is_not_one(self):
        lehmer = [1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]
        assert not radius_is_one(lehmer)
        assert not P.is_kronecker_product(lehmer)


class TestRadiusBelow:
    @given(st.lists(st.integers(-9, 9), min_size=2, max_size=9).filter(lambda c: c[-1] != 0))
    def test_stability_routes_agree(self, c):
        # Schur transform recursion against the Hermitian Schur-Cohn form
        assert is_schur_stable(c) == is_schur_stable_hermitian(c)

    @given(st.lists(st.integers(-9, 9), min_size=2, max_size=7).filter(lambda c: c[-1] != 0))
    def test_stability_matches_roots(self, c):
        with mpmath.workdps(60):
            roots = mpmath.polyroots(list(reversed(c)), maxsteps=400, extraprec=300)
        top = max(abs(r) for r in roots)
        if abs(top - 1) < 1e-30:
            return
        assert is_schur_stable(c) == (top < 1)

    def test_schur_cohn_threshold(self):
        p = [1, -3, 1]
        assert radius_below(p, Fraction(27, 10))
        assert not radius_below(p, Fraction(26, 10))

    @given(int_matrices(2, 4, 3), st.fractions(Fraction(1, 4), Fraction(8)))
    def test_agrees_with_oracle(self, m, r):
        rho = oracle_radius(m)
        rf = mpmath.mpf(r.numerator) / r.denominator
        if abs(rho - rf) < 1e-20:
            return
        assert radius_below(char_poly(m), r) == (rho < rf)


class TestEigenspace:
    def test_identity(self):
        basis = eigenspace(ExactMatrix.identity(2), [-1, 1], (Fraction(0), Fraction(2)))
        assert [[x.rational() for x in v] for v in basis] == [[1, 0], [0, 1]]

    def test_fibonacci(self):
        (v,) = eigenspace([[2, 1], [1, 1]], [1, -3, 1], (Fraction(2), Fraction(3)))
        lam = v[0].field.gen()
        assert v[0] / v[1] == lam - 1

    def test_diag(self):
        (v,) = eigenspace([[2, 0], [0, 3]], [-2, 1], (Fraction(1), Fraction(5, 2)))
        assert [x.rational() for x in v] == [1, 0]

    def test_not_isolating(self):
        with pytest.raises(IntervalNotIsolating):
            eigenspace([[2, 1], [1, 1]], [1, -3, 1], (Fraction(0), Fraction(3)))

    @given(int_matrices(2, 4, 3))
    def test_residual_is_zero(self, m):
        for root in real_roots_over(char_poly(m), RATIONALS):
            k, _, lam = root.materialize()
            lam = k(lam)
            basis = eigenspace_over(m, lam)
            assert basis
            for v in basis:
                mv = [sum((k(m[i][j]) * v[j] for j in range(len(m))), k(0)) for i in range(len(m))]
                assert mv == [lam * x for x in v]


class TestMatrixSchema:
    def test_strings(self):
        assert ExactMatrix([["1/2", "3"]] * 1 + [["0", "-4/6"]]).tolist() == [
            [Fraction(1, 2), 3],
            [0, Fraction(-2, 3)],
        ]

    def test_floats_rejected(self):
        from conedyn.errors import SchemaError

        with pytest.raises(SchemaError):
            parse_rational(0.5)

    def test_json_roundtrip(self):
        m = ExactMatrix([["1/2", 1], [0, "-7/3"]])
        assert ExactMatrix.from_json(m.to_json()) == m
