"""Exact arithmetic: rationals, polynomials, real number fields and linear programming."""
