"""Immutable square matrices of exact rationals."""

from fractions import Fraction

from ..errors import NonSquare, SchemaError
from . import linalg


def parse_rational(value):
    """Parse an int, a Fraction or a ``"p/q"`` string into a Fraction."""
    if isinstance(value, bool):
        raise SchemaError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"not a rational: {value!r}") from exc
    if isinstance(value, float):
        raise SchemaError(f"floats are not exact, pass {value!r} as a 'p/q' string")
    raise SchemaError(f"not a rational: {value!r}")


def format_rational(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class ExactMatrix:
    """A square matrix with ``Fraction`` entries.

    Accepts ints, Fractions or ``"p/q"`` strings on construction.
    """

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(parse_rational(x) for x in row) for row in rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise NonSquare("ExactMatrix must be a non-empty square array")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries):
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def companion(cls, coeffs):
        """Companion matrix of the monic polynomial with the given low-to-high coefficients."""
        coeffs = [Fraction(c) for c in coeffs]
        n = len(coeffs) - 1
        lead = coeffs[-1]
        rows = [[0] * n for _ in range(n)]
        for i in range(1, n):
            rows[i][i - 1] = 1
        for i in range(n):
            rows[i][n - 1] = -coeffs[i] / lead
        return cls(rows)

    @property
    def dim(self):
        return len(self.rows)

    def tolist(self):
        return [list(r) for r in self.rows]

    def is_integer(self):
        return all(x.denominator == 1 for row in self.rows for x in row)

    def __matmul__(self, other):
        return ExactMatrix(linalg.matmul(self.tolist(), other.tolist()))

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = ExactMatrix.identity(self.dim)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def apply(self, v):
        return linalg.matvec(self.tolist(), list(v))

    def transpose(self):
        return ExactMatrix(linalg.transpose(self.tolist()))

    def inverse(self):
        return ExactMatrix(linalg.inverse(self.tolist()))

    def det(self):
        return linalg.det(self.tolist())

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = ", ".join("[" + ", ".join(format_rational(x) for x in r) + "]" for r in self.rows)
        return f"ExactMatrix([{body}])"

    def to_json(self):
        return [[format_rational(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise SchemaError("matrix must be a JSON array of arrays")
        return cls(data)


def as_rows(m):
    """Nested-list view of an ExactMatrix or list-of-lists."""
    if isinstance(m, ExactMatrix):
        return m.tolist()
    return [list(r) for r in m]
