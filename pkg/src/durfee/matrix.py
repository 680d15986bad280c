"""Exact symmetric rational matrices and quadratic-form lattice enumeration."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .series import as_fraction, format_fraction


class RationalMatrix:
    """Immutable symmetric matrix over the rationals."""

    __slots__ = ("n", "rows")

    def __init__(self, rows):
        rows = tuple(tuple(as_fraction(x) for x in row) for row in rows)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("matrix must be square")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("matrix must be symmetric")
        self.n = n
        self.rows = rows

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def scalar(cls, value) -> "RationalMatrix":
        return cls(((as_fraction(value),),))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"RationalMatrix({[[str(x) for x in row] for row in self.rows]})"

    def is_integer(self) -> bool:
        return all(x.denominator == 1 for row in self.rows for x in row)

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for row in self.rows for x in row)

    def mul_vector(self, v) -> tuple:
        v = [as_fraction(x) for x in v]
        if len(v) != self.n:
            raise ValueError("vector length does not match matrix dimension")
        return tuple(sum((r * x for r, x in zip(row, v)), Fraction(0)) for row in self.rows)

    def quadratic_form(self, v) -> Fraction:
        """v . A . v exactly."""
        w = self.mul_vector(v)
        return sum((as_fraction(x) * y for x, y in zip(v, w)), Fraction(0))

    def determinant(self) -> Fraction:
        a = [list(row) for row in self.rows]
        n = self.n
        det = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                a[col], a[pivot] = a[pivot], a[col]
                det = -det
            det *= a[col][col]
            inv = 1 / a[col][col]
            for r in range(col + 1, n):
                factor = a[r][col] * inv
                if factor:
                    for c in range(col, n):
                        a[r][c] -= factor * a[col][c]
        return det

    def inverse(self) -> "RationalMatrix":
        n = self.n
        a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(self.rows)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
            if pivot is None:
                raise ValueError("matrix is singular")
            a[col], a[pivot] = a[pivot], a[col]
            inv = 1 / a[col][col]
            a[col] = [x * inv for x in a[col]]
            for r in range(n):
                if r != col and a[r][col]:
                    factor = a[r][col]
                    a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
        return RationalMatrix(tuple(tuple(row[n:]) for row in a))

    def ldl(self):
        """Decompose A = L D L^T with L unit lower triangular, D diagonal.

        Raises ValueError unless the matrix is positive definite.
        """
        n = self.n
        L = [[Fraction(0)] * n for _ in range(n)]
        d = [Fraction(0)] * n
        for j in range(n):
            s = self.rows[j][j] - sum(L[j][k] * L[j][k] * d[k] for k in range(j))
            if s <= 0:
                raise ValueError("matrix is not positive definite")
            d[j] = s
            L[j][j] = Fraction(1)
            for i in range(j + 1, n):
                t = self.rows[i][j] - sum(L[i][k] * L[j][k] * d[k] for k in range(j))
                L[i][j] = t / d[j]
        return tuple(tuple(row) for row in L), tuple(d)

    def is_positive_definite(self) -> bool:
        try:
            self.ldl()
            return True
        except ValueError:
            return False

    def add(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return RationalMatrix(
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows))
        )

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(self.n)), Fraction(0))

    def to_json(self):
        out = []
        for row in self.rows:
            out.append([x.numerator if x.denominator == 1 else format_fraction(x) for x in row])
        return out

    @classmethod
    def from_json(cls, data) -> "RationalMatrix":
        return cls(tuple(tuple(as_fraction(x) for x in row) for row in data))


def _integer_range(center: Fraction, radius_sq: Fraction):
    """Integers m with (m - center)^2 <= radius_sq, exactly."""
    if radius_sq < 0:
        return range(0)
    p, q = center.numerator, center.denominator
    cap = (radius_sq * q * q).__floor__()
    s = isqrt(cap)
    lo = -((s - p) // q)  # ceil((p - s)/q)
    hi = (p + s) // q
    return range(lo, hi + 1)


def enumerate_quadratic_points(A: RationalMatrix, linear, bound, nonnegative: bool):
    """All integer vectors m with 1/2 m.A.m + linear.m <= bound.

    A must be positive definite.  With nonnegative=True only m >= 0 are
    produced.  Yields (m, value) pairs in lexicographic order of m reversed
    coordinates; callers should not rely on the order.
    """
    n = A.n
    linear = tuple(as_fraction(x) for x in linear)
    bound = as_fraction(bound)
    L, d = A.ldl()
    # complete the square: f(m) = 1/2 (m-c).A.(m-c) + const, c = -A^{-1} l
    c = A.inverse().mul_vector(tuple(-x for x in linear))
    const = -Fraction(1, 2) * A.quadratic_form(c)
    # f(m) - const = 1/2 sum_i d_i u_i^2 with u = L^T (m - c)
    budget0 = bound - const
    if budget0 < 0:
        return
    m = [0] * n
    half = Fraction(1, 2)

    def descend(i, partial):
        if i < 0:
            yield tuple(m), partial + const
            return
        # u_i = (m_i - c_i) + sum_{j>i} L[j][i] (m_j - c_j)
        tail = sum(L[j][i] * (m[j] - c[j]) for j in range(i + 1, n))
        center = c[i] - tail
        radius_sq = 2 * (budget0 - partial) / d[i]
        for mi in _integer_range(center, radius_sq):
            if nonnegative and mi < 0:
                continue
            m[i] = mi
            u = mi - center
            yield from descend(i - 1, partial + half * d[i] * u * u)
        m[i] = 0

    yield from descend(n - 1, Fraction(0))
