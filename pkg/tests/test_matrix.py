"""Exact matrix arithmetic and the quadratic lattice enumerator."""

from fractions import Fraction

import pytest

from durfee.matrix import RationalMatrix, enumerate_quadratic_points


def test_symmetry_enforced():
    with pytest.raises(ValueError):
        RationalMatrix(((1, 2), (3, 4)))


def test_determinant_and_inverse():
    K = RationalMatrix(((2, 1), (1, 2)))
    assert K.determinant() == 3
    Kinv = K.inverse()
    assert Kinv.rows == ((Fraction(2, 3), Fraction(-1, 3)), (Fraction(-1, 3), Fraction(2, 3)))
    prod_rows = tuple(
        tuple(
            sum(K.rows[i][k] * Kinv.rows[k][j] for k in range(2)) for j in range(2)
        )
        for i in range(2)
    )
    assert prod_rows == RationalMatrix.identity(2).rows


def test_singular_inverse_raises():
    with pytest.raises(ValueError):
        RationalMatrix(((1, 1), (1, 1))).inverse()


def test_positive_definiteness():
    assert RationalMatrix(((1, 1), (1, 2))).is_positive_definite()
    assert not RationalMatrix(((0, 0), (0, 1))).is_positive_definite()
    assert not RationalMatrix(((1, 2), (2, 1))).is_positive_definite()


def test_ldl_reconstructs():
    A = RationalMatrix(((2, 1, 1), (1, 2, 1), (1, 1, 2)))
    L, d = A.ldl()
    n = 3
    rebuilt = tuple(
        tuple(sum(L[i][k] * d[k] * L[j][k] for k in range(n)) for j in range(n))
        for i in range(n)
    )
    assert rebuilt == A.rows


def brute_points(A, linear, bound, nonnegative, box=12):
    lo = 0 if nonnegative else -box
    out = set()
    for m1 in range(lo, box + 1):
        for m2 in range(lo, box + 1):
            m = (m1, m2)
            val = Fraction(1, 2) * A.quadratic_form(m) + sum(
                Fraction(l) * x for l, x in zip(linear, m)
            )
            if val <= bound:
                out.add(m)
    return out


@pytest.mark.parametrize(
    "rows,linear,bound,nonneg",
    [
        (((1, 0), (0, 1)), (0, 0), 8, False),
        (((2, 1), (1, 2)), (0, 0), 6, False),
        (((1, 1), (1, 2)), (1, -1), 7, True),
        ((("2/3", "-1/3"), ("-1/3", "2/3")), (0, 0), 3, False),
    ],
)
def test_enumerator_matches_brute_force(rows, linear, bound, nonneg):
    A = RationalMatrix(rows)
    got = {m: v for m, v in enumerate_quadratic_points(A, linear, bound, nonneg)}
    expected = brute_points(A, linear, bound, nonneg)
    assert set(got) == expected
    for m, v in got.items():
        direct = Fraction(1, 2) * A.quadratic_form(m) + sum(
            Fraction(l) * x for l, x in zip(linear, m)
        )
        assert v == direct


def test_enumerator_empty_when_bound_too_small():
    A = RationalMatrix.identity(2)
    pts = list(enumerate_quadratic_points(A, (0, 0), Fraction(-1), False))
    assert pts == []
