"""Core series arithmetic against the partition-counting oracle."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from durfee.partitions import count_pM, enumerate_partitions
from durfee.series import (
    SeriesContext,
    TruncatedSeries,
    pochhammer,
    pochhammer_inf,
    qbinomial,
    series_add,
    series_equal,
    series_invert,
    series_mul,
)

CTX1 = SeriesContext(1, 12)
CTX0 = SeriesContext(0, 12)


def q_poly(ctx, coeffs):
    """Series from a dense q-coefficient list (no z)."""
    zero = (0,) * ctx.dimension
    return TruncatedSeries.from_terms(
        ctx.dimension, ctx.cutoff, [(d, zero, c) for d, c in enumerate(coeffs)]
    )


def test_add_cancels():
    a = q_poly(CTX0, [1, 1])
    b = q_poly(CTX0, [-1, 1])
    assert series_add(a, b) == q_poly(CTX0, [0, 2])


def test_add_identity():
    s = q_poly(CTX0, [3, 0, 5])
    assert series_add(s, CTX0.zero()) == s


def test_sub_self_is_zero():
    s = series_invert(pochhammer_inf((), 1, SeriesContext(0, 5)))
    assert (s - s).is_zero()


def test_mul_geometric():
    geo = q_poly(CTX0, [1] * 13)
    assert series_mul(q_poly(CTX0, [1, -1]), geo) == CTX0.one()


def test_mul_exponent_addition():
    ctx = SeriesContext(2, 4)
    a = ctx.monomial(1, Fraction(1, 2), (1, 0))
    b = ctx.monomial(1, Fraction(1, 2), (0, 1))
    assert series_mul(a, b) == ctx.monomial(1, 1, (1, 1))


def test_mul_dimension_mismatch():
    with pytest.raises(ValueError):
        series_mul(CTX0.one(), CTX1.one())


def test_invert_poch2():
    p2 = pochhammer((), 1, 2, CTX0)
    assert series_mul(p2, series_invert(p2)) == CTX0.one()


def test_invert_geometric():
    inv = series_invert(q_poly(CTX0, [1, -1]))
    assert inv == q_poly(CTX0, [1] * 13)


def test_invert_one():
    assert series_invert(CTX0.one()) == CTX0.one()


def test_invert_parts_at_most_two():
    # partitions into parts <= 2, counted by enumeration: 1,1,2,2,3,3,4
    ctx = SeriesContext(0, 6)
    inv = series_invert(pochhammer((), 1, 2, ctx))
    expected = [len(enumerate_partitions(n, max_part=2)) for n in range(7)]
    assert expected == [1, 1, 2, 2, 3, 3, 4]
    assert [inv.coefficient(n) for n in range(7)] == expected


def test_invert_rejects_non_unit():
    with pytest.raises(ValueError):
        series_invert(q_poly(CTX0, [2, 1]))
    with pytest.raises(ValueError):
        series_invert(q_poly(CTX0, [0, 1]))


def test_pochhammer_single_factor():
    ctx = SeriesContext(1, 6)
    p = pochhammer((1,), 1, 1, ctx)
    assert p == series_add(ctx.one(), ctx.monomial(-1, 1, (1,)))


def test_pochhammer_empty():
    assert pochhammer((), 1, 0, CTX0) == CTX0.one()


def test_pochhammer_q3():
    p = pochhammer((), 1, 3, SeriesContext(0, 10))
    coeffs = [p.coefficient(n) for n in range(7)]
    assert coeffs == [1, -1, -1, 0, 1, 1, -1]


def test_pochhammer_inf_partition_counts():
    ctx = SeriesContext(0, 6)
    inv = series_invert(pochhammer_inf((), 1, ctx))
    counts = [len(enumerate_partitions(n)) for n in range(7)]
    assert counts == [1, 1, 2, 3, 5, 7, 11]
    assert [inv.coefficient(n) for n in range(7)] == counts


def test_pochhammer_inf_cutoff_zero():
    ctx = SeriesContext(0, 0)
    assert pochhammer_inf((), 1, ctx) == ctx.one()


def test_pochhammer_inf_two_part_count():
    # z^2 q^3 coefficient of 1/(zq)_inf counts partitions of 3 with 2 parts
    ctx = SeriesContext(1, 6)
    inv = series_invert(pochhammer_inf((1,), 1, ctx))
    assert inv.coefficient(3, (2,)) == 1
    assert inv.coefficient(3, (2,)) == count_pM(3, 2, 3)


def test_pochhammer_inf_nonterminating():
    with pytest.raises(ValueError):
        pochhammer_inf((), 0, CTX0)


def test_qbinomial_2_1():
    assert qbinomial(2, 1, CTX0) == q_poly(CTX0, [1, 1])


def test_qbinomial_bottom_zero():
    for M in range(6):
        assert qbinomial(M, 0, CTX0) == CTX0.one()


def test_qbinomial_out_of_range():
    assert qbinomial(1, 2, CTX0).is_zero()
    assert qbinomial(-1, 0, CTX0).is_zero()
    assert qbinomial(Fraction(5, 2), 1, CTX0).is_zero()
    assert qbinomial(3, Fraction(1, 2), CTX0).is_zero()


def test_qbinomial_4_2_box_counts():
    got = qbinomial(4, 2, CTX0)
    assert got == q_poly(CTX0, [1, 1, 2, 1, 1])
    # independent count: partitions of d inside a 2x2 box
    for d in range(5):
        boxed = [p for p in enumerate_partitions(d, max_parts=2, max_part=2)]
        assert got.coefficient(d) == len(boxed)


@pytest.mark.parametrize("M", range(1, 13))
def test_qbinomial_pascal(M):
    ctx = SeriesContext(0, 40)
    for m in range(M + 1):
        lhs = qbinomial(M, m, ctx)
        rhs = series_add(
            qbinomial(M - 1, m, ctx),
            qbinomial(M - 1, m - 1, ctx).shift(M - m),
        )
        assert lhs == rhs, (M, m)


@pytest.mark.parametrize("M", range(13))
def test_qbinomial_symmetry(M):
    ctx = SeriesContext(0, 40)
    for m in range(M + 1):
        assert qbinomial(M, m, ctx) == qbinomial(M, M - m, ctx)


def test_boxed_counts_match_poch_inverse():
    # z^m q^n coefficient of 1/(zq)_M counts partitions: m parts, each <= M
    ctx = SeriesContext(1, 8)
    for M in range(4):
        inv = series_invert(pochhammer((1,), 1, M, ctx))
        for n in range(9):
            for m in range(n + 1):
                assert inv.coefficient(n, (m,)) == count_pM(M, m, n), (M, m, n)


def test_series_equal_reports_discrepancy():
    a = q_poly(CTX0, [1, 1])
    b = q_poly(CTX0, [1, 2])
    ok, witness = series_equal(a, b)
    assert not ok
    assert witness.q_exp == 1 and witness.lhs == 1 and witness.rhs == 2


def test_series_equal_same():
    a = q_poly(CTX0, [1, 4, 2])
    assert series_equal(a, a) == (True, None)


def test_text_form():
    ctx = SeriesContext(2, 3)
    s = series_add(ctx.monomial(2, Fraction(1, 2), (1, -1)), ctx.one())
    assert s.to_text() == "1 q^0/1 z^(0,0)\n2 q^1/2 z^(1,-1)"


def test_restrict_and_collapse():
    ctx = SeriesContext(2, 4)
    s = series_add(ctx.monomial(3, 1, (0, 2)), ctx.monomial(5, 2, (1, 1)))
    sliced = s.restrict_z(0, 0)
    assert sliced.dimension == 1
    assert sliced.coefficient(1, (2,)) == 3
    collapsed = s.collapse_z()
    assert collapsed.coefficient(1) == 3 and collapsed.coefficient(2) == 5


small_series = st.builds(
    lambda items: TruncatedSeries.from_terms(1, 5, [(q, (z,), c) for q, z, c in items]),
    st.lists(
        st.tuples(st.integers(0, 5), st.integers(0, 3), st.integers(-4, 4)),
        max_size=5,
    ),
)


@settings(max_examples=60, deadline=None)
@given(small_series, small_series, small_series)
def test_ring_axioms(a, b, c):
    assert series_add(a, b) == series_add(b, a)
    assert series_mul(a, b) == series_mul(b, a)
    assert series_add(series_add(a, b), c) == series_add(a, series_add(b, c))
    assert series_mul(series_mul(a, b), c) == series_mul(a, series_mul(b, c))
    assert series_mul(a, series_add(b, c)) == series_add(series_mul(a, b), series_mul(a, c))


@settings(max_examples=25, deadline=None)
@given(small_series)
def test_invert_round_trip(s):
    unit = series_add(SeriesContext(1, 5).one(), s.shift(1))
    assert series_mul(unit, series_invert(unit)) == SeriesContext(1, 5).one()
