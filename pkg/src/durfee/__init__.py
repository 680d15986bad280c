"""Exact q-series toolkit for Durfee systems and fermionic character sums."""

from .matrix import RationalMatrix, enumerate_quadratic_points
from .partitions import (
    CoverageReport,
    Multipartition,
    Partition,
    SectorCell,
    cell_generating_function,
    compose_cell,
    count_pM,
    decompose_cell,
    durfee_rectangle,
    durfee_square,
    enumerate_partitions,
    sector_coverage_check,
)
from .series import (
    INF,
    Discrepancy,
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
from .systems import (
    DurfeeSystem,
    Sector,
    VerificationReport,
    build_kzero,
    build_rs_system,
    build_shift_system,
    build_theorem31,
    build_theorem32,
    build_theorem33,
    default_m_grid,
    lhs_product,
    rhs_sector_sum,
    sector_sum,
    shift_deform,
    verify_andrews,
    verify_finite,
    verify_specialized,
    verify_symmetric,
)

__all__ = [name for name in dir() if not name.startswith("_")]
