"""Partitions, multipartitions, rectangle dissections and the coverage oracle.

Everything here is deliberately brute force: this module is the independent
check against which the series algebra is validated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .series import SeriesContext, TruncatedSeries, q_factorial_inverse, series_mul


class Partition:
    """Weakly decreasing sequence of positive integers."""

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError("parts must be positive")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError("parts must be weakly decreasing")
        self.parts = parts

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def width(self) -> int:
        return self.parts[0] if self.parts else 0

    def __eq__(self, other):
        if isinstance(other, Partition):
            return self.parts == other.parts
        return NotImplemented

    def __hash__(self):
        return hash(self.parts)

    def __lt__(self, other):
        return self.parts < other.parts

    def __iter__(self):
        return iter(self.parts)

    def __repr__(self):
        return f"Partition({list(self.parts)})"

    def __str__(self):
        return "[" + ",".join(str(p) for p in self.parts) + "]"

    @classmethod
    def parse(cls, text: str) -> "Partition":
        text = text.strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise ValueError(f"not a partition literal: {text!r}")
        inner = text[1:-1].strip()
        if not inner:
            return cls()
        return cls(int(x) for x in inner.split(","))


class Multipartition:
    """Fixed-length tuple of partitions."""

    __slots__ = ("components",)

    def __init__(self, components):
        self.components = tuple(
            c if isinstance(c, Partition) else Partition(c) for c in components
        )

    @property
    def size(self) -> int:
        return sum(c.size for c in self.components)

    def __eq__(self, other):
        if isinstance(other, Multipartition):
            return self.components == other.components
        return NotImplemented

    def __hash__(self):
        return hash(self.components)

    def __lt__(self, other):
        return tuple(c.parts for c in self.components) < tuple(c.parts for c in other.components)

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.components) + ")"

    def __repr__(self):
        return f"Multipartition({[list(c.parts) for c in self.components]})"


def enumerate_partitions(size, max_parts=None, max_part=None):
    """All partitions of `size` with at most max_parts parts, each <= max_part.

    Returned in lexicographic order of the part tuples.
    """
    if size < 0:
        return []
    out = []

    def rec(remaining, bound, prefix):
        if remaining == 0:
            out.append(Partition(prefix))
            return
        if max_parts is not None and len(prefix) >= max_parts:
            return
        top = min(bound, remaining)
        for part in range(1, top + 1):
            rec(remaining - part, part, prefix + (part,))

    start = size if max_part is None else min(max_part, size)
    rec(size, start, ())
    out.sort(key=lambda p: p.parts)
    return out


def partition_count(size: int) -> int:
    """p(size) by enumeration (small sizes only; this is the oracle)."""
    return len(enumerate_partitions(size))


def count_pM(M: int, m: int, n: int) -> int:
    """Number of partitions of n into exactly m parts, each at most M."""
    return sum(1 for p in enumerate_partitions(n, max_parts=m, max_part=M) if p.length == m)


def durfee_square(p: Partition) -> int:
    """Largest d with parts[d-1] >= d."""
    d = 0
    for i, part in enumerate(p.parts):
        if part >= i + 1:
            d = i + 1
        else:
            break
    return d


def durfee_rectangle(p: Partition, base: int, height: int) -> int:
    """Largest scale d such that the diagram contains a (base*d) x (height*d)
    rectangle (base = width, height = rows)."""
    if base <= 0 or height <= 0:
        raise ValueError("base and height must be positive")
    d = 0
    while True:
        rows, width = height * (d + 1), base * (d + 1)
        if p.length >= rows and p.parts[rows - 1] >= width:
            d += 1
        else:
            return d


@dataclass(frozen=True)
class SectorCell:
    """One coordinate of a sector term: rectangle (n+b) rows x (m+a) columns."""

    m: int
    n: int
    a: int
    b: int

    def __post_init__(self):
        if min(self.m, self.n, self.a, self.b) < 0:
            raise ValueError("cell data must be nonnegative")

    @property
    def rows(self) -> int:
        return self.n + self.b

    @property
    def cols(self) -> int:
        return self.m + self.a

    @property
    def area(self) -> int:
        return self.rows * self.cols


def compose_cell(cell: SectorCell, right: Partition, below: Partition) -> Partition:
    """Assemble a partition from a rectangle plus its two attachments.

    The rectangle has (n+b) rows of width (m+a); `right` (at most n parts)
    widens the top rows; `below` (parts at most m) sits underneath.
    """
    if right.length > cell.n:
        raise ValueError("right attachment has too many parts")
    if below.width > cell.m:
        raise ValueError("below attachment has parts wider than the rectangle allows")
    rows = []
    for i in range(cell.rows):
        extra = right.parts[i] if i < right.length else 0
        rows.append(cell.cols + extra)
    rows.extend(below.parts)
    rows = [r for r in rows if r > 0]
    if any(rows[i] < rows[i + 1] for i in range(len(rows) - 1)):
        raise ValueError("composition is not weakly decreasing")
    return Partition(rows)


def decompose_cell(p: Partition, cell: SectorCell):
    """Inverse of compose_cell for a partition known to contain the cell."""
    rows, cols = cell.rows, cell.cols
    if p.length < rows or (rows and p.parts[rows - 1] < cols):
        raise ValueError("partition does not contain the rectangle")
    right = Partition(pt for pt in (p.parts[i] - cols for i in range(rows)) if pt > 0)
    below = Partition(p.parts[rows:])
    if right.length > cell.n or below.width > cell.m:
        raise ValueError("partition does not dissect along this cell")
    return right, below


def cell_generating_function(cell: SectorCell, ctx: SeriesContext, track_z: bool = False,
                             z_index: int = 0) -> TruncatedSeries:
    """q^{(m+a)(n+b)} / ((q)_m (q)_n); optionally grade columns by one z."""
    base = series_mul(
        q_factorial_inverse(cell.m, ctx), q_factorial_inverse(cell.n, ctx)
    )
    if track_z:
        from .series import zq_pochhammer_inverse

        base = series_mul(
            q_factorial_inverse(cell.m, ctx), zq_pochhammer_inverse(z_index, cell.n, ctx)
        )
        zexp = tuple(
            cell.cols if i == z_index else 0 for i in range(ctx.dimension)
        )
        return base.shift(Fraction(cell.area), zexp)
    return base.shift(Fraction(cell.area))


@dataclass
class CoverageReport:
    """Result of the exhaustiveness / non-overlap oracle."""

    max_size: int
    overlaps: list = field(default_factory=list)
    gaps: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)

    MAX_WITNESSES = 10

    @property
    def passed(self) -> bool:
        return not self.overlaps and not self.gaps and self.counts == self.expected

    def to_json(self):
        return {
            "max_size": self.max_size,
            "pass": self.passed,
            "overlaps": [
                {
                    "multipartition": str(mp),
                    "witnesses": [
                        {"sector": k, "m": list(m)} for (k, m) in wits
                    ],
                }
                for mp, wits in self.overlaps
            ],
            "gaps": [str(mp) for mp in self.gaps],
            "counts": {str(s): c for s, c in sorted(self.counts.items())},
            "expected": {str(s): c for s, c in sorted(self.expected.items())},
        }


def _attachment_choices(cell: SectorCell, budget: int):
    """All (right, below, size) triples for one cell within a size budget."""
    rights = []
    for s in range(budget + 1):
        rights.extend((p, p.size) for p in enumerate_partitions(s, max_parts=cell.n))
    out = []
    for right, rsize in rights:
        for s in range(budget - rsize + 1):
            for below in enumerate_partitions(s, max_part=cell.m):
                out.append((right, below, rsize + below.size))
    return out


def sector_coverage_check(system, max_size: int) -> CoverageReport:
    """Enumerate every multipartition each sector term generates, up to
    total size max_size, and report overlaps, gaps and per-size counts."""
    n = system.dimension
    K = system.K
    if not K.is_integer():
        raise ValueError("coverage oracle requires an integer matrix")
    report = CoverageReport(max_size=max_size)
    seen = {}

    for k, sector in enumerate(system.sectors):
        if any(x.denominator != 1 or x < 0 for vec in (sector.Q, sector.a, sector.b) for x in vec):
            raise ValueError("coverage oracle requires nonnegative integer sector data")
        a = tuple(int(x) for x in sector.a)
        b = tuple(int(x) for x in sector.b)
        Q = tuple(int(x) for x in sector.Q)
        for m in _m_box(K, Q, a, b, max_size):
            nvec = K.mul_vector(m)
            nvec = tuple(x + q for x, q in zip(nvec, Q))
            if any(x.denominator != 1 or x < 0 for x in nvec):
                continue
            nvec = tuple(int(x) for x in nvec)
            cells = [SectorCell(m[i], nvec[i], a[i], b[i]) for i in range(n)]
            area = sum(c.area for c in cells)
            if area > max_size:
                continue
            _emit_compositions(cells, max_size - area, k, m, seen)

    for mp, witnesses in sorted(seen.items()):
        if len(witnesses) > 1 and len(report.overlaps) < CoverageReport.MAX_WITNESSES:
            report.overlaps.append((mp, witnesses))

    for total in range(max_size + 1):
        for mp in _all_multipartitions(n, total):
            if mp not in seen:
                if len(report.gaps) < CoverageReport.MAX_WITNESSES:
                    report.gaps.append(mp)
        report.expected[total] = sum(1 for _ in _all_multipartitions(n, total))
        report.counts[total] = sum(1 for mp in seen if mp.size == total)

    return report


def _m_box(K, Q, a, b, max_size):
    """Nonnegative integer vectors m whose minimal cell area can stay within
    max_size; per-coordinate caps use the diagonal growth of the area."""
    n = K.n
    caps = []
    for i in range(n):
        cap = 0
        while True:
            c = cap + 1
            ni_min = max(0, int((K.rows[i][i] * c + Q[i]).__floor__()))
            if (c + a[i]) * (ni_min + b[i]) > max_size:
                break
            cap = c
            if cap > max_size + 1:
                break
        caps.append(cap)
    yield from itertools.product(*(range(c + 1) for c in caps))


def _emit_compositions(cells, budget, k, m, seen):
    n = len(cells)

    def rec(i, remaining, built):
        if i == n:
            mp = Multipartition(built)
            seen.setdefault(mp, []).append((k, m))
            return
        for right, below, extra in _attachment_choices(cells[i], remaining):
            if extra <= remaining:
                rec(i + 1, remaining - extra, built + [compose_cell(cells[i], right, below)])

    rec(0, budget, [])


@lru_cache(maxsize=None)
def _partitions_by_size(total):
    return tuple(enumerate_partitions(total))


def _all_multipartitions(n, total):
    """Every n-component multipartition of the given total size."""
    if n == 0:
        if total == 0:
            yield Multipartition(())
        return
    for first in range(total + 1):
        for p in _partitions_by_size(first):
            for rest in _all_multipartitions(n - 1, total - first):
                yield Multipartition((p,) + rest.components)


def count_multipartitions(n, total) -> int:
    return sum(1 for _ in _all_multipartitions(n, total))
