"""Durfee systems: the data type, catalog builders and exact verification.

A system is a symmetric rational matrix K together with sectors (Q, a, b).
The identity being checked equates 1/prod_i (z_i q)_{M_i} with a sum over
sectors and nonnegative integer vectors m (n = K.m + Q must land in Z_+^n):

    z^{m+a} q^{(m+a).(n+b)} / prod_i (z_i q)_{n_i} * prod_i [binomial factor]

The binomial factor for a coordinate with a nonempty rectangle (m_i+a_i >= 1)
is the Gaussian [M_i+m_i-(n_i+b_i) choose m_i]; a coordinate whose rectangle
has no rows (m_i+a_i = 0) contributes no Gaussian and its column attachment
is capped at width min(n_i, M_i).  The cap is what keeps the identity exact
at small finite M (a zero-row rectangle imposes no width requirement of its
own, but its attachment must still respect the global bound M_i).
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .matrix import RationalMatrix
from .series import (
    INF,
    Discrepancy,
    SeriesContext,
    TruncatedSeries,
    as_fraction,
    format_fraction,
    is_infinite,
    pochhammer_inf,
    q_factorial_inverse,
    qbinomial,
    series_add,
    series_equal,
    series_invert,
    series_mul,
    zq_pochhammer_inverse,
)

_CAP_LIMIT = 10_000


@dataclass(frozen=True)
class Sector:
    """Offset data (Q, a, b) for one summand family."""

    Q: tuple
    a: tuple
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "Q", tuple(as_fraction(x) for x in self.Q))
        object.__setattr__(self, "a", tuple(as_fraction(x) for x in self.a))
        object.__setattr__(self, "b", tuple(as_fraction(x) for x in self.b))
        if not (len(self.Q) == len(self.a) == len(self.b)):
            raise ValueError("sector vectors must share one dimension")

    @property
    def dimension(self) -> int:
        return len(self.Q)

    def to_json(self):
        def vec(v):
            return [x.numerator if x.denominator == 1 else format_fraction(x) for x in v]

        return {"Q": vec(self.Q), "a": vec(self.a), "b": vec(self.b)}

    @classmethod
    def from_json(cls, data) -> "Sector":
        return cls(tuple(data["Q"]), tuple(data["a"]), tuple(data["b"]))


@dataclass(frozen=True)
class DurfeeSystem:
    """Symmetric rational matrix plus an ordered list of sectors."""

    K: RationalMatrix
    sectors: tuple

    def __post_init__(self):
        object.__setattr__(self, "sectors", tuple(self.sectors))
        for s in self.sectors:
            if s.dimension != self.K.n:
                raise ValueError("sector dimension does not match the matrix")

    @property
    def dimension(self) -> int:
        return self.K.n

    @property
    def length(self) -> int:
        return len(self.sectors)

    def drop_sector(self, k: int) -> "DurfeeSystem":
        if not 0 <= k < self.length:
            raise ValueError(f"no sector {k} in a length-{self.length} system")
        return DurfeeSystem(self.K, self.sectors[:k] + self.sectors[k + 1 :])

    def to_json(self):
        return {
            "dimension": self.dimension,
            "K": self.K.to_json(),
            "sectors": [s.to_json() for s in self.sectors],
        }

    @classmethod
    def from_json(cls, data) -> "DurfeeSystem":
        K = RationalMatrix.from_json(data["K"])
        sectors = tuple(Sector.from_json(s) for s in data["sectors"])
        system = cls(K, sectors)
        if "dimension" in data and int(data["dimension"]) != K.n:
            raise ValueError("declared dimension does not match the matrix")
        return system


@dataclass
class VerificationReport:
    identity: str
    M: Optional[tuple]
    cutoff: Fraction
    passed: bool
    witness: Optional[Discrepancy] = None
    details: dict = field(default_factory=dict)

    def to_json(self):
        out = {
            "identity": self.identity,
            "M": None if self.M is None else [_bound_json(x) for x in self.M],
            "cutoff": format_fraction(self.cutoff),
            "pass": self.passed,
            "witness": None if self.witness is None else self.witness.to_json(),
        }
        if self.details:
            out["details"] = self.details
        return out


def _bound_json(x):
    return "inf" if is_infinite(x) else int(x)


def _normalize_bounds(Mvec, dimension) -> tuple:
    Mvec = tuple(Mvec)
    if len(Mvec) != dimension:
        raise ValueError("bound vector length does not match dimension")
    out = []
    for x in Mvec:
        if is_infinite(x):
            out.append(INF)
        else:
            xi = int(x)
            if xi < 0:
                raise ValueError("bounds must be nonnegative or infinite")
            out.append(xi)
    return tuple(out)


def _thread_count() -> int:
    raw = os.environ.get("DURFEE_THREADS")
    if raw is None:
        return 1
    value = int(raw)
    if value == 0:
        return os.cpu_count() or 1
    return max(1, value)


def _map_sectors(fn, items):
    workers = _thread_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# -- summation ranges ---------------------------------------------------------


def _validate_system_data(K: RationalMatrix, sector: Sector):
    if not K.is_nonnegative():
        raise ValueError("sector sums require a nonnegative symmetric matrix")
    if any(x < 0 for x in sector.a) or any(x < 0 for x in sector.b):
        raise ValueError("sector offsets a, b must be nonnegative")
    if any(x.denominator != 1 for x in sector.a):
        raise ValueError("sector offset a must be integral (it grades z)")


def _coordinate_caps(K: RationalMatrix, Q, a, b, cutoff) -> list:
    """Largest m_i that can keep the minimal q-exponent within the cutoff."""
    caps = []
    for i in range(K.n):
        Kii = K.rows[i][i]

        def g(c, i=i, Kii=Kii):
            ni = Kii * c + Q[i]
            if ni < 0:
                ni = Fraction(0)
            return (c + a[i]) * (ni + b[i])

        growth = Kii > 0 or (max(Fraction(0), Q[i]) + b[i]) > 0
        if not growth:
            raise ValueError(
                "q-exponent does not grow in coordinate %d; summation would not terminate" % i
            )
        cap = -1
        while cap < _CAP_LIMIT and g(cap + 1) <= cutoff:
            cap += 1
        if cap >= _CAP_LIMIT:
            raise ValueError("summation range exploded; matrix is unsuitable")
        caps.append(cap)
    return caps


def _admissible_terms(K: RationalMatrix, sector: Sector, cutoff, shift=None):
    """Yield (m, n, E) with n = K.m + Q + shift in Z_+^n and E <= cutoff."""
    Q = sector.Q if shift is None else tuple(q + s for q, s in zip(sector.Q, shift))
    caps = _coordinate_caps(K, Q, sector.a, sector.b, cutoff)
    for m in itertools.product(*(range(c + 1) for c in caps)):
        nvec = tuple(x + q for x, q in zip(K.mul_vector(m), Q))
        if any(x < 0 or x.denominator != 1 for x in nvec):
            continue
        nvec = tuple(int(x) for x in nvec)
        E = sum(
            ((mi + ai) * (ni + bi) for mi, ai, ni, bi in zip(m, sector.a, nvec, sector.b)),
            Fraction(0),
        )
        if E <= cutoff:
            yield m, nvec, E


# -- the two sides of the main identity ---------------------------------------


def lhs_product(Mvec, ctx: SeriesContext) -> TruncatedSeries:
    """prod_i 1/(z_i q)_{M_i}, with infinite entries allowed."""
    Mvec = _normalize_bounds(Mvec, ctx.dimension)
    out = ctx.one()
    for i, M in enumerate(Mvec):
        out = series_mul(out, zq_pochhammer_inverse(i, M, ctx))
    return out


def sector_sum(K: RationalMatrix, sector: Sector, Mvec, ctx: SeriesContext) -> TruncatedSeries:
    """One sector's contribution to the right hand side."""
    _validate_system_data(K, sector)
    Mvec = _normalize_bounds(Mvec, ctx.dimension)
    total = ctx.zero()
    one = ctx.one()
    for m, nvec, E in _admissible_terms(K, sector, ctx.cutoff):
        small = one
        poch_orders = []
        dead = False
        for i in range(ctx.dimension):
            rows = m[i] + sector.a[i]
            if is_infinite(Mvec[i]):
                small = series_mul(small, q_factorial_inverse(m[i], ctx))
                poch_orders.append(nvec[i])
            elif rows > 0:
                top = Mvec[i] + m[i] - nvec[i] - sector.b[i]
                qb = qbinomial(top, m[i], ctx)
                if qb.is_zero():
                    dead = True
                    break
                small = series_mul(small, qb)
                poch_orders.append(nvec[i])
            else:
                # zero-row rectangle: only the column attachment remains,
                # capped by the global width bound
                poch_orders.append(min(nvec[i], Mvec[i]))
        if dead:
            continue
        zexp = tuple(int(mi + ai) for mi, ai in zip(m, sector.a))
        big = _poch_inv_product(ctx, tuple(poch_orders)).shift(E, zexp)
        total = series_add(total, series_mul(big, small))
    return total


_POCH_PRODUCT_CACHE = {}


def _poch_inv_product(ctx: SeriesContext, orders) -> TruncatedSeries:
    key = (ctx.dimension, ctx.cutoff, orders)
    hit = _POCH_PRODUCT_CACHE.get(key)
    if hit is not None:
        return hit
    out = ctx.one()
    for i, order in enumerate(orders):
        out = series_mul(out, zq_pochhammer_inverse(i, order, ctx))
    _POCH_PRODUCT_CACHE[key] = out
    return out


def rhs_sector_sum(system: DurfeeSystem, Mvec, ctx: SeriesContext) -> TruncatedSeries:
    parts = _map_sectors(lambda s: sector_sum(system.K, s, Mvec, ctx), list(system.sectors))
    total = ctx.zero()
    for part in parts:
        total = series_add(total, part)
    return total


def verify_finite(system: DurfeeSystem, Mvec, cutoff) -> VerificationReport:
    """Exact comparison of the product side and the sector sum at one M."""
    ctx = SeriesContext(system.dimension, cutoff)
    Mvec = _normalize_bounds(Mvec, system.dimension)
    lhs = lhs_product(Mvec, ctx)
    rhs = rhs_sector_sum(system, Mvec, ctx)
    ok, witness = series_equal(lhs, rhs)
    return VerificationReport("finite", Mvec, ctx.cutoff, ok, witness)


def verify_specialized(system: DurfeeSystem, p, cutoff) -> VerificationReport:
    """The z_i = q^{p_i} specialization: 1/(q)_inf^n against the sector sum."""
    n = system.dimension
    p = tuple(int(x) for x in p)
    if len(p) != n:
        raise ValueError("shift vector length does not match dimension")
    ctx = SeriesContext(0, cutoff)
    inv_inf = series_invert(pochhammer_inf((), 1, ctx))
    lhs = ctx.one()
    for _ in range(n):
        lhs = series_mul(lhs, inv_inf)

    total = ctx.zero()
    for sector in system.sectors:
        _validate_system_data(system.K, sector)
        for m, nvec, E in _admissible_terms(system.K, sector, ctx.cutoff, shift=p):
            piece = ctx.monomial(1, E)
            for i in range(n):
                piece = series_mul(piece, q_factorial_inverse(m[i], ctx))
                piece = series_mul(piece, q_factorial_inverse(nvec[i], ctx))
            total = series_add(total, piece)
    ok, witness = series_equal(lhs, total)
    return VerificationReport("specialized", None, ctx.cutoff, ok, witness,
                              details={"p": list(p)})


def verify_symmetric(system: DurfeeSystem, Mvec, Nvec, p=None, cutoff=None) -> VerificationReport:
    """Polynomial identity prod_i [M_i+N_i choose M_i] = shifted sector sum."""
    n = system.dimension
    Mvec = _normalize_bounds(Mvec, n)
    Nvec = _normalize_bounds(Nvec, n)
    if any(is_infinite(x) for x in Mvec + Nvec):
        raise ValueError("the symmetric check needs finite M and N")
    p = (0,) * n if p is None else tuple(int(x) for x in p)

    # collect admissible terms first to size the cutoff for exactness
    specs = []
    max_deg = sum(Mi * Ni for Mi, Ni in zip(Mvec, Nvec))
    for k, sector in enumerate(system.sectors):
        _validate_system_data(system.K, sector)
        for m in itertools.product(*(range(Ni + 1) for Ni in Nvec)):
            nvec = tuple(
                x + q + s for x, q, s in zip(system.K.mul_vector(m), sector.Q, p)
            )
            if any(x < 0 or x.denominator != 1 for x in nvec):
                continue
            nvec = tuple(int(x) for x in nvec)
            E = Fraction(0)
            binargs = []
            dead = False
            for i in range(n):
                rows = m[i] + sector.a[i]
                cols = nvec[i] + sector.b[i]
                E += rows * cols
                if rows > 0 and cols > 0:
                    t1, b1 = Mvec[i] + m[i] - nvec[i] - sector.b[i], m[i]
                    t2, b2 = Nvec[i] + nvec[i] - m[i] - sector.a[i], nvec[i]
                elif rows == 0:
                    nt = min(nvec[i], Mvec[i])
                    t1, b1 = 0, 0
                    t2, b2 = Nvec[i] + nt, nt
                else:  # cols == 0, a zero-column rectangle with rows
                    mt = min(m[i], Nvec[i])
                    t1, b1 = Mvec[i] + mt, mt
                    t2, b2 = 0, 0
                for t, bo in ((t1, b1), (t2, b2)):
                    t = as_fraction(t)
                    if t.denominator != 1 or not 0 <= bo <= t:
                        dead = True
                        break
                    binargs.append((int(t), bo))
                if dead:
                    break
            if dead:
                continue
            deg = int(E) + sum(bo * (t - bo) for t, bo in binargs)
            max_deg = max(max_deg, deg)
            specs.append((E, binargs))

    ctx = SeriesContext(0, max_deg if cutoff is None else cutoff)
    lhs = ctx.one()
    for Mi, Ni in zip(Mvec, Nvec):
        lhs = series_mul(lhs, qbinomial(Mi + Ni, Mi, ctx))
    rhs = ctx.zero()
    for E, binargs in specs:
        piece = ctx.monomial(1, E)
        for t, bo in binargs:
            piece = series_mul(piece, qbinomial(t, bo, ctx))
        rhs = series_add(rhs, piece)
    ok, witness = series_equal(lhs, rhs)
    return VerificationReport(
        "symmetric", Mvec, ctx.cutoff, ok, witness,
        details={"N": [_bound_json(x) for x in Nvec], "p": list(p)},
    )


# -- the rectangle-ratio identity, evaluated directly -------------------------


def rs_sector_pairs(r: int, s: int) -> list:
    """The rs index pairs: (0,0) plus 1<=i<=r, 1<=j<=s without (r,s)."""
    pairs = [(0, 0)]
    for i in range(1, r + 1):
        for j in range(1, s + 1):
            if (i, j) != (r, s):
                pairs.append((i, j))
    return pairs


def verify_andrews(r: int, s: int, M, cutoff) -> VerificationReport:
    """Dissection by maximal rectangles of base:height ratio r:s, checked
    against 1/(zq)_M without going through the sector-sum machinery."""
    if r < 1 or s < 1:
        raise ValueError("r and s must be positive")
    ctx = SeriesContext(1, cutoff)
    M = _normalize_bounds((M,), 1)[0]
    lhs = zq_pochhammer_inverse(0, M, ctx)

    rhs = ctx.zero()
    for i, j in rs_sector_pairs(r, s):
        m = 0
        while Fraction((r * m + i) * (s * m + j)) <= ctx.cutoff:
            width = r * m + i
            height = s * m + j
            sub = s * m + j - 1 + (1 if i == 0 else 0) + (1 if i == r else 0)
            bin_bottom = r * m + (i if j == s else 0)
            piece = ctx.monomial(1, Fraction(width * height), (width,))
            piece = series_mul(piece, zq_pochhammer_inverse(0, sub, ctx))
            if is_infinite(M):
                piece = series_mul(piece, q_factorial_inverse(bin_bottom, ctx))
            else:
                qb = qbinomial(M + bin_bottom - s * m - j, bin_bottom, ctx)
                piece = series_mul(piece, qb)
            rhs = series_add(rhs, piece)
            m += 1
    ok, witness = series_equal(lhs, rhs)
    return VerificationReport("andrews", (M,), ctx.cutoff, ok, witness,
                              details={"r": r, "s": s})


# -- builders -----------------------------------------------------------------


def build_rs_system(r: int, s: int) -> DurfeeSystem:
    """Length r*s system for the 1x1 matrix K = s/r."""
    if r < 1 or s < 1:
        raise ValueError("r and s must be positive")
    K = RationalMatrix.scalar(Fraction(s, r))
    sectors = []
    for i, j in rs_sector_pairs(r, s):
        d_i0 = 1 if i == 0 else 0
        d_ir = 1 if i == r else 0
        d_js = 1 if j == s else 0
        Q = Fraction(j - 1 + d_i0 + d_ir) - Fraction(s, r) * i * d_js
        a = Fraction(i * (1 - d_js))
        b = Fraction(1 - d_i0 - d_ir)
        sectors.append(Sector((Q,), (a,), (b,)))
    return DurfeeSystem(K, tuple(sectors))


def build_theorem31() -> DurfeeSystem:
    K = RationalMatrix(((1, 1), (1, 2)))
    return DurfeeSystem(
        K,
        (
            Sector((0, 0), (0, 0), (0, 0)),
            Sector((0, 1), (0, 1), (1, 0)),
        ),
    )


def build_theorem32() -> DurfeeSystem:
    K = RationalMatrix(((2, 1), (1, 2)))
    return DurfeeSystem(
        K,
        (
            Sector((0, 0), (0, 0), (0, 0)),
            Sector((0, 1), (0, 1), (0, 0)),
            Sector((1, 1), (1, 0), (0, 0)),
        ),
    )


def build_theorem33(n: int) -> DurfeeSystem:
    """Length n+1 system for the n x n matrix with 2 on the diagonal and 1
    elsewhere; the k-th sector has Q = (0^{n-k}, 1^k)."""
    if n < 1:
        raise ValueError("dimension must be positive")
    K = RationalMatrix(
        tuple(tuple(2 if i == j else 1 for j in range(n)) for i in range(n))
    )
    sectors = []
    for k in range(n + 1):
        Q = (0,) * (n - k) + (1,) * k
        if k == 0:
            a = (0,) * n
        else:
            a = (0,) * (n - k) + (1,) + (0,) * (k - 1)
        sectors.append(Sector(Q, a, (0,) * n))
    return DurfeeSystem(K, tuple(sectors))


def build_kzero() -> DurfeeSystem:
    """Degenerate length-1 system for K = (0): the negative-binomial expansion."""
    return DurfeeSystem(RationalMatrix.scalar(0), (Sector((0,), (0,), (1,)),))


def shift_deform(base: RationalMatrix, M: int, t) -> RationalMatrix:
    """K -> K + M t t^T; checks the determinant bookkeeping for base = 1."""
    t = tuple(int(x) for x in t)
    if len(t) != base.n:
        raise ValueError("charge vector length does not match the matrix")
    if M < 0:
        raise ValueError("M must be nonnegative")
    rows = tuple(
        tuple(base.rows[i][j] + M * t[i] * t[j] for j in range(base.n))
        for i in range(base.n)
    )
    out = RationalMatrix(rows)
    if base == RationalMatrix.identity(base.n):
        tt = sum(x * x for x in t)
        assert out.determinant() == tt * M + 1
        assert out.determinant() == out.trace() - base.n + 1
    return out


def build_shift_system(M: int, t) -> DurfeeSystem:
    """Length (t1^2+t2^2)M + 1 system for the deformed 2x2 identity matrix.

    Sector groups (all with b = 0): the vacuum; (t1^2 M + 1, c) for
    c = t2^2 M down to t1^2 M + 1 and (c, c+1) for c = t1^2 M - 1 down to 0,
    both with a = 0; and the diagonal (c, c) for c = t1^2 M down to 1 with
    a = (1, 0).
    """
    t = tuple(int(x) for x in t)
    if len(t) != 2:
        raise ValueError("the shift construction is two-dimensional")
    t1, t2 = t
    if not (1 <= t1 <= t2):
        raise ValueError("charge vector must satisfy 1 <= t1 <= t2")
    if M < 0:
        raise ValueError("M must be nonnegative")
    K = shift_deform(RationalMatrix.identity(2), M, t)
    zero2 = (0, 0)
    sectors = [Sector(zero2, zero2, zero2)]
    s1, s2 = t1 * t1 * M, t2 * t2 * M
    for c in range(s2, s1, -1):
        sectors.append(Sector((s1 + 1, c), zero2, zero2))
    for c in range(s1 - 1, -1, -1):
        sectors.append(Sector((c, c + 1), zero2, zero2))
    for c in range(s1, 0, -1):
        sectors.append(Sector((c, c), (1, 0), zero2))
    return DurfeeSystem(K, tuple(sectors))


# -- grids ---------------------------------------------------------------------


def default_m_grid(dimension: int, cap: int = 16) -> list:
    """The default sampling grid {0,1,2,inf}^n, capped for large n."""
    values = (0, 1, 2, INF)
    grid = list(itertools.product(values, repeat=dimension))
    if dimension >= 3:
        grid = grid[:cap]
    return grid
