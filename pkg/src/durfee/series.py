"""Exact truncated series in q and z_1..z_n.

Coefficients are arbitrary-precision integers.  Terms are keyed by a pair
(q-exponent, z-exponent vector): the q-exponent is an exact rational, the
z-exponents are signed integers (Laurent monomials are allowed).  A series
carries an inclusive q-degree cutoff; every operation is exact for all
q-exponents up to the cutoff and drops anything above it eagerly.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Optional

INF = float("inf")


def is_infinite(value) -> bool:
    """True for the distinguished infinite bound (accepts the float inf)."""
    return value == INF


def as_fraction(value) -> Fraction:
    """Coerce ints, strings like '3' or '-5/7', and Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def format_fraction(value: Fraction) -> str:
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_bound(text):
    """Parse an 'inf' / integer bound as used for Pochhammer subscripts."""
    if isinstance(text, (int, Fraction)):
        return text
    if isinstance(text, float) and is_infinite(text):
        return INF
    s = str(text).strip().lower()
    if s in ("inf", "infinity", "oo"):
        return INF
    return int(s)


@dataclass(frozen=True)
class Discrepancy:
    """Smallest term where two series disagree."""

    q_exp: Fraction
    z_exp: tuple
    lhs: int
    rhs: int

    def to_json(self):
        return {
            "q_exp": format_fraction(self.q_exp),
            "z_exp": list(self.z_exp),
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
        }


class TruncatedSeries:
    """Immutable sparse series; do not mutate `terms` after construction."""

    __slots__ = ("dimension", "cutoff", "terms", "_sorted")

    def __init__(self, dimension: int, cutoff, terms: Optional[dict] = None):
        self.dimension = dimension
        self.cutoff = as_fraction(cutoff)
        self.terms = {} if terms is None else terms
        self._sorted = None

    # -- construction helpers -------------------------------------------

    @classmethod
    def from_terms(cls, dimension, cutoff, items: Iterable) -> "TruncatedSeries":
        cutoff = as_fraction(cutoff)
        terms = {}
        for qexp, zexp, coeff in items:
            qexp = as_fraction(qexp)
            zexp = tuple(int(e) for e in zexp)
            if len(zexp) != dimension:
                raise ValueError("z-exponent length does not match dimension")
            if qexp > cutoff or coeff == 0:
                continue
            key = (qexp, zexp)
            new = terms.get(key, 0) + int(coeff)
            if new:
                terms[key] = new
            else:
                terms.pop(key, None)
        return cls(dimension, cutoff, terms)

    # -- inspection ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, qexp, zexp=None) -> int:
        qexp = as_fraction(qexp)
        if zexp is None:
            zexp = (0,) * self.dimension
        return self.terms.get((qexp, tuple(zexp)), 0)

    def q_coefficients(self, upto=None) -> dict:
        """Collapse z and return {q-exponent: total coefficient}."""
        out = {}
        bound = self.cutoff if upto is None else as_fraction(upto)
        for (qexp, _zexp), coeff in self.terms.items():
            if qexp <= bound:
                out[qexp] = out.get(qexp, 0) + coeff
        return {k: v for k, v in out.items() if v}

    def min_term(self):
        """Smallest (q-exponent, z-exponents) key, or None for the zero series."""
        if not self.terms:
            return None
        return min(self.terms)

    def sorted_items(self):
        if self._sorted is None:
            self._sorted = sorted(self.terms.items())
        return self._sorted

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and self.cutoff == other.cutoff
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.dimension, self.cutoff, frozenset(self.terms.items())))

    def __repr__(self):
        n = len(self.terms)
        return f"TruncatedSeries(dim={self.dimension}, cutoff={self.cutoff}, {n} terms)"

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_add(self, series_scale(other, -1))

    def __neg__(self):
        return series_scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, int):
            return series_scale(self, other)
        return series_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return series_scale(self, other)
        return NotImplemented

    # -- reshaping ---------------------------------------------------------

    def shift(self, qexp, zexp=None) -> "TruncatedSeries":
        """Multiply by the monomial q^qexp * z^zexp."""
        qexp = as_fraction(qexp)
        zexp = (0,) * self.dimension if zexp is None else tuple(zexp)
        terms = {}
        for (q, z), c in self.terms.items():
            nq = q + qexp
            if nq <= self.cutoff:
                terms[(nq, tuple(a + b for a, b in zip(z, zexp)))] = c
        return TruncatedSeries(self.dimension, self.cutoff, terms)

    def restrict_z(self, index: int, degree: int, drop: bool = True) -> "TruncatedSeries":
        """Slice out the part with z_index-exponent == degree.

        With drop=True the variable is removed (dimension shrinks by one).
        """
        terms = {}
        for (q, z), c in self.terms.items():
            if z[index] != degree:
                continue
            nz = z[:index] + z[index + 1 :] if drop else z
            terms[(q, nz)] = terms.get((q, nz), 0) + c
        dim = self.dimension - 1 if drop else self.dimension
        return TruncatedSeries(dim, self.cutoff, {k: v for k, v in terms.items() if v})

    def collapse_z(self) -> "TruncatedSeries":
        """Set every z_i = 1, leaving a pure q-series (dimension 0)."""
        terms = {}
        for (q, _z), c in self.terms.items():
            key = (q, ())
            new = terms.get(key, 0) + c
            if new:
                terms[key] = new
            else:
                terms.pop(key, None)
        return TruncatedSeries(0, self.cutoff, terms)

    def specialize_z_to_q(self, powers) -> "TruncatedSeries":
        """Substitute z_i -> q^{powers[i]} for every variable."""
        powers = [as_fraction(p) for p in powers]
        if len(powers) != self.dimension:
            raise ValueError("power vector length does not match dimension")
        terms = {}
        for (q, z), c in self.terms.items():
            nq = q + sum((p * e for p, e in zip(powers, z)), Fraction(0))
            if nq > self.cutoff:
                continue
            key = (nq, ())
            new = terms.get(key, 0) + c
            if new:
                terms[key] = new
            else:
                terms.pop(key, None)
        return TruncatedSeries(0, self.cutoff, terms)

    # -- canonical text form ------------------------------------------------

    def to_text(self) -> str:
        """One `coef q^<num>/<den> z^(e1,...,en)` line per term, sorted."""
        lines = []
        for (q, z), c in self.sorted_items():
            zs = ",".join(str(e) for e in z)
            lines.append(f"{c} q^{q.numerator}/{q.denominator} z^({zs})")
        return "\n".join(lines)


@dataclass(frozen=True)
class SeriesContext:
    """Ambient ring data: number of z variables and the q-degree cutoff."""

    dimension: int
    cutoff: Fraction

    def __post_init__(self):
        object.__setattr__(self, "cutoff", as_fraction(self.cutoff))

    def zero(self) -> TruncatedSeries:
        return TruncatedSeries(self.dimension, self.cutoff, {})

    def one(self) -> TruncatedSeries:
        return self.monomial(1, 0)

    def monomial(self, coeff, qexp, zexp=None) -> TruncatedSeries:
        qexp = as_fraction(qexp)
        zexp = (0,) * self.dimension if zexp is None else tuple(int(e) for e in zexp)
        if len(zexp) != self.dimension:
            raise ValueError("z-exponent length does not match dimension")
        if coeff == 0 or qexp > self.cutoff:
            return self.zero()
        return TruncatedSeries(self.dimension, self.cutoff, {(qexp, zexp): int(coeff)})

    def unit_z(self, index: int) -> tuple:
        e = [0] * self.dimension
        e[index] = 1
        return tuple(e)

    def with_cutoff(self, cutoff) -> "SeriesContext":
        return SeriesContext(self.dimension, as_fraction(cutoff))


def _check_compatible(a: TruncatedSeries, b: TruncatedSeries):
    if a.dimension != b.dimension:
        raise ValueError(f"dimension mismatch: {a.dimension} vs {b.dimension}")


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Coefficientwise sum; the result cutoff is the smaller of the two."""
    _check_compatible(a, b)
    cutoff = min(a.cutoff, b.cutoff)
    if len(b.terms) > len(a.terms):
        a, b = b, a
    terms = {k: v for k, v in a.terms.items() if k[0] <= cutoff}
    for key, coeff in b.terms.items():
        if key[0] > cutoff:
            continue
        new = terms.get(key, 0) + coeff
        if new:
            terms[key] = new
        else:
            terms.pop(key, None)
    return TruncatedSeries(a.dimension, cutoff, terms)


def series_scale(a: TruncatedSeries, scalar: int) -> TruncatedSeries:
    if scalar == 0:
        return TruncatedSeries(a.dimension, a.cutoff, {})
    return TruncatedSeries(a.dimension, a.cutoff, {k: scalar * v for k, v in a.terms.items()})


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product, truncated at the common cutoff.

    Exact up to the cutoff provided both operands have no terms of negative
    q-degree (the usual case) or were computed at suitably extended cutoffs.
    """
    _check_compatible(a, b)
    cutoff = min(a.cutoff, b.cutoff)
    if not a.terms or not b.terms:
        return TruncatedSeries(a.dimension, cutoff, {})
    # iterate the smaller operand outside, break early on the q-sorted larger
    if len(a.terms) > len(b.terms):
        a, b = b, a
    b_sorted = b.sorted_items()
    terms = {}
    for (qa, za), ca in a.terms.items():
        budget = cutoff - qa
        for (qb, zb), cb in b_sorted:
            if qb > budget:
                break
            key = (qa + qb, tuple(x + y for x, y in zip(za, zb)))
            new = terms.get(key, 0) + ca * cb
            if new:
                terms[key] = new
            else:
                terms.pop(key, None)
    return TruncatedSeries(a.dimension, cutoff, terms)


def series_invert(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse by long division on the minimal term.

    Requires the constant term (q-exponent 0, zero z-vector) to be +-1 and
    every other term to have strictly positive q-degree.
    """
    const_key = (Fraction(0), (0,) * a.dimension)
    c0 = a.terms.get(const_key, 0)
    if c0 not in (1, -1):
        raise ValueError("series is not invertible: constant term must be +1 or -1")
    rest = []
    for key, coeff in a.terms.items():
        if key == const_key:
            continue
        if key[0] <= 0:
            raise ValueError("series is not invertible: non-constant term of q-degree <= 0")
        rest.append((key, coeff))
    result = {}
    residual = {const_key: 1}
    heap = [const_key]
    in_heap = {const_key}
    while heap:
        key = heapq.heappop(heap)
        in_heap.discard(key)
        coeff = residual.pop(key, 0)
        if coeff == 0:
            continue
        # cancel the minimal residual term with a single quotient term
        qcoeff = coeff * c0
        result[key] = qcoeff
        qq, qz = key
        for (rq, rz), rc in rest:
            nq = qq + rq
            if nq > a.cutoff:
                continue
            nkey = (nq, tuple(x + y for x, y in zip(qz, rz)))
            new = residual.get(nkey, 0) - qcoeff * rc
            if new:
                residual[nkey] = new
                if nkey not in in_heap:
                    heapq.heappush(heap, nkey)
                    in_heap.add(nkey)
            else:
                residual.pop(nkey, None)
    return TruncatedSeries(a.dimension, a.cutoff, result)


def series_equal(a: TruncatedSeries, b: TruncatedSeries):
    """Exact comparison; on failure returns the smallest differing term."""
    _check_compatible(a, b)
    if a.cutoff != b.cutoff:
        raise ValueError("cutoff mismatch in series comparison")
    if a.terms == b.terms:
        return True, None
    keys = set(a.terms) | set(b.terms)
    for key in sorted(keys):
        ca = a.terms.get(key, 0)
        cb = b.terms.get(key, 0)
        if ca != cb:
            return False, Discrepancy(key[0], key[1], ca, cb)
    return True, None


# -- Pochhammer symbols ----------------------------------------------------


def pochhammer(zmono, qshift, M: int, ctx: SeriesContext) -> TruncatedSeries:
    """Finite product prod_{k=1}^{M} (1 - z^zmono q^{qshift+k-1})."""
    if M < 0:
        raise ValueError("Pochhammer order must be nonnegative")
    qshift = as_fraction(qshift)
    zmono = tuple(int(e) for e in zmono)
    out = ctx.one()
    for k in range(1, M + 1):
        qexp = qshift + k - 1
        if qexp > ctx.cutoff and qexp > 0:
            break  # remaining factors cannot touch degrees <= cutoff
        factor = series_add(ctx.one(), ctx.monomial(-1, qexp, zmono))
        out = series_mul(out, factor)
    return out


def pochhammer_inf(zmono, qshift, ctx: SeriesContext) -> TruncatedSeries:
    """Infinite product prod_{k>=1} (1 - z^zmono q^{qshift+k-1}), truncated."""
    qshift = as_fraction(qshift)
    zmono = tuple(int(e) for e in zmono)
    if qshift <= 0 and all(e == 0 for e in zmono):
        raise ValueError("factor sequence does not terminate below the cutoff")
    out = ctx.one()
    k = 1
    while qshift + k - 1 <= ctx.cutoff:
        factor = series_add(ctx.one(), ctx.monomial(-1, qshift + k - 1, zmono))
        out = series_mul(out, factor)
        k += 1
    return out


def q_factorial_inverse(m: int, ctx: SeriesContext) -> TruncatedSeries:
    """1 / (q;q)_m in the ambient ring (cached per dimension and cutoff)."""
    return _poch_inv_pure(ctx.dimension, ctx.cutoff, m)


@lru_cache(maxsize=None)
def _poch_inv_pure(dimension, cutoff, m):
    ctx = SeriesContext(dimension, cutoff)
    zero = (0,) * dimension
    return series_invert(pochhammer(zero, 1, m, ctx))


@lru_cache(maxsize=None)
def _poch_inv_z(dimension, cutoff, index, m):
    ctx = SeriesContext(dimension, cutoff)
    return series_invert(pochhammer(ctx.unit_z(index), 1, m, ctx))


def zq_pochhammer_inverse(index: int, m, ctx: SeriesContext) -> TruncatedSeries:
    """1 / (z_index q; q)_m, with m = INF allowed (cached)."""
    if is_infinite(m):
        return _poch_inv_z_inf(ctx.dimension, ctx.cutoff, index)
    return _poch_inv_z(ctx.dimension, ctx.cutoff, index, int(m))


@lru_cache(maxsize=None)
def _poch_inv_z_inf(dimension, cutoff, index):
    ctx = SeriesContext(dimension, cutoff)
    return series_invert(pochhammer_inf(ctx.unit_z(index), 1, ctx))


# -- Gaussian binomials ------------------------------------------------------


@lru_cache(maxsize=None)
def gaussian_coefficients(top: int, bottom: int) -> tuple:
    """Coefficient list of the Gaussian polynomial [top choose bottom]_q.

    Valid for integers 0 <= bottom <= top; degree is bottom*(top-bottom).
    """
    n, k = top, bottom
    k = min(k, n - k)
    coeffs = [1]
    for j in range(1, k + 1):
        # multiply by (1 - q^{n-k+j}), divide by (1 - q^j); stays integral
        shift = n - k + j
        coeffs = coeffs + [0] * shift
        for d in range(len(coeffs) - 1, shift - 1, -1):
            coeffs[d] -= coeffs[d - shift]
        for d in range(j, len(coeffs)):
            coeffs[d] += coeffs[d - j]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
    return tuple(coeffs)


def qbinomial(top, bottom, ctx: SeriesContext) -> TruncatedSeries:
    """Gaussian polynomial, zero unless top and bottom are integers with
    0 <= bottom <= top (zero extension doubles as an integrality filter)."""
    top = as_fraction(top)
    bottom = as_fraction(bottom)
    if top.denominator != 1 or bottom.denominator != 1:
        return ctx.zero()
    n, k = top.numerator, bottom.numerator
    if not (0 <= k <= n):
        return ctx.zero()
    zero = (0,) * ctx.dimension
    coeffs = gaussian_coefficients(n, k)
    items = []
    for d, c in enumerate(coeffs):
        if c and d <= ctx.cutoff:
            items.append((Fraction(d), zero, c))
    return TruncatedSeries.from_terms(ctx.dimension, ctx.cutoff, items)


def series_product(factors, ctx: SeriesContext) -> TruncatedSeries:
    out = ctx.one()
    for f in factors:
        out = series_mul(out, f)
    return out
