"""Exact orbit statistics for the maps x -> frac(base**j * x).

The central quantity is the windowed counting deviation: over a window of
consecutive orbit indices and a target interval, the absolute difference
between how many orbit points land in the target and how many a perfectly
equidistributed orbit would deposit there. The module computes it three
ways, each exact:

* pointwise, by walking the orbit of a rational;
* as a region {x : deviation meets a threshold}, by sweeping the sorted
  preimage breakpoints over a common power denominator;
* as a measure alone, by a cell-chain dynamic program over the digit
  process, which stays feasible when windows are far too long for the
  region itself to be materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd
from typing import Callable, Optional, Sequence, Union

from .measure import (
    ONE,
    ZERO,
    BudgetError,
    IntervalSet,
    RationalLike,
    as_fraction,
)

DEFAULT_EVENT_BUDGET = 5_000_000


@dataclass(frozen=True)
class Band:
    """Dyadic target interval [a / 2**k, (a + 1) / 2**k)."""

    a: int
    k: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("band depth must be non-negative")
        if not 0 <= self.a < 2**self.k:
            raise ValueError("band index out of range for depth %d" % self.k)

    @property
    def lo(self) -> Fraction:
        return Fraction(self.a, 2**self.k)

    @property
    def hi(self) -> Fraction:
        return Fraction(self.a + 1, 2**self.k)

    @property
    def length(self) -> Fraction:
        return Fraction(1, 2**self.k)

    def bounds(self) -> tuple[Fraction, Fraction]:
        return self.lo, self.hi


@dataclass(frozen=True)
class Window:
    """Orbit index window [offset, offset + length) for one base."""

    base: int
    offset: int
    length: int

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ValueError("base must be at least 2")
        if self.offset < 0:
            raise ValueError("window offset must be non-negative")
        if self.length < 1:
            raise ValueError("window length must be positive")

    @property
    def end(self) -> int:
        return self.offset + self.length


BandLike = Union[Band, tuple]


def _band_bounds(band: BandLike) -> tuple[Fraction, Fraction]:
    if isinstance(band, Band):
        return band.bounds()
    lo, hi = as_fraction(band[0]), as_fraction(band[1])
    if not (ZERO <= lo < hi <= ONE):
        raise ValueError("target interval must satisfy 0 <= lo < hi <= 1")
    return lo, hi


def orbit_point(x: RationalLike, base: int, j: int) -> Fraction:
    """frac(base**j * x) as an exact rational."""
    y = as_fraction(x) * base**j
    return y - (y.numerator // y.denominator)


def hit_count(x: RationalLike, window: Window, band: BandLike) -> int:
    lo, hi = _band_bounds(band)
    y = orbit_point(x, window.base, window.offset)
    count = 0
    for _ in range(window.length):
        if lo <= y < hi:
            count += 1
        y = y * window.base
        y -= y.numerator // y.denominator
    return count


def f_value(x: RationalLike, window: Window, band: BandLike) -> Fraction:
    """|hits - expected hits| for the window against the target interval."""
    lo, hi = _band_bounds(band)
    expected = (hi - lo) * window.length
    return abs(hit_count(x, window, (lo, hi)) - expected)


def preimage_interval(base: int, j: int, lo: RationalLike, hi: RationalLike) -> IntervalSet:
    """Exact preimage of [lo, hi) under x -> frac(base**j * x)."""
    if base < 2:
        raise ValueError("base must be at least 2")
    if j < 0:
        raise ValueError("iterate index must be non-negative")
    lo = as_fraction(lo)
    hi = as_fraction(hi)
    if not (ZERO <= lo < hi <= ONE):
        raise ValueError("target interval must satisfy 0 <= lo < hi <= 1")
    scale = base**j
    pairs = [((m + lo) / scale, (m + hi) / scale) for m in range(scale)]
    canonical = lo > 0 or hi < 1
    if canonical:
        return IntervalSet(pairs, _canonical=True)
    return IntervalSet(pairs)


def preimage_band(base: int, j: int, band: BandLike) -> IntervalSet:
    lo, hi = _band_bounds(band)
    return preimage_interval(base, j, lo, hi)


def sweep_cost(window: Window, budget: Optional[int] = None) -> int:
    """Number of breakpoint events a region sweep would generate."""
    b = window.base
    # total >= 2 * b**(end-1) >= 2**end, so reject oversized windows before
    # materializing the power itself
    if budget is not None and window.end > budget.bit_length():
        raise BudgetError(
            "sweep needs at least 2**(window end) events for a window end "
            "of %d bits, budget is %d" % (window.end.bit_length(), budget)
        )
    total = 2 * (b**window.end - b**window.offset) // (b - 1)
    if budget is not None and total > budget:
        raise BudgetError(
            "sweep needs %d events, budget is %d" % (total, budget)
        )
    return total


def breakpoints(window: Window, band: BandLike) -> list[Fraction]:
    """Sorted distinct preimage endpoints, with 0 and 1 always included."""
    lo, hi = _band_bounds(band)
    points = {ZERO, ONE}
    for j in range(window.offset, window.end):
        scale = window.base**j
        for m in range(scale):
            points.add((m + lo) / scale)
            if hi < 1 or m + 1 < scale:
                points.add((m + hi) / scale)
    return sorted(points)


def _count_cutoffs(
    expected: Fraction, threshold: Fraction, strict: bool
) -> tuple[int, int]:
    """Counts c qualify iff c <= c_lo or c >= c_hi."""
    if strict:
        return ceil(expected - threshold) - 1, floor(expected + threshold) + 1
    return floor(expected - threshold), ceil(expected + threshold)


def _sweep_events(window: Window, lo: Fraction, hi: Fraction, budget: int):
    """All preimage endpoints over a common denominator, as (numerator, delta).

    delta is +1 where the band indicator of some orbit index turns on and
    -1 where it turns off; the running prefix sum equals the hit count.
    """
    sweep_cost(window, budget)
    b = window.base
    q = lo.denominator * hi.denominator // gcd(lo.denominator, hi.denominator)
    top = window.end - 1
    denom = q * b**top
    lo_num = lo.numerator * (q // lo.denominator)
    hi_num = hi.numerator * (q // hi.denominator)
    events = []
    append = events.append
    for j in range(window.offset, window.end):
        scale = b ** (top - j)
        lo_scaled = lo_num * scale
        hi_scaled = hi_num * scale
        step = q * scale
        pos = 0
        for _ in range(b**j):
            append((pos + lo_scaled, 1))
            append((pos + hi_scaled, -1))
            pos += step
    events.sort()
    return events, denom


def _regions_from_events(
    events, denom: int, qualifiers: Sequence[Callable[[int], bool]]
) -> list[IntervalSet]:
    collected: list[list] = [[] for _ in qualifiers]
    starts: list = [None] * len(qualifiers)
    count = 0
    prev = 0
    i = 0
    total = len(events)

    def emit(position: int) -> None:
        # the segment [prev, position) carries the current count; a run that
        # stops qualifying here ended at prev, not at position
        for idx, qualify in enumerate(qualifiers):
            if qualify(count):
                if starts[idx] is None:
                    starts[idx] = prev
            elif starts[idx] is not None:
                collected[idx].append(
                    (Fraction(starts[idx], denom), Fraction(prev, denom))
                )
                starts[idx] = None

    while i < total:
        pos = events[i][0]
        if pos > prev:
            emit(pos)
            prev = pos
        delta = 0
        while i < total and events[i][0] == pos:
            delta += events[i][1]
            i += 1
        count += delta
    if prev < denom:
        emit(denom)
        prev = denom
    for idx, qualify in enumerate(qualifiers):
        if starts[idx] is not None:
            collected[idx].append((Fraction(starts[idx], denom), Fraction(prev, denom)))
    return [IntervalSet(parts, _canonical=True) for parts in collected]


def deviation_regions(
    window: Window,
    band: BandLike,
    thresholds: Sequence[RationalLike],
    budget: int = DEFAULT_EVENT_BUDGET,
    strict: bool = False,
) -> list[IntervalSet]:
    """Exact regions {x : deviation >= t} (or > t) for several thresholds.

    One sweep serves all thresholds; each region is a canonical union of
    half-open intervals whose endpoints share a common power denominator.
    """
    lo, hi = _band_bounds(band)
    length = window.length
    expected = (hi - lo) * length
    out: list[Optional[IntervalSet]] = [None] * len(thresholds)
    qualifiers = []
    live = []
    for idx, t in enumerate(thresholds):
        t = as_fraction(t)
        if (t < 0) or (t == 0 and not strict):
            out[idx] = IntervalSet.unit()
            continue
        c_lo, c_hi = _count_cutoffs(expected, t, strict)
        if c_lo < 0 and c_hi > length:
            out[idx] = IntervalSet.empty()
            continue
        qualifiers.append(
            (lambda lo_cut, hi_cut: lambda c: c <= lo_cut or c >= hi_cut)(c_lo, c_hi)
        )
        live.append(idx)
    if live:
        events, denom = _sweep_events(window, lo, hi, budget)
        regions = _regions_from_events(events, denom, qualifiers)
        for idx, region in zip(live, regions):
            out[idx] = region
    return out  # type: ignore[return-value]


def deviation_region(
    window: Window,
    band: BandLike,
    threshold: RationalLike,
    budget: int = DEFAULT_EVENT_BUDGET,
    strict: bool = False,
) -> IntervalSet:
    """Exact region where the windowed deviation reaches the threshold."""
    return deviation_regions(window, band, [threshold], budget, strict)[0]


def _uniform_after_burn_in(base: int, cells: int, steps: int) -> list[int]:
    weights = [1] * cells
    for _ in range(steps):
        new = [0] * cells
        for cell, wt in enumerate(weights):
            if wt:
                start = base * cell
                for r in range(base):
                    new[(start + r) % cells] += wt
        weights = new
    return weights


def _tail_weight(
    base: int,
    burn_in: int,
    length: int,
    cells: int,
    target: int,
    cap: int,
    count_hits: bool,
) -> int:
    """Weight of digit paths whose hit (or miss) count stays at most cap.

    Weighted over the uniform initial cell distribution; the implied
    denominator is cells * base**(burn_in + length - 1). Paths are absorbed
    the moment the tracked count exceeds cap.
    """
    if cap < 0:
        return 0
    inc = [0] * cells
    for cell in range(cells):
        is_hit = cell == target
        inc[cell] = 1 if (is_hit == count_hits) else 0
    trans = [[(base * cell + r) % cells for r in range(base)] for cell in range(cells)]
    start_weights = _uniform_after_burn_in(base, cells, burn_in)
    rows = [[0] * cells for _ in range(cap + 1)]
    for cell in range(cells):
        c0 = inc[cell]
        if c0 <= cap:
            rows[c0][cell] += start_weights[cell]
    for _ in range(length - 1):
        new_rows = [[0] * cells for _ in range(cap + 1)]
        for c, row in enumerate(rows):
            for cell in range(cells):
                wt = row[cell]
                if wt:
                    for nxt in trans[cell]:
                        nc = c + inc[nxt]
                        if nc <= cap:
                            new_rows[nc][nxt] += wt
        rows = new_rows
    return sum(sum(row) for row in rows)


def deviation_measure(
    window: Window,
    cells: int,
    target: int,
    threshold: RationalLike,
    strict: bool = False,
) -> Fraction:
    """Exact measure of {x : deviation meets the threshold}, region-free.

    The target interval must be one cell of the uniform partition of [0, 1)
    into `cells` pieces. Multiplication by the base maps cell boundaries to
    cell boundaries, so under Lebesgue measure the cell index of
    frac(base**j * x) is a Markov chain in j, uniform within cells at every
    step. The dynamic program tracks (cell, tail count) with absorption
    outside the qualifying tail, in exact integer arithmetic throughout.
    """
    if cells < 1:
        raise ValueError("cell count must be positive")
    if not 0 <= target < cells:
        raise ValueError("target cell out of range")
    b = window.base
    n = window.length
    threshold = as_fraction(threshold)
    if threshold < 0 or (threshold == 0 and not strict):
        return Fraction(1)
    expected = Fraction(n, cells)
    c_lo, c_hi = _count_cutoffs(expected, threshold, strict)
    if c_lo < 0 and c_hi > n:
        return ZERO
    denom = cells * b ** (window.offset + n - 1)
    total = 0
    if c_lo >= 0:
        # few-hits tail, directly or as the complement of a few-misses tail
        if c_lo <= n - c_lo - 1:
            total += _tail_weight(b, window.offset, n, cells, target, c_lo, True)
        else:
            total += denom - _tail_weight(
                b, window.offset, n, cells, target, n - c_lo - 1, False
            )
    if c_hi <= n:
        # many-hits tail is the few-misses tail
        if n - c_hi <= c_hi - 1:
            total += _tail_weight(b, window.offset, n, cells, target, n - c_hi, False)
        else:
            total += denom - _tail_weight(
                b, window.offset, n, cells, target, c_hi - 1, True
            )
    return Fraction(total, denom)


def deviation_measure_band(
    window: Window, band: Band, threshold: RationalLike, strict: bool = False
) -> Fraction:
    """Measure of the deviation region for a dyadic band via the cell chain."""
    return deviation_measure(window, 2**band.k, band.a, threshold, strict)
