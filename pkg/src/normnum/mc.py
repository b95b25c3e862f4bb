"""Seeded Monte Carlo estimation of set measures, for cross-checking.

Sampling is a counter-mode hash construction: point i of a stream is
derived from blake2b(seed, counter, i), so streams are reproducible
bit for bit, splittable by counter, and independent of Python's RNG
state. Points have 128 fractional bits; membership tests against exact
regions and orbit statistics use pure integer arithmetic on those bits,
so estimates inherit no rounding at all.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from .badsets import badic_deviation_bound, dyadic_deviation_bound
from .enclose import Enclosure
from .measure import RationalLike, ZERO, as_fraction, format_fraction

RESOLUTION_BITS = 128
_SCALE = 2**RESOLUTION_BITS


@dataclass(frozen=True)
class SamplerSpec:
    """A reproducible sample stream: seed picks the family, counter the
    stream, count its length."""

    seed: int
    count: int
    counter: int = 0

    def __post_init__(self) -> None:
        if self.count < 100:
            raise ValueError("sample count below 100 is statistically useless")
        if self.seed < 0 or self.counter < 0:
            raise ValueError("seed and counter must be non-negative")


def sample_integers(spec: SamplerSpec) -> list[int]:
    """The stream's points as integers in [0, 2**128)."""
    out = []
    pack = struct.pack
    for i in range(spec.count):
        digest = hashlib.blake2b(
            pack("<QQQ", spec.seed & (2**64 - 1), spec.counter, i),
            digest_size=16,
        ).digest()
        out.append(int.from_bytes(digest, "big"))
    return out


def sample_points(spec: SamplerSpec) -> list[Fraction]:
    return [Fraction(r, _SCALE) for r in sample_integers(spec)]


@dataclass(frozen=True)
class EstimateReport:
    spec: SamplerSpec
    hits: int
    estimate: Fraction
    variance: Fraction
    reference: Optional[Enclosure]
    verdict: Optional[str]

    def to_json(self) -> dict:
        return {
            "seed": self.spec.seed,
            "counter": self.spec.counter,
            "count": self.spec.count,
            "hits": self.hits,
            "estimate": format_fraction(self.estimate),
            "variance": format_fraction(self.variance),
            "reference": None if self.reference is None else self.reference.to_json(),
            "verdict": self.verdict,
        }


def _within_four_sigma(estimate: Fraction, reference: Enclosure, variance: Fraction) -> bool:
    """Exact test of |estimate - reference| <= 4 * standard error.

    Distances are compared squared against 16 * variance, so no square
    roots are ever taken.
    """
    if reference.lo <= estimate <= reference.hi:
        return True
    gap = reference.lo - estimate if estimate < reference.lo else estimate - reference.hi
    return gap * gap <= 16 * variance


def estimate_measure(
    member: Callable[[Fraction], bool],
    spec: SamplerSpec,
    reference: Optional[Union[Enclosure, RationalLike]] = None,
) -> EstimateReport:
    """Estimate the measure of {x : member(x)} over the unit interval.

    With a reference value or enclosure, attaches a four-sigma verdict:
    "consistent" or "inconsistent".
    """
    hits = 0
    for point in sample_points(spec):
        if member(point):
            hits += 1
    estimate = Fraction(hits, spec.count)
    variance = estimate * (1 - estimate) / spec.count
    verdict = None
    ref_enc = None
    if reference is not None:
        ref_enc = (
            reference
            if isinstance(reference, Enclosure)
            else Enclosure.exact(as_fraction(reference))
        )
        if variance == 0:
            ok = ref_enc.lo <= estimate <= ref_enc.hi
        else:
            ok = _within_four_sigma(estimate, ref_enc, variance)
        verdict = "consistent" if ok else "inconsistent"
    return EstimateReport(spec, hits, estimate, variance, ref_enc, verdict)


def check_bound(
    kind: str,
    base: int,
    depth: int,
    length: int,
    eps: RationalLike,
    spec: SamplerSpec,
    offset: int = 0,
    precision: int = 64,
) -> dict:
    """Monte Carlo audit of a closed-form deviation bound.

    kind "badic" checks the strict-event bound for base-power bands (depth
    is the band's base exponent); kind "dyadic" checks the at-least-event
    bound for dyadic bands. The sampled event takes the worst band at the
    given depth, which dominates every single-band event the bound covers.
    Verdict "vacuous" when the bound's whole enclosure is at least 1;
    otherwise "pass" when the estimate sits at or below the bound within
    four sigma, else "violation". Windows needing more base digits than
    the samples' 128 fractional bits are rejected.
    """
    eps = as_fraction(eps)
    steps = offset + length
    # beyond 128 fractional digits the lattice orbits collapse to zero and
    # stop emulating Lebesgue measure, so refuse instead of mis-sampling
    if steps > RESOLUTION_BITS or base**steps > _SCALE:
        raise ValueError(
            "window needs %d base-%d digits, samples carry only %d bits"
            % (steps, base, RESOLUTION_BITS)
        )
    if kind == "badic":
        bound = badic_deviation_bound(base, depth, length, eps, precision)
        cells = base**depth
        strict = True
    elif kind == "dyadic":
        bound = dyadic_deviation_bound(base, depth, length, eps, precision)
        cells = 2**depth
        strict = False
    else:
        raise ValueError("kind must be 'badic' or 'dyadic'")
    threshold = eps * length
    hits = 0
    worst_estimate = ZERO
    per_band_hits = [0] * cells
    for point_bits in sample_integers(spec):
        counts = _count_cells(point_bits, base, cells, length, offset)
        qualified = False
        for a in range(cells):
            deviation = abs(Fraction(counts[a], 1) - Fraction(length, cells))
            exceeded = deviation > threshold if strict else deviation >= threshold
            if exceeded:
                per_band_hits[a] += 1
                qualified = True
        if qualified:
            hits += 1
    estimate = Fraction(hits, spec.count)
    variance = estimate * (1 - estimate) / spec.count
    for a in range(cells):
        band_est = Fraction(per_band_hits[a], spec.count)
        if band_est > worst_estimate:
            worst_estimate = band_est
    if bound.lo >= 1:
        verdict = "vacuous"
    else:
        # the bound covers each single band, so test the worst band
        gap = worst_estimate - bound.hi
        band_var = worst_estimate * (1 - worst_estimate) / spec.count
        if worst_estimate <= bound.hi or gap * gap <= 16 * band_var:
            verdict = "pass"
        else:
            verdict = "violation"
    return {
        "kind": kind,
        "base": base,
        "depth": depth,
        "length": length,
        "offset": offset,
        "eps": format_fraction(eps),
        "bound": bound.to_json(),
        "any_band_estimate": format_fraction(estimate),
        "worst_band_estimate": format_fraction(worst_estimate),
        "samples": spec.count,
        "verdict": verdict,
    }


def _count_cells(point_bits: int, base: int, cells: int, length: int, offset: int) -> list[int]:
    """Hits of every cell of the uniform `cells` partition along a window."""
    counts = [0] * cells
    y = (point_bits * pow(base, offset, _SCALE)) % _SCALE
    for _ in range(length):
        counts[(y * cells) >> RESOLUTION_BITS] += 1
        y = (y * base) % _SCALE
    return counts
