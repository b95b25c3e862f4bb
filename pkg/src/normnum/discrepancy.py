"""Exact discrepancy of finite rational point sets and orbit prefixes.

Both discrepancy flavors are suprema over interval families. For a finite
point set the supremum is attained in a limit of intervals pinned to the
points (or to the domain ends), so enumerating those critical positions
with exact counts gives the exact value: no search, no rounding.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from fractions import Fraction
from typing import Sequence

from mpmath import iv

from .enclose import Enclosure, eval_iv_tight, iv_fraction
from .measure import ONE, ZERO, RationalLike, as_fraction


def orbit_points(x: RationalLike, base: int, count: int) -> list[Fraction]:
    """The first `count` points frac(base**j * x), j = 0, 1, ..."""
    if base < 2:
        raise ValueError("base must be at least 2")
    if count < 1:
        raise ValueError("count must be positive")
    y = as_fraction(x)
    y -= y.numerator // y.denominator
    points = []
    for _ in range(count):
        points.append(y)
        y = y * base
        y -= y.numerator // y.denominator
    return points


def _prepare(points: Sequence[RationalLike]) -> list[Fraction]:
    if not points:
        raise ValueError("discrepancy needs at least one point")
    values = sorted(as_fraction(p) for p in points)
    if values[0] < 0 or values[-1] >= 1:
        raise ValueError("points must lie in [0, 1)")
    return values

def extreme_discrepancy(points: Sequence[RationalLike]) -> Fraction:
    """Exact two-sided interval discrepancy of a finite point multiset.

    The overfilled side is maximized by closed intervals spanning point
    pairs (single points included); the underfilled side by open intervals
    between consecutive critical positions, with the domain ends allowed.
    Both families are enumerated with exact rational counts.
    """
    pts = _prepare(points)
    n = len(pts)
    distinct = sorted(set(pts))
    best = ZERO
    # closed [u, v] with both ends at points: count crowded above length
    for i, u in enumerate(distinct):
        for v in distinct[i:]:
            inside = bisect_right(pts, v) - bisect_left(pts, u)
            value = Fraction(inside, n) - (v - u)
            if value > best:
                best = value
    # open (u, v): length above inner count; 0 and 1 act as closed ends
    lowers = [(ZERO, True)] + [(p, False) for p in distinct]
    uppers = [(p, False) for p in distinct] + [(ONE, True)]
    for u, u_closed in lowers:
        for v, v_closed in uppers:
            if v <= u:
                continue
            left = bisect_left(pts, u) if u_closed else bisect_right(pts, u)
            right = bisect_right(pts, v) if v_closed else bisect_left(pts, v)
            value = (v - u) - Fraction(right - left, n)
            if value > best:
                best = value
    return best


def star_discrepancy(points: Sequence[RationalLike]) -> Fraction:
    """Exact anchored discrepancy sup over [0, v), 0 < v <= 1."""
    pts = _prepare(points)
    n = len(pts)
    best = ZERO
    for v in sorted(set(pts)) + [ONE]:
        below = bisect_left(pts, v)
        through = bisect_right(pts, v)
        value = abs(Fraction(below, n) - v)
        if value > best:
            best = value
        value = abs(Fraction(through, n) - v)
        if value > best:
            best = value
    return best


def normality_ratio(
    x: RationalLike, base: int, count: int, precision: int = 64
) -> tuple[Fraction, Enclosure]:
    """Exact orbit discrepancy and its growth-normalized ratio.

    The ratio divides by sqrt(count * loglog count), the scale against
    which the construction's thresholds are calibrated; count must be at
    least 16 so the inner logarithm is safely positive.
    """
    if count < 16:
        raise ValueError("normalized ratio needs count >= 16")
    disc = extreme_discrepancy(orbit_points(x, base, count))
    ratio = eval_iv_tight(
        precision,
        lambda: iv_fraction(disc)
        * iv.sqrt(iv.mpf(count) / iv.log(iv.log(iv.mpf(count)))),
    )
    return disc, ratio


def philipp_constant(base: int, precision: int = 64) -> Enclosure:
    """Classical almost-sure discrepancy constant 166 + 664/(sqrt(base)-1)."""
    if base < 2:
        raise ValueError("base must be at least 2")
    root = _exact_sqrt(Fraction(base))
    if root is not None:
        return Enclosure.exact(166 + Fraction(664, 1) / (root - 1))
    return eval_iv_tight(
        precision,
        lambda: 166 + 664 / (iv.sqrt(iv.mpf(base)) - 1),
    )


def fukuyama_constant(theta: int, precision: int = 64) -> Enclosure:
    """Sharp almost-sure constants for geometric sequences theta**j.

    theta = 2 gives sqrt(84)/9; odd theta gives
    sqrt(2(theta+1)/(theta-1))/2; even theta >= 4 gives
    sqrt(2(theta+1)theta(theta-2)/(theta-1)**3)/2. Exact whenever the
    radicand is a rational square.
    """
    if theta < 2:
        raise ValueError("theta must be at least 2")
    if theta == 2:
        radicand = Fraction(84, 81)
    elif theta % 2 == 1:
        radicand = Fraction(2 * (theta + 1), theta - 1) / 4
    else:
        radicand = Fraction(
            2 * (theta + 1) * theta * (theta - 2), (theta - 1) ** 3
        ) / 4
    root = _exact_sqrt(radicand)
    if root is not None:
        return Enclosure.exact(root)
    return eval_iv_tight(precision, lambda: iv.sqrt(iv_fraction(radicand)))


def _exact_sqrt(value: Fraction):
    from math import isqrt

    num = isqrt(value.numerator)
    den = isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None
