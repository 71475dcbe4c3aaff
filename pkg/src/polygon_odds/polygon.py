"""Polygon inequality, violator lookup and convex (cyclic) realization.

A list of positive lengths is *polygonal* when every length is strictly less
than half of the total. Integer and ``Fraction`` inputs are compared exactly;
float inputs are summed with :func:`math.fsum` and compared without epsilon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real
from typing import Optional, Sequence

from .errors import InvalidInventory, NotPolygonal

MAX_BISECTION_STEPS = 200
ANGLE_TOLERANCE = 1e-12


def _validate(lengths: Sequence[Real], minimum: int = 3) -> tuple:
    values = tuple(lengths)
    if len(values) < minimum:
        raise InvalidInventory(f"need at least {minimum} lengths, got {len(values)}")
    for x in values:
        if isinstance(x, bool) or not isinstance(x, Real):
            raise InvalidInventory(f"length {x!r} is not a real number")
        if not math.isfinite(x) or x <= 0:
            raise InvalidInventory(f"length {x!r} must be finite and positive")
    return values


def _total(values: tuple):
    if any(isinstance(x, float) for x in values):
        return math.fsum(values)
    return sum(values)


def total(lengths: Sequence[Real]):
    """Sum of the lengths (exact for ints and fractions)."""
    return _total(_validate(lengths, minimum=1))


def max_violator(lengths: Sequence[Real]) -> Optional[int]:
    """Index of the length that is at least half the total, or ``None``.

    At most one such length can exist, so the answer is unambiguous. A length
    equal to exactly half the total counts as a violation (flat polygon).
    """
    values = _validate(lengths)
    s = _total(values)
    i = max(range(len(values)), key=values.__getitem__)
    return i if 2 * values[i] >= s else None


def is_polygonal(lengths: Sequence[Real]) -> bool:
    """True iff the lengths are the sides of some (convex) polygon."""
    return max_violator(lengths) is None


@dataclass(frozen=True)
class DiagonalInterval:
    """Open interval ``(lo, hi)`` of admissible diagonal lengths."""

    lo: Real
    hi: Real

    @property
    def nonempty(self) -> bool:
        return self.lo < self.hi

    def __contains__(self, d) -> bool:
        return self.lo < d < self.hi


def diagonal_interval(a: Real, b: Real, rest: Sequence[Real]) -> DiagonalInterval:
    """Lengths ``d`` that split a polygon into triangle ``{a, b, d}`` and ``rest + [d]``.

    The split is taken as given; no sorting happens here. When ``a >= b`` and
    the largest of ``rest`` is the overall largest remaining side, the interval
    is nonempty exactly when ``[a, b, *rest]`` is polygonal.
    """
    a, b = _validate([a, b], minimum=2)
    rest = _validate(rest, minimum=2)
    big = max(rest)
    rest_total = _total(rest)
    lo = max(abs(a - b), big - (rest_total - big))
    lo = max(lo, 0)
    hi = min(a + b, rest_total)
    return DiagonalInterval(lo, hi)


@dataclass(frozen=True)
class PolygonRealization:
    """Vertices of a convex polygon, counterclockwise, closed implicitly."""

    vertices: tuple[tuple[float, float], ...]
    circumradius: float

    def side_lengths(self) -> list[float]:
        vs = self.vertices
        return [math.dist(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def cross_products(self) -> list[float]:
        vs = self.vertices
        k = len(vs)
        out = []
        for i in range(k):
            (x0, y0), (x1, y1), (x2, y2) = vs[i], vs[(i + 1) % k], vs[(i + 2) % k]
            out.append((x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1))
        return out

    def is_convex(self) -> bool:
        cs = self.cross_products()
        return all(c > 0 for c in cs) or all(c < 0 for c in cs)

    def to_dict(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "circumradius": self.circumradius,
            "side_lengths": self.side_lengths(),
        }


def _half_angles(sides: Sequence[float], radius: float) -> list[float]:
    return [math.asin(min(1.0, s / (2.0 * radius))) for s in sides]


def _bisect(residual, lo: float, hi: float) -> float:
    """Root of a residual that is negative at ``lo`` and positive at ``hi``."""
    mid = 0.5 * (lo + hi)
    for _ in range(MAX_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        r = residual(mid)
        if abs(r) < ANGLE_TOLERANCE or mid in (lo, hi):
            break
        if r < 0:
            lo = mid
        else:
            hi = mid
    return mid


def _circumradius(sides: list[float], longest: int) -> tuple[float, bool]:
    """Radius of the circle through all vertices, and whether its center is outside.

    With the center inside, the central angles sum to a full turn. Otherwise
    the longest side subtends the reflex arc and its angle equals the sum of
    the others.
    """
    s_max = sides[longest]
    others = [s for i, s in enumerate(sides) if i != longest]
    r_min = s_max / 2.0
    center_inside = math.pi / 2 + sum(_half_angles(others, r_min)) >= math.pi

    if center_inside:
        # decreasing in R: negate so the residual rises through zero
        def residual(r: float) -> float:
            return math.pi - sum(_half_angles(sides, r))
    else:
        def residual(r: float) -> float:
            return sum(_half_angles(others, r)) - math.asin(min(1.0, s_max / (2.0 * r)))

    hi = r_min * 2.0
    while residual(hi) < 0:
        hi *= 2.0
    return _bisect(residual, r_min, hi), not center_inside


def construct_polygon(lengths: Sequence[Real]) -> PolygonRealization:
    """Build a convex polygon with the given side lengths, in order.

    The result is the cyclic polygon (all vertices on one circle), placed with
    the first vertex at the origin and the first side along the positive
    x-axis. Raises :class:`NotPolygonal` when no polygon exists.
    """
    values = _validate(lengths)
    bad = max_violator(values)
    if bad is not None:
        raise NotPolygonal(bad, values)

    sides = [float(x) for x in values]
    longest = max(range(len(sides)), key=sides.__getitem__)
    radius, reflex = _circumradius(sides, longest)

    steps = [2.0 * h for h in _half_angles(sides, radius)]
    if reflex:
        steps[longest] = 2.0 * math.pi - steps[longest]
    # Walk the circle starting just after the longest side, which closes the
    # polygon and absorbs the root-finding error (smallest relative impact).
    k = len(sides)
    order = [(longest + 1 + j) % k for j in range(k)]
    phis = {order[0]: 0.0}
    for prev, cur in zip(order, order[1:]):
        phis[cur] = phis[prev] + steps[prev]
    points = [(radius * math.cos(phis[i]), radius * math.sin(phis[i])) for i in range(k)]

    # rigid motion: vertex 0 to the origin, side 0 along +x
    x0, y0 = points[0]
    x1, y1 = points[1]
    theta = math.atan2(y1 - y0, x1 - x0)
    c, s = math.cos(-theta), math.sin(-theta)
    placed = tuple(
        (c * (x - x0) - s * (y - y0) + 0.0, s * (x - x0) + c * (y - y0) + 0.0) for x, y in points
    )
    return PolygonRealization(vertices=placed, circumradius=radius)


__all__ = [
    "DiagonalInterval",
    "PolygonRealization",
    "construct_polygon",
    "diagonal_interval",
    "is_polygonal",
    "max_violator",
    "total",
]
