"""Exact geometry on 2-D rate polytopes.

With at most a dozen halfspaces in two variables, enumerating pairwise
constraint intersections is exact, dependency-free, and reports binding
constraints naturally, so no general LP solver is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .model import RatePair
from .regions import RateRegion

FEAS_TOL = 1e-12
_BINDING_TOL = 1e-9
_DEDUP_TOL = 1e-10


@dataclass(frozen=True)
class LPSolution:
    """Maximizer of R_private + R_common over an intersection of regions."""

    value: float
    point: RatePair
    binding: tuple[str, ...]
    degenerate: bool


def contains(region: RateRegion, point: RatePair, tol: float = FEAS_TOL) -> bool:
    """True iff every halfspace of ``region`` is satisfied within ``tol``."""
    return all(h.slack(point) >= -tol for h in region.halfspaces)


def _lines(regions: tuple[RateRegion, ...], qualify: bool):
    lines = []
    for region in regions:
        prefix = f"{region.short_name}:" if qualify else ""
        for h in region.halfspaces:
            lines.append((float(h.coef_private), float(h.coef_common),
                          h.bound, prefix + h.label))
    return lines


def _candidate_points(lines, feas_tol: float):
    """Feasible pairwise intersections of the constraint lines and axes.

    The axes only contribute intersection candidates; feasibility against
    them is the non-negativity check, not a <= constraint.
    """
    axes = [(1.0, 0.0, 0.0, "axis-private"), (0.0, 1.0, 0.0, "axis-common")]
    points = [(0.0, 0.0)]
    for (a1, b1, c1, _), (a2, b2, c2, _) in combinations(lines + axes, 2):
        det = a1 * b2 - a2 * b1
        if abs(det) < 1e-15:
            continue
        x = (c1 * b2 - c2 * b1) / det
        y = (a1 * c2 - a2 * c1) / det
        if x < -feas_tol or y < -feas_tol:
            continue
        x = max(x, 0.0) + 0.0  # +0.0 normalizes -0.0
        y = max(y, 0.0) + 0.0
        if all(a * x + b * y <= c + feas_tol for a, b, c, _ in lines):
            points.append((x, y))
    return points


def max_sum_rate(*regions: RateRegion, feas_tol: float = FEAS_TOL) -> LPSolution:
    """Exact maximizer of R_private + R_common over the regions' intersection.

    Ties are broken toward the lexicographically largest private rate and
    flagged as degenerate. Binding labels are qualified with the region's
    builder name when more than one region is intersected.
    """
    if not regions:
        raise ValueError("max_sum_rate needs at least one region")
    lines = _lines(tuple(regions), qualify=len(regions) > 1)
    candidates = _candidate_points(lines, feas_tol)

    best_value = -math.inf
    optima: list[tuple[float, float]] = []
    for x, y in candidates:
        v = x + y
        if v > best_value + 1e-12:
            best_value = v
            optima = [(x, y)]
        elif abs(v - best_value) <= 1e-12:
            optima.append((x, y))

    optima.sort()
    x, y = optima[-1]
    degenerate = any(max(abs(px - x), abs(py - y)) > 1e-9 for px, py in optima)
    point = RatePair(x, y)
    binding = tuple(
        label for a, b, c, label in lines
        if abs(a * x + b * y - c) <= _BINDING_TOL
    )
    return LPSolution(value=x + y, point=point, binding=binding, degenerate=degenerate)


def vertices(region: RateRegion) -> list[RatePair]:
    """All extreme points of the feasible set, counterclockwise.

    Points closer than 1e-10 are merged; collinear boundary points are not
    reported. Starts at the lexicographically smallest vertex (the origin,
    unless the region is a single point elsewhere, which cannot happen here).
    """
    points = _candidate_points(_lines((region,), qualify=False), FEAS_TOL)
    points.sort()
    unique: list[tuple[float, float]] = []
    for p in points:
        if not unique or max(abs(p[0] - unique[-1][0]), abs(p[1] - unique[-1][1])) > _DEDUP_TOL:
            unique.append(p)
    hull = _convex_hull(unique)
    return [RatePair(x, y) for x, y in hull]


def _convex_hull(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Andrew's monotone chain; input sorted, output counterclockwise with
    collinear interior points dropped."""
    if len(points) <= 2:
        return list(points)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple[float, float]] = []
    for p in points:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 1e-20:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(points):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 1e-20:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if not hull:
        hull = [points[0]]
    return hull
