"""Independent reference implementations the tests check the package against.

Nothing here may call into lp2d solver/geometry code paths it is used to
verify: hulls come from a monotone chain, membership from an angle sum,
optima from vertex enumeration, and unboundedness from direction sampling.
"""
from __future__ import annotations

import math

import numpy as np


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list[tuple[float, float]]:
    """Strict convex hull in CCW order (Andrew's monotone chain)."""
    pts = sorted(set((float(p[0]), float(p[1])) for p in points))
    if len(pts) <= 2:
        return pts

    def build(seq):
        out: list[tuple[float, float]] = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = build(pts)
    upper = build(reversed(pts))
    return lower[:-1] + upper[:-1]


def winding_inside(vertices, p) -> bool:
    """Point-in-polygon by summed subtended angles (2*pi inside, 0 outside)."""
    total = 0.0
    n = len(vertices)
    for i in range(n):
        ax, ay = vertices[i][0] - p[0], vertices[i][1] - p[1]
        bx, by = vertices[(i + 1) % n][0] - p[0], vertices[(i + 1) % n][1] - p[1]
        total += math.atan2(ax * by - ay * bx, ax * bx + ay * by)
    return abs(total) > math.pi


def best_vertex_value(vertices, c) -> float:
    """LP optimum over a closed polygon = best vertex."""
    return max(c[0] * v[0] + c[1] * v[1] for v in vertices)


def sampled_unbounded(halfspaces, c, n: int = 3600) -> bool:
    """Unboundedness by brute force over n unit directions."""
    a = np.array([[h.a1, h.a2] for h in halfspaces])
    theta = np.arange(n) * (2.0 * np.pi / n)
    d = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    feasible = (a @ d.T <= 1e-9).all(axis=0)
    improving = d @ np.asarray(c, dtype=float) > 1e-9
    return bool((feasible & improving).any())


def random_convex_vertices(rng, n_min: int = 5, n_max: int = 12, box: float = 10.0):
    """Random strictly convex polygon with n_min..n_max vertices in [-box, box]^2."""
    while True:
        k = int(rng.integers(n_min, 2 * n_max))
        pts = rng.uniform(-box, box, size=(k, 2))
        hull = convex_hull(pts)
        if n_min <= len(hull) <= n_max:
            return hull


def random_unit_objective(rng) -> tuple[float, float]:
    theta = float(rng.uniform(0.0, 2.0 * math.pi))
    return (math.cos(theta), math.sin(theta))


def _total_turning(chain) -> float:
    total = 0.0
    for i in range(len(chain) - 2):
        e1 = (chain[i + 1][0] - chain[i][0], chain[i + 1][1] - chain[i][1])
        e2 = (chain[i + 2][0] - chain[i + 1][0], chain[i + 2][1] - chain[i + 1][1])
        total += abs(math.atan2(e1[0] * e2[1] - e1[1] * e2[0], e1[0] * e2[0] + e1[1] * e2[1]))
    return total


def random_open_chain(rng, n_min: int = 2, n_max: int = 5, box: float = 10.0):
    """Random convex open polyline (hull arc, CCW) with an unbounded region.

    Chains turning by pi or more would close the region, so those are
    rerolled; the resulting halfspace intersections all have nontrivial
    recession cones.
    """
    while True:
        hull = random_convex_vertices(rng, n_min=max(n_min, 3) + 1, n_max=12, box=box)
        n = int(rng.integers(n_min, min(n_max, len(hull) - 1) + 1))
        start = int(rng.integers(0, len(hull)))
        chain = [hull[(start + i) % len(hull)] for i in range(n)]
        if _total_turning(chain) < math.pi - 0.05:
            return chain
