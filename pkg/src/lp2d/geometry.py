"""Incremental convex-vertex input and V-rep <-> H-rep plumbing.

Vertex sequences are normalized to counter-clockwise orientation, so the
region interior is always to the left of each directed edge.  Consecutive
collinear vertices are rejected rather than merged (cross-product magnitude
up to 1e-9 times the edge-length product counts as collinear).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import Halfspace, Point2, ProblemSpec

COLLINEAR_RTOL = 1e-9
DUPLICATE_TOL = 1e-12
RAY_TOL = 1e-9
#: minimum distance from a vertex to any non-incident edge line; keeps every
#: accepted polygon clear of the 1e-9 tightness tolerance used downstream
CLEARANCE_TOL = 1e-8


@dataclass
class RegionBuilder:
    """Mutable vertex accumulator driven by try_add_vertex."""

    vertices: list[Point2] = field(default_factory=list)
    state: str = "drawing"  # drawing | closed | open


@dataclass(frozen=True)
class AddResult:
    accepted: bool
    reason: str | None = None  # nonconvex | duplicate | collinear


@dataclass(frozen=True)
class RecessionCone:
    """Extreme unit directions of the set {d : A d <= 0} (0, 1 or 2 rays)."""

    rays: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class ObjectiveStatus:
    bounded: bool
    ray: tuple[float, float] | None = None  # witness direction when unbounded


def _cross(e1: tuple[float, float], e2: tuple[float, float]) -> float:
    return e1[0] * e2[1] - e1[1] * e2[0]


def _edge(p: Point2, q: Point2) -> tuple[float, float]:
    return (q.x1 - p.x1, q.x2 - p.x2)


def _cycle_turn_signs(points: list[Point2]) -> list[int]:
    """Orientation sign of every consecutive turn of the closed cycle.

    0 marks a collinear (or degenerate) turn.
    """
    n = len(points)
    signs = []
    for i in range(n):
        e1 = _edge(points[i], points[(i + 1) % n])
        e2 = _edge(points[(i + 1) % n], points[(i + 2) % n])
        cross = _cross(e1, e2)
        lim = COLLINEAR_RTOL * math.hypot(*e1) * math.hypot(*e2)
        signs.append(0 if abs(cross) <= lim else (1 if cross > 0 else -1))
    return signs


def _min_edge_clearance(points: list[Point2]) -> float:
    """Smallest distance from a vertex to a non-incident edge line of the cycle."""
    n = len(points)
    best = math.inf
    for i in range(n):
        p, q = points[i], points[(i + 1) % n]
        e = _edge(p, q)
        length = math.hypot(*e)
        if length <= DUPLICATE_TOL:
            return 0.0
        for k in range(n):
            if k == i or k == (i + 1) % n:
                continue
            w = points[k]
            best = min(best, abs(_cross(e, _edge(p, w))) / length)
    return best


def try_add_vertex(builder: RegionBuilder, candidate: Point2) -> AddResult:
    """Append candidate if the sequence stays in convex position.

    The sequence together with its implicit closing edge must remain a
    strictly convex cycle with every vertex clear of the other edges'
    boundary lines, which guarantees close_region always yields a valid
    strictly convex polygon.
    """
    if builder.state != "drawing":
        raise ValueError("builder is not in drawing state")
    if not candidate.is_finite():
        raise ValueError("vertex coordinates must be finite")
    for v in builder.vertices:
        if max(abs(v.x1 - candidate.x1), abs(v.x2 - candidate.x2)) <= DUPLICATE_TOL:
            return AddResult(False, "duplicate")
    if len(builder.vertices) >= 2:
        cycle = builder.vertices + [candidate]
        signs = _cycle_turn_signs(cycle)
        if 0 in signs:
            return AddResult(False, "collinear")
        if len(set(signs)) > 1:
            return AddResult(False, "nonconvex")
        if _min_edge_clearance(cycle) <= CLEARANCE_TOL:
            return AddResult(False, "collinear")
    builder.vertices.append(candidate)
    return AddResult(True)


def ensure_ccw(vertices: tuple[Point2, ...], closed: bool) -> tuple[Point2, ...]:
    """Reverse the vertex order if it runs clockwise."""
    vertices = tuple(vertices)
    if len(vertices) < 3:
        return vertices
    if closed:
        area2 = sum(
            vertices[i].x1 * vertices[(i + 1) % len(vertices)].x2
            - vertices[(i + 1) % len(vertices)].x1 * vertices[i].x2
            for i in range(len(vertices))
        )
        return vertices if area2 >= 0 else vertices[::-1]
    for i in range(len(vertices) - 2):
        cross = _cross(_edge(vertices[i], vertices[i + 1]), _edge(vertices[i + 1], vertices[i + 2]))
        if cross > 0:
            return vertices
        if cross < 0:
            return vertices[::-1]
    return vertices


def halfspaces_of(
    vertices,
    closed: bool,
    interior_hint: Point2 | None = None,
) -> list[Halfspace]:
    """Unit-normal halfspaces whose boundaries run through consecutive vertices.

    The interior is to the left of the (CCW-normalized) directed edges.  For a
    two-vertex open polyline the side is fixed by ``interior_hint``; when no
    hint is given the point one unit to the left of the edge midpoint is used.
    """
    pts = list(ensure_ccw(tuple(vertices), closed))
    n = len(pts)
    if closed and n < 3:
        raise ValueError("degenerate region: closed region needs at least 3 vertices")
    if not closed and n < 2:
        raise ValueError("degenerate region: open region needs at least 2 vertices")

    if n >= 3:
        signs = _cycle_turn_signs(pts) if closed else _chain_turn_signs(pts)
        if closed and all(s == 0 for s in signs):
            raise ValueError("degenerate region: zero area")
        if 0 in signs:
            raise ValueError("collinear vertex sequence")
        if any(s < 0 for s in signs):
            raise ValueError("nonconvex vertex sequence")

    pairs = [(pts[i], pts[(i + 1) % n]) for i in range(n if closed else n - 1)]
    flip = False
    if not closed and n == 2:
        p, q = pairs[0]
        e = _edge(p, q)
        length = math.hypot(*e)
        if interior_hint is None:
            interior_hint = Point2(
                (p.x1 + q.x1) / 2 - e[1] / length, (p.x2 + q.x2) / 2 + e[0] / length
            )
        side = _cross(e, _edge(p, interior_hint))
        if abs(side) <= COLLINEAR_RTOL * length * length:
            raise ValueError("interior hint lies on the boundary")
        flip = side < 0

    out = []
    for p, q in pairs:
        e = _edge(p, q)
        length = math.hypot(*e)
        if length <= DUPLICATE_TOL:
            raise ValueError("duplicate consecutive vertices")
        a1, a2 = e[1] / length, -e[0] / length  # outward normal for CCW edges
        if flip:
            a1, a2 = -a1, -a2
        out.append(Halfspace(a1, a2, a1 * p.x1 + a2 * p.x2))
    return out


def _chain_turn_signs(points: list[Point2]) -> list[int]:
    signs = []
    for i in range(len(points) - 2):
        e1 = _edge(points[i], points[i + 1])
        e2 = _edge(points[i + 1], points[i + 2])
        cross = _cross(e1, e2)
        lim = COLLINEAR_RTOL * math.hypot(*e1) * math.hypot(*e2)
        signs.append(0 if abs(cross) <= lim else (1 if cross > 0 else -1))
    return signs


def close_region(builder: RegionBuilder, objective=(0.0, 0.0)) -> ProblemSpec:
    """Finish drawing as a bounded polygon; emits one halfspace per edge."""
    if builder.state != "drawing":
        raise ValueError("builder is not in drawing state")
    if len(builder.vertices) < 3:
        raise ValueError("degenerate region: closed region needs at least 3 vertices")
    vertices = ensure_ccw(tuple(builder.vertices), True)
    halfspaces = halfspaces_of(vertices, True)
    builder.vertices = list(vertices)
    builder.state = "closed"
    return ProblemSpec(tuple(objective), vertices, True, tuple(halfspaces))


def open_region(
    builder: RegionBuilder,
    interior_hint: Point2 | None = None,
    objective=(0.0, 0.0),
) -> ProblemSpec:
    """Finish drawing as an unbounded region; the end edges extend to infinity."""
    if builder.state != "drawing":
        raise ValueError("builder is not in drawing state")
    if len(builder.vertices) < 2:
        raise ValueError("degenerate region: open region needs at least 2 vertices")
    vertices = ensure_ccw(tuple(builder.vertices), False)
    halfspaces = halfspaces_of(vertices, False, interior_hint=interior_hint)
    builder.vertices = list(vertices)
    builder.state = "open"
    return ProblemSpec(tuple(objective), vertices, False, tuple(halfspaces))


def contains(halfspaces, p: Point2, tol: float = 1e-9) -> bool:
    """True iff a . p - b <= tol for every halfspace."""
    return all(h.value(p) <= tol for h in halfspaces)


def recession_cone(halfspaces) -> RecessionCone:
    """Extreme rays of {d : A d <= 0}.

    Candidate directions are the edge tangents of each constraint; feasible
    candidates necessarily lie on the (at most two) boundary rays of the cone.
    """
    if not halfspaces:
        raise ValueError("recession cone needs at least one halfspace")
    a = np.array([[h.a1, h.a2] for h in halfspaces])
    rays: list[tuple[float, float]] = []
    for a1, a2 in a:
        for d in ((-a2, a1), (a2, -a1)):
            if np.max(a @ d) <= RAY_TOL:
                if not any(d[0] * r[0] + d[1] * r[1] > 1.0 - 1e-9 for r in rays):
                    rays.append((float(d[0]) + 0.0, float(d[1]) + 0.0))
    rays.sort(key=lambda r: math.atan2(r[1], r[0]))
    return RecessionCone(tuple(rays))


def objective_status(halfspaces, c) -> ObjectiveStatus:
    """Bounded/unbounded classification of sup c . x over the region.

    Unbounded iff some recession direction improves the objective: one of the
    extreme rays does, or the objective direction itself recedes (which covers
    improving directions strictly between the extreme rays).
    """
    c1, c2 = float(c[0]), float(c[1])
    norm = math.hypot(c1, c2)
    if norm == 0.0:
        raise ValueError("degenerate objective")
    cone = recession_cone(halfspaces)
    for r in cone.rays:
        if c1 * r[0] + c2 * r[1] > RAY_TOL:
            return ObjectiveStatus(False, r)
    if cone.rays:
        chat = (c1 / norm, c2 / norm)
        a = np.array([[h.a1, h.a2] for h in halfspaces])
        if np.max(a @ chat) <= RAY_TOL:
            return ObjectiveStatus(False, chat)
    return ObjectiveStatus(True)
