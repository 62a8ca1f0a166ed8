"""Problem and trace data model shared by geometry, the solvers, and the CLI.

The canonical problem is a maximization over two decision variables,

    max  c1*x1 + c2*x2   s.t.   a_j . x <= b_j  for each constraint j,

with the feasible region described either by its vertices (V-representation)
or by the constraint halfspaces (H-representation).  Minimization is expressed
by negating the objective at the boundary.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields, asdict
from typing import NamedTuple

import numpy as np

ALGORITHMS = ("simplex", "ipm", "pdhg", "central_path")
STATUSES = ("optimal", "unbounded", "infeasible", "max_iterations")

#: tolerance for vertex/halfspace consistency checks
VERTEX_TOL = 1e-9


class Point2(NamedTuple):
    """A point in the decision space (tuple-backed: solvers mint millions)."""

    x1: float
    x2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2])

    def is_finite(self) -> bool:
        return math.isfinite(self.x1) and math.isfinite(self.x2)


@dataclass(frozen=True)
class Halfspace:
    """One constraint a . x <= b.

    The normal is rescaled to unit length on construction (so tolerances mean
    the same thing at every scale); a zero normal is kept as-is and reported
    by validate_problem.
    """

    a1: float
    a2: float
    b: float

    def __post_init__(self):
        norm = math.hypot(self.a1, self.a2)
        if norm > 0.0 and abs(norm - 1.0) > 1e-12:
            object.__setattr__(self, "a1", self.a1 / norm + 0.0)
            object.__setattr__(self, "a2", self.a2 / norm + 0.0)
            object.__setattr__(self, "b", self.b / norm + 0.0)
        else:
            # + 0.0 canonicalizes -0.0 so equal halfspaces serialize equally
            object.__setattr__(self, "a1", float(self.a1) + 0.0)
            object.__setattr__(self, "a2", float(self.a2) + 0.0)
            object.__setattr__(self, "b", float(self.b) + 0.0)

    def value(self, p: Point2) -> float:
        """Signed violation a . p - b (<= 0 inside)."""
        return self.a1 * p.x1 + self.a2 * p.x2 - self.b


@dataclass(frozen=True)
class ProblemSpec:
    """Objective plus feasible region in V-rep and/or H-rep."""

    objective: tuple[float, float]
    vertices: tuple[Point2, ...] = ()
    closed: bool = True
    halfspaces: tuple[Halfspace, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "objective", (float(self.objective[0]), float(self.objective[1])))
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "halfspaces", tuple(self.halfspaces))

    @property
    def m(self) -> int:
        return len(self.halfspaces)


@dataclass(frozen=True)
class SolverSettings:
    """Per-algorithm tunables; None means "use the solver's own default"."""

    tolerance: float = 1e-8
    max_iterations: int | None = None
    alpha_max: float = 0.1
    corrector_threshold: float = 0.8
    pdhg_mode: str = "inequality"
    pdhg_step: float | None = None
    halpern: bool = False
    restart_factor: float = 0.5
    mu_count: int = 30
    angle: float | None = None  # set by objective-rotation sweeps

    def __post_init__(self):
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations is not None and self.max_iterations < 0:
            raise ValueError("max_iterations must be nonnegative")
        if not 0.0 < self.alpha_max <= 1.0:
            raise ValueError("alpha_max must be in (0, 1]")
        if not 0.0 <= self.corrector_threshold <= 1.0:
            raise ValueError("corrector_threshold must be in [0, 1]")
        if self.pdhg_mode not in ("equality", "inequality"):
            raise ValueError(f"unknown pdhg_mode {self.pdhg_mode!r}")
        if self.pdhg_step is not None and not self.pdhg_step > 0.0:
            raise ValueError("pdhg_step must be positive")
        if not 0.0 < self.restart_factor < 1.0:
            raise ValueError("restart_factor must be in (0, 1)")
        if self.mu_count < 2:
            raise ValueError("mu_count must be at least 2")


class Iterate(NamedTuple):
    """One solver iterate mapped back to the original decision space.

    ``z`` is the solver-specific height (mu for IPM and central path, eps_k
    for PDHG, 0 for simplex); ``basis`` is a sorted tuple of constraint
    indices in [0, m).  An empty ``meta`` canonicalizes to None.
    """

    point: Point2
    z: float = 0.0
    phase: str = ""
    basis: tuple[int, ...] | None = None
    meta: dict | None = None


@dataclass(frozen=True)
class SolverTrace:
    algorithm: str
    settings: SolverSettings
    status: str
    iterates: tuple[Iterate, ...]
    objective_value: float | None = None
    ray: tuple[float, float] | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        object.__setattr__(self, "iterates", tuple(self.iterates))
        if self.ray is not None:
            object.__setattr__(self, "ray", (float(self.ray[0]), float(self.ray[1])))


def constraint_arrays(spec: ProblemSpec) -> tuple[np.ndarray, np.ndarray]:
    """The H-rep as numpy arrays: (m x 2 normal matrix, length-m rhs)."""
    a = np.array([[h.a1, h.a2] for h in spec.halfspaces], dtype=np.float64).reshape(-1, 2)
    b = np.array([h.b for h in spec.halfspaces], dtype=np.float64)
    return a, b


def objective_array(spec: ProblemSpec) -> np.ndarray:
    return np.array(spec.objective, dtype=np.float64)


def objective_angle(spec: ProblemSpec) -> float:
    """Angle of the objective vector in (-pi, pi]."""
    c1, c2 = spec.objective
    if c1 == 0.0 and c2 == 0.0:
        raise ValueError("degenerate objective")
    return math.atan2(c2, c1)


def _convexity_report(vertices: tuple[Point2, ...]) -> list[str]:
    n = len(vertices)
    report: list[str] = []
    sign = 0
    for i in range(n):
        o, p, q = vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]
        e1 = (p.x1 - o.x1, p.x2 - o.x2)
        e2 = (q.x1 - p.x1, q.x2 - p.x2)
        cross = e1[0] * e2[1] - e1[1] * e2[0]
        lim = 1e-9 * math.hypot(*e1) * math.hypot(*e2)
        if abs(cross) <= lim:
            report.append(f"collinear vertices at index {(i + 1) % n}")
            continue
        s = 1 if cross > 0 else -1
        if sign == 0:
            sign = s
        elif s != sign:
            report.append(f"nonconvex turn at vertex {(i + 1) % n}")
    return report


def validate_problem(spec: ProblemSpec) -> list[str]:
    """Return the list of violated invariants (empty means valid)."""
    report: list[str] = []
    if not (math.isfinite(spec.objective[0]) and math.isfinite(spec.objective[1])):
        report.append("objective is not finite")
    for i, v in enumerate(spec.vertices):
        if not v.is_finite():
            report.append(f"vertex {i} is not finite")
    for j, h in enumerate(spec.halfspaces):
        if not all(map(math.isfinite, (h.a1, h.a2, h.b))):
            report.append(f"halfspace {j} is not finite")
            continue
        norm = math.hypot(h.a1, h.a2)
        if norm == 0.0:
            report.append(f"halfspace {j} has a zero normal")
        elif abs(norm - 1.0) > 1e-9:
            report.append(f"halfspace {j} normal is not unit length")
    if report:
        return report  # geometric checks need finite, nonzero data

    n_v = len(spec.vertices)
    if n_v:
        expected = n_v if spec.closed else n_v - 1
        if spec.m != expected:
            report.append(
                f"constraint count mismatch: {spec.m} halfspaces for {n_v} "
                f"{'closed' if spec.closed else 'open'} vertices"
            )
        if spec.closed and n_v >= 3:
            report.extend(_convexity_report(spec.vertices))
        for i, v in enumerate(spec.vertices):
            tight = 0
            for j, h in enumerate(spec.halfspaces):
                val = h.value(v)
                if val > VERTEX_TOL:
                    report.append(f"vertex {i} infeasible against halfspace {j}")
                if abs(val) <= VERTEX_TOL:
                    tight += 1
            if spec.closed and spec.m and tight != 2:
                report.append(f"vertex {i} tight on {tight} halfspaces, expected 2")
    elif spec.m == 0:
        report.append("empty problem: no vertices and no halfspaces")
    return report


# ---------------------------------------------------------------------------
# JSON wire formats (version 1).  Floats go through json's repr-based encoder,
# which is lossless for doubles, so serialize -> parse round-trips exactly.
# ---------------------------------------------------------------------------

PROBLEM_VERSION = 1
TRACE_VERSION = 1


def problem_to_dict(spec: ProblemSpec) -> dict:
    out: dict = {"version": PROBLEM_VERSION, "objective": list(spec.objective)}
    if spec.vertices:
        out["vertices"] = [[v.x1, v.x2] for v in spec.vertices]
    out["closed"] = spec.closed
    if spec.halfspaces:
        out["constraints"] = [{"a": [h.a1, h.a2], "b": h.b} for h in spec.halfspaces]
    return out


def problem_to_json(spec: ProblemSpec) -> str:
    return json.dumps(problem_to_dict(spec), indent=2)


def problem_from_dict(data: dict) -> ProblemSpec:
    from . import geometry  # deferred: geometry imports model types

    if data.get("version") != PROBLEM_VERSION:
        raise ValueError(f"unsupported problem version {data.get('version')!r}")
    obj = data["objective"]
    if len(obj) != 2:
        raise ValueError("objective must have two components")
    objective = (float(obj[0]), float(obj[1]))
    closed = bool(data.get("closed", True))
    raw_vertices = data.get("vertices") or []
    raw_constraints = data.get("constraints") or []
    if not raw_vertices and not raw_constraints:
        raise ValueError("problem requires vertices or constraints")

    given = tuple(
        Halfspace(float(c["a"][0]), float(c["a"][1]), float(c["b"])) for c in raw_constraints
    )
    if not raw_vertices:
        return ProblemSpec(objective, (), closed, given)

    vertices = tuple(Point2(float(p[0]), float(p[1])) for p in raw_vertices)
    hint = data.get("interior_hint")
    if not closed and len(vertices) == 2 and hint is None and not given:
        raise ValueError("interior hint required")
    vertices = geometry.ensure_ccw(vertices, closed)
    if not closed and len(vertices) == 2 and hint is None and given:
        # side information comes from the supplied constraint, which must at
        # least run through both vertices
        if len(given) != 1 or any(abs(given[0].value(v)) > VERTEX_TOL for v in vertices):
            raise ValueError("constraints do not match vertices")
        derived = tuple(given)
    else:
        hint_point = Point2(float(hint[0]), float(hint[1])) if hint is not None else None
        derived = tuple(geometry.halfspaces_of(vertices, closed, interior_hint=hint_point))
    if given and not _same_halfspaces(given, derived):
        raise ValueError("constraints do not match vertices")
    return ProblemSpec(objective, vertices, closed, derived)


def _same_halfspaces(given: tuple[Halfspace, ...], derived: tuple[Halfspace, ...]) -> bool:
    """Order-insensitive match of two halfspace lists within VERTEX_TOL."""
    if len(given) != len(derived):
        return False
    unused = list(derived)
    for g in given:
        for k, d in enumerate(unused):
            if (
                abs(g.a1 - d.a1) <= VERTEX_TOL
                and abs(g.a2 - d.a2) <= VERTEX_TOL
                and abs(g.b - d.b) <= VERTEX_TOL
            ):
                del unused[k]
                break
        else:
            return False
    return True


def problem_from_json(text: str) -> ProblemSpec:
    return problem_from_dict(json.loads(text))


def settings_to_dict(settings: SolverSettings) -> dict:
    return asdict(settings)


def settings_from_dict(data: dict) -> SolverSettings:
    known = {f.name for f in fields(SolverSettings)}
    return SolverSettings(**{k: v for k, v in data.items() if k in known})


def trace_to_dict(trace: SolverTrace) -> dict:
    return {
        "version": TRACE_VERSION,
        "algorithm": trace.algorithm,
        "settings": settings_to_dict(trace.settings),
        "status": trace.status,
        "objective_value": trace.objective_value,
        "iterates": [
            {
                "x": [it.point.x1, it.point.x2],
                "z": it.z,
                "phase": it.phase,
                "basis": list(it.basis) if it.basis is not None else None,
                "meta": it.meta if it.meta else {},
            }
            for it in trace.iterates
        ],
        "ray": list(trace.ray) if trace.ray is not None else None,
    }


def trace_to_json(trace: SolverTrace) -> str:
    return json.dumps(trace_to_dict(trace), indent=2)


def trace_from_dict(data: dict) -> SolverTrace:
    if data.get("version") != TRACE_VERSION:
        raise ValueError(f"unsupported trace version {data.get('version')!r}")
    iterates = tuple(
        Iterate(
            point=Point2(float(d["x"][0]), float(d["x"][1])),
            z=float(d.get("z", 0.0)),
            phase=d.get("phase", ""),
            basis=tuple(d["basis"]) if d.get("basis") is not None else None,
            meta=d.get("meta") or None,
        )
        for d in data.get("iterates", [])
    )
    ray = data.get("ray")
    return SolverTrace(
        algorithm=data["algorithm"],
        settings=settings_from_dict(data.get("settings", {})),
        status=data["status"],
        iterates=iterates,
        objective_value=data.get("objective_value"),
        ray=(float(ray[0]), float(ray[1])) if ray is not None else None,
    )


def trace_from_json(text: str) -> SolverTrace:
    return trace_from_dict(json.loads(text))
