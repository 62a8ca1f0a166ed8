"""Headless driver: problem I/O, V->H conversion, solves, rotation sweeps,
and a small benchmark harness.

Exit codes for ``solve``: 0 optimal, 2 unbounded, 3 infeasible,
4 max_iterations; other failures (bad input, invalid problems) exit 1 with a
message on stderr.  Standard output carries only JSON when ``--out -``.
"""
from __future__ import annotations

import argparse
import json
import math
import statistics
import sys
import time
from dataclasses import replace

import numpy as np

from . import geometry
from .central_path import solve_central_path
from .ipm import solve_ipm
from .model import (
    Point2,
    ProblemSpec,
    SolverSettings,
    problem_from_dict,
    problem_from_json,
    problem_to_json,
    trace_to_dict,
    trace_to_json,
    validate_problem,
)
from .pdhg import solve_pdhg
from .simplex import solve_simplex

EXIT_BY_STATUS = {"optimal": 0, "unbounded": 2, "infeasible": 3, "max_iterations": 4}

SOLVERS = {
    "simplex": solve_simplex,
    "ipm": solve_ipm,
    "pdhg": solve_pdhg,
    "central-path": solve_central_path,
}


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
        if not text.endswith("\n"):
            fh.write("\n")


def _settings_from_args(args) -> SolverSettings:
    kwargs = {}
    if args.tol is not None:
        kwargs["tolerance"] = args.tol
    if args.maxit is not None:
        kwargs["max_iterations"] = args.maxit
    if args.alpha_max is not None:
        kwargs["alpha_max"] = args.alpha_max
    if args.corrector_threshold is not None:
        kwargs["corrector_threshold"] = args.corrector_threshold
    if args.mode is not None:
        kwargs["pdhg_mode"] = args.mode
    if args.step is not None:
        kwargs["pdhg_step"] = args.step
    if args.halpern:
        kwargs["halpern"] = True
    if args.restart_factor is not None:
        kwargs["restart_factor"] = args.restart_factor
    if args.mu_count is not None:
        kwargs["mu_count"] = args.mu_count
    return SolverSettings(**kwargs)


def _load_valid_problem(path: str) -> ProblemSpec:
    spec = problem_from_json(_read(path))
    report = validate_problem(spec)
    if report:
        raise ValueError("invalid problem: " + "; ".join(report))
    return spec


def cmd_convert(args) -> int:
    data = json.loads(_read(args.input))
    if not data.get("vertices"):
        raise ValueError("input has no vertices to convert")
    spec = problem_from_dict(data)
    _write(args.out, problem_to_json(spec))
    return 0


def cmd_solve(args) -> int:
    spec = _load_valid_problem(args.input)
    settings = _settings_from_args(args)
    trace = SOLVERS[args.algorithm](spec, settings)
    _write(args.out, trace_to_json(trace))
    return EXIT_BY_STATUS[trace.status]


def _rotated(c: tuple[float, float], theta: float) -> tuple[float, float]:
    ct, st = math.cos(theta), math.sin(theta)
    return (ct * c[0] - st * c[1], st * c[0] + ct * c[1])


def cmd_rotate(args) -> int:
    spec = _load_valid_problem(args.input)
    settings = _settings_from_args(args)
    if args.steps < 1:
        raise ValueError("--steps must be at least 1")
    if args.quarter:
        # closed interval [0, pi/2]: steps increments, steps + 1 solves
        angles = [k * (math.pi / 2) / args.steps for k in range(args.steps + 1)]
    else:
        angles = [k * (2 * math.pi) / args.steps for k in range(args.steps)]
    traces = []
    solver = SOLVERS[args.algorithm]
    for theta in angles:
        rotated = replace(spec, objective=_rotated(spec.objective, theta))
        trace = solver(rotated, replace(settings, angle=theta))
        traces.append(trace_to_dict(trace))
    _write(args.out, json.dumps(traces, indent=2))
    return 0


def regular_polygon_problem(m: int, objective=None) -> ProblemSpec:
    """Regular m-gon on a radius-10 circle at (5,5), rotated 0.1 rad to keep
    edges off the axes."""
    if m < 3:
        raise ValueError("--m must be at least 3")
    if objective is None:
        objective = (math.cos(0.7), math.sin(0.7))
    builder = geometry.RegionBuilder()
    for i in range(m):
        theta = 0.1 + 2 * math.pi * i / m
        result = geometry.try_add_vertex(
            builder, Point2(5 + 10 * math.cos(theta), 5 + 10 * math.sin(theta))
        )
        assert result.accepted
    return geometry.close_region(builder, objective=objective)


def _bench_rows(spec: ProblemSpec, tol: float):
    base = SolverSettings(tolerance=tol)
    return [
        ("simplex", solve_simplex, base),
        ("ipm", solve_ipm, replace(base, alpha_max=0.99)),
        ("central_path", solve_central_path, base),
        ("pdhg-eq", solve_pdhg, replace(base, pdhg_mode="equality")),
        ("pdhg-ineq", solve_pdhg, replace(base, pdhg_mode="inequality")),
    ]


def _trace_iterations(trace) -> int:
    if trace.algorithm == "pdhg" and trace.iterates:
        return int(trace.iterates[-1].meta["k"])
    return max(len(trace.iterates) - 1, 0)


def run_bench(m: int, repeats: int, tol: float = 1e-6):
    """Median wall-clock per solver on the regular m-gon; returns report rows."""
    if repeats < 1:
        raise ValueError("--repeats must be at least 1")
    spec = regular_polygon_problem(m)
    rows = []
    for name, solver, settings in _bench_rows(spec, tol):
        times = []
        trace = None
        for _ in range(repeats):
            t0 = time.perf_counter()
            trace = solver(spec, settings)
            times.append(time.perf_counter() - t0)
        rows.append(
            {
                "solver": name,
                "median_ms": statistics.median(times) * 1e3,
                "status": trace.status,
                "iterations": _trace_iterations(trace),
                "objective": trace.objective_value,
            }
        )
    return rows


def cmd_bench(args) -> int:
    rows = run_bench(args.m, args.repeats)
    header = f"{'solver':<14}{'median_ms':>12}{'iterations':>12}{'status':>16}{'objective':>16}"
    print(header)
    print("-" * len(header))
    for r in rows:
        obj = "-" if r["objective"] is None else f"{r['objective']:.6f}"
        print(
            f"{r['solver']:<14}{r['median_ms']:>12.3f}{r['iterations']:>12}"
            f"{r['status']:>16}{obj:>16}"
        )
    return 0


def cmd_validate(args) -> int:
    spec = problem_from_json(_read(args.input))
    report = validate_problem(spec)
    if report:
        for line in report:
            print(line)
        return 1
    print("ok")
    return 0


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=None, help="convergence tolerance")
    p.add_argument("--maxit", type=int, default=None, help="iteration cap")
    p.add_argument("--alpha-max", dest="alpha_max", type=float, default=None,
                   help="IPM step scale in (0, 1]")
    p.add_argument("--corrector-threshold", dest="corrector_threshold", type=float,
                   default=None, help="IPM corrector-skip threshold in [0, 1]")
    p.add_argument("--mode", choices=["equality", "inequality"], default=None,
                   help="PDHG constraint handling")
    p.add_argument("--step", type=float, default=None, help="PDHG step override")
    p.add_argument("--halpern", action="store_true", help="PDHG restarted Halpern")
    p.add_argument("--restart-factor", dest="restart_factor", type=float, default=None,
                   help="Halpern restart factor in (0, 1)")
    p.add_argument("--mu-count", dest="mu_count", type=int, default=None,
                   help="central-path schedule length")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lp2d", description="Two-variable LP workbench: convert, solve, sweep, bench."
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("convert", help="fill in constraints from vertices")
    p.add_argument("--input", required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("solve", help="run one solver, write a trace")
    p.add_argument("--algorithm", required=True, choices=sorted(SOLVERS))
    p.add_argument("--input", required=True)
    p.add_argument("--out", default="-")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("rotate", help="sweep the objective angle, write a trace array")
    p.add_argument("--algorithm", required=True, choices=sorted(SOLVERS))
    p.add_argument("--input", required=True)
    p.add_argument("--out", default="-")
    p.add_argument("--steps", type=int, required=True, help="number of angle increments")
    p.add_argument("--quarter", action="store_true",
                   help="sweep [0, pi/2] closed instead of a full turn")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_rotate)

    p = sub.add_parser("bench", help="time all solvers on a regular m-gon")
    p.add_argument("--m", type=int, default=20)
    p.add_argument("--repeats", type=int, default=5)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("validate", help="report problem-invariant violations")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
