"""Compare plain PDHG against restarted-Halpern PDHG on random polygons.

Emits a table of iteration counts per problem and mode; there is no a-priori
winner on tiny problems, so this is a report, not an assertion.

Usage: python scripts/pdhg_halpern_report.py [count] [tolerance]
"""
import statistics
import sys

import numpy as np

from lp2d.geometry import RegionBuilder, close_region, try_add_vertex
from lp2d.model import Point2, SolverSettings
from lp2d.pdhg import solve_pdhg


def random_polygon(rng, objective):
    """Spec recipe: angle-sort random points around their centroid; the
    builder keeps the hull members by rejecting non-convex additions."""
    while True:
        pts = rng.uniform(-10, 10, size=(int(rng.integers(6, 14)), 2))
        centroid = pts.mean(axis=0)
        order = np.argsort(np.arctan2(pts[:, 1] - centroid[1], pts[:, 0] - centroid[0]))
        builder = RegionBuilder()
        for i in order:
            try_add_vertex(builder, Point2(*pts[i]))
        if len(builder.vertices) >= 5:
            return close_region(builder, objective=objective)


def iterations(trace) -> int:
    return int(trace.iterates[-1].meta["k"]) if trace.iterates else 0


def main(count: int = 50, tol: float = 1e-6) -> None:
    rng = np.random.default_rng(2024)
    rows = []
    for i in range(count):
        theta = rng.uniform(0, 2 * np.pi)
        spec = random_polygon(rng, (np.cos(theta), np.sin(theta)))
        for mode in ("inequality", "equality"):
            plain = solve_pdhg(
                spec, SolverSettings(tolerance=tol, max_iterations=200_000, pdhg_mode=mode)
            )
            halpern = solve_pdhg(
                spec,
                SolverSettings(
                    tolerance=tol, max_iterations=200_000, pdhg_mode=mode, halpern=True
                ),
            )
            rows.append((i, mode, iterations(plain), plain.status,
                         iterations(halpern), halpern.status))

    print(f"{'problem':>8} {'mode':<12} {'plain':>9} {'status':>9} {'halpern':>9} {'status':>9}")
    for i, mode, it_p, st_p, it_h, st_h in rows:
        print(f"{i:>8} {mode:<12} {it_p:>9} {st_p:>9} {it_h:>9} {st_h:>9}")
    for mode in ("inequality", "equality"):
        plain = [r[2] for r in rows if r[1] == mode]
        halp = [r[4] for r in rows if r[1] == mode]
        wins = sum(1 for p, h in zip(plain, halp) if h < p)
        print(
            f"\n{mode}: median plain={statistics.median(plain):.0f} "
            f"median halpern={statistics.median(halp):.0f} "
            f"halpern faster on {wins}/{len(plain)}"
        )


if __name__ == "__main__":
    main(
        int(sys.argv[1]) if len(sys.argv) > 1 else 50,
        float(sys.argv[2]) if len(sys.argv) > 2 else 1e-6,
    )
