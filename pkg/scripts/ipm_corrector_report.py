"""IPM corrector-threshold spread: iteration counts across objective angles.

With a high threshold the corrector rarely runs and convergence varies more
across objective directions; with a low threshold the counts pack together.
Report artifact only.

Usage: python scripts/ipm_corrector_report.py [angles] [m]
"""
import statistics
import sys

import numpy as np

from lp2d.cli import regular_polygon_problem
from lp2d.ipm import solve_ipm
from lp2d.model import SolverSettings

from dataclasses import replace


def main(angles: int = 48, m: int = 9) -> None:
    spec0 = regular_polygon_problem(m)
    counts = {"low (0.1)": [], "high (0.95)": []}
    for k in range(angles):
        theta = 2 * np.pi * k / angles
        spec = replace(spec0, objective=(float(np.cos(theta)), float(np.sin(theta))))
        for label, threshold in (("low (0.1)", 0.1), ("high (0.95)", 0.95)):
            trace = solve_ipm(
                spec, SolverSettings(alpha_max=0.99, corrector_threshold=threshold)
            )
            counts[label].append(len(trace.iterates) - 1)

    print(f"{'angle':>8} {'low (0.1)':>12} {'high (0.95)':>12}")
    for k in range(angles):
        theta = 2 * np.pi * k / angles
        print(f"{theta:>8.3f} {counts['low (0.1)'][k]:>12} {counts['high (0.95)'][k]:>12}")
    for label, vals in counts.items():
        print(
            f"\n{label}: median={statistics.median(vals):.0f} "
            f"min={min(vals)} max={max(vals)} spread={max(vals) - min(vals)}"
        )


if __name__ == "__main__":
    main(
        int(sys.argv[1]) if len(sys.argv) > 1 else 48,
        int(sys.argv[2]) if len(sys.argv) > 2 else 9,
    )
