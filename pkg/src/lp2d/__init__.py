"""Two-variable LP workbench: build a feasible region vertex-by-vertex,
pick an objective, and trace the iterate paths of four solver families
(revised simplex, predictor-corrector interior point, PDHG, central path)."""

from .central_path import mu_schedule, newton_solve, solve_central_path, strictly_feasible_start
from .geometry import (
    AddResult,
    ObjectiveStatus,
    RecessionCone,
    RegionBuilder,
    close_region,
    contains,
    halfspaces_of,
    objective_status,
    open_region,
    recession_cone,
    try_add_vertex,
)
from .ipm import solve_ipm
from .model import (
    Halfspace,
    Iterate,
    Point2,
    ProblemSpec,
    SolverSettings,
    SolverTrace,
    objective_angle,
    problem_from_json,
    problem_to_json,
    trace_from_json,
    trace_to_json,
    validate_problem,
)
from .pdhg import infer_basis, solve_pdhg
from .simplex import solve_simplex

__version__ = "0.1.0"

SOLVE_BY_ALGORITHM = {
    "simplex": solve_simplex,
    "ipm": solve_ipm,
    "pdhg": solve_pdhg,
    "central_path": solve_central_path,
}
