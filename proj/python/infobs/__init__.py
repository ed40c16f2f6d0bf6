"""Obstacle problems for the infinity Laplacian, solved through the
tug-of-war dynamic programming principle."""

from ._infobs import (
    BUILTINS,
    CompatibilityError,
    ContractError,
    ConvergenceError,
    Error,
    Field,
    Grid,
    GridError,
    Problem,
    ProblemError,
    SweepError,
    bellman,
    build_grid,
    builtin,
    compare,
    contact_set,
    estimate_value,
    lewy_stampacchia,
    lipschitz_d_eps,
    make_problem,
    oracle_1d,
    residual,
    solve,
    sweep,
)

__all__ = [
    "BUILTINS",
    "CompatibilityError",
    "ContractError",
    "ConvergenceError",
    "Error",
    "Field",
    "Grid",
    "GridError",
    "Problem",
    "ProblemError",
    "SweepError",
    "bellman",
    "build_grid",
    "builtin",
    "compare",
    "contact_set",
    "estimate_value",
    "lewy_stampacchia",
    "lipschitz_d_eps",
    "make_problem",
    "oracle_1d",
    "residual",
    "solve",
    "sweep",
]
