"""Gauss-Newton-Kurchatov solvers for least squares with a nonsmooth residual part."""

from .divdiff import DDPolicy, divided_difference, kurchatov_points
from .errors import (
    BracketNonpositive,
    DimensionMismatch,
    GNKError,
    InsufficientData,
    NonFiniteEvaluation,
    NonTwoDimensional,
    RankDeficient,
    SingularAtSolution,
    UnknownProblem,
)
from .linalg import lstsq_step, norm2
from .problems import Problem, example1, example2, get_problem, synthetic_linear
from .solver import (
    IterationTrace,
    Method,
    SolveConfig,
    Status,
    assemble_operator,
    empirical_order,
    refine_solution,
    solve,
)
from .theory import LipschitzConstants, RadiusReport, compare_radii, r_star, radius_report

__all__ = [
    "BracketNonpositive",
    "DDPolicy",
    "DimensionMismatch",
    "GNKError",
    "InsufficientData",
    "IterationTrace",
    "LipschitzConstants",
    "Method",
    "NonFiniteEvaluation",
    "NonTwoDimensional",
    "Problem",
    "RadiusReport",
    "RankDeficient",
    "SingularAtSolution",
    "SolveConfig",
    "Status",
    "UnknownProblem",
    "assemble_operator",
    "compare_radii",
    "divided_difference",
    "empirical_order",
    "example1",
    "example2",
    "get_problem",
    "kurchatov_points",
    "lstsq_step",
    "norm2",
    "r_star",
    "radius_report",
    "refine_solution",
    "solve",
    "synthetic_linear",
]
