"""Exact shortest-vector solver for lattices whose Gram matrix is a
diagonal matrix minus a low-rank positive semidefinite perturbation."""

from .errors import (
    BudgetExceededError,
    DocumentError,
    InvalidArgumentError,
    LowRankSvpError,
    NotPositiveDefiniteError,
)
from .model import (
    DpkInstance,
    InstanceStats,
    candf_instance,
    gram,
    random_instance,
    validate,
)
from .oracle import OracleResult, brute_force
from .rates import RateResult, compute_rate
from .solver import SolveResult, SolverOptions, round_vec, solve

__all__ = [
    "BudgetExceededError",
    "DocumentError",
    "DpkInstance",
    "InstanceStats",
    "InvalidArgumentError",
    "LowRankSvpError",
    "NotPositiveDefiniteError",
    "OracleResult",
    "RateResult",
    "SolveResult",
    "SolverOptions",
    "brute_force",
    "candf_instance",
    "compute_rate",
    "gram",
    "random_instance",
    "round_vec",
    "solve",
    "validate",
]

__version__ = "0.1.0"
