"""Compute-and-forward rate computation.

Maps a channel vector and transmit power to the rank-1 lattice instance,
solves it exactly, and reports the achievable computation rate
R = max(0, 0.5 * log2(scale / f*)) in bits per channel use, where
scale = 1 + P * ||h||^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import DpkInstance, candf_instance, validate
from .solver import SolveResult, SolverOptions, solve


@dataclass(frozen=True)
class RateResult:
    a_star: np.ndarray
    f_star: float
    rate_bits: float
    scale: float
    solve_result: SolveResult
    instance: DpkInstance


def rate_from_objective(scale, f_star):
    """0.5 * log2^+ of scale / f_star; clamped at zero."""
    return max(0.0, 0.5 * math.log2(scale / f_star))


def compute_rate(h, power, opts: SolverOptions = SolverOptions()) -> RateResult:
    """Achievable computation rate for channel h at transmit power P.

    Maximizing the rate over nonzero integer vectors is exactly minimizing
    the quadratic form of the rank-1 instance, since the rate maximand
    equals scale / f(a).
    """
    inst = candf_instance(h, power)
    stats = validate(inst, opts.eig_rel_tol)
    result = solve(
        inst,
        SolverOptions(
            threads=opts.threads,
            general_strategy=opts.general_strategy,
            subset_cap=opts.subset_cap,
            eig_rel_tol=opts.eig_rel_tol,
            stats=stats,
        ),
    )
    h = np.atleast_1d(np.asarray(h, dtype=float))
    scale = 1.0 + power * float(h @ h)
    return RateResult(
        a_star=result.a_star,
        f_star=result.f_star,
        rate_bits=rate_from_objective(scale, result.f_star),
        scale=scale,
        solve_result=result,
        instance=inst,
    )
