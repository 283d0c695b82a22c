"""Problem representation: diagonal-minus-low-rank instances and their
derived quantities.

An instance holds the diagonal d and the n-by-k factor V of the Gram matrix
G = diag(d) - V V^T.  Validation certifies positive definiteness and
computes the search-radius statistics the solver needs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, NotPositiveDefiniteError
from .linalg import smallest_eigenvalue_lower_bound

DEFAULT_EIG_REL_TOL = 1e-9
# Relative guard added to psi before taking the ceiling, so the search
# region never shrinks by one when psi lands a hair below an integer.
_PSI_CEIL_GUARD = 1e-12


@dataclass(frozen=True)
class DpkInstance:
    """Immutable problem input: G = diag(d) - V V^T."""

    d: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        d = np.atleast_1d(np.asarray(self.d, dtype=float))
        V = np.asarray(self.V, dtype=float)
        if V.ndim == 1:
            V = V[:, None]
        if d.ndim != 1 or d.size < 1:
            raise InvalidArgumentError("d must be a nonempty vector")
        if V.ndim != 2 or V.shape[0] != d.size:
            raise InvalidArgumentError(
                f"V must be n-by-k with n={d.size}, got shape {V.shape}"
            )
        if not 1 <= V.shape[1] <= d.size:
            raise InvalidArgumentError("k must satisfy 1 <= k <= n")
        if not np.all(np.isfinite(d)) or not np.all(np.isfinite(V)):
            raise InvalidArgumentError("entries must be finite")
        if not np.all(d > 0.0):
            raise InvalidArgumentError("all diagonal entries must be positive")
        d.setflags(write=False)
        V.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "V", V)

    @property
    def n(self):
        return self.d.size

    @property
    def k(self):
        return self.V.shape[1]


@dataclass(frozen=True)
class InstanceStats:
    """Derived quantities driving the candidate search region."""

    G_min: float
    lambda_lb: float
    psi: float
    psi_ceil: int


def gram(inst: DpkInstance) -> np.ndarray:
    """The full Gram matrix diag(d) - V V^T, exactly symmetric."""
    G = np.diag(inst.d) - inst.V @ inst.V.T
    # V @ V.T is symmetric up to rounding; mirror the upper triangle.
    iu = np.triu_indices(inst.n, 1)
    G[(iu[1], iu[0])] = G[iu]
    return G


def validate(inst: DpkInstance, rel_tol: float = DEFAULT_EIG_REL_TOL) -> InstanceStats:
    """Certify positive definiteness and compute the search statistics.

    Raises NotPositiveDefiniteError when the Gram matrix cannot be
    certified positive definite.
    """
    G = gram(inst)
    lambda_lb = smallest_eigenvalue_lower_bound(G, rel_tol)
    G_min = float(np.min(inst.d - np.sum(inst.V * inst.V, axis=1)))
    if not G_min > 0.0:
        raise NotPositiveDefiniteError(
            "smallest diagonal element of G is not positive"
        )
    psi = math.sqrt(G_min / lambda_lb)
    psi_ceil = math.ceil(psi + _PSI_CEIL_GUARD * psi)
    return InstanceStats(G_min=G_min, lambda_lb=lambda_lb, psi=psi, psi_ceil=psi_ceil)


def candf_instance(h, power) -> DpkInstance:
    """Rank-1 instance for a compute-and-forward channel h at transmit
    power P: G = (1 + P * ||h||^2) I - P h h^T."""
    h = np.atleast_1d(np.asarray(h, dtype=float))
    if h.ndim != 1 or h.size < 1 or not np.all(np.isfinite(h)):
        raise InvalidArgumentError("h must be a finite vector")
    if not np.any(h != 0.0):
        raise InvalidArgumentError("h must be nonzero")
    if not power > 0.0 or not math.isfinite(power):
        raise InvalidArgumentError("power must be positive and finite")
    if np.any(np.abs(h) > 1.0):
        warnings.warn(
            "channel entries exceed magnitude 1; proceeding anyway",
            stacklevel=2,
        )
    scale = 1.0 + power * float(h @ h)
    d = np.full(h.size, scale)
    V = (math.sqrt(power) * h)[:, None]
    return DpkInstance(d=d, V=V)


def random_instance(n, k, seed, shrink=0.9) -> DpkInstance:
    """Deterministic random valid instance.

    d is uniform in [1, 10]; V is standard normal rescaled so the trace of
    V V^T (an upper bound on its largest eigenvalue, via row norms) stays a
    shrink-fraction below min(d).  Halve V until validation succeeds.
    """
    if not 1 <= k <= n:
        raise InvalidArgumentError("need 1 <= k <= n")
    if not 0.0 < shrink < 1.0:
        raise InvalidArgumentError("shrink must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    d = rng.uniform(1.0, 10.0, size=n)
    V = rng.standard_normal((n, k))
    trace = float(np.sum(V * V))
    if trace > 0.0:
        V = V * (shrink * math.sqrt(float(np.min(d)) / trace))
    while True:
        inst = DpkInstance(d=d, V=V)
        try:
            validate(inst)
            return inst
        except NotPositiveDefiniteError:
            V = V * 0.5
