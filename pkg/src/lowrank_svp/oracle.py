"""Brute-force shortest-vector oracle.

Enumerates every nonzero integer vector in the infinity-norm box of radius
floor(psi) (valid because the optimum has 2-norm at most psi) and returns
the exact minimum with all canonical minimizers.  Kept deliberately simple:
an odometer over the box, vectorized in chunks, no pruning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError
from .linalg import quadratic_form
from .model import DpkInstance, InstanceStats, gram
from .solver import canonicalize

DEFAULT_BUDGET = 10**8
_CHUNK = 1 << 16
# Relative window for collecting minimizers tied with the best value.
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class OracleResult:
    f_star: float
    minimizers: list
    vectors_scanned: int


def brute_force(
    inst: DpkInstance,
    stats: InstanceStats,
    budget: int = DEFAULT_BUDGET,
    radius: int | None = None,
) -> OracleResult:
    """Exact minimum of the quadratic form over the nonzero integer box.

    Raises BudgetExceededError when the box holds more than budget vectors.
    radius overrides the floor(psi) default (used by radius-growth tests).
    """
    n = inst.n
    G = gram(inst)
    R = int(math.floor(stats.psi + 1e-12)) if radius is None else int(radius)
    R = max(R, 1)  # unit vectors are always scanned
    base = 2 * R + 1
    total = base**n  # exact Python int, no overflow
    if total > budget:
        raise BudgetExceededError(total, budget)

    powers = base ** np.arange(n - 1, -1, -1, dtype=np.int64)
    fbest = math.inf
    tied_vecs = []
    tied_fs = []
    scanned = 0
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        idx = np.arange(start, stop, dtype=np.int64)
        A = (idx[:, None] // powers[None, :]) % base - R
        A = A[np.any(A != 0, axis=1)]
        if not len(A):
            continue
        scanned += len(A)
        Af = A.astype(float)
        f = np.einsum("ij,jk,ik->i", Af, G, Af)
        lo = float(f.min())
        if lo < fbest:
            fbest = lo
            keep = [i for i, fv in enumerate(tied_fs) if fv <= fbest * (1 + _TIE_TOL)]
            tied_vecs = [tied_vecs[i] for i in keep]
            tied_fs = [tied_fs[i] for i in keep]
        sel = np.nonzero(f <= fbest * (1 + _TIE_TOL))[0]
        for i in sel:
            tied_vecs.append(A[i].copy())
            tied_fs.append(float(f[i]))

    keep = [i for i, fv in enumerate(tied_fs) if fv <= fbest * (1 + _TIE_TOL)]
    seen = {}
    for i in keep:
        c = canonicalize(tied_vecs[i])
        seen[tuple(int(x) for x in c)] = c
    minimizers = [seen[k] for k in sorted(seen)]
    f_star = min(quadratic_form(G, a) for a in minimizers)
    return OracleResult(f_star=f_star, minimizers=minimizers, vectors_scanned=scanned)
