"""Minimal dense linear algebra used by the solver.

Three kernels: symmetric quadratic forms, small pivoted linear solves with
an explicit singularity flag, and a certified lower bound on the smallest
eigenvalue of a symmetric positive definite matrix.  Everything operates on
plain float64 numpy arrays.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidArgumentError, NotPositiveDefiniteError

_MAX_BISECT_ITERS = 200


def quadratic_form(G, a):
    """Evaluate a^T G a for a symmetric matrix G and an integer vector a."""
    G = np.asarray(G, dtype=float)
    a = np.asarray(a)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise InvalidArgumentError(f"G must be square, got shape {G.shape}")
    if a.shape != (G.shape[0],):
        raise InvalidArgumentError(
            f"vector length {a.shape} does not match matrix order {G.shape[0]}"
        )
    af = a.astype(float)
    return float(af @ G @ af)


def plu_factor(M, rank_tol):
    """Gaussian elimination with partial pivoting.

    Returns (lu, perm) with L below the unit diagonal and U on and above it,
    or None when some pivot magnitude falls below rank_tol.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if M.shape != (n, n):
        raise InvalidArgumentError(f"matrix must be square, got shape {M.shape}")
    if rank_tol <= 0:
        raise InvalidArgumentError("rank_tol must be positive")
    lu = M.copy()
    perm = np.arange(n)
    for j in range(n):
        p = j + int(np.argmax(np.abs(lu[j:, j])))
        if abs(lu[p, j]) < rank_tol:
            return None
        if p != j:
            lu[[j, p]] = lu[[p, j]]
            perm[[j, p]] = perm[[p, j]]
        lu[j + 1 :, j] /= lu[j, j]
        lu[j + 1 :, j + 1 :] -= np.outer(lu[j + 1 :, j], lu[j, j + 1 :])
    return lu, perm


def plu_solve(factor, rhs):
    """Solve using a factorization from plu_factor.  rhs may be a matrix
    whose columns are independent right-hand sides."""
    lu, perm = factor
    n = lu.shape[0]
    b = np.asarray(rhs, dtype=float)
    single = b.ndim == 1
    if single:
        b = b[:, None]
    if b.shape[0] != n:
        raise InvalidArgumentError("right-hand side length mismatch")
    x = b[perm].copy()
    for j in range(n):  # forward substitution, unit lower triangle
        x[j + 1 :] -= np.outer(lu[j + 1 :, j], x[j])
    for j in range(n - 1, -1, -1):  # back substitution
        x[j] /= lu[j, j]
        x[:j] -= np.outer(lu[:j, j], x[j])
    return x[:, 0] if single else x


def solve_square_system(M, c, rank_tol=None):
    """Solve M x = c for a k-by-k matrix M.

    Returns the solution vector, or None when M is singular under the pivot
    threshold rank_tol (default 1e-10 times the largest entry magnitude).
    """
    M = np.asarray(M, dtype=float)
    c = np.asarray(c, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidArgumentError(f"M must be square, got shape {M.shape}")
    if c.shape != (M.shape[0],):
        raise InvalidArgumentError(
            f"rhs length {c.shape} does not match order {M.shape[0]}"
        )
    if rank_tol is None:
        rank_tol = default_rank_tol(M)
    factor = plu_factor(M, rank_tol)
    if factor is None:
        return None
    return plu_solve(factor, c)


def default_rank_tol(M):
    """Scale-invariant pivot threshold for solve_square_system."""
    scale = float(np.max(np.abs(M))) if M.size else 0.0
    return 1e-10 * max(scale, 1e-300)


def _is_positive_definite(A):
    """Unpivoted LDL^T pivot test: all leading pivots positive iff A is
    positive definite.  A nonpositive or vanishing pivot means some leading
    principal minor is nonpositive, hence A is not PD."""
    A = A.copy()
    n = A.shape[0]
    for j in range(n):
        pivot = A[j, j]
        if not pivot > 0.0:
            return False
        col = A[j + 1 :, j]
        A[j + 1 :, j + 1 :] -= np.outer(col, col) / pivot
    return True


def smallest_eigenvalue_lower_bound(G, rel_tol=1e-9):
    """Certified lower bound on the smallest eigenvalue of a symmetric PD
    matrix, via bisection on the positive-definiteness of G - lambda*I.

    The returned value lb satisfies 0 < lb <= lambda_min and
    lb >= lambda_min / (1 + rel_tol).  Raises NotPositiveDefiniteError when
    G cannot be certified positive definite.
    """
    G = np.asarray(G, dtype=float)
    n = G.shape[0]
    if G.ndim != 2 or G.shape != (n, n):
        raise InvalidArgumentError(f"G must be square, got shape {G.shape}")
    if not np.allclose(G, G.T, rtol=0.0, atol=1e-12 * (1.0 + np.abs(G).max())):
        raise InvalidArgumentError("G must be symmetric")
    if not 0.0 < rel_tol < 1.0:
        raise InvalidArgumentError("rel_tol must lie in (0, 1)")
    if not _is_positive_definite(G):
        raise NotPositiveDefiniteError(
            "matrix is not positive definite within working precision"
        )
    # Gershgorin upper bound on every eigenvalue.
    hi = float(np.max(np.diag(G) + np.sum(np.abs(G), axis=1) - np.abs(np.diag(G))))
    hi = max(hi, np.finfo(float).tiny)
    lo = 0.0
    eye = np.eye(n)
    for _ in range(_MAX_BISECT_ITERS):
        if lo > 0.0 and hi - lo <= rel_tol * lo:
            break
        mid = 0.5 * (lo + hi)
        if _is_positive_definite(G - mid * eye):
            lo = mid
        else:
            hi = mid
    if not lo > 0.0 or not math.isfinite(lo):
        raise NotPositiveDefiniteError(
            "could not certify a positive smallest-eigenvalue bound"
        )
    return lo
