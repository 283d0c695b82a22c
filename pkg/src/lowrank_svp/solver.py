"""Exact shortest-vector search for diagonal-minus-low-rank Gram matrices.

Three search paths share one candidate-reduction rule:

* diagonal shortcut when the low-rank factor is exactly zero,
* the rank-1 breakpoint sweep (sorted discontinuity points, midpoint
  evaluation),
* the general path: enumerate the half-integer hyperplane vertices
  (phase 1), then either average every (k+1)-subset of vertices (phase 2)
  or, when the subset count explodes, sweep one interior point per cell of
  the hyperplane arrangement.  The cell sweep evaluates a superset of the
  regions the subset averages can reach, so the minimum is unchanged.

All candidate integer vectors are compared by (objective value, canonical
vector) so ties resolve deterministically regardless of evaluation order,
chunking, or thread count.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidArgumentError
from .linalg import default_rank_tol, plu_factor, plu_solve, quadratic_form
from .model import DpkInstance, InstanceStats, gram, validate

_CHUNK = 65536
# Relative tolerance that merges numerically identical breakpoints/vertices.
_DEDUP_TOL = 1e-9


@dataclass(frozen=True)
class SolveResult:
    a_star: np.ndarray
    f_star: float
    candidates_evaluated: int
    phase1_points: int
    used_path: str


@dataclass(frozen=True)
class SolverOptions:
    threads: int = 1
    general_strategy: str = "auto"  # auto | subsets | cells
    subset_cap: int = 500_000
    eig_rel_tol: float = 1e-9
    stats: Optional[InstanceStats] = None


def round_vec(b):
    """Entrywise nearest integer; exact halves round toward +infinity."""
    b = np.asarray(b, dtype=float)
    if not np.all(np.isfinite(b)):
        raise InvalidArgumentError("entries must be finite")
    return np.floor(b + 0.5).astype(np.int64)


def canonicalize(a):
    """Flip the sign so the first nonzero entry is positive."""
    a = np.asarray(a)
    nz = np.nonzero(a)[0]
    if nz.size and a[nz[0]] < 0:
        return -a
    return a


def _f_key(f):
    # 12-significant-digit key: immune to last-ulp differences between
    # vectorized evaluation paths, so candidate ordering is reproducible.
    return float(f"{f:.12e}")


def _eval_batch(G, A):
    Af = A.astype(float)
    return np.einsum("ij,ij->i", Af @ G, Af)


class _Best:
    """Streaming minimum over candidate vectors under the shared tie-break."""

    def __init__(self, G):
        self.G = G
        self.key = math.inf
        self.a = None
        self._at = None
        self.evaluated = 0

    def offer(self, A):
        if A.size == 0:
            return
        A = A[np.any(A != 0, axis=1)]
        if not len(A):
            return
        self.evaluated += len(A)
        f = _eval_batch(self.G, A)
        fmin = float(f.min())
        sel = np.nonzero(f <= fmin + 4e-12 * abs(fmin))[0]
        cand = np.unique(A[sel], axis=0)
        fc = _eval_batch(self.G, cand)
        for i in range(len(cand)):
            self._offer_one(cand[i], float(fc[i]))

    def _offer_one(self, a, f):
        c = canonicalize(a)
        key = _f_key(f)
        t = tuple(int(x) for x in c)
        if key < self.key or (key == self.key and (self._at is None or t < self._at)):
            self.key = key
            self.a = c.copy()
            self._at = t

    def merge(self, other):
        self.evaluated += other.evaluated
        if other.a is not None:
            if other.key < self.key or (
                other.key == self.key and (self._at is None or other._at < self._at)
            ):
                self.key = other.key
                self.a = other.a
                self._at = other._at


def _reduce_batches(G, batches, threads):
    best = _Best(G)
    if threads <= 1:
        for A in batches:
            best.offer(A)
        return best

    def work(A):
        sub = _Best(G)
        sub.offer(A)
        return sub

    with ThreadPoolExecutor(max_workers=threads) as ex:
        for sub in ex.map(work, batches):
            best.merge(sub)
    return best


def _unit_vectors(n):
    return np.eye(n, dtype=np.int64)


def _dedup_sorted(values):
    """Merge near-duplicates in an ascending array."""
    out = []
    for x in values:
        if not out or x - out[-1] > _DEDUP_TOL * (1.0 + abs(x)):
            out.append(x)
    return np.asarray(out)


def breakpoints_k1(inst: DpkInstance, stats: InstanceStats) -> np.ndarray:
    """Sorted, deduplicated discontinuity points of the rank-1 objective.

    For each coordinate j with v_j != 0 the points are (d_j/|v_j|) * c for
    half-integer c, restricted so |x| stays below the search bound
    (psi_ceil + 1/2) * min_j d_j/|v_j|.
    """
    if inst.k != 1:
        raise InvalidArgumentError("breakpoints_k1 requires k = 1")
    v = inst.V[:, 0]
    nz = v != 0.0
    if not nz.any():
        raise InvalidArgumentError("all-zero factor: diagonal shortcut applies")
    r = inst.d[nz] / np.abs(v[nz])
    xbound = (stats.psi_ceil + 0.5) * float(r.min())
    pts = []
    for rj in r:
        bound = xbound / rj
        top = int(math.floor(bound - 0.5 + 1e-12 * (1.0 + bound)))
        if top < 0:
            continue
        c = np.arange(top + 1) + 0.5
        pts.append(rj * c)
        pts.append(-rj * c)
    if not pts:
        return np.empty(0)
    allpts = np.sort(np.concatenate(pts))
    return _dedup_sorted(allpts)


def solve_k1(inst: DpkInstance, stats: InstanceStats, threads=1) -> SolveResult:
    """Rank-1 path: evaluate the rounded candidate at the midpoint of every
    consecutive breakpoint pair, plus all unit vectors."""
    G = gram(inst)
    phi = breakpoints_k1(inst, stats)
    w = inst.V[:, 0] / inst.d

    def batches():
        yield _unit_vectors(inst.n)
        if phi.size >= 2:
            mids = 0.5 * (phi[:-1] + phi[1:])
            for s in range(0, mids.size, _CHUNK):
                yield round_vec(mids[s : s + _CHUNK, None] * w[None, :])

    best = _reduce_batches(G, batches(), threads)
    a = best.a
    return SolveResult(
        a_star=a,
        f_star=quadratic_form(G, a),
        candidates_evaluated=best.evaluated,
        phase1_points=int(phi.size),
        used_path="k1-sweep",
    )


def _half_integers(psi_ceil):
    c = np.arange(psi_ceil + 1) + 0.5
    return np.concatenate([-c[::-1], c])


def phase1_vertices(inst: DpkInstance, stats: InstanceStats, rank_tol=None):
    """Candidate vertices: solutions of (D^-1 V)_pi x = c_pi over all
    k-subsets pi with a full-rank submatrix and all half-integer c_pi with
    entries bounded by psi_ceil + 1/2.

    Returns (vertices, raw_count) where raw_count is the number of points
    generated before deduplication.
    """
    W = inst.V / inst.d[:, None]
    k = inst.k
    cv = _half_integers(stats.psi_ceil)
    C = np.array(list(itertools.product(cv, repeat=k))).T  # (k, cc)
    raw = 0
    blocks = []
    for pi in itertools.combinations(range(inst.n), k):
        M = W[list(pi)]
        tol = rank_tol if rank_tol is not None else default_rank_tol(M)
        factor = plu_factor(M, tol)
        if factor is None:
            continue
        X = plu_solve(factor, C).T  # (cc, k)
        raw += X.shape[0]
        blocks.append(X)
    if not blocks:
        return np.empty((0, k)), 0
    allx = np.vstack(blocks)
    _, idx = np.unique(np.round(allx, 9), axis=0, return_index=True)
    return allx[np.sort(idx)], raw


def _subset_batches(W, vertices, k):
    m = len(vertices)
    if m < k + 1:
        return
    # Stream index combinations in fixed lexicographic order; chunk size is
    # independent of thread count so reductions are reproducible.
    per = max(1, _CHUNK // (k + 1))
    it = itertools.combinations(range(m), k + 1)
    while True:
        idx = list(itertools.islice(it, per))
        if not idx:
            return
        I = np.array(idx)
        P = vertices[I].mean(axis=1)
        yield round_vec(P @ W.T)


def phase2_enumerate(
    inst: DpkInstance, stats: InstanceStats, vertices, threads=1
) -> SolveResult:
    """Average every (k+1)-subset of vertices, round, and keep the best
    candidate; all unit vectors are always in the running."""
    G = gram(inst)
    W = inst.V / inst.d[:, None]

    def batches():
        yield _unit_vectors(inst.n)
        yield from _subset_batches(W, vertices, inst.k)

    best = _reduce_batches(G, batches(), threads)
    a = best.a
    return SolveResult(
        a_star=a,
        f_star=quadratic_form(G, a),
        candidates_evaluated=best.evaluated,
        phase1_points=len(vertices),
        used_path="general-k",
    )


# --- arrangement-cell sweep -------------------------------------------------
#
# The preimage of any reachable integer vector a under x -> round(W x) is a
# convex cell of the arrangement of the hyperplanes W_i x = c (half-integer
# c bounded by psi_ceil + 1/2).  Placing one interior point in every cell
# therefore covers every region the subset averages of phase 2 can reach,
# including the region of each optimal vector.  Each cell with m >= 1
# hyperplanes has a facet on one of them, and that facet is exactly a cell
# of the arrangement induced on the hyperplane; stepping from an interior
# point of the facet halfway to the first crossing along the normal lands
# strictly inside the adjacent cells.


def _normalized_hyperplanes(W, psi_ceil):
    rows = []
    offsets = []
    cv = _half_integers(psi_ceil)
    for i in range(W.shape[0]):
        w = W[i]
        nw = float(np.linalg.norm(w))
        if nw <= 0.0:
            continue
        u = w / nw
        for c in cv:
            rows.append(u)
            offsets.append(float(c) / nw)
    if not rows:
        return np.empty((0, W.shape[1])), np.empty(0)
    N = np.array(rows)
    o = np.array(offsets)
    # Canonical sign, then merge duplicates (proportional rows of W).
    seen = {}
    for i in range(len(N)):
        u, c = N[i], o[i]
        j = int(np.argmax(np.abs(u) > 1e-12))
        if u[j] < 0:
            u, c = -u, -c
        key = tuple(np.round(u, 9)) + (round(c, 9),)
        if key not in seen:
            seen[key] = (u, c)
    N = np.array([p[0] for p in seen.values()])
    o = np.array([p[1] for p in seen.values()])
    return N, o


def _orthonormal_complement(w):
    q, _ = np.linalg.qr(np.asarray(w, dtype=float)[:, None], mode="complete")
    return q[:, 1:]


def _offset_into_cells(X, Wn, N, o):
    """From points X lying on hyperplanes with per-point unit normals Wn,
    step halfway to the first crossing with any other hyperplane of the
    arrangement (N, o), in both normal directions."""
    denom = Wn @ N.T
    with np.errstate(divide="ignore", invalid="ignore"):
        T = (o[None, :] - X @ N.T) / denom
    T[np.abs(denom) <= 1e-12] = np.nan
    pos_tol = 1e-9 * (1.0 + (float(np.max(np.abs(o))) if o.size else 0.0))
    with np.errstate(invalid="ignore"):
        Tp = np.where(T > pos_tol, T, np.inf)
        Tm = np.where(T < -pos_tol, T, -np.inf)
    tplus = np.min(Tp, axis=1)
    tplus[~np.isfinite(tplus)] = 2.0
    tminus = np.max(Tm, axis=1)
    tminus[~np.isfinite(tminus)] = -2.0
    return np.vstack([X + 0.5 * tplus[:, None] * Wn, X + 0.5 * tminus[:, None] * Wn])


def _line_cell_points(N, o):
    """One point per interval of breakpoints on the real line."""
    b = np.sort(o * N[:, 0])
    b = _dedup_sorted(b)
    reps = [b[0] - 1.0, b[-1] + 1.0]
    if b.size >= 2:
        reps.extend(0.5 * (b[:-1] + b[1:]))
    return np.asarray(reps)[:, None]


def _plane_cell_points(N, o):
    """One interior point per cell of a line arrangement in the plane,
    computed with batched matrix operations across all lines."""
    m = len(N)
    U = np.column_stack([-N[:, 1], N[:, 0]])  # in-line directions
    P0 = o[:, None] * N  # base point of each line
    denom = U @ N.T
    with np.errstate(divide="ignore", invalid="ignore"):
        T = (o[None, :] - P0 @ N.T) / denom
    T[np.abs(denom) <= 1e-12] = np.nan
    np.fill_diagonal(T, np.nan)
    Ts = np.sort(np.where(np.isfinite(T), T, np.inf), axis=1)
    cnt = np.sum(np.isfinite(Ts), axis=1)
    rows = []
    tvals = []
    # Midpoints of consecutive breakpoints along each line.
    if m >= 2:
        mids = 0.5 * (Ts[:, :-1] + Ts[:, 1:])
        valid = np.isfinite(Ts[:, 1:])
        r, c = np.nonzero(valid)
        rows.append(r)
        tvals.append(mids[r, c])
    # One point beyond each end (or the base point when nothing crosses).
    has = cnt > 0
    r = np.nonzero(has)[0]
    rows.append(r)
    tvals.append(Ts[r, 0] - 1.0)
    rows.append(r)
    tvals.append(Ts[r, cnt[r] - 1] + 1.0)
    r = np.nonzero(~has)[0]
    rows.append(r)
    tvals.append(np.zeros(r.size))
    rows = np.concatenate(rows)
    tvals = np.concatenate(tvals)
    X = P0[rows] + tvals[:, None] * U[rows]
    return _offset_into_cells(X, N[rows], N, o)


def _cell_points(N, o):
    """One interior point per cell of the arrangement of unit-normal
    hyperplanes (N, o), as a (points, dim) array."""
    dim = N.shape[1]
    if len(N) == 0:
        return np.zeros((1, dim))
    if dim == 1:
        return _line_cell_points(N, o)
    if dim == 2:
        return _plane_cell_points(N, o)
    out = []
    for h in range(len(N)):
        w, c = N[h], o[h]
        x0 = c * w
        B = _orthonormal_complement(w)
        keep = np.arange(len(N)) != h
        Ns = N[keep] @ B
        os_ = o[keep] - N[keep] @ x0
        norms = np.linalg.norm(Ns, axis=1)
        nz = norms > 1e-12
        Ns = Ns[nz] / norms[nz, None]
        os_ = os_[nz] / norms[nz]
        sub = _cell_points(Ns, os_)
        X = x0[None, :] + sub @ B.T
        out.append(_offset_into_cells(X, np.broadcast_to(w, X.shape), N, o))
    return np.vstack(out)


def _cell_batches(inst, stats):
    W = inst.V / inst.d[:, None]
    N, o = _normalized_hyperplanes(W, stats.psi_ceil)
    X = _cell_points(N, o)
    for s in range(0, len(X), _CHUNK):
        yield round_vec(X[s : s + _CHUNK] @ W.T)


def solve_general_cells(
    inst: DpkInstance, stats: InstanceStats, phase1_points, threads=1
) -> SolveResult:
    G = gram(inst)

    def batches():
        yield _unit_vectors(inst.n)
        yield from _cell_batches(inst, stats)

    best = _reduce_batches(G, batches(), threads)
    a = best.a
    return SolveResult(
        a_star=a,
        f_star=quadratic_form(G, a),
        candidates_evaluated=best.evaluated,
        phase1_points=phase1_points,
        used_path="general-k",
    )


def solve(inst: DpkInstance, opts: SolverOptions = SolverOptions()) -> SolveResult:
    """Dispatch: diagonal shortcut, rank-1 sweep, or the general path."""
    stats = opts.stats if opts.stats is not None else validate(inst, opts.eig_rel_tol)
    if np.all(inst.V == 0.0):
        G = gram(inst)
        best = _Best(G)
        best.offer(_unit_vectors(inst.n))
        return SolveResult(
            a_star=best.a,
            f_star=quadratic_form(G, best.a),
            candidates_evaluated=best.evaluated,
            phase1_points=0,
            used_path="diagonal-shortcut",
        )
    if inst.k == 1:
        return solve_k1(inst, stats, threads=opts.threads)
    vertices, raw = phase1_vertices(inst, stats)
    strategy = opts.general_strategy
    if strategy == "auto":
        nsub = math.comb(len(vertices), inst.k + 1)
        strategy = "subsets" if 0 < nsub <= opts.subset_cap else "cells"
    if strategy == "subsets":
        result = phase2_enumerate(inst, stats, vertices, threads=opts.threads)
    elif strategy == "cells":
        result = solve_general_cells(inst, stats, raw, threads=opts.threads)
    else:
        raise InvalidArgumentError(f"unknown strategy {strategy!r}")
    return SolveResult(
        a_star=result.a_star,
        f_star=result.f_star,
        candidates_evaluated=result.candidates_evaluated,
        phase1_points=raw,
        used_path="general-k",
    )
