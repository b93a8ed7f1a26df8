"""The bound subproblem: vertex levels, the binary-integer program over the
binary points of a simplex, and the resulting prism lower bound.

The program is solved exactly by enumerating all binary x whose barycentric
coordinates are nonnegative in the simplex.  For each such x the barycentric
weights are unique, and the objective sum(t_i lambda_i) - t is maximized at
the smallest t the polyhedron admits at x.
"""

from dataclasses import dataclass, field

import numpy as np

from .geometry import hyperplane_through
from .setfn import lovasz

BINARY_TOL = 1e-9
MEMBERSHIP_TOL = 1e-12

_binary_grid_cache = {}


def binary_points(n):
    """All 2^n binary vectors as a (2^n, n) array, mask-ascending rows."""
    if n not in _binary_grid_cache:
        masks = np.arange(1 << n)
        grid = ((masks[:, None] >> np.arange(n)) & 1).astype(float)
        grid.setflags(write=False)
        _binary_grid_cache[n] = grid
    return _binary_grid_cache[n]


@dataclass(frozen=True)
class VertexLevels:
    t: np.ndarray  # t_i = ghat(v_i) + mu
    mu: float


INFEASIBLE = "Infeasible"
SOLVED = "Solved"


@dataclass
class BoundResult:
    status: str
    beta: float
    mu: float
    c_star: float = None
    witness_x: np.ndarray = None
    witness_t: float = None
    witness_lam: np.ndarray = None
    witness_mask: int = None
    feasible_points: list = field(default_factory=list)  # [(mask, f_value)]
    feasible_t_lo: np.ndarray = None  # per feasible point, lowest t in P


def binary_vertex_indices(S, tol=BINARY_TOL):
    """Vertices of S that are binary vectors, within a per-coordinate tolerance."""
    V = S.vertices
    R = np.round(V)
    ok = (np.max(np.abs(V - R), axis=1) <= tol) & np.all((R == 0) | (R == 1), axis=1)
    return [int(i) for i in np.nonzero(ok)[0]]


def compute_mu(S, alpha, f, g):
    """mu = min(alpha, best f-g objective among binary vertices of S)."""
    mu = float(alpha)
    weights = np.left_shift(1, np.arange(S.n))
    for i in binary_vertex_indices(S):
        m = int(np.round(S.vertices[i]) @ weights)
        mu = min(mu, f(m) - g(m))
    return mu


def vertex_levels(S, alpha, f, g, ghat_cache=None):
    """Levels t_i = ghat(v_i) + mu at the simplex vertices.

    ghat_cache, when given, memoizes ghat by vertex bytes; vertices are
    shared between parent and child simplices, so the cache saves most
    extension evaluations during a solve.
    """
    mu = compute_mu(S, alpha, f, g)
    gh = np.empty(S.n + 1)
    for i, v in enumerate(S.vertices):
        if ghat_cache is None:
            gh[i] = lovasz(g, v)
        else:
            key = v.tobytes()
            val = ghat_cache.get(key)
            if val is None:
                val = lovasz(g, v)
                ghat_cache[key] = val
            gh[i] = val
    return VertexLevels(t=gh + mu, mu=mu)


def solve_bound(S, P, levels, f, g, feas_tol=1e-9):
    """Exact optimum of the bound program for prism T(S) against P.

    Enumerates binary x inside S; each surviving x contributes a feasible
    point (its subset and f-value).  The hyperplane bound is +inf when
    nothing survives, mu when c* <= 0, and mu - c* when c* > 0.  beta also
    folds in the direct enumeration bound min_x(t_lo(x) - g(x)), which is
    valid for the subsets in the prism and at least as tight: the
    hyperplane bound equals min_x(t_lo(x) - sum_i lambda_i ghat(v_i)) and
    the chord overestimates the convex ghat at every x.
    """
    n = S.n
    grid = binary_points(n)
    lam = S.barycentric_many(grid)
    inside = np.min(lam, axis=1) >= -MEMBERSHIP_TOL
    mu = levels.mu

    neg = P.a < 0
    if not np.any(neg):
        raise ValueError("polyhedron does not bound t from below")

    idx = np.nonzero(inside)[0]
    if len(idx) == 0:
        return BoundResult(status=INFEASIBLE, beta=np.inf, mu=mu)

    X = grid[idx]
    lhs = X @ P.A.T  # (candidates, rows)
    zero = P.a == 0
    pos = P.a > 0
    ok = np.all(lhs[:, zero] <= P.b[zero] + feas_tol, axis=1)
    t_lo = np.max((P.b[neg] - lhs[:, neg]) / P.a[neg], axis=1)
    if np.any(pos):
        t_hi = np.min((P.b[pos] - lhs[:, pos]) / P.a[pos], axis=1)
        ok &= t_lo <= t_hi + feas_tol

    if not np.any(ok):
        return BoundResult(status=INFEASIBLE, beta=np.inf, mu=mu)

    masks = idx[ok]
    obj = lam[idx[ok]] @ levels.t - t_lo[ok]
    j = int(np.argmax(obj))  # first max: smallest mask wins ties
    best_obj = float(obj[j])
    mask = int(masks[j])
    if f.table_values is not None:
        feasible = list(zip(masks.tolist(), f.table_values[masks].tolist()))
    else:
        feasible = [(int(m), f(int(m))) for m in masks]
    if g.table_values is not None:
        gvals = g.table_values[masks]
    else:
        gvals = np.array([g(int(m)) for m in masks])
    direct = float(np.min(t_lo[ok] - gvals))
    beta = mu if best_obj <= 0.0 else mu - best_obj
    beta = max(beta, direct)
    return BoundResult(status=SOLVED, beta=beta, mu=mu, c_star=best_obj,
                       witness_x=grid[mask].copy(), witness_t=float(t_lo[ok][j]),
                       witness_lam=lam[mask].copy(), witness_mask=mask,
                       feasible_points=feasible, feasible_t_lo=t_lo[ok].copy())


def equivalence_check(S, P, levels, feas_tol=1e-9, tol=1e-8):
    """Cross-check the bound program against its hyperplane form.

    Verifies that on every feasible binary point the two objectives differ
    by the constant gamma, and that the optimal values satisfy
    gamma* = c* + gamma.  Returns True when everything agrees.
    """
    p, gamma = hyperplane_through(S.vertices, levels.t)
    n = S.n
    grid = binary_points(n)
    lam = S.barycentric_many(grid)
    inside = np.min(lam, axis=1) >= -MEMBERSHIP_TOL

    best_mip = None
    best_hyp = None
    for mask in np.nonzero(inside)[0]:
        mask = int(mask)
        x = grid[mask]
        iv = P.t_interval(x, tol=feas_tol)
        if iv is None:
            continue
        t_lo, t_hi = iv
        if t_lo > t_hi + feas_tol:
            continue
        obj_mip = float(levels.t @ lam[mask]) - t_lo
        obj_hyp = float(p @ x) - t_lo
        if abs(obj_hyp - (obj_mip + gamma)) > tol:
            return False
        best_mip = obj_mip if best_mip is None else max(best_mip, obj_mip)
        best_hyp = obj_hyp if best_hyp is None else max(best_hyp, obj_hyp)
    if best_mip is None:
        return True
    return abs(best_hyp - (best_mip + gamma)) <= tol
