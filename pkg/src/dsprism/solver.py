"""Branch-and-bound driver: best-first search over prisms with
enumeration-based bounding, outer-approximation cuts and the two
deletion rules.
"""

import heapq
import time
from dataclasses import dataclass, field, asdict

import numpy as np

from . import geometry
from .bound import INFEASIBLE, solve_bound, vertex_levels
from .geometry import (Prism, add_cut, barycentric, bisect, initial_polyhedron,
                       initial_simplex, radial_subdivide)
from .setfn import (GroundSetError, as_table, brute_force_min, indicator, lovasz,
                    lovasz_subgradient, set_of)


@dataclass
class SolverConfig:
    eps: float = 1e-9
    feas_tol: float = 1e-9
    max_iters: int = 200_000
    max_nodes: int = 500_000
    initial_vertex: int = 0  # cube vertex (mask) anchoring the initial simplex
    seed: int = 0  # recorded for provenance; the solver itself is deterministic
    trace_level: int = 1

    def __post_init__(self):
        if self.eps < 0 or self.feas_tol < 0:
            raise ValueError("tolerances must be nonnegative")


@dataclass
class Node:
    prism: Prism
    beta: float
    bound: object  # BoundResult
    depth: int
    id: int
    rows_seen: int  # P row count the stored bound was computed against
    alive: bool = True


@dataclass
class SolveReport:
    optimal_set: list
    optimal_value: float
    n: int
    iterations: int
    nodes_created: int
    nodes_explored: int
    deleted_dr1: int
    deleted_dr2: int
    deleted_bound: int
    cuts_added: int
    wall_time_ms: float
    termination_reason: str
    final_gap: float
    alpha_history: list
    config: dict
    trace: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


def is_feasible_point(f, x, t, tol=1e-9):
    """True iff x is in the unit cube and fhat(x) <= t, up to tol."""
    x = np.asarray(x, dtype=float)
    if np.any(x < -tol) or np.any(x > 1.0 + tol):
        return False
    return lovasz(f, x) <= t + tol


def cutting_plane(f, x_star, t_star, feas_tol=1e-9):
    """Separating cut at an infeasible witness z = (x*, t*).

    Returns (s, c, d) encoding l(x, t) = s.x + c*t + d <= 0 with
    l(z) = fhat(x*) - t* > 0 and l <= 0 on the whole epigraph region.
    """
    x_star = np.asarray(x_star, dtype=float)
    fhat = lovasz(f, x_star)
    if fhat <= t_star + feas_tol:
        raise ValueError("cutting plane requested at a feasible point")
    s = lovasz_subgradient(f, x_star)
    d = fhat - float(s @ x_star)
    return s, -1.0, d


def _emit(observer, event, **data):
    if observer is not None:
        observer(event, data)


def solve(f, g, config=None, observer=None):
    """Minimize f(A) - g(A) exactly over all subsets of the ground set."""
    if f.n != g.n:
        raise GroundSetError("oracles live on different ground sets")
    cfg = config or SolverConfig()
    n = f.n
    start = time.perf_counter()

    # tabulate once: every oracle value the search needs is one of the 2^n
    ft = as_table(f)
    gt = as_table(g)

    # incumbent seed: empty set, singletons, co-singletons, full set
    full = (1 << n) - 1
    sweep = [0] + [1 << i for i in range(n)] + [full ^ (1 << i) for i in range(n)] + [full]
    inc_mask = 0
    inc_val = ft(0) - gt(0)
    for m in sweep[1:]:
        v = ft(m) - gt(m)
        if v < inc_val:
            inc_val = v
            inc_mask = m
    alpha_history = [(0, inc_val)]

    def eps_eff():
        return cfg.eps * max(1.0, abs(inc_val))

    _, t_tilde = brute_force_min(ft)
    S0 = initial_simplex(n, cfg.initial_vertex)
    P = initial_polyhedron(S0, t_tilde)

    nodes_created = 0
    nodes_explored = 0
    deleted = {"dr1": 0, "dr2": 0, "bound": 0}
    cuts_added = 0
    closed_bounds = []  # certified lower bounds of all pruned regions
    trace = []
    iteration = 0

    heap = []
    active = {}
    next_id = 0
    ghat_cache = {}
    cut_masks = set()

    def update_incumbent(points):
        nonlocal inc_mask, inc_val
        if not points:
            return
        ms = np.fromiter((p[0] for p in points), dtype=np.int64, count=len(points))
        fv = np.fromiter((p[1] for p in points), dtype=float, count=len(points))
        vals = fv - gt.table_values[ms]
        j = int(np.argmin(vals))  # first min: smallest mask wins ties
        if vals[j] < inc_val:
            inc_val = float(vals[j])
            inc_mask = int(ms[j])
            alpha_history.append((iteration, inc_val))
            _emit(observer, "incumbent", mask=inc_mask, value=inc_val,
                  iteration=iteration)

    def bound_child(S, parent_beta, parent_depth):
        """Solve the bound problem for a child simplex; returns (node_or_None,
        trace entry).  Deleted children close their region with a certified
        bound recorded in closed_bounds."""
        nonlocal nodes_created, next_id
        levels = vertex_levels(S, inc_val, ft, gt, ghat_cache)
        res = solve_bound(S, P, levels, ft, gt, feas_tol=cfg.feas_tol)
        nodes_created += 1
        nid = next_id
        next_id += 1
        update_incumbent(res.feasible_points)
        _emit(observer, "node_bound", node_id=nid, simplex=S, polyhedron=P,
              levels=levels, bound=res, alpha=inc_val, parent_beta=parent_beta)
        entry = {"id": nid, "status": res.status, "c_star": res.c_star,
                 "beta": None, "deleted_by": None}
        if res.status == INFEASIBLE:
            deleted["dr1"] += 1
            entry["deleted_by"] = "dr1"
            _emit(observer, "delete", node_id=nid, reason="dr1", simplex=S,
                  bound_value=np.inf, alpha=inc_val)
            return None, entry
        beta = max(parent_beta, res.beta)
        entry["beta"] = beta
        if res.c_star <= 0.0:
            deleted["dr2"] += 1
            entry["deleted_by"] = "dr2"
            closed_bounds.append(beta)
            _emit(observer, "delete", node_id=nid, reason="dr2", simplex=S,
                  bound_value=beta, alpha=inc_val)
            return None, entry
        if beta >= inc_val - eps_eff():
            deleted["bound"] += 1
            entry["deleted_by"] = "bound"
            closed_bounds.append(beta)
            _emit(observer, "delete", node_id=nid, reason="bound", simplex=S,
                  bound_value=beta, alpha=inc_val)
            return None, entry
        node = Node(prism=Prism(S), beta=beta, bound=res, depth=parent_depth + 1,
                    id=nid, rows_seen=P.num_rows)
        return node, entry

    # root
    root, root_entry = bound_child(S0, -np.inf, -1)
    if root is not None:
        active[root.id] = root
        heapq.heappush(heap, (root.beta, root.id))
    if cfg.trace_level >= 2:
        trace.append({"iter": -1, "node_id": root_entry["id"], "beta": root_entry["beta"],
                      "alpha": inc_val, "action": "root", "children": [root_entry],
                      "cuts_total": cuts_added})

    termination = "optimal"
    while active:
        if iteration >= cfg.max_iters:
            termination = "iteration_limit"
            break
        if nodes_created >= cfg.max_nodes:
            termination = "node_limit"
            break
        # best-first selection, ties by smallest node id; the stored bound is
        # refreshed against the current P (cuts only tighten it), so nodes
        # that close under the grown polyhedron are deleted without expansion
        node = None
        while active:
            beta_k, nid = heap[0]
            cand = active.get(nid)
            if cand is None or not cand.alive or cand.beta != beta_k:
                heapq.heappop(heap)
                continue
            heapq.heappop(heap)
            if cand.beta >= inc_val - eps_eff():
                del active[nid]
                deleted["bound"] += 1
                closed_bounds.append(cand.beta)
                _emit(observer, "delete", node_id=nid, reason="bound",
                      simplex=cand.prism.base, bound_value=cand.beta, alpha=inc_val)
                continue
            if P.num_rows > cand.rows_seen:
                S = cand.prism.base
                levels = vertex_levels(S, inc_val, ft, gt, ghat_cache)
                res = solve_bound(S, P, levels, ft, gt, feas_tol=cfg.feas_tol)
                update_incumbent(res.feasible_points)
                cand.rows_seen = P.num_rows
                if res.status == INFEASIBLE:
                    del active[nid]
                    deleted["dr1"] += 1
                    _emit(observer, "delete", node_id=nid, reason="dr1", simplex=S,
                          bound_value=np.inf, alpha=inc_val)
                    continue
                new_beta = max(cand.beta, res.beta)
                cand.bound = res
                if res.c_star <= 0.0:
                    del active[nid]
                    deleted["dr2"] += 1
                    closed_bounds.append(new_beta)
                    _emit(observer, "delete", node_id=nid, reason="dr2", simplex=S,
                          bound_value=new_beta, alpha=inc_val)
                    continue
                if new_beta >= inc_val - eps_eff():
                    del active[nid]
                    deleted["bound"] += 1
                    closed_bounds.append(new_beta)
                    _emit(observer, "delete", node_id=nid, reason="bound",
                          simplex=S, bound_value=new_beta, alpha=inc_val)
                    continue
                if new_beta > cand.beta:
                    # tightened but maybe no longer the best node: reinsert
                    cand.beta = new_beta
                    heapq.heappush(heap, (new_beta, nid))
                    continue
            node = cand
            beta_k = cand.beta
            del active[nid]
            break
        if node is None:
            break
        iteration += 1
        nodes_explored += 1
        _emit(observer, "select", node_id=nid, beta=node.beta, alpha=inc_val,
              iteration=iteration)

        alpha_before = inc_val
        res = node.bound
        z_x, z_t = res.witness_x, res.witness_t

        # separate every binary point of the node the outer approximation
        # still underestimates (the witness among them); each such cut is
        # strictly separating, and each point needs one cut ever
        added_here = 0
        for (m, fval), tlo in zip(res.feasible_points, res.feasible_t_lo):
            if m in cut_masks or fval <= tlo + cfg.feas_tol:
                continue
            xm = indicator(m, n)
            row = cutting_plane(ft, xm, tlo, feas_tol=cfg.feas_tol)
            P_before = P
            P = add_cut(P, row)
            cuts_added += 1
            added_here += 1
            cut_masks.add(m)
            _emit(observer, "cut", row=row, z=(xm, tlo), violation=fval - tlo,
                  polyhedron_before=P_before, polyhedron_after=P)
        action = "cut" if added_here else "nocut"

        # subdivide at the witness so it becomes a vertex of every child:
        # together with the cut this caps its bound contribution at
        # mu - (f-g)(x*) <= 0, so each binary point is selected at most once
        # per branch and termination is finite.  When the witness already is
        # a vertex, fall back to longest-edge bisection.
        base = node.prism.base
        lam_w = barycentric(base, z_x)
        if np.max(lam_w) >= 1.0 - 1e-9:
            subs = bisect(base)
        else:
            subs = radial_subdivide(base, z_x)
        children = []
        for S in subs:
            child, entry = bound_child(S, node.beta, node.depth)
            children.append(entry)
            if child is not None:
                active[child.id] = child
                heapq.heappush(heap, (child.beta, child.id))

        # prune the pool eagerly when the incumbent improved (otherwise the
        # lazy check at selection time covers it)
        cutoff = inc_val - eps_eff()
        pruned = []
        for oid in (list(active) if inc_val < alpha_before else ()):
            other = active[oid]
            if other.beta >= cutoff:
                other.alive = False
                del active[oid]
                deleted["bound"] += 1
                closed_bounds.append(other.beta)
                pruned.append(oid)
                _emit(observer, "delete", node_id=oid, reason="bound",
                      simplex=other.prism.base, bound_value=other.beta, alpha=inc_val)

        if cfg.trace_level >= 1:
            trace.append({"iter": iteration, "node_id": nid, "beta": beta_k,
                          "alpha": inc_val, "action": action, "children": children,
                          "cuts_total": cuts_added, "pruned": pruned})

    if termination != "optimal":
        closed_bounds.extend(node.beta for node in active.values())
    lower = min(closed_bounds) if closed_bounds else inc_val
    final_gap = max(0.0, inc_val - lower)

    wall_ms = (time.perf_counter() - start) * 1000.0
    return SolveReport(
        optimal_set=set_of(inc_mask),
        optimal_value=inc_val,
        n=n,
        iterations=iteration,
        nodes_created=nodes_created,
        nodes_explored=nodes_explored,
        deleted_dr1=deleted["dr1"],
        deleted_dr2=deleted["dr2"],
        deleted_bound=deleted["bound"],
        cuts_added=cuts_added,
        wall_time_ms=wall_ms,
        termination_reason=termination,
        final_gap=final_gap,
        alpha_history=alpha_history,
        config={"eps": cfg.eps, "feas_tol": cfg.feas_tol, "max_iters": cfg.max_iters,
                "max_nodes": cfg.max_nodes, "initial_vertex": cfg.initial_vertex,
                "seed": cfg.seed, "trace_level": cfg.trace_level},
        trace=trace,
    )
