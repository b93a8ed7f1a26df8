"""Tests for the branch-and-bound driver."""

import numpy as np
import pytest

from dsprism import setfn
from dsprism.experiments import gen_random_ds
from dsprism.geometry import barycentric
from dsprism.setfn import as_table, brute_force_ds_min, indicator, lovasz
from dsprism.solver import SolverConfig, cutting_plane, is_feasible_point, solve


def worked_pair():
    return setfn.table(1, [0.0, 1.0]), setfn.table(1, [0.0, 2.0])


def test_worked_n1_trace():
    f, g = worked_pair()
    rep = solve(f, g, SolverConfig(trace_level=2))
    assert rep.optimal_set == [0]
    assert rep.optimal_value == -1.0
    assert rep.termination_reason == "optimal"
    assert rep.cuts_added == 1
    assert rep.deleted_dr2 == 2
    root = rep.trace[0]
    assert root["action"] == "root"
    assert root["children"][0]["c_star"] == pytest.approx(1.0)
    assert root["children"][0]["beta"] == pytest.approx(-2.0)
    step = rep.trace[1]
    assert step["action"] == "cut"
    assert [c["deleted_by"] for c in step["children"]] == ["dr2", "dr2"]
    assert rep.iterations == 1
    assert rep.final_gap == 0.0


def test_worked_n1_bit_deterministic():
    f, g = worked_pair()
    a = solve(f, g, SolverConfig(trace_level=2)).to_dict()
    b = solve(f, g, SolverConfig(trace_level=2)).to_dict()
    a.pop("wall_time_ms")
    b.pop("wall_time_ms")
    assert a == b


def test_equal_functions_give_zero_at_empty_set():
    for mk in (lambda: setfn.cut(4, [(0, 1, 1.0), (2, 3, 0.7)]),
               lambda: setfn.modular([0.3, -0.2, 0.1, 0.4])):
        f = mk()
        rep = solve(f, mk())
        assert rep.optimal_value == pytest.approx(0.0, abs=1e-12)
        assert rep.optimal_set == []


def test_n2_cut_minus_modular():
    f = setfn.cut(2, [(0, 1, 1.0)])
    g = setfn.modular([1.5, 0.0])
    rep = solve(f, g)
    assert rep.optimal_set == [0, 1]
    assert rep.optimal_value == pytest.approx(-1.5)


def test_ground_set_mismatch():
    with pytest.raises(setfn.GroundSetError):
        solve(setfn.modular([1.0]), setfn.modular([1.0, 2.0]))


def test_cutting_plane_worked_example():
    f = setfn.table(1, [0.0, 1.0])
    s, c, d = cutting_plane(f, np.array([1.0]), 0.0)
    assert np.allclose(s, [1.0]) and c == -1.0 and d == pytest.approx(0.0)
    # l(x, t) = x - t: zero at both epigraph points (0,0) and (1,1)
    assert float(s @ [0.0]) - 0.0 + d <= 1e-12
    assert float(s @ [1.0]) - 1.0 + d <= 1e-12


def test_cutting_plane_modular_reduces_to_epigraph_facet():
    w = np.array([0.5, -1.0, 2.0])
    f = setfn.modular(w)
    x_star = np.array([0.25, 0.75, 0.5])
    s, c, d = cutting_plane(f, x_star, float(w @ x_star) - 1.0)
    assert np.allclose(s, w)
    assert d == pytest.approx(0.0, abs=1e-12)


def test_cutting_plane_rejects_feasible_point():
    f = setfn.table(1, [0.0, 1.0])
    with pytest.raises(ValueError):
        cutting_plane(f, np.array([1.0]), 1.0)


def test_cut_validity_on_all_subsets():
    # Proposition-2 style check: l(z) > 0 and l(I_A, f(A)) <= 0 for all A
    rng = np.random.default_rng(0)
    f = as_table(setfn.coverage(4, rng.uniform(0.5, 1.0, 8),
                                [[0, 1], [1, 2, 3], [4, 5], [5, 6, 7]]))
    for _ in range(20):
        x = rng.uniform(0.0, 1.0, size=4)
        t = lovasz(f, x) - rng.uniform(0.1, 1.0)
        s, c, d = cutting_plane(f, x, t)
        assert float(s @ x) + c * t + d > 0
        for m in range(16):
            assert float(s @ indicator(m, 4)) + c * f(m) + d <= 1e-9


def test_is_feasible_point():
    f = setfn.table(2, [0.0, 1.0, 1.0, 2.0])
    assert is_feasible_point(f, np.array([1.0, 0.0]), 1.0)
    assert not is_feasible_point(f, np.array([1.0, 0.0]), 0.5)
    assert not is_feasible_point(f, np.array([1.5, 0.0]), 5.0)  # outside cube


def test_alpha_history_nonincreasing_and_gap():
    inst = gen_random_ds(6, "coverage_minus_coverage", 3)
    rep = solve(inst.f, inst.g)
    vals = [v for _, v in rep.alpha_history]
    assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
    assert rep.termination_reason == "optimal"
    assert rep.final_gap <= 1e-9 * max(1.0, abs(rep.optimal_value))


def test_trace_beta_nondecreasing():
    inst = gen_random_ds(5, "table_random_submodular_pair", 1)
    rep = solve(inst.f, inst.g, SolverConfig(trace_level=1))
    betas = [t["beta"] for t in rep.trace if t["iter"] >= 1]
    assert all(b >= a - 1e-12 for a, b in zip(betas, betas[1:]))


def test_never_deletes_the_optimum_prematurely():
    # while alpha exceeds the true optimum by more than eps, no deleted
    # region may contain the optimizer's characteristic vector
    for fam, seed in (("cut_minus_modular", 2), ("coverage_minus_coverage", 5),
                      ("table_random_submodular_pair", 4)):
        inst = gen_random_ds(5, fam, seed)
        opt_mask, opt_val = brute_force_ds_min(as_table(inst.f), as_table(inst.g))
        x_opt = indicator(opt_mask, inst.n)
        violations = []

        def observer(event, data):
            if event != "delete":
                return
            eps = 1e-9 * max(1.0, abs(opt_val))
            if data["alpha"] <= opt_val + eps:
                return
            lam = barycentric(data["simplex"], x_opt)
            if np.min(lam) >= -1e-9:
                violations.append(data["node_id"])

        rep = solve(inst.f, inst.g, observer=observer)
        assert rep.optimal_value == pytest.approx(opt_val, abs=1e-9)
        assert violations == []


def test_iteration_limit_reported():
    inst = gen_random_ds(6, "table_random_submodular_pair", 0)
    rep = solve(inst.f, inst.g, SolverConfig(max_iters=0))
    assert rep.termination_reason == "iteration_limit"
    assert rep.final_gap >= 0.0


def test_solver_matches_brute_force_spot():
    for n in (3, 4, 5):
        for fam in ("cut_minus_modular", "nuclear_minus_residual"):
            inst = gen_random_ds(n, fam, 11)
            rep = solve(inst.f, inst.g)
            _, best = brute_force_ds_min(as_table(inst.f), as_table(inst.g))
            assert rep.optimal_value == pytest.approx(best, abs=1e-8)


def test_initial_vertex_anchor_changes_search_not_answer():
    inst = gen_random_ds(4, "coverage_minus_coverage", 7)
    base = solve(inst.f, inst.g)
    for v in (1, 5, 15):
        rep = solve(inst.f, inst.g, SolverConfig(initial_vertex=v))
        assert rep.optimal_value == pytest.approx(base.optimal_value, abs=1e-9)
