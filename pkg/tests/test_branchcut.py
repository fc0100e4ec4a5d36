import math

import pytest

from cksub.branchcut import (CONFIGS, BranchAndCut, SolverConfig, WeightedInstance, gap_percent,
                             lazy_integral_check, solve_mws, verify_subpartition)
from cksub.graph import Graph, cycle_graph, path_graph
from cksub.lab import check_validity, mws_optimum

from cases import STAR
from oracles import random_graph, seeded

P3 = path_graph(3)


def point(n, k, classes):
    x = [[0.0] * k for _ in range(n)]
    for c, block in enumerate(classes):
        for v in block:
            x[v][c] = 1.0
    return x


def test_p3_examples():
    one = solve_mws(WeightedInstance(P3, (5, -1, 5), 1))
    assert one.status == "optimal" and one.objective == 9 and one.classes == (frozenset({0, 1, 2}),)
    two = solve_mws(WeightedInstance(P3, (5, -1, 5), 2))
    assert two.objective == 10 and set(two.classes) == {frozenset({0}), frozenset({2})}
    assert two.gap == 0 and two.bound == 10


@pytest.mark.parametrize("cfg", list(CONFIGS))
def test_all_negative_gives_empty(cfg):
    rep = solve_mws(WeightedInstance(cycle_graph(4), (-1, -2, -3, -4), 2), SolverConfig(cuts=cfg))
    assert rep.objective == 0 and rep.classes == (frozenset(), frozenset()) and rep.status == "optimal"


def test_lazy_check_examples():
    inst = WeightedInstance(P3, (1, 1, 1), 1)
    (cut,) = lazy_integral_check(inst, point(3, 1, [{0, 2}]))
    assert str(cut) == "ineq connectivity 1 { (1,1):1 (2,1):-1 (3,1):1 }"
    assert lazy_integral_check(inst, point(3, 1, [{0, 1}])) is None
    c4 = WeightedInstance(cycle_graph(4), (1,) * 4, 2)
    (cut,) = lazy_integral_check(c4, point(4, 2, [set(), {0, 2}]))
    assert str(cut) == "ineq connectivity 1 { (1,2):1 (2,2):-1 (3,2):1 (4,2):-1 }"
    three = WeightedInstance(Graph(4), (1,) * 4, 1)
    assert len(lazy_integral_check(three, point(4, 1, [{0, 1, 3}]))) == 2


def test_gap_and_config_errors():
    assert gap_percent(10, 12) == pytest.approx(20)
    assert gap_percent(0, 3) == pytest.approx(300)
    assert gap_percent(-2, -1) == pytest.approx(50)
    with pytest.raises(ValueError):
        SolverConfig(cuts="bogus")
    with pytest.raises(ValueError):
        WeightedInstance(P3, (1, 2), 1)
    with pytest.raises(ValueError):
        WeightedInstance(P3, (1, 2, 3), 0)


def test_verify_subpartition():
    assert verify_subpartition(P3, (frozenset({0, 1}), frozenset({2})))
    assert not verify_subpartition(P3, (frozenset({0, 2}),))
    assert not verify_subpartition(P3, (frozenset({0, 1}), frozenset({1})))


def test_limits():
    rng = seeded(11)
    g = random_graph(rng, 12, 0.3)
    inst = WeightedInstance(g, tuple(rng.randint(-50, 50) for _ in range(12)), 3)
    stopped = solve_mws(inst, SolverConfig(node_limit=0))
    assert stopped.status == "limit" and stopped.nodes == 0 and not stopped.hit_time_limit
    assert stopped.bound == sum(w for w in inst.weights if w > 0) and stopped.gap > 0
    timed = solve_mws(inst, SolverConfig(time_limit=0.0))
    assert timed.hit_time_limit and timed.status == "limit"
    opt = mws_optimum(g, inst.weights, 3)[0]
    for lim in (1, 2, 5):
        rep = solve_mws(inst, SolverConfig(cuts="bc+m", node_limit=lim))
        assert rep.objective <= opt <= rep.bound + 1e-9
        assert verify_subpartition(g, rep.classes)
        assert rep.objective == sum(inst.weights[v] for b in rep.classes for v in b)


def test_fractional_root_gets_family_cuts():
    # star with four heavy leaves: the root LP is fractional and multiway cuts apply
    inst = WeightedInstance(STAR, (-1, 10, 10, 10), 2)
    for cfg in CONFIGS:
        rep = solve_mws(inst, SolverConfig(cuts=cfg))
        assert rep.objective == 29
    rep = solve_mws(inst, SolverConfig(cuts="bc+m"))
    assert rep.root_bound <= solve_mws(inst, SolverConfig(cuts="bc")).root_bound + 1e-9


def test_matches_oracle_and_configs_agree():
    rng = seeded(2024)
    for _ in range(12):
        n, k = rng.randint(5, 10), rng.randint(1, 3)
        g = random_graph(rng, n, rng.choice([0.2, 0.35, 0.5]))
        inst = WeightedInstance(g, tuple(rng.randint(-50, 50) for _ in range(n)), k)
        opt = mws_optimum(g, inst.weights, k)[0]
        for cfg in CONFIGS:
            rep = solve_mws(inst, SolverConfig(cuts=cfg))
            assert rep.status == "optimal" and rep.objective == opt, (cfg, n, k)
            assert rep.root_bound >= opt - 1e-6


def test_every_added_cut_is_valid():
    added = []

    class Recording(BranchAndCut):
        def _add(self, ineq):
            added.append(ineq)
            return super()._add(ineq)

    rng = seeded(99)
    for _ in range(4):
        n, k = rng.randint(5, 7), 2
        g = random_graph(rng, n, 0.4)
        inst = WeightedInstance(g, tuple(rng.randint(-50, 50) for _ in range(n)), k)
        for cfg in ("bc+i", "bc+m"):
            Recording(inst, SolverConfig(cuts=cfg)).run()
        for q in set(added):
            assert check_validity(g, k, q).valid
        added.clear()


def test_deterministic_reports():
    rng = seeded(5)
    g = random_graph(rng, 12, 0.3)
    inst = WeightedInstance(g, tuple(rng.randint(-50, 50) for _ in range(12)), 2)
    a = solve_mws(inst, SolverConfig(cuts="bc+g"))
    b = solve_mws(inst, SolverConfig(cuts="bc+g"))
    assert (a.objective, a.classes, a.nodes, a.cuts, a.root_bound) == (b.objective, b.classes, b.nodes, b.cuts,
                                                                       b.root_bound)
    assert not math.isnan(a.root_bound)
    assert "gap = (bound - objective) / max(1, |objective|) * 100" in a.text()
