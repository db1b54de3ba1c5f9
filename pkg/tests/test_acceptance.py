"""Acceptance checks: one test per release gate, summarized after the run.

Each test freezes an independently derived expectation (closed forms,
rollout oracles, byte comparisons) and checks the library against it at
the stated tolerance.
"""

import math
import time

import numpy as np
import pytest

from declqr import (
    DirectedGraph,
    DominationConfig,
    Plant,
    RatioConfig,
    SubsystemPartition,
    check_matching_condition,
    closed_loop_cost,
    compliance_check,
    competitive_ratio_estimate,
    domination_compare,
    generate_example_scenarios,
    get_strategy,
    load_scenario,
    optimal_cost,
    optimal_vs_deadbeat_bound,
    random_plant,
    run,
    selfloop_optimal_cost,
    sink_selfloop_cost_coefficients,
    solve_dare,
    spectral_radius,
    truncated_cost_oracle,
    underactuated_sink_aware,
)
from declqr.analysis import adversarial_family
from declqr.strategies import centralized_lqr, composed, deadbeat, sink_aware

from conftest import nilpotent_sink_graph, random_block_graph

CROSS_EDGE_GRAPH = DirectedGraph(2, [(1, 2)])
FED_SINK_GRAPH = DirectedGraph(2, [(1, 2), (2, 2)])


def test_criterion_01_deadbeat_ratio_closed_form():
    cfg = RatioConfig(families=("rank_one_cross",), random_trials=0, x0_random=0)
    start = time.perf_counter()
    for eps, want in ((0.5, 5.0), (1.0, 2.0), (2.0, 1.25)):
        rep = competitive_ratio_estimate(get_strategy("deadbeat"), CROSS_EDGE_GRAPH,
                                         epsilon=eps, config=cfg)
        assert rep.estimated_ratio == pytest.approx(want, rel=1e-9)
    assert time.perf_counter() - start < 1.0


def test_criterion_02_dare_rank_one_closed_form():
    rng = np.random.default_rng(42)
    for _ in range(10):
        n = int(rng.integers(2, 13))
        i1, j1 = (int(v) for v in rng.choice(n, size=2, replace=False))
        eps = float(rng.uniform(0.5, 2.0))
        a = np.zeros((n, n))
        a[i1, j1] = 1.0
        sol = solve_dare(a, eps * np.eye(n))
        expected = np.eye(n)
        expected[j1, j1] += 1.0 / (1.0 + eps * eps)
        assert np.abs(sol.X - expected).max() <= 1e-10


def test_criterion_03_costs_match_rollouts():
    start = time.perf_counter()
    checked = 0
    for t in range(200):
        rng = np.random.default_rng([2024, t])
        q = int(rng.integers(1, 6))
        g = random_block_graph(rng, q)
        dims = [int(rng.integers(1, 4)) for _ in range(q)]
        p = random_plant(g, SubsystemPartition(dims), rng=rng)
        for spec in ("deadbeat", "theta", "lqr"):
            gain = get_strategy(spec).synthesize(p, g)
            rep = closed_loop_cost(p, gain)
            rho = spectral_radius(p.A + p.B @ gain.K)
            if rho <= 0.9 and math.isfinite(rep.value):
                trunc = truncated_cost_oracle(p, gain)
                assert abs(rep.value - trunc) <= 1e-8 * max(abs(rep.value), abs(trunc))
                checked += 1
    assert checked >= 300
    assert time.perf_counter() - start < 30.0


def test_criterion_04_cost_floor_holds_and_is_tight():
    for t in range(500):
        rng = np.random.default_rng([404, t])
        q = int(rng.integers(1, 5))
        g = random_block_graph(rng, q)
        p = random_plant(g, rng=rng)
        assert optimal_vs_deadbeat_bound(p, g, slack=1e-10).holds
    tight = optimal_vs_deadbeat_bound(
        adversarial_family("rank_one_cross", CROSS_EDGE_GRAPH), CROSS_EDGE_GRAPH)
    assert abs(tight.optimal_cost - tight.factor * tight.deadbeat_cost) <= 1e-9


def test_criterion_05_selfloop_cost_closed_form():
    for r in np.geomspace(1e-3, 1e3, 13):
        for eps in (0.5, 1.0, 2.0):
            p = Plant(SubsystemPartition.scalars(1), [[float(r)]], [[eps]],
                      [1.0], eps)
            assert optimal_cost(p).value == pytest.approx(
                selfloop_optimal_cost(float(r), eps), rel=1e-8)
    one = Plant(SubsystemPartition.scalars(1), [[1.0]], [[1.0]], [1.0], 1.0)
    assert optimal_cost(one).value == pytest.approx((math.sqrt(5.0) - 1.0) / 2.0,
                                                    rel=1e-8)


def test_criterion_06_fed_sink_coefficients_match_oracles():
    for r in np.geomspace(1e-3, 1e3, 7):
        for s in np.geomspace(1e-3, 1e6, 7):
            for eps in (0.5, 1.0, 2.0):
                beta_strategy, beta_optimal = sink_selfloop_cost_coefficients(
                    float(r), float(s), eps)
                p = adversarial_family("sink_selfloop", FED_SINK_GRAPH, epsilon=eps,
                                       params={"r": float(r), "s": float(s)})
                j_theta = closed_loop_cost(p, sink_aware(p, FED_SINK_GRAPH)).value
                j_star = optimal_cost(p).value
                assert j_theta == pytest.approx(beta_strategy * s * s, rel=1e-8)
                assert j_star == pytest.approx(beta_optimal * s * s, rel=1e-8)
    bs, bo = sink_selfloop_cost_coefficients(1e3, 1e6, 1.0)
    assert bs / bo == pytest.approx(2.0, abs=1e-2)


def test_criterion_07_sink_aware_optimal_on_nilpotent_structure():
    ratios = set()
    for t in range(50):
        rng = np.random.default_rng([77, t])
        q = int(rng.integers(2, 6))
        g = nilpotent_sink_graph(rng, q)
        p = random_plant(g, rng=rng)
        assert np.abs(sink_aware(p, g).K - centralized_lqr(p).K).max() <= 1e-10
        rep = competitive_ratio_estimate(
            get_strategy("theta"), g,
            config=RatioConfig(random_trials=4, x0_random=2, seed=t))
        ratios.add(rep.estimated_ratio)
    assert ratios == {1.0}


def test_criterion_08_sink_aware_dominates_deadbeat():
    graphs = [
        DirectedGraph(3, [(2, 1), (2, 2), (2, 3), (3, 2)]),
        DirectedGraph(3, [(1, 2), (2, 3)]),
        DirectedGraph(3, [(1, 2), (2, 2), (2, 3), (3, 3)]),
    ]
    total = 0
    best_gap = 0.0
    for gi, g in enumerate(graphs):
        rep = domination_compare(get_strategy("theta"), get_strategy("deadbeat"), g,
                                 config=DominationConfig(plants=100, seed=gi,
                                                         slack=1e-12))
        assert rep.verdict == "first-dominates-on-sample"
        assert rep.max_violation == 0.0
        total += rep.samples
        w = rep.strict_witness
        best_gap = max(best_gap, w.cost_second - w.cost_first)
    assert total == 300 * 11
    assert best_gap > 1e-6


def test_criterion_09_deadbeat_cancels_every_plant():
    for t in range(60):
        rng = np.random.default_rng([91, t])
        q = int(rng.integers(1, 6))
        g = random_block_graph(rng, q)
        dims = [int(rng.integers(1, 4)) for _ in range(q)]
        p = random_plant(g, SubsystemPartition(dims),
                         epsilon=float(rng.uniform(0.3, 2.0)),
                         magnitude=float(rng.uniform(0.5, 3.0)), rng=rng)
        gain = deadbeat(p, g)
        assert np.linalg.norm(p.A + p.B @ gain.K, "fro") <= 1e-12


def test_criterion_10_blind_design_pays_path_floor():
    # row 2 keeps its communication-less rule no matter what subsystem 3 does
    blind = composed({2: "deadbeat"})
    g = DirectedGraph(3, [(1, 2), (2, 3)])
    cfg = RatioConfig(families=("path",), random_trials=0, x0_random=0)
    rep = competitive_ratio_estimate(blind, g, config=cfg)
    assert rep.estimated_ratio >= 2.0 - 1e-6


def test_criterion_11_underactuated_example(tmp_path):
    paths = {p.split("/")[-1]: p for p in generate_example_scenarios(tmp_path)}
    sc = load_scenario(paths["underactuated_cost.json"])
    p, g = sc.plant, sc.plant_graph
    assert check_matching_condition(p, g) == []
    gain = underactuated_sink_aware(p, g)
    assert spectral_radius(p.A + p.B @ gain.K) < 1.0
    part = p.partition
    x22 = solve_dare(part.block(p.A, 2, 2), part.input_block(p.B, 2)).X
    b22 = part.input_block(p.B, 2)
    z = part.row_block(p.A, 2) @ p.x0
    predicted = float(z @ np.linalg.solve(np.linalg.inv(x22) + b22 @ b22.T, z))
    assert closed_loop_cost(p, gain).value == pytest.approx(predicted, rel=1e-8)


def test_criterion_12_compliance_verdicts(star_graph):
    local = DirectedGraph.self_loops(3)
    for spec in ("deadbeat", "theta"):
        rep = compliance_check(get_strategy(spec), star_graph, trials=32,
                               design_graph=local)
        assert rep.ok
    bad = compliance_check(get_strategy("lqr"), star_graph, trials=32,
                           design_graph=local)
    assert not bad.ok
    assert bad.witness is not None and bad.witness.subsystem >= 1
    assert bad.witness.deviation > 0.0


def test_criterion_13_jobs_invariant_artifacts(tmp_path):
    paths = {p.split("/")[-1]: p for p in generate_example_scenarios(tmp_path / "s")}
    outs = []
    for jobs in (1, 4):
        out = tmp_path / f"out{jobs}"
        assert run(paths["star_theorems.json"], out_dir=str(out), jobs=jobs) == 0
        outs.append({name: (out / name).read_bytes()
                     for name in ("report.csv", "sweep.csv", "report.txt")})
    assert outs[0] == outs[1]
