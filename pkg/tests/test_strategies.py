"""Synthesis rules: gains they produce and the rules they must obey."""

import numpy as np
import pytest

from declqr import (
    DirectedGraph,
    Gain,
    MatchingConditionError,
    Plant,
    Strategy,
    SubsystemPartition,
    check_matching_condition,
    closed_loop_cost,
    compliance_check,
    composed,
    deadbeat,
    get_strategy,
    necessary_conditions_probe,
    optimal_cost,
    random_plant,
    sink_aware,
    spectral_radius,
    underactuated_sink_aware,
)
from declqr.strategies import centralized_lqr

from conftest import random_block_graph, seeded_plants


def underactuated_example():
    """Two subsystems, scalar feeder into a two-state sink with one input."""
    part = SubsystemPartition([1, 2], input_dims=[1, 1])
    a = np.array([[0.0, 0.0, 0.0],
                  [1.0, 0.5, 0.0],
                  [0.0, 0.0, 0.0]])
    b = np.array([[1.0, 0.0],
                  [0.0, 1.0],
                  [0.0, 0.0]])
    g = DirectedGraph(2, [(1, 2), (2, 2)])
    return Plant(part, a, b, [1.0, 0.5, -0.5], 1.0), g


def test_deadbeat_cancels_dynamics():
    rng = np.random.default_rng(5)
    for t in range(25):
        g = random_block_graph(rng, int(rng.integers(1, 5)))
        p = random_plant(g, rng=rng)
        gain = deadbeat(p, g)
        assert np.linalg.norm(p.A + p.B @ gain.K, "fro") <= 1e-12
        assert spectral_radius(p.A + p.B @ gain.K) <= 1e-12


def test_deadbeat_rank_one_gain():
    g = DirectedGraph(2, [(2, 1)])
    eps = 0.5
    p = Plant(SubsystemPartition.scalars(2),
              [[0.0, 3.0], [0.0, 0.0]], np.eye(2) * eps, [0.0, 1.0], eps)
    gain = deadbeat(p, g)
    assert gain.K == pytest.approx(np.array([[0.0, -3.0 / eps], [0.0, 0.0]]))
    assert gain.sparsity_violations() == []


def test_deadbeat_needs_square_input_blocks():
    p, _ = underactuated_example()
    with pytest.raises(MatchingConditionError, match="square input block"):
        deadbeat(p)


def test_sink_aware_equals_deadbeat_without_sinks(star_graph):
    for p in seeded_plants(star_graph, 10, seed=31):
        assert np.array_equal(sink_aware(p, star_graph).K,
                              deadbeat(p, star_graph).K)


def test_sink_row_uses_local_dare():
    # sink 2 has A_22 = 0, so its local value matrix is the identity and
    # the row reduces to -(1 + b^2)^{-1} b [A]_2
    g = DirectedGraph(2, [(1, 2)])
    b1, b2, a = 1.5, 2.0, 0.7
    p = Plant(SubsystemPartition.scalars(2),
              [[0.0, 0.0], [a, 0.0]], np.diag([b1, b2]), [1.0, 1.0], 1.0)
    gain = sink_aware(p, g)
    assert gain.K[0] == pytest.approx([0.0, 0.0])
    assert gain.K[1, 0] == pytest.approx(-b2 * a / (1.0 + b2 ** 2))
    assert gain.K[1, 1] == 0.0


def test_synthesis_never_reads_x0(sink_star_graph):
    p = seeded_plants(sink_star_graph, 1, seed=8)[0]
    moved = p.with_x0(np.full(p.partition.n, 7.0))
    for synth in (deadbeat, sink_aware, centralized_lqr):
        assert np.array_equal(synth(p, sink_star_graph).K,
                              synth(moved, sink_star_graph).K)


def test_sink_aware_dominates_deadbeat(sink_star_graph):
    rng = np.random.default_rng(12)
    strict = 0
    for p in seeded_plants(sink_star_graph, 30, seed=12):
        for _ in range(4):
            q = p.with_x0(rng.normal(size=p.partition.n))
            j_theta = closed_loop_cost(q, sink_aware(q, sink_star_graph)).value
            j_delta = closed_loop_cost(q, deadbeat(q, sink_star_graph)).value
            assert j_theta <= j_delta + 1e-10
            strict += j_theta < j_delta - 1e-6
    assert strict > 0


def test_centralized_gain_attains_optimal_cost(star_graph):
    for p in seeded_plants(star_graph, 10, seed=4):
        gain = centralized_lqr(p)
        j = closed_loop_cost(p, gain).value
        assert j == pytest.approx(optimal_cost(p).value, rel=1e-8)
        assert j <= closed_loop_cost(p, deadbeat(p, star_graph)).value + 1e-9


def test_composed_rows_and_defaults():
    g = DirectedGraph(2, [(1, 2)])
    p = seeded_plants(g, 1, seed=2)[0]
    strat = composed({2: "local_dare"})
    assert np.array_equal(strat.synthesize(p, g).K, sink_aware(p, g).K)
    zero_tail = composed({2: "zero"}).synthesize(p, g)
    assert np.array_equal(zero_tail.K[0], deadbeat(p, g).K[0])
    assert not zero_tail.K[1].any()
    const = composed({1: [[0.25, -1.0]]}).synthesize(p, g)
    assert const.K[0] == pytest.approx([0.25, -1.0])


def test_composed_rejects_bad_rows():
    g = DirectedGraph(2, [(1, 2)])
    p = seeded_plants(g, 1, seed=2)[0]
    with pytest.raises(ValueError, match="unknown row kind"):
        composed({1: "riccati"}).synthesize(p, g)
    with pytest.raises(ValueError, match="must be 1x2"):
        composed({1: [[1.0, 2.0, 3.0]]}).synthesize(p, g)


def test_composed_name_canonical():
    assert composed({2: "zero"}).name == 'composed:{"2":"zero"}'
    assert composed({2: "zero", 1: "deadbeat"}).name == \
        'composed:{"1":"deadbeat","2":"zero"}'


def test_get_strategy_specs():
    assert get_strategy("deadbeat").name == "deadbeat"
    assert get_strategy("theta").name == "sink_aware"
    assert get_strategy("sink_aware").name == "sink_aware"
    assert get_strategy("lqr").name == "lqr"
    assert get_strategy("centralized").name == "lqr"
    assert get_strategy('composed:{"2":"zero"}').name == 'composed:{"2":"zero"}'
    assert get_strategy({"composed": {"2": "zero"}}).name == 'composed:{"2":"zero"}'
    with pytest.raises(ValueError, match="unknown strategy"):
        get_strategy("newton")
    with pytest.raises(ValueError, match="unknown strategy"):
        get_strategy({"composed": {}, "extra": 1})


def test_design_graphs_of_builtins():
    assert get_strategy("deadbeat").design_graph(3) == DirectedGraph.self_loops(3)
    assert get_strategy("theta").design_graph(3) == DirectedGraph.self_loops(3)
    assert get_strategy("lqr").design_graph(3) == DirectedGraph.complete(3)


def test_matching_condition_admits_example():
    p, g = underactuated_example()
    assert check_matching_condition(p, g) == []
    gain = underactuated_sink_aware(p, g)
    assert spectral_radius(p.A + p.B @ gain.K) < 1.0
    assert gain.K.shape == (2, 3)


def test_matching_condition_rejects_underactuated_nonsink():
    part = SubsystemPartition([2, 1], input_dims=[1, 1])
    a = np.zeros((3, 3))
    a[2, 0] = 1.0
    b = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
    g = DirectedGraph(2, [(1, 2)])
    p = Plant(part, a, b, [1.0, 0.0, 0.0], 1.0)
    failures = check_matching_condition(p, g)
    assert any("not a sink" in f for f in failures)
    with pytest.raises(MatchingConditionError, match="not a sink"):
        underactuated_sink_aware(p, g)


def test_matching_condition_rejects_span_escape():
    # coupling pushes the sink along a direction its single input cannot reach
    part = SubsystemPartition([1, 2], input_dims=[1, 1])
    a = np.array([[0.0, 0.0, 0.0],
                  [0.0, 0.0, 1.0],
                  [1.0, 0.0, 0.0]])
    b = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    g = DirectedGraph(2, [(1, 2), (2, 2)])
    failures = check_matching_condition(Plant(part, a, b, [1.0, 0.0, 0.0], 1.0), g)
    assert any("leaves span" in f for f in failures)


def test_matching_condition_rejects_uncontrollable_mode():
    part = SubsystemPartition([1, 2], input_dims=[1, 1])
    a = np.zeros((3, 3))
    a[1, 1] = 2.0
    b = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
    g = DirectedGraph(2, [(1, 2), (2, 2)])
    p = Plant(part, a, b, [1.0, 0.0, 0.0], 1.0)
    failures = check_matching_condition(p, g)
    assert any("uncontrollable" in f for f in failures)
    with pytest.raises(MatchingConditionError):
        underactuated_sink_aware(p, g)


def test_compliance_accepts_local_designs(sink_star_graph):
    local = DirectedGraph.self_loops(3)
    for spec in ("deadbeat", "theta"):
        report = compliance_check(get_strategy(spec), sink_star_graph,
                                  trials=8, design_graph=local)
        assert report.ok and report.information_ok and report.sparsity_ok
        assert report.trials > 0


def test_compliance_catches_centralized(sink_star_graph):
    report = compliance_check(get_strategy("lqr"), sink_star_graph, trials=8,
                              design_graph=DirectedGraph.self_loops(3))
    assert not report.ok and not report.information_ok
    assert report.witness is not None
    assert report.witness.subsystem in (1, 2, 3)
    assert report.witness.deviation > 0.0


def test_compliance_catches_sparsity_lie(star_graph):
    def synth(plant, plant_graph):
        honest = centralized_lqr(plant)
        return Gain(K=honest.K, partition=honest.partition,
                    sparsity=DirectedGraph.self_loops(plant.q))

    liar = Strategy(name="liar", design=DirectedGraph.complete, synth=synth)
    report = compliance_check(liar, star_graph, trials=2)
    assert not report.sparsity_ok and not report.ok
    assert "gain block" in report.witness.kind


def test_necessary_conditions_probe_passes_deadbeat():
    g = DirectedGraph(3, [(1, 2), (2, 3)])
    report = necessary_conditions_probe(get_strategy("deadbeat"), g, trials=6)
    assert report.zero_pattern_ok and report.decoupling_ok
    assert report.columns_checked > 0 and report.blocks_checked > 0


def test_necessary_conditions_probe_flags_zero_row():
    # subsystem 2 is fed by 1 and feeds 3, so zeroing its row skips a
    # cancellation every finite-ratio design must perform
    g = DirectedGraph(3, [(1, 2), (2, 3)])
    report = necessary_conditions_probe(composed({2: "zero"}), g, trials=6)
    assert not report.decoupling_ok
    assert report.decoupling_violations[0][1:3] == (2, 1)


def test_necessary_conditions_probe_flags_dense_constant():
    g = DirectedGraph(3, [(1, 2), (2, 3)])
    report = necessary_conditions_probe(composed({1: np.full((1, 3), 0.3)}), g,
                                        trials=4)
    assert not report.zero_pattern_ok


def test_gain_sparsity_tolerance(scalar3, star_graph):
    k = np.zeros((3, 3))
    k[0, 2] = 5e-13
    gain = Gain(K=k, partition=scalar3, sparsity=star_graph)
    assert gain.sparsity_violations(tol=1e-12) == []
    bad = gain.sparsity_violations(tol=0.0)
    assert len(bad) == 1 and "no edge 3->1" in bad[0]
