import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from declqr import (
    DirectedGraph,
    adjacency,
    has_loop,
    is_supergraph,
    isolated_nodes,
    sink_block_partition,
    sinks,
)


def test_edges_are_normalized_and_validated():
    g = DirectedGraph(3, [(1, 2), (1, 2), (3, 3)])
    assert g.edges == frozenset({(1, 2), (3, 3)})
    with pytest.raises(ValueError):
        DirectedGraph(2, [(0, 1)])
    with pytest.raises(ValueError):
        DirectedGraph(2, [(1, 3)])


def test_adjacency_orientation():
    # s[i-1, j-1] = 1 means j's state may enter i's dynamics
    g = DirectedGraph(2, [(1, 2)])
    s = adjacency(g)
    assert s[1, 0] == 1
    assert s.sum() == 1


def test_adjacency_round_trip(star_graph):
    assert DirectedGraph.from_adjacency(adjacency(star_graph)).edges == star_graph.edges


def test_sinks_chain():
    g = DirectedGraph.from_adjacency_lists(3, {1: [2], 2: [3]})
    assert sinks(g) == (3,)
    sbp = sink_block_partition(g)
    assert sbp.non_sinks == (1, 2)
    assert sbp.sinks == (3,)
    assert sbp.permutation == (1, 2, 3)


def test_self_loop_does_not_rescue_a_sink():
    g = DirectedGraph(2, [(1, 2), (2, 2)])
    assert sinks(g) == (2,)


def test_star_has_no_sinks(star_graph):
    assert sinks(star_graph) == ()
    assert isolated_nodes(star_graph) == ()


def test_sink_star_first_vertex_is_sink(sink_star_graph):
    assert sinks(sink_star_graph) == (1,)


def test_isolated_nodes():
    g = DirectedGraph(3, [(1, 2)])
    assert isolated_nodes(g) == (3,)


def test_supergraph():
    small = DirectedGraph(2, [(1, 2)])
    big = DirectedGraph(2, [(1, 2), (2, 1)])
    assert is_supergraph(big, small)
    assert not is_supergraph(small, big)
    with pytest.raises(ValueError):
        is_supergraph(big, DirectedGraph(3, []))


def test_complete_and_self_loops():
    assert len(DirectedGraph.complete(3).edges) == 9
    assert DirectedGraph.self_loops(3).edges == frozenset({(1, 1), (2, 2), (3, 3)})


def test_has_loop_self_loop_counts():
    found, witness = has_loop(DirectedGraph(2, [(1, 1), (1, 2)]))
    assert found
    assert witness == (1,)


def test_has_loop_cycle_witness():
    g = DirectedGraph(3, [(1, 2), (2, 3), (3, 1)])
    found, witness = has_loop(g)
    assert found
    assert len(witness) == 3
    for a, b in zip(witness, witness[1:] + witness[:1]):
        assert g.has_edge(a, b)


def test_acyclic_has_no_loop():
    assert not has_loop(DirectedGraph(3, [(1, 2), (2, 3)]))[0]


def test_sink_partition_renumbers_sinks_last():
    g = DirectedGraph(3, [(2, 1), (2, 3), (3, 2)])
    sbp = sink_block_partition(g)
    assert sbp.sinks == (1,)
    assert sbp.permutation == (2, 3, 1)
    assert sbp.s21.shape == (1, 2)


def test_sink_partition_case_flags(sink_star_graph):
    sbp = sink_block_partition(sink_star_graph)
    # non-sinks {2,3} couple both ways, the sink has no self-loop
    assert not sbp.s11_zero
    assert not sbp.s11_diagonal
    assert sbp.s22_zero


def test_sink_partition_flags_fed_sink():
    sbp = sink_block_partition(DirectedGraph(2, [(1, 2), (2, 2)]))
    assert sbp.s11_zero and sbp.s11_diagonal
    assert not sbp.s22_zero


graphs = st.builds(
    lambda q, pairs: DirectedGraph(q, [(1 + a % q, 1 + b % q) for a, b in pairs]),
    st.integers(min_value=1, max_value=6),
    st.lists(st.tuples(st.integers(0, 35), st.integers(0, 35)), max_size=12),
)


@settings(max_examples=150, deadline=None)
@given(graphs)
def test_no_sinks_no_isolated_implies_loop(g):
    if not sinks(g) and not isolated_nodes(g):
        assert has_loop(g)[0]


@settings(max_examples=150, deadline=None)
@given(graphs)
def test_adjacency_round_trip_property(g):
    assert DirectedGraph.from_adjacency(adjacency(g)).edges == g.edges


@settings(max_examples=150, deadline=None)
@given(graphs)
def test_sink_block_is_structurally_silent(g):
    sbp = sink_block_partition(g)
    s = adjacency(g)
    perm = [v - 1 for v in sbp.permutation]
    ps = s[np.ix_(perm, perm)]
    c = len(sbp.sinks)
    if c and c < g.q:
        assert not ps[: g.q - c, g.q - c:].any()


@settings(max_examples=150, deadline=None)
@given(graphs)
def test_sinks_have_no_cross_out_edges(g):
    snk = set(sinks(g))
    for (j, i) in g.edges:
        if j != i:
            assert j not in snk
