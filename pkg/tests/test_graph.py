import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from distnesterov.errors import ParameterError, StructuralInputError
from distnesterov.graph import (
    Digraph, cycle_digraph, generate_nearest_neighbor_digraph, in_degree, is_strongly_connected,
    out_degree,
)

import oracles


def test_three_cycle_is_strongly_connected():
    assert is_strongly_connected(Digraph.from_edges(3, [(0, 1), (1, 2), (2, 0)]))


def test_one_way_pair_is_not():
    assert not is_strongly_connected(Digraph.from_edges(2, [(0, 1)]))


def test_single_node():
    g = Digraph(1, ((),))
    assert is_strongly_connected(g)
    assert out_degree(g, 0) == 1
    assert g.in_neighbors == (frozenset({0}),)


def test_out_degree_on_cycle():
    g = cycle_digraph(3)
    assert [out_degree(g, i) for i in range(3)] == [2, 2, 2]


def test_self_loops_always_present():
    g = Digraph(3, ((1,), (2,), (0,)))
    for i in range(3):
        assert i in g.in_neighbors[i] and i in g.out_neighbors[i]
    assert g.num_edges == 3


@pytest.mark.parametrize("bad", [((5,), (), ()), ((0,), (-1,), ()), (("a",), (), ())])
def test_malformed_neighbors_rejected(bad):
    with pytest.raises(StructuralInputError):
        Digraph(3, bad)


def test_wrong_set_count_rejected():
    with pytest.raises(StructuralInputError):
        Digraph(3, ((), ()))


def test_degree_index_checked():
    with pytest.raises(StructuralInputError):
        out_degree(cycle_digraph(3), 3)


def test_adjacency_orientation():
    g = Digraph.from_edges(2, [(0, 1)])
    adj = g.adjacency()
    assert adj[1, 0] and not adj[0, 1]


def test_out_degree_matches_transposed_adjacency():
    g = generate_nearest_neighbor_digraph(12, 0.4, seed=5)
    adj = g.adjacency()
    for i in range(g.n):
        assert out_degree(g, i) == adj[:, i].sum()
        assert in_degree(g, i) == adj[i, :].sum()


def test_json_roundtrip():
    g = generate_nearest_neighbor_digraph(8, 0.5, seed=1)
    back = Digraph.from_json(json.loads(json.dumps(g.to_json())))
    assert back == g


def test_from_json_missing_key():
    with pytest.raises(StructuralInputError):
        Digraph.from_json({"n": 2})


def test_generator_single_node():
    g = generate_nearest_neighbor_digraph(1, 0.3, seed=0)
    assert g.n == 1 and g.num_edges == 0


def test_generator_zero_radius_falls_back_to_cycle():
    g = generate_nearest_neighbor_digraph(30, 0.0, seed=3)
    assert is_strongly_connected(g)
    # nothing is geometric, so every edge comes from the repair cycle
    assert g.num_edges <= 30


def test_generator_rejects_bad_parameters():
    with pytest.raises(ParameterError):
        generate_nearest_neighbor_digraph(0, 0.5, seed=0)
    with pytest.raises(ParameterError):
        generate_nearest_neighbor_digraph(5, 1.5, seed=0)


def test_generator_is_reproducible():
    a = generate_nearest_neighbor_digraph(20, 0.35, seed=11)
    b = generate_nearest_neighbor_digraph(20, 0.35, seed=11)
    assert a == b
    assert a != generate_nearest_neighbor_digraph(20, 0.35, seed=12)


def test_study_radii_strictly_increase_edges():
    counts = [generate_nearest_neighbor_digraph(30, r, seed=0).num_edges for r in (0.3, 0.45, 0.7)]
    assert counts[0] < counts[1] < counts[2]


def test_larger_radius_gives_supergraph():
    small = set(generate_nearest_neighbor_digraph(30, 0.2, seed=4).edges())
    large = set(generate_nearest_neighbor_digraph(30, 0.6, seed=4).edges())
    # the repair cycle may differ, so compare only the geometric part loosely
    assert len(small - large) <= 30


def test_generated_graph_is_genuinely_directed():
    g = generate_nearest_neighbor_digraph(30, 0.45, seed=0)
    edges = set(g.edges())
    one_way = [e for e in edges if (e[1], e[0]) not in edges]
    assert one_way


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 25), radius=st.floats(0.0, 1.4), seed=st.integers(0, 2**32 - 1))
def test_generated_graphs_strongly_connected(n, radius, seed):
    g = generate_nearest_neighbor_digraph(n, radius, seed)
    assert is_strongly_connected(g)
    assert oracles.strongly_connected(n, g.edges())


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 8), data=st.data())
def test_connectivity_agrees_with_oracle(n, data):
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    g = Digraph.from_edges(n, edges)
    assert is_strongly_connected(g) == oracles.strongly_connected(n, edges)


def test_adjacency_is_boolean_square():
    adj = cycle_digraph(4).adjacency()
    assert adj.dtype == bool and adj.shape == (4, 4)
    assert np.all(np.diag(adj))
