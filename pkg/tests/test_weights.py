from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from distnesterov.errors import NumericalError, StructuralInputError
from distnesterov.graph import Digraph, cycle_digraph, generate_nearest_neighbor_digraph
from distnesterov.weights import (
    Kind, Side, StochasticMatrix, limit_matrix, perron_vector, power_limit_residual,
    similarity_transform_check, uniform_column_stochastic, uniform_row_stochastic, validate,
)

import oracles

# 4-node digraph 0->1->2->3->0 plus 0->2; Perron vectors solved exactly by the oracle
EDGES4 = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]
ROW_LEFT4 = [Fraction(4, 13), Fraction(2, 13), Fraction(3, 13), Fraction(4, 13)]
COL_RIGHT4 = [Fraction(3, 13), Fraction(2, 13), Fraction(4, 13), Fraction(4, 13)]

B2 = StochasticMatrix([[0.5, 1.0], [0.5, 0.0]], Kind.COLUMN)


def test_single_node_weights():
    g = Digraph(1, ((),))
    assert uniform_row_stochastic(g).entries.tolist() == [[1.0]]
    assert uniform_column_stochastic(g).entries.tolist() == [[1.0]]


def test_cycle_rows_are_halves():
    a = uniform_row_stochastic(cycle_digraph(3)).entries
    for row in a:
        assert sorted(row[row > 0]) == [0.5, 0.5]


def test_out_degree_three_column():
    g = Digraph.from_edges(4, [(0, 1), (0, 2), (1, 0), (2, 0), (3, 0), (0, 3)])
    b = uniform_column_stochastic(g).entries
    col = b[:, 0]
    # node 0 reaches itself and 1, 2, 3
    assert np.allclose(col[col > 0], 0.25) and np.count_nonzero(col) == 4
    assert np.allclose(b[b[:, 1] > 0, 1], 0.5)


def test_weights_match_oracle():
    g = Digraph.from_edges(4, EDGES4)
    assert np.array_equal(uniform_row_stochastic(g).entries, oracles.row_weights(4, EDGES4))
    assert np.array_equal(uniform_column_stochastic(g).entries, oracles.col_weights(4, EDGES4))


def test_symmetric_regular_graph_doubly_stochastic():
    ring = [(i, (i + 1) % 6) for i in range(6)] + [((i + 1) % 6, i) for i in range(6)]
    g = Digraph.from_edges(6, ring)
    a, b = uniform_row_stochastic(g).entries, uniform_column_stochastic(g).entries
    assert np.allclose(a, b)
    assert np.allclose(b.sum(axis=0), 1) and np.allclose(b.sum(axis=1), 1)


def test_matrix_is_read_only():
    a = uniform_row_stochastic(cycle_digraph(3))
    with pytest.raises(ValueError):
        a.entries[0, 0] = 2.0


def test_validate_rejects_bad_sums_and_support():
    with pytest.raises(StructuralInputError):
        validate(StochasticMatrix([[0.5, 0.4], [0.5, 0.6]], Kind.ROW))
    with pytest.raises(StructuralInputError):
        validate(StochasticMatrix([[1.2, -0.2], [0.5, 0.5]], Kind.ROW))
    g = Digraph.from_edges(2, [(0, 1), (1, 0)])
    with pytest.raises(StructuralInputError):
        validate(StochasticMatrix([[0.0, 1.0], [0.5, 0.5]], Kind.ROW), g)
    g = Digraph.from_edges(2, [(0, 1)])
    with pytest.raises(StructuralInputError):
        validate(StochasticMatrix([[0.5, 0.5], [0.5, 0.5]], Kind.ROW), g)


def test_non_square_rejected():
    with pytest.raises(StructuralInputError):
        StochasticMatrix(np.ones((2, 3)) / 3, Kind.ROW)


def test_perron_two_by_two():
    assert np.allclose(perron_vector(B2, Side.RIGHT), [2 / 3, 1 / 3], atol=1e-12)


def test_perron_single_node():
    assert perron_vector(StochasticMatrix([[1.0]], Kind.ROW), Side.LEFT).tolist() == [1.0]


def test_perron_doubly_stochastic_uniform():
    m = StochasticMatrix(np.full((5, 5), 0.2), Kind.ROW)
    for side in Side:
        assert np.allclose(perron_vector(m, side), 0.2, atol=1e-12)


def test_perron_matches_exact_solution():
    g = Digraph.from_edges(4, EDGES4)
    w = perron_vector(uniform_row_stochastic(g), Side.LEFT, tol=1e-15)
    v = perron_vector(uniform_column_stochastic(g), Side.RIGHT, tol=1e-15)
    assert np.allclose(w, [float(f) for f in ROW_LEFT4], atol=1e-14)
    assert np.allclose(v, [float(f) for f in COL_RIGHT4], atol=1e-14)


def test_perron_periodic_raises():
    bipartite = StochasticMatrix([[0.0, 0.5, 0.5], [1.0, 0.0, 0.0], [1.0, 0.0, 0.0]], Kind.ROW)
    with pytest.raises(NumericalError):
        perron_vector(bipartite, Side.LEFT, max_iter=1000)


def test_perron_reducible_raises():
    absorbing = StochasticMatrix([[1.0, 0.0], [0.5, 0.5]], Kind.ROW)
    with pytest.raises(NumericalError):
        perron_vector(absorbing, Side.LEFT)


def test_similarity_transform_examples():
    at = similarity_transform_check(B2, np.array([2 / 3, 1 / 3]))
    assert np.allclose(at.entries, [[0.5, 0.5], [1.0, 0.0]], atol=1e-15)
    assert at.kind is Kind.ROW
    one = similarity_transform_check(StochasticMatrix([[1.0]], Kind.COLUMN), np.array([1.0]))
    assert one.entries.tolist() == [[1.0]]
    ds = StochasticMatrix(np.full((3, 3), 1 / 3), Kind.COLUMN)
    assert np.allclose(similarity_transform_check(ds, np.full(3, 1 / 3)).entries, ds.entries)


def test_similarity_transform_errors():
    with pytest.raises(NumericalError):
        similarity_transform_check(B2, np.array([1.0, 0.0]))
    with pytest.raises(StructuralInputError):
        similarity_transform_check(StochasticMatrix([[1.0]], Kind.ROW), np.array([1.0]))


def test_power_limit_residual():
    a = StochasticMatrix([[0.5, 0.5], [0.5, 0.5]], Kind.ROW)
    assert power_limit_residual(a, 200) <= 1e-10
    two = StochasticMatrix([[0.5, 0.5], [1.0, 0.0]], Kind.ROW)
    assert power_limit_residual(two, 200) <= 1e-10
    assert power_limit_residual(two, 0) > 0
    assert power_limit_residual(StochasticMatrix([[1.0]], Kind.ROW), 7) == 0.0


def test_limit_matrix_shapes():
    g = Digraph.from_edges(4, EDGES4)
    la = limit_matrix(uniform_row_stochastic(g))
    lb = limit_matrix(uniform_column_stochastic(g))
    assert np.allclose(la[0], [float(f) for f in ROW_LEFT4])
    assert np.allclose(lb[:, 0], [float(f) for f in COL_RIGHT4])


def test_to_csv_roundtrip(tmp_path):
    a = uniform_row_stochastic(generate_nearest_neighbor_digraph(6, 0.5, seed=2))
    path = tmp_path / "a.csv"
    a.to_csv(path)
    assert np.array_equal(np.loadtxt(path, delimiter=","), a.entries)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 20), radius=st.floats(0.1, 1.0), seed=st.integers(0, 10**6))
def test_random_graph_weights_valid_and_transform_row_stochastic(n, radius, seed):
    g = generate_nearest_neighbor_digraph(n, radius, seed)
    a, b = uniform_row_stochastic(g), uniform_column_stochastic(g)
    validate(a, g)
    validate(b, g)
    v = perron_vector(b, Side.RIGHT, tol=1e-15)
    assert np.max(np.abs(b.entries @ v - v)) <= 1e-10
    similarity_transform_check(b, v)
