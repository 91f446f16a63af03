import numpy as np
import pytest
from hypothesis import given, strategies as st

from partdos.graph import (GraphFormatError, connected_components,
                           degree_sequence, load_edge_list, make_caveman)

from conftest import data_file


def test_parse_basic_tokens_dense_first_appearance():
    g = load_edge_list("a b\nb c\n# comment\n\na a\n")
    assert g.n_nodes == 3
    assert g.tokens == ["a", "b", "c"]
    assert g.n_edges == 3
    assert g.two_e == 6
    # self-loop counts 2 towards its node's degree
    assert list(g.degrees) == [3, 2, 1]


def test_parse_duplicate_lines_are_multiedges():
    g = load_edge_list("0 1\n0 1\n")
    assert g.n_edges == 2
    assert list(g.degrees) == [2, 2]


def test_parse_errors_carry_line_numbers():
    with pytest.raises(GraphFormatError, match="line 2"):
        load_edge_list("0 1\n0 1 2\n")
    with pytest.raises(GraphFormatError, match="empty"):
        load_edge_list("# nothing\n\n")


@given(st.lists(st.tuples(st.integers(0, 15), st.integers(0, 15)),
                min_size=1, max_size=60))
def test_degree_sum_identity(pairs):
    g = load_edge_list("\n".join(f"{u} {v}" for u, v in pairs))
    assert g.degrees.sum() == g.two_e == 2 * g.n_edges
    assert np.array_equal(degree_sequence(g), g.degrees)


def test_stub_lists_match_degrees_and_endpoints():
    g = load_edge_list("0 1\n1 2\n2 2\n0 2\n")
    indptr, stubs = g.stub_lists()
    for u in range(g.n_nodes):
        assert indptr[u + 1] - indptr[u] == g.degrees[u]
    # the self-loop at node 2 lists node 2 twice in its own stub run
    run = list(stubs[indptr[2]:indptr[3]])
    assert run.count(2) == 2


def test_karate_dataset():
    g = load_edge_list(data_file("karate.txt").read_text())
    assert g.n_nodes == 34
    assert g.n_edges == 78
    assert g.two_e == 156


def test_caveman_counts_and_connectivity():
    g = make_caveman(20, 5)
    assert g.n_nodes == 100
    assert g.n_edges == 20 * 10  # n_cliques * C(s, 2)
    assert len(connected_components(g)) == 1
    # ring rewiring keeps every degree at clique_size - 1
    assert np.all(g.degrees == 4)


def test_caveman_tiny_counts():
    g = make_caveman(2, 2)
    assert g.n_edges == 2
    with pytest.raises(ValueError):
        make_caveman(1, 5)


def test_connected_components_split():
    g = load_edge_list("0 1\n2 3\n")
    comps = connected_components(g)
    assert sorted(map(tuple, comps)) == [(0, 1), (2, 3)]
