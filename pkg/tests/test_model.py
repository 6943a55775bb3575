import itertools

import pytest

from dpchroma.errors import InvalidParameterError
from dpchroma.model import (
    Graph,
    all_permutations,
    assignment_colors,
    assignment_index,
    complete_bipartite,
    compose,
    cycle,
    graph_from_text,
    graph_to_text,
    identity,
    invert,
)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_permutation_laws_exhaustive(k):
    ident = identity(k)
    for p in all_permutations(k):
        assert invert(invert(p)) == p
        assert compose(p, invert(p)) == ident
        assert compose(invert(p), p) == ident
        assert compose(ident, p) == p
        assert compose(p, ident) == p


def test_compose_applies_right_first():
    p, q = (2, 0, 1), (1, 2, 0)
    r = compose(p, q)
    for i in range(3):
        assert r[i] == p[q[i]]


def test_invert_swap_is_involution():
    assert invert((1, 0)) == (1, 0)


def test_permutation_size_mismatch():
    with pytest.raises(InvalidParameterError):
        compose((0, 1), (0, 1, 2))


# --- assignment encoding --------------------------------------------------

def brute_index(colors, k):
    # the stated rule, written independently: digit i has weight k**i
    return sum(c * k**i for i, c in enumerate(colors))


def test_assignment_index_k2_enumerated():
    # all four arrays for k=2, expected values from the independent rule
    expect = {(0, 0): 0, (1, 0): 1, (0, 1): 2, (1, 1): 3}
    for colors, idx in expect.items():
        assert brute_index(colors, 2) == idx
        assert assignment_index(colors) == idx


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_assignment_round_trip(k):
    for idx in range(k**k):
        colors = assignment_colors(idx, k)
        assert assignment_index(colors, k) == idx
        assert brute_index(colors, k) == idx


def test_assignment_bounds():
    with pytest.raises(InvalidParameterError):
        assignment_colors(4, 2)
    with pytest.raises(InvalidParameterError):
        assignment_index((0, 2), 2)


# --- graphs ---------------------------------------------------------------

def test_complete_bipartite_smallest():
    g = complete_bipartite(1, 1)
    assert g.vertex_count == 2 and g.edges == ((0, 1),)


def test_complete_bipartite_k22_is_four_cycle():
    g = complete_bipartite(2, 2)
    assert g.vertex_count == 4 and g.edge_count == 4
    assert all(sum(1 for e in g.edges if v in e) == 2 for v in range(4))
    # explicit isomorphism with cycle(4): 0->0, 1->2, 2->1, 3->3
    relabel = {0: 0, 1: 2, 2: 1, 3: 3}
    mapped = {tuple(sorted((relabel[u], relabel[v]))) for u, v in cycle(4).edges}
    assert mapped == set(g.edges)


def test_complete_bipartite_counts():
    g = complete_bipartite(3, 6)
    assert g.vertex_count == 9 and g.edge_count == 18


@pytest.mark.parametrize("k,t", [(2, 3), (3, 2), (4, 4)])
def test_complete_bipartite_sides_independent(k, t):
    g = complete_bipartite(k, t)
    assert g.edge_count == k * t
    left, right = g.bipartition
    for side in (set(left), set(right)):
        assert not any(u in side and v in side for u, v in g.edges)


def test_complete_bipartite_rejects_empty_side():
    with pytest.raises(InvalidParameterError):
        complete_bipartite(0, 1)
    with pytest.raises(InvalidParameterError):
        complete_bipartite(1, 0)


def test_cycle():
    assert cycle(3).edges == ((0, 1), (0, 2), (1, 2))
    g = cycle(8)
    assert g.vertex_count == 8 and g.edge_count == 8
    with pytest.raises(InvalidParameterError):
        cycle(2)


def test_graph_validation():
    with pytest.raises(InvalidParameterError):
        Graph(3, ((0, 0),))
    with pytest.raises(InvalidParameterError):
        Graph(3, ((0, 1), (1, 0)))
    with pytest.raises(InvalidParameterError):
        Graph(2, ((0, 2),))
    with pytest.raises(InvalidParameterError):
        Graph(3, ((0, 1),), ((0,), (1,)))  # partition misses vertex 2
    with pytest.raises(InvalidParameterError):
        Graph(3, ((0, 1),), ((0, 1), (2,)))  # edge inside one side


def test_graph_edges_normalized():
    g = Graph(3, ((2, 1), (1, 0)))
    assert g.edges == ((0, 1), (1, 2))


# --- text format ----------------------------------------------------------

def test_graph_text_round_trip():
    for g in (cycle(5), complete_bipartite(2, 3), Graph(3, ((0, 1),))):
        assert graph_from_text(graph_to_text(g)) == g


def test_graph_text_expected_shape():
    text = graph_to_text(complete_bipartite(2, 2))
    lines = text.splitlines()
    assert lines[0] == "graph 4 4"
    assert lines[1] == "bipartition 2 2"
    assert lines[2:] == ["edge 0 2", "edge 0 3", "edge 1 2", "edge 1 3"]


@pytest.mark.parametrize(
    "text",
    [
        "",
        "graph 2\nedge 0 1\n",
        "graph 2 1\nvertex 0 1\n",
        "graph 2 2\nedge 0 1\n",
        "graph 4 1\nbipartition 2 1\nedge 0 2\n",
    ],
)
def test_graph_text_malformed(text):
    with pytest.raises(InvalidParameterError):
        graph_from_text(text)


def test_all_permutations_lex_order():
    perms = all_permutations(3)
    assert perms == sorted(perms)
    assert len(perms) == 6
    assert perms[0] == (0, 1, 2)
