import itertools

import pytest

from dpchroma.cover import (
    build_cover,
    cover_dumps,
    cover_loads,
    identity_cover,
    is_valid_coloring,
    is_valid_coloring_explicit,
    normalize,
    relabel_fiber,
    spanning_tree_edges,
)
from dpchroma.errors import (
    InvalidParameterError,
    MalformedCoverError,
    UnsupportedInputError,
)
from dpchroma.model import Graph, all_permutations, complete_bipartite, cycle, identity

ID2, SW = (0, 1), (1, 0)


def all_covers(g, k):
    """Every k-fold matching cover of g, exhaustively."""
    perms = all_permutations(k)
    for choice in itertools.product(perms, repeat=g.edge_count):
        yield build_cover(g, k, dict(zip(g.edges, choice)))


def all_colorings(g, k):
    for choice in itertools.product(range(k), repeat=g.vertex_count):
        yield dict(enumerate(choice))


def colorable_brute(cover):
    return any(is_valid_coloring(cover, col) for col in all_colorings(cover.graph, cover.fold))


def k22_three_id_one_swap():
    g = complete_bipartite(2, 2)
    return build_cover(g, 2, {(0, 2): ID2, (0, 3): ID2, (1, 2): ID2, (1, 3): SW})


# --- construction and validation -------------------------------------------

def test_build_cover_accepts_valid():
    assert identity_cover(cycle(4), 2).fold == 2
    g = complete_bipartite(1, 1)
    cov = build_cover(g, 2, {(0, 1): SW})
    assert cov.perms[(0, 1)] == SW


def test_build_cover_rejects_bad_tables():
    g = cycle(4)
    table = {e: ID2 for e in g.edges}
    with pytest.raises(MalformedCoverError):
        build_cover(g, 2, {e: table[e] for e in g.edges[:-1]})  # missing edge
    with pytest.raises(MalformedCoverError):
        build_cover(g, 2, {**table, (0, 2): ID2})  # extra edge
    with pytest.raises(InvalidParameterError):
        build_cover(g, 2, {**table, (0, 1): (0, 1, 2)})  # size mismatch
    with pytest.raises(InvalidParameterError):
        build_cover(g, 2, {**table, (0, 1): (0, 0)})  # not a permutation
    with pytest.raises(MalformedCoverError):
        build_cover(g, 2, {(1, 0): ID2, **{e: table[e] for e in g.edges[1:]}})


# --- coloring validity ------------------------------------------------------

def test_alternating_coloring_on_identity_cycle():
    cov = identity_cover(cycle(4), 2)
    assert is_valid_coloring(cov, {0: 0, 1: 1, 2: 0, 3: 1})
    assert not is_valid_coloring(cov, {0: 0, 1: 0, 2: 0, 3: 0})


def test_k22_three_id_one_swap_uncolorable():
    cov = k22_three_id_one_swap()
    assert not colorable_brute(cov)


def test_coloring_must_be_total_and_in_range():
    cov = identity_cover(cycle(3), 2)
    with pytest.raises(InvalidParameterError):
        is_valid_coloring(cov, {0: 0, 1: 1})
    with pytest.raises(InvalidParameterError):
        is_valid_coloring(cov, {0: 0, 1: 1, 2: 5})


def test_checker_agrees_with_explicit_graph_oracle():
    g = cycle(4)
    for cov in all_covers(g, 2):
        for col in all_colorings(g, 2):
            assert is_valid_coloring(cov, col) == is_valid_coloring_explicit(cov, col)
    # a fold-3 spot check on K_{2,2}
    g = complete_bipartite(2, 2)
    perms3 = all_permutations(3)
    for pick in [(0, 1, 2, 3), (5, 4, 3, 2), (1, 1, 1, 1), (0, 5, 0, 5)]:
        cov = build_cover(g, 3, dict(zip(g.edges, (perms3[i] for i in pick))))
        for col in all_colorings(g, 3):
            assert is_valid_coloring(cov, col) == is_valid_coloring_explicit(cov, col)


# --- fiber relabeling -------------------------------------------------------

def test_relabel_identity_is_noop():
    cov = k22_three_id_one_swap()
    assert relabel_fiber(cov, 1, ID2).perms == cov.perms


def test_relabel_cancels_swap_on_single_edge():
    g = complete_bipartite(1, 1)
    cov = build_cover(g, 2, {(0, 1): SW})
    assert relabel_fiber(cov, 1, SW).perms[(0, 1)] == ID2


def test_relabel_preserves_validity_pointwise():
    g = cycle(4)
    for cov in all_covers(g, 2):
        for v in range(4):
            for tau in all_permutations(2):
                relabeled = relabel_fiber(cov, v, tau)
                for col in all_colorings(g, 2):
                    adjusted = dict(col)
                    adjusted[v] = tau[col[v]]
                    assert is_valid_coloring(cov, col) == is_valid_coloring(relabeled, adjusted)


# --- normalization ----------------------------------------------------------

def test_spanning_tree_is_lex_lowest():
    assert spanning_tree_edges(cycle(4)) == [(0, 1), (0, 3), (1, 2)]
    assert spanning_tree_edges(complete_bipartite(2, 2)) == [(0, 2), (0, 3), (1, 2)]


def test_normalize_identity_cover_unchanged():
    cov = identity_cover(cycle(4), 2)
    assert normalize(cov).perms == cov.perms


def test_normalize_moves_swap_to_non_tree_edge():
    g = cycle(4)
    table = {e: ID2 for e in g.edges}
    table[(0, 1)] = SW  # a tree edge
    norm = normalize(build_cover(g, 2, table))
    assert norm.perms[(0, 1)] == ID2
    assert norm.perms[(0, 3)] == ID2
    assert norm.perms[(1, 2)] == ID2
    assert norm.perms[(2, 3)] == SW


def test_normalize_idempotent_and_preserves_colorability():
    g = cycle(4)
    for cov in all_covers(g, 2):
        norm = normalize(cov)
        assert set(norm.perms[e] for e in spanning_tree_edges(g)) == {ID2}
        assert normalize(norm).perms == norm.perms
        assert colorable_brute(cov) == colorable_brute(norm)


def test_normalize_k22_has_two_classes():
    g = complete_bipartite(2, 2)
    classes = {tuple(sorted(normalize(cov).perms.items())) for cov in all_covers(g, 2)}
    assert len(classes) == 2


def test_normalize_fold3_spot_checks():
    g = cycle(4)
    perms3 = all_permutations(3)
    for pick in [(1, 2, 3, 4), (5, 0, 5, 0), (2, 2, 2, 2)]:
        cov = build_cover(g, 3, dict(zip(g.edges, (perms3[i] for i in pick))))
        norm = normalize(cov)
        assert normalize(norm).perms == norm.perms
        assert colorable_brute(cov) == colorable_brute(norm)


def test_normalize_requires_connected():
    g = Graph(4, ((0, 1), (2, 3)))
    with pytest.raises(UnsupportedInputError):
        normalize(build_cover(g, 2, {(0, 1): ID2, (2, 3): ID2}))


# --- JSON round trip --------------------------------------------------------

def test_cover_json_round_trip_is_byte_identical():
    for cov in (k22_three_id_one_swap(), identity_cover(cycle(5), 3)):
        text = cover_dumps(cov)
        again = cover_loads(text)
        assert cover_dumps(again) == text
        assert again.perms == cov.perms and again.graph == cov.graph


def test_cover_json_rejects_garbage():
    with pytest.raises(MalformedCoverError):
        cover_loads("not json at all")
    with pytest.raises(MalformedCoverError):
        cover_loads('{"k": 2, "matchings": []}')
