"""Decide colorability of a cover, and exact DP-chromatic numbers of small graphs.

``find_coloring`` is a complete backtracking search in smallest-last
(degeneracy) order.  ``chi_dp_exact`` exhausts normalized covers: fiber
relabeling lets every cover be brought to a form where a fixed spanning
tree carries identity matchings, so only the non-tree edges range over
permutations -- (k!)**(m-n+1) covers instead of (k!)**m.

Enumeration is partitioned into contiguous lexicographic blocks so it can
run on a thread pool; blocks are merged in index order, which makes the
reported witness (first in lex order) independent of scheduling.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from math import factorial

from .cover import MatchingCover, build_cover, normalize, spanning_tree_edges
from .errors import InvalidParameterError, ResourceLimitError
from .model import Graph, Perm, adjacency, all_permutations, identity, invert

DEFAULT_ENUMERATION_GUARD = 10**8


def degeneracy_order(g: Graph) -> list[int]:
    """Smallest-last vertex order: peel minimum-degree vertices (ties by id)
    and color in reverse peel order, so each vertex meets few colored neighbors."""
    adj = [set(ns) for ns in adjacency(g)]
    alive = set(range(g.vertex_count))
    peeled = []
    while alive:
        v = min(alive, key=lambda x: (len(adj[x]), x))
        peeled.append(v)
        alive.remove(v)
        for w in adj[v]:
            adj[w].discard(v)
        adj[v].clear()
    return peeled[::-1]


def coloring_number(g: Graph) -> int:
    """Smallest d admitting an order where every vertex has < d earlier neighbors."""
    adj = [set(ns) for ns in adjacency(g)]
    alive = set(range(g.vertex_count))
    worst = 0
    while alive:
        v = min(alive, key=lambda x: (len(adj[x]), x))
        worst = max(worst, len(adj[v]))
        alive.remove(v)
        for w in adj[v]:
            adj[w].discard(v)
        adj[v].clear()
    return worst + 1


def find_coloring(cover: MatchingCover) -> dict[int, int] | None:
    """A valid coloring of the cover, or None if none exists (complete search)."""
    g, k = cover.graph, cover.fold
    order = degeneracy_order(g)
    pos = {v: i for i, v in enumerate(order)}
    adj = adjacency(g)
    # neighbors already colored when v is reached, with the forbidding map:
    # earlier neighbor u with color c forbids exactly one color at v.
    back: list[list[tuple[int, Perm]]] = []
    for v in order:
        entries = []
        for u in adj[v]:
            if pos[u] < pos[v]:
                p = cover.perms[(u, v)] if u < v else invert(cover.perms[(v, u)])
                entries.append((u, p))  # forbidden color at v is p[color[u]]
        back.append(entries)

    colors: dict[int, int] = {}

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        banned = {p[colors[u]] for u, p in back[i]}
        for c in range(k):
            if c not in banned:
                colors[v] = c
                if extend(i + 1):
                    return True
        colors.pop(v, None)
        return False

    return dict(colors) if extend(0) else None


def count_normalized_covers(g: Graph, k: int) -> int:
    free = g.edge_count - len(spanning_tree_edges(g))
    return factorial(k) ** free


def cover_at_index(g: Graph, k: int, index: int) -> MatchingCover:
    """The index-th normalized cover: identity on the spanning tree, non-tree
    edges (in lex order) drawn from the mixed-radix digits of ``index``."""
    tree = set(spanning_tree_edges(g))
    free_edges = [e for e in g.edges if e not in tree]
    perms = all_permutations(k)
    table = {e: identity(k) for e in tree}
    for e in reversed(free_edges):
        index, digit = divmod(index, len(perms))
        table[e] = perms[digit]
    if index:
        raise InvalidParameterError("cover index out of range")
    return build_cover(g, k, table)


def _scan_block(g, k, start, stop, stop_event) -> tuple[int, MatchingCover] | None:
    for idx in range(start, stop):
        if stop_event.is_set():
            return None
        cov = cover_at_index(g, k, idx)
        if find_coloring(cov) is None:
            return idx, cov
    return None


def hardest_cover_search(
    g: Graph,
    k: int,
    budget: int | None = None,
    threads: int = 1,
) -> MatchingCover | None:
    """First normalized k-fold cover (in lex order) without a coloring, if any.

    ``budget`` caps the number of covers examined; exceeding it raises
    ResourceLimitError.  With threads > 1 the index space is split into
    contiguous blocks merged in order, so the result is schedule-independent.
    """
    total = count_normalized_covers(g, k)
    if budget is not None and total > budget:
        raise ResourceLimitError(
            f"{total} normalized covers exceed budget {budget}", bracket=None
        )
    if threads <= 1 or total < 4096:
        hit = _scan_block(g, k, 0, total, threading.Event())
        return hit[1] if hit else None
    nblocks = threads * 4
    bounds = [total * i // nblocks for i in range(nblocks + 1)]
    stop_event = threading.Event()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(_scan_block, g, k, bounds[i], bounds[i + 1], stop_event)
            for i in range(nblocks)
        ]
        # merge in block order: the first hit in the earliest block wins, so
        # later blocks may be abandoned once an earlier one has answered.
        result = None
        for fut in futures:
            hit = fut.result()
            if hit is not None:
                result = hit[1]
                stop_event.set()
                break
    return result


def chi_dp_exact(
    g: Graph,
    max_k: int,
    budget: int | None = DEFAULT_ENUMERATION_GUARD,
    threads: int = 1,
) -> int:
    """Smallest k <= max_k such that every k-fold cover of g has a coloring;
    returns max_k + 1 when the threshold exceeds max_k.

    Covers are exhausted in normalized form, which is sound because
    normalization preserves colorability.  ``budget`` counts covers examined
    across all k; exceeding it raises ResourceLimitError carrying the bracket
    (smallest unresolved k, max_k + 1).
    """
    if max_k < 1:
        raise InvalidParameterError("max_k must be >= 1")
    remaining = budget
    for k in range(1, max_k + 1):
        need = count_normalized_covers(g, k)
        if remaining is not None and need > remaining:
            raise ResourceLimitError(
                f"enumeration at fold {k} needs {need} covers, budget has {remaining}",
                bracket=(k, max_k + 1),
            )
        if remaining is not None:
            remaining -= need
        if hardest_cover_search(g, k, threads=threads) is None:
            return k
    return max_k + 1
