"""k-fold covers of a base graph, restricted to perfect-matching form.

A cover stores one permutation per base edge (u, v) with u < v, read as the
perfect matching that joins color i over u to color perm[i] over v.  Fibers
(the k colors sitting over one vertex) are implicit cliques, so a candidate
coloring -- one color choice per base vertex -- is valid exactly when no
edge's matching identifies the two chosen colors.

Restricting to perfect matchings loses nothing for threshold questions:
every cover embeds in one of this form, and dropping matching edges only
makes coloring easier.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .errors import InvalidParameterError, MalformedCoverError, UnsupportedInputError
from .model import (
    Edge,
    Graph,
    Perm,
    adjacency,
    check_permutation,
    compose,
    graph_from_obj,
    graph_to_obj,
    identity,
    invert,
    is_connected,
)

Coloring = Mapping[int, int]


@dataclass(frozen=True)
class MatchingCover:
    graph: Graph
    fold: int
    perms: dict[Edge, Perm]  # treated as immutable; operations return new covers

    def perm(self, u: int, v: int) -> Perm:
        return self.perms[(u, v) if u < v else (v, u)]


def build_cover(g: Graph, k: int, perms: Mapping[Edge, Perm]) -> MatchingCover:
    """Validate an edge->permutation table against g and wrap it up."""
    if k < 1:
        raise InvalidParameterError("fold must be >= 1")
    table: dict[Edge, Perm] = {}
    for e, p in perms.items():
        u, v = e
        if not u < v:
            raise MalformedCoverError(f"edge key {e!r} must be ordered (u < v)")
        p = check_permutation(p)
        if len(p) != k:
            raise InvalidParameterError(f"permutation on edge {e!r} has size {len(p)}, expected {k}")
        table[(u, v)] = p
    missing = set(g.edges) - set(table)
    extra = set(table) - set(g.edges)
    if missing or extra:
        raise MalformedCoverError(f"edge table mismatch: missing {sorted(missing)}, extra {sorted(extra)}")
    return MatchingCover(g, k, table)


def identity_cover(g: Graph, k: int) -> MatchingCover:
    return build_cover(g, k, {e: identity(k) for e in g.edges})


def is_valid_coloring(cover: MatchingCover, coloring: Coloring) -> bool:
    """True iff the chosen colors form an independent set in the cover graph."""
    g = cover.graph
    for v in range(g.vertex_count):
        if v not in coloring:
            raise InvalidParameterError(f"coloring misses vertex {v}")
        if not 0 <= coloring[v] < cover.fold:
            raise InvalidParameterError(f"color {coloring[v]} out of range for vertex {v}")
    return all(cover.perms[(u, v)][coloring[u]] != coloring[v] for u, v in g.edges)


def relabel_fiber(cover: MatchingCover, v: int, tau: Perm) -> MatchingCover:
    """Rename the colors over v by tau: color i becomes tau[i].

    Colorability is preserved; a coloring transforms by col[v] -> tau[col[v]].
    """
    tau = check_permutation(tau)
    if len(tau) != cover.fold:
        raise InvalidParameterError(f"relabeling size {len(tau)} != fold {cover.fold}")
    tau_inv = invert(tau)
    table = dict(cover.perms)
    for e, p in cover.perms.items():
        if e[0] == v:        # v is the domain side
            table[e] = compose(p, tau_inv)
        elif e[1] == v:      # v is the image side
            table[e] = compose(tau, p)
    return MatchingCover(cover.graph, cover.fold, table)


def spanning_tree_edges(g: Graph) -> list[Edge]:
    """The lowest-index spanning tree: greedy over edges in lexicographic order."""
    if not is_connected(g):
        raise UnsupportedInputError("base graph must be connected")
    comp = list(range(g.vertex_count))

    def find(a):
        while comp[a] != a:
            comp[a] = comp[comp[a]]
            a = comp[a]
        return a

    tree = []
    for u, v in g.edges:  # already sorted
        ru, rv = find(u), find(v)
        if ru != rv:
            comp[ru] = rv
            tree.append((u, v))
    return tree


def normalize(cover: MatchingCover) -> MatchingCover:
    """Relabel fibers so every spanning-tree edge carries the identity.

    Anchors vertex 0, then walks the lowest-index spanning tree; each newly
    reached vertex is relabeled once, which cannot disturb tree edges fixed
    earlier (a second tree edge into the anchored set would close a cycle).
    Colorability is preserved.
    """
    tree = spanning_tree_edges(cover.graph)
    out = cover
    anchored = {0}
    pending = list(tree)
    while pending:
        for idx, (u, v) in enumerate(pending):
            if u in anchored and v not in anchored:
                out = relabel_fiber(out, v, invert(out.perms[(u, v)]))
                anchored.add(v)
                break
            if v in anchored and u not in anchored:
                out = relabel_fiber(out, u, out.perms[(u, v)])
                anchored.add(u)
                break
        else:
            raise UnsupportedInputError("base graph must be connected")
        del pending[idx]
    return out


# ---------------------------------------------------------------------------
# explicit-H oracle: expand the cover to its literal graph and test
# independence directly.  Kept deliberately independent of is_valid_coloring.

def expand_cover(cover: MatchingCover):
    """The literal cover graph: vertices (v, i), fiber cliques, matching edges."""
    k = cover.fold
    vertices = [(v, i) for v in range(cover.graph.vertex_count) for i in range(k)]
    edges = set()
    for v in range(cover.graph.vertex_count):
        for i in range(k):
            for j in range(i + 1, k):
                edges.add(((v, i), (v, j)))
    for (u, v), p in cover.perms.items():
        for i in range(k):
            edges.add(((u, i), (v, p[i])))
    return vertices, edges


def is_valid_coloring_explicit(cover: MatchingCover, coloring: Coloring) -> bool:
    """Oracle twin of is_valid_coloring via the expanded graph."""
    _, edges = expand_cover(cover)
    chosen = [(v, coloring[v]) for v in range(cover.graph.vertex_count)]
    for a in range(len(chosen)):
        for b in range(a + 1, len(chosen)):
            if (chosen[a], chosen[b]) in edges or (chosen[b], chosen[a]) in edges:
                return False
    return True


# ---------------------------------------------------------------------------
# JSON cover files: {"graph": {...}, "k": ..., "matchings": [{"perm": [...],
# "u": ..., "v": ...}, ...]} with sorted keys and sorted edge order, so a
# write -> read -> write round trip is byte-identical.

def cover_to_obj(cover: MatchingCover) -> dict:
    return {
        "k": cover.fold,
        "graph": graph_to_obj(cover.graph),
        "matchings": [
            {"u": u, "v": v, "perm": list(cover.perms[(u, v)])}
            for u, v in sorted(cover.perms)
        ],
    }


def cover_from_obj(obj: dict) -> MatchingCover:
    try:
        g = graph_from_obj(obj["graph"])
        k = int(obj["k"])
        table = {(int(m["u"]), int(m["v"])): tuple(int(x) for x in m["perm"]) for m in obj["matchings"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedCoverError(f"bad cover object: {exc}") from exc
    return build_cover(g, k, table)


def cover_dumps(cover: MatchingCover) -> str:
    return json.dumps(cover_to_obj(cover), sort_keys=True, indent=2) + "\n"


def cover_loads(text: str) -> MatchingCover:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedCoverError(f"not valid JSON: {exc}") from exc
    return cover_from_obj(obj)


def save_cover(cover: MatchingCover, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(cover_dumps(cover))


def load_cover(path) -> MatchingCover:
    with open(path, encoding="utf-8") as fh:
        return cover_loads(fh.read())


def right_columns(cover: MatchingCover) -> list[tuple[Perm, ...]]:
    """Per right vertex of a complete bipartite base, the k permutations
    joining every left fiber to that vertex's fiber."""
    g = cover.graph
    if g.bipartition is None:
        raise UnsupportedInputError("cover base graph carries no bipartition")
    left, right = g.bipartition
    need = {(u, v) for u in left for v in right}
    if set(g.edges) != {(min(e), max(e)) for e in need}:
        raise UnsupportedInputError("base graph is not complete bipartite")
    cols = []
    for v in right:
        col = []
        for u in left:
            # stored permutations run low id -> high id; a column wants left -> right
            col.append(cover.perms[(u, v)] if u < v else invert(cover.perms[(v, u)]))
        cols.append(tuple(col))
    return cols
