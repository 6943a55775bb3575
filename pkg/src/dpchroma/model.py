"""Graphs, permutations, and assignment encodings shared by every other module.

Conventions, fixed once here and relied on everywhere:

* vertices and colors are 0-indexed;
* a permutation is a tuple ``p`` of length k with ``p[i]`` the image of i;
* an assignment gives one color to each of the k left vertices of a
  complete bipartite graph, and round-trips with an index in ``[0, k**k)``
  where ``colors[i]`` is the base-k digit of weight ``k**i`` (little-endian).

Closed-form machinery accepts folds up to ``FORMULA_MAX_FOLD``; anything
exhaustive over the ``k**k`` assignment universe is guarded at
``EXHAUSTIVE_MAX_FOLD`` (universe <= 46656, comfortable as int bitmasks).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InvalidParameterError, UnsupportedInputError

Perm = tuple[int, ...]
Edge = tuple[int, int]

EXHAUSTIVE_MAX_FOLD = 6
FORMULA_MAX_FOLD = 20


# ---------------------------------------------------------------------------
# permutations

def identity(k: int) -> Perm:
    return tuple(range(k))


def check_permutation(p) -> Perm:
    p = tuple(p)
    if sorted(p) != list(range(len(p))):
        raise InvalidParameterError(f"not a permutation of 0..{len(p) - 1}: {p!r}")
    return p


def compose(p: Perm, q: Perm) -> Perm:
    """Composite applying q first: compose(p, q)[i] == p[q[i]]."""
    if len(p) != len(q):
        raise InvalidParameterError(f"permutation size mismatch: {len(p)} vs {len(q)}")
    return tuple(p[q[i]] for i in range(len(q)))


def invert(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def all_permutations(k: int) -> list[Perm]:
    """All k! permutations of 0..k-1 in lexicographic order."""
    return list(itertools.permutations(range(k)))


# ---------------------------------------------------------------------------
# assignments (colorings of the left side of K_{k,t})

def assignment_index(colors, k: int | None = None) -> int:
    """Encode a color tuple as its little-endian base-k index."""
    colors = tuple(colors)
    if k is None:
        k = len(colors)
    if len(colors) != k or any(not 0 <= c < k for c in colors):
        raise InvalidParameterError(f"expected {k} colors in [0, {k}): {colors!r}")
    idx = 0
    for i in reversed(range(k)):
        idx = idx * k + colors[i]
    return idx


def assignment_colors(index: int, k: int) -> tuple[int, ...]:
    """Decode an index in [0, k**k) back to its color tuple."""
    if not 0 <= index < k**k:
        raise InvalidParameterError(f"assignment index {index} out of [0, {k**k})")
    out = []
    for _ in range(k):
        out.append(index % k)
        index //= k
    return tuple(out)


def all_assignments(k: int) -> list[tuple[int, ...]]:
    """All k**k assignments, position i holding the tuple with index i."""
    if k > EXHAUSTIVE_MAX_FOLD:
        raise InvalidParameterError(f"exhaustive assignment universe limited to k <= {EXHAUSTIVE_MAX_FOLD}")
    return [assignment_colors(i, k) for i in range(k**k)]


# ---------------------------------------------------------------------------
# graphs

@dataclass(frozen=True)
class Graph:
    """A simple undirected graph on vertices 0..vertex_count-1.

    Edges are stored sorted, each as (u, v) with u < v.  ``bipartition``
    is optional; when present it must partition the vertex set and every
    edge must cross it.
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    bipartition: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    def __post_init__(self):
        n = self.vertex_count
        if n < 0:
            raise InvalidParameterError("vertex_count must be non-negative")
        norm = []
        for e in self.edges:
            u, v = e
            if u == v:
                raise InvalidParameterError(f"loop edge {e!r}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidParameterError(f"edge {e!r} out of vertex range 0..{n - 1}")
            norm.append((u, v) if u < v else (v, u))
        norm.sort()
        for a, b in zip(norm, norm[1:]):
            if a == b:
                raise InvalidParameterError(f"duplicate edge {a!r}")
        object.__setattr__(self, "edges", tuple(norm))
        if self.bipartition is not None:
            x, y = (tuple(side) for side in self.bipartition)
            if sorted(x + y) != list(range(n)):
                raise InvalidParameterError("bipartition must partition the vertex set")
            left = set(x)
            for u, v in self.edges:
                if (u in left) == (v in left):
                    raise InvalidParameterError(f"edge {(u, v)!r} does not cross the bipartition")
            object.__setattr__(self, "bipartition", (x, y))

    @property
    def edge_count(self) -> int:
        return len(self.edges)


def adjacency(g: Graph) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def is_connected(g: Graph) -> bool:
    if g.vertex_count == 0:
        return True
    adj = adjacency(g)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.vertex_count


def complete_bipartite(k: int, t: int) -> Graph:
    """K_{k,t}: left vertices 0..k-1, right vertices k..k+t-1, all cross edges."""
    if k < 1 or t < 1:
        raise InvalidParameterError("complete_bipartite requires k >= 1 and t >= 1")
    left = tuple(range(k))
    right = tuple(range(k, k + t))
    edges = tuple((i, j) for i in left for j in right)
    return Graph(k + t, edges, (left, right))


def cycle(n: int) -> Graph:
    """The n-cycle on vertices 0..n-1."""
    if n < 3:
        raise InvalidParameterError("cycle requires n >= 3")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


# ---------------------------------------------------------------------------
# graph text format: `graph <n> <m>`, optional `bipartition <k> <t>`,
# then m lines `edge <u> <v>`; whitespace separated, 0-indexed.

def graph_to_text(g: Graph) -> str:
    lines = [f"graph {g.vertex_count} {g.edge_count}"]
    if g.bipartition is not None:
        x, y = g.bipartition
        if x != tuple(range(len(x))) or y != tuple(range(len(x), g.vertex_count)):
            raise UnsupportedInputError("text format stores bipartitions only as contiguous (left, right) ranges")
        lines.append(f"bipartition {len(x)} {len(y)}")
    lines.extend(f"edge {u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> Graph:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows or rows[0][:1] != ["graph"] or len(rows[0]) != 3:
        raise InvalidParameterError("expected header line 'graph <n> <m>'")
    try:
        n, m = int(rows[0][1]), int(rows[0][2])
    except ValueError as exc:
        raise InvalidParameterError(f"bad graph header: {rows[0]!r}") from exc
    pos = 1
    bipartition = None
    if pos < len(rows) and rows[pos][0] == "bipartition":
        if len(rows[pos]) != 3:
            raise InvalidParameterError("expected 'bipartition <k> <t>'")
        k, t = int(rows[pos][1]), int(rows[pos][2])
        if k + t != n:
            raise InvalidParameterError(f"bipartition sizes {k}+{t} != vertex count {n}")
        bipartition = (tuple(range(k)), tuple(range(k, n)))
        pos += 1
    edges = []
    for row in rows[pos:]:
        if row[0] != "edge" or len(row) != 3:
            raise InvalidParameterError(f"expected 'edge <u> <v>', got {row!r}")
        edges.append((int(row[1]), int(row[2])))
    if len(edges) != m:
        raise InvalidParameterError(f"header promised {m} edges, file has {len(edges)}")
    return Graph(n, tuple(edges), bipartition)


def graph_to_obj(g: Graph) -> dict:
    """JSON-ready dict mirroring the Graph fields (used inline in cover files)."""
    return {
        "vertex_count": g.vertex_count,
        "edges": [list(e) for e in g.edges],
        "bipartition": None if g.bipartition is None else [list(s) for s in g.bipartition],
    }


def graph_from_obj(obj: dict) -> Graph:
    bip = obj.get("bipartition")
    return Graph(
        int(obj["vertex_count"]),
        tuple((int(u), int(v)) for u, v in obj["edges"]),
        None if bip is None else (tuple(bip[0]), tuple(bip[1])),
    )
