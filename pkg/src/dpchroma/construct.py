"""Random uncolorable covers of K_{k,t}: sampling, derandomization, extension.

The construction draws one uniform matching per edge.  A fixed assignment
survives a single random column with probability 1 - k!/k**k, so t columns
leave k**k * (1 - k!/k**k)**t expected survivors.  Greedy column selection
(exact conditional expectations, see musearch.greedy_columns) achieves the
floor of that expectation deterministically, and the extension step then
patches one dedicated blocking column per remaining survivor, yielding an
explicitly uncolorable cover of K_{k, t+r}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocking import ColumnClass, blocked_set, cover_columns, fisher_yates
from .bounds import chosen_t, expected_survivors as _expected_survivors
from .cover import MatchingCover, build_cover
from .errors import InvalidParameterError, InvalidWitnessError
from .model import assignment_colors, complete_bipartite
from .musearch import GREEDY_MAX_FOLD, greedy_columns


def cover_from_columns(k: int, columns) -> MatchingCover:
    """The K_{k,t} cover whose j-th right vertex carries columns[j]."""
    columns = list(columns)
    if not columns:
        raise InvalidParameterError("need at least one column")
    g = complete_bipartite(k, len(columns))
    perms = {}
    for j, col in enumerate(columns):
        if col.fold != k:
            raise InvalidParameterError(f"column fold {col.fold} != {k}")
        for i in range(k):
            perms[(i, k + j)] = col.perms[i]
    return build_cover(g, k, perms)


def random_cover(k: int, t: int, seed: int) -> MatchingCover:
    """Cover of K_{k,t} with i.i.d. uniform matchings, reproducible from seed.

    Each edge (left i, right j) draws from its own substream keyed
    (seed, i, j), so the cover does not depend on iteration order.
    """
    if k < 1 or t < 1:
        raise InvalidParameterError("random_cover requires k >= 1 and t >= 1")
    if seed < 0:
        raise InvalidParameterError("seed must be non-negative")
    g = complete_bipartite(k, t)
    perms = {}
    for i in range(k):
        for j in range(t):
            rng = np.random.default_rng(np.random.SeedSequence([seed, i, j]))
            perms[(i, k + j)] = fisher_yates(rng, k)
    return build_cover(g, k, perms)


def surviving_assignments(cover: MatchingCover) -> int:
    """Bit vector over [0, k**k): bit f set iff no column blocks assignment f.

    The cover is colorable iff some bit is set (a surviving assignment
    extends greedily: each right fiber keeps at least one free color).
    """
    k = cover.fold
    universe = (1 << k**k) - 1
    union = 0
    for col in cover_columns(cover):
        union |= blocked_set(col)
    return universe & ~union


def expected_survivors(k: int, t: int, exact: bool = False):
    """Expected survivor count k**k * (1 - k!/k**k)**t for t random columns."""
    return _expected_survivors(k, t, exact=exact)


def blocking_column_for(colors) -> ColumnClass:
    """A column that blocks exactly the given assignment by design:
    perms[i][c] = (c - colors[i] + i) mod k, whose composite map is the identity."""
    colors = tuple(colors)
    k = len(colors)
    return ColumnClass(
        tuple(tuple((c - colors[i] + i) % k for c in range(k)) for i in range(k))
    )


def derandomized_cover(k: int, t: int) -> MatchingCover:
    """Cover of K_{k,t} built by greedy column choice; its survivor count is
    guaranteed not to exceed floor(expected_survivors(k, t))."""
    if k < 1 or k > GREEDY_MAX_FOLD:
        raise InvalidParameterError(f"derandomization supports 1 <= k <= {GREEDY_MAX_FOLD}")
    if t < 1:
        raise InvalidParameterError("t must be >= 1")
    columns, survivors = greedy_columns(k, steps=t)
    cover = cover_from_columns(k, columns)
    guarantee = int(expected_survivors(k, t, exact=True))
    if survivors[-1] > guarantee:
        raise InvalidWitnessError(
            f"greedy left {survivors[-1]} survivors, above the guarantee {guarantee}"
        )
    return cover


def extend_to_uncolorable(cover: MatchingCover) -> tuple[MatchingCover, int]:
    """Add one dedicated blocking column per surviving assignment.

    Returns (extended cover, number of added right vertices).  The result
    has an empty survivor set, hence no coloring.
    """
    k = cover.fold
    survivors = surviving_assignments(cover)
    if survivors == 0:
        return cover, 0
    columns = cover_columns(cover)
    added = 0
    while survivors:
        low = survivors & -survivors
        f = low.bit_length() - 1
        columns.append(blocking_column_for(assignment_colors(f, k)))
        survivors ^= low
        added += 1
    return cover_from_columns(k, columns), added


@dataclass(frozen=True)
class PipelineResult:
    k: int
    t: int
    seed: int | None
    survivors_before: int
    added: int
    cover: MatchingCover
    verified: bool

    @property
    def right_size(self) -> int:
        return self.t + self.added


def uncolorable_pipeline(
    k: int,
    t: int | None = None,
    seed: int | None = None,
    derandomize: bool = True,
) -> PipelineResult:
    """End-to-end construction at the canonical t (unless overridden), with the
    final uncolorability re-checked by the independent backtracking solver."""
    from .solver import find_coloring

    if t is None:
        t = max(chosen_t(k), 1)
    base = derandomized_cover(k, t) if derandomize else random_cover(k, t, seed if seed is not None else 0)
    before = surviving_assignments(base).bit_count()
    extended, added = extend_to_uncolorable(base)
    verified = find_coloring(extended) is None
    return PipelineResult(k, t, None if derandomize else seed, before, added, extended, verified)
