"""Which left-side assignments a right-vertex column makes uncolorable.

For K_{k,t} in matching form, one right vertex u is described by a column:
the k permutations joining each left fiber to u's fiber.  An assignment f
of colors to the left vertices "blocks" u exactly when the composite map
i -> perms[i][f[i]] is a bijection, i.e. every color over u is dominated.
Since f -> composite is itself a bijection of [k]^k, each column blocks
exactly k! assignments, one per target bijection -- which is also how
``blocked_set`` enumerates them directly.

Blocked sets are plain ints used as bit vectors over the k**k assignment
indices.  They are invariant under relabeling of the right fiber, so
columns are canonicalized to perms[0] == identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial

import numpy as np

from .cover import MatchingCover, right_columns
from .errors import InvalidParameterError, ResourceLimitError
from .model import (
    EXHAUSTIVE_MAX_FOLD,
    Perm,
    all_permutations,
    assignment_index,
    check_permutation,
    compose,
    identity,
    invert,
)

COLUMN_LIST_GUARD = 10**7  # largest (k!)**(k-1) we will materialize as a list


@dataclass(frozen=True)
class ColumnClass:
    """The k matchings into one right-vertex fiber, as left-to-right permutations."""

    perms: tuple[Perm, ...]

    def __post_init__(self):
        k = len(self.perms)
        perms = tuple(check_permutation(p) for p in self.perms)
        if any(len(p) != k for p in perms):
            raise InvalidParameterError("column needs k permutations of size k")
        object.__setattr__(self, "perms", perms)

    @property
    def fold(self) -> int:
        return len(self.perms)

    @property
    def canonical(self) -> bool:
        return self.perms[0] == identity(self.fold)


def canonicalize(col: ColumnClass) -> ColumnClass:
    """Relabel the right fiber so perms[0] becomes the identity.

    Left-composing every entry with invert(perms[0]) preserves the blocked
    set: composing the composite map with a fixed bijection keeps it bijective.
    """
    inv0 = invert(col.perms[0])
    return ColumnClass(tuple(compose(inv0, p) for p in col.perms))


def is_bad_for(colors, col: ColumnClass) -> bool:
    """True iff assignment ``colors`` blocks a right vertex with this column."""
    colors = tuple(colors)
    if len(colors) != col.fold:
        raise InvalidParameterError(f"assignment size {len(colors)} != fold {col.fold}")
    mapped = [col.perms[i][c] for i, c in enumerate(colors)]
    return len(set(mapped)) == col.fold


def blocked_set(col: ColumnClass) -> int:
    """Bit vector over [0, k**k): bit f set iff assignment f is blocked.

    Enumerated through the k! target bijections pi, whose unique preimage is
    f[i] = perms[i]^-1[pi[i]]; population is therefore exactly k!.
    """
    k = col.fold
    invs = [invert(p) for p in col.perms]
    bits = 0
    for pi in itertools.permutations(range(k)):
        bits |= 1 << assignment_index(tuple(invs[i][pi[i]] for i in range(k)), k)
    return bits


def iter_column_classes(k: int):
    """All (k!)**(k-1) canonical columns in lexicographic order, lazily."""
    if k < 1:
        raise InvalidParameterError("fold must be >= 1")
    if k > EXHAUSTIVE_MAX_FOLD:
        raise ResourceLimitError(f"column enumeration limited to k <= {EXHAUSTIVE_MAX_FOLD}")
    perms = all_permutations(k)
    ident = identity(k)
    for rest in itertools.product(perms, repeat=k - 1):
        yield ColumnClass((ident,) + rest)


def enumerate_column_classes(k: int) -> list[ColumnClass]:
    """Materialized iter_column_classes; guarded, since the count explodes."""
    if k >= 2 and factorial(k) ** (k - 1) > COLUMN_LIST_GUARD:
        raise ResourceLimitError(
            f"{factorial(k) ** (k - 1)} canonical columns exceed the list guard; "
            "use iter_column_classes"
        )
    return list(iter_column_classes(k))


def column_count(k: int) -> int:
    return factorial(k) ** max(k - 1, 0)


def cover_columns(cover: MatchingCover) -> list[ColumnClass]:
    """The columns of a cover over a complete bipartite base, one per right vertex."""
    return [ColumnClass(perms) for perms in right_columns(cover)]


def random_column(rng: np.random.Generator, k: int) -> ColumnClass:
    """A uniformly random raw column (right fiber not canonicalized)."""
    return ColumnClass(tuple(fisher_yates(rng, k) for _ in range(k)))


def fisher_yates(rng: np.random.Generator, k: int) -> Perm:
    arr = list(range(k))
    for i in range(k - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        arr[i], arr[j] = arr[j], arr[i]
    return tuple(arr)


@dataclass
class BlockedSetReport:
    """Outcome of checking blocked-set sizes and the assignment->bijection injection."""

    k: int
    mode: str
    columns_checked: int
    min_population: int
    max_population: int
    injection_collisions: int

    @property
    def ok(self) -> bool:
        fact = factorial(self.k)
        return (
            self.max_population <= fact
            and self.min_population == self.max_population == fact
            and self.injection_collisions == 0
        )


def _check_column(col: ColumnClass) -> tuple[int, int]:
    """(population, collisions) for one column, by brute force over all k**k
    assignments -- deliberately independent of blocked_set's shortcut."""
    k = col.fold
    population = 0
    seen: set[tuple[int, ...]] = set()
    collisions = 0
    for colors in itertools.product(range(k), repeat=k):
        mapped = tuple(col.perms[i][c] for i, c in enumerate(colors))
        if len(set(mapped)) == k:
            population += 1
            if mapped in seen:
                collisions += 1
            seen.add(mapped)
    return population, collisions


def verify_lemma1(
    k: int,
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int = 0,
) -> BlockedSetReport:
    """Check that every (or each sampled) column blocks exactly k! assignments
    and that distinct blocked assignments map to distinct bijections."""
    if mode == "exhaustive":
        if k > 4:
            raise ResourceLimitError("exhaustive blocked-set verification limited to k <= 4")
        cols = iter_column_classes(k)
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        cols = (random_column(rng, k) for _ in range(samples))
    else:
        raise InvalidParameterError(f"mode must be 'exhaustive' or 'sampled', not {mode!r}")
    lo, hi, count, collisions = None, None, 0, 0
    for col in cols:
        pop, coll = _check_column(col)
        lo = pop if lo is None else min(lo, pop)
        hi = pop if hi is None else max(hi, pop)
        collisions += coll
        count += 1
    return BlockedSetReport(k, mode, count, lo or 0, hi or 0, collisions)
