import itertools
from math import factorial

import numpy as np
import pytest

from dpchroma.blocking import (
    ColumnClass,
    blocked_set,
    canonicalize,
    column_count,
    cover_columns,
    enumerate_column_classes,
    is_bad_for,
    iter_column_classes,
    random_column,
    verify_lemma1,
)
from dpchroma.construct import cover_from_columns
from dpchroma.cover import is_valid_coloring
from dpchroma.errors import InvalidParameterError, ResourceLimitError
from dpchroma.model import all_permutations, assignment_index, identity, invert

ID2, SW = (0, 1), (1, 0)


def oracle_blocked_indices(col):
    """Independent route: build the K_{k,1} cover carrying just this column and
    call an assignment blocked when no color remains for the right vertex."""
    k = col.fold
    cover = cover_from_columns(k, [col])
    blocked = set()
    for colors in itertools.product(range(k), repeat=k):
        full = {i: colors[i] for i in range(k)}
        if not any(is_valid_coloring(cover, {**full, k: c}) for c in range(k)):
            blocked.add(assignment_index(colors, k))
    return blocked


def bits_to_set(bits):
    out = set()
    while bits:
        low = bits & -bits
        out.add(low.bit_length() - 1)
        bits ^= low
    return out


# --- is_bad_for ---------------------------------------------------------------

def test_is_bad_for_k2_identity_column():
    col = ColumnClass((ID2, ID2))
    assert is_bad_for((0, 1), col)
    assert is_bad_for((1, 0), col)
    assert not is_bad_for((0, 0), col)
    assert not is_bad_for((1, 1), col)


def test_is_bad_for_k1_always():
    col = ColumnClass(((0,),))
    assert is_bad_for((0,), col)


def test_is_bad_for_size_mismatch():
    with pytest.raises(InvalidParameterError):
        is_bad_for((0, 1, 2), ColumnClass((ID2, ID2)))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_is_bad_for_matches_cover_oracle_exhaustively(k):
    for col in iter_column_classes(k):
        expected = oracle_blocked_indices(col)
        for colors in itertools.product(range(k), repeat=k):
            assert is_bad_for(colors, col) == (assignment_index(colors, k) in expected)


# --- blocked_set ----------------------------------------------------------------

def test_blocked_set_k2_values():
    assert bits_to_set(blocked_set(ColumnClass((ID2, ID2)))) == {1, 2}
    assert bits_to_set(blocked_set(ColumnClass((ID2, SW)))) == {0, 3}


def test_blocked_set_k3_identity_column():
    col = ColumnClass((identity(3),) * 3)
    got = bits_to_set(blocked_set(col))
    perm_assignments = {assignment_index(p, 3) for p in all_permutations(3)}
    assert got == perm_assignments
    assert len(got) == 6


@pytest.mark.parametrize("k", [1, 2, 3])
def test_blocked_set_matches_oracle_exhaustively(k):
    for col in iter_column_classes(k):
        assert bits_to_set(blocked_set(col)) == oracle_blocked_indices(col)


def test_blocked_set_matches_oracle_sampled_k4():
    rng = np.random.default_rng(11)
    for _ in range(12):
        col = random_column(rng, 4)
        assert bits_to_set(blocked_set(col)) == oracle_blocked_indices(col)


# --- enumeration ------------------------------------------------------------------

def test_column_class_counts():
    assert len(enumerate_column_classes(1)) == 1
    assert len(enumerate_column_classes(2)) == 2
    assert len(enumerate_column_classes(3)) == 36
    assert column_count(4) == 13824


def test_column_classes_canonical_and_lex():
    cols = enumerate_column_classes(3)
    assert all(col.canonical for col in cols)
    raw = [col.perms for col in cols]
    assert raw == sorted(raw)


def test_enumeration_guards():
    with pytest.raises(ResourceLimitError):
        enumerate_column_classes(5)
    with pytest.raises(ResourceLimitError):
        next(iter_column_classes(7))


# --- canonicalization ----------------------------------------------------------

@pytest.mark.parametrize("k", [2, 3])
def test_canonicalize_preserves_blocked_set(k):
    rng = np.random.default_rng(5)
    for _ in range(20):
        col = random_column(rng, k)
        canon = canonicalize(col)
        assert canon.canonical
        assert blocked_set(canon) == blocked_set(col)


def test_distinct_canonical_columns_have_distinct_blocked_sets():
    for k in (1, 2, 3):
        sets = [blocked_set(c) for c in iter_column_classes(k)]
        assert len(set(sets)) == len(sets)


# --- population and injection ----------------------------------------------------

@pytest.mark.parametrize("k", [1, 2, 3])
def test_population_exactly_factorial_exhaustive(k):
    report = verify_lemma1(k, mode="exhaustive")
    assert report.columns_checked == column_count(k)
    assert report.min_population == report.max_population == factorial(k)
    assert report.injection_collisions == 0
    assert report.ok


def test_population_sampled_k5():
    report = verify_lemma1(5, mode="sampled", samples=50, seed=1)
    assert report.min_population == report.max_population == 120
    assert report.injection_collisions == 0
    assert report.ok


def test_verify_lemma1_guards():
    with pytest.raises(ResourceLimitError):
        verify_lemma1(5, mode="exhaustive")
    with pytest.raises(InvalidParameterError):
        verify_lemma1(3, mode="bogus")


# --- cover columns ------------------------------------------------------------------

def test_cover_columns_round_trip():
    cols = [ColumnClass((ID2, SW)), ColumnClass((SW, SW)), ColumnClass((ID2, ID2))]
    cover = cover_from_columns(2, cols)
    assert cover_columns(cover) == cols
