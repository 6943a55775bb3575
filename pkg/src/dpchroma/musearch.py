"""Minimum number of columns whose blocked sets cover every assignment.

For each fold k, define the threshold as the smallest t such that some
k-fold cover of K_{k,t} admits no coloring.  In matching form that is a
minimum set cover question: a cover of K_{k,t} is uncolorable exactly when
its t columns' blocked sets (each of size k!) cover all k**k assignments.

``mu_exact`` answers it by branch and bound over canonical columns:

* lower bound ceil(uncovered / k!) on the columns still needed;
* branching on the uncovered assignment hit by fewest blocked sets;
* the first chosen column pinned to all-identity, sound because relabeling
  the left fibers permutes the assignment universe, maps covers to covers,
  and can turn any chosen column into the all-identity one.

``mu_greedy`` gives a certified upper bound: columns picked one at a time
to maximize newly blocked assignments.  Up to k = 4 the maximum is taken
over every canonical column; for k = 5, 6 that space is unenumerable, so
the column is built fiber by fiber, each permutation chosen to maximize
the count of still-coverable survivors (exact conditional expectations),
which preserves the per-step guarantee newly >= ceil(survivors * k!/k**k).

Searches are budgeted by node count, never wall clock, and a budget-bounded
run yields a bracket plus a serialized frontier that can be resumed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial

import numpy as np

from .blocking import ColumnClass, blocked_set, iter_column_classes
from .bounds import analytic_upper, counting_lower
from .cover import MatchingCover, build_cover
from .errors import InvalidParameterError, InvalidWitnessError, ResourceLimitError
from .model import all_permutations, assignment_colors, complete_bipartite

DEFAULT_MU_BUDGET = 200_000_000  # ~15 minutes of k=4 search on a desktop core
GREEDY_MAX_FOLD = 6
EXACT_MAX_FOLD = 4


@lru_cache(maxsize=None)
def blocked_table(k: int):
    """(columns, sets, covers_by_element) for the canonical columns of fold k.

    Columns arrive in lexicographic order; duplicate blocked sets would be
    dropped (keeping the lex-first column), though none occur in practice.
    ``covers_by_element[f]`` lists the set indices whose blocked set hits f.
    """
    if k > EXACT_MAX_FOLD:
        raise ResourceLimitError(f"blocked-set table limited to k <= {EXACT_MAX_FOLD}")
    cols: list[ColumnClass] = []
    sets: list[int] = []
    seen: set[int] = set()
    for col in iter_column_classes(k):
        s = blocked_set(col)
        if s not in seen:
            seen.add(s)
            cols.append(col)
            sets.append(s)
    covers: list[list[int]] = [[] for _ in range(k**k)]
    for idx, s in enumerate(sets):
        while s:
            low = s & -s
            covers[low.bit_length() - 1].append(idx)
            s ^= low
    return tuple(cols), tuple(sets), tuple(tuple(c) for c in covers)


@dataclass
class SearchOutcome:
    found: bool
    chosen: tuple[int, ...] | None
    nodes: int
    exhausted: bool
    frontier: list | None


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _search_cover(
    k: int,
    t: int,
    budget: int | None = None,
    symmetry: bool = True,
    frontier: list | None = None,
) -> SearchOutcome:
    """Depth-first branch and bound for t blocked sets covering the universe.

    Deterministic: candidates at each node are ordered by descending fresh
    coverage (ties by set index), so the outcome and node count never depend
    on scheduling.  ``frontier`` resumes a previously interrupted search.
    """
    cols, sets, covers = blocked_table(k)
    universe = (1 << k**k) - 1
    fact = factorial(k)
    if t <= 0:
        return SearchOutcome(False, None, 0, False, None)

    # stack frames: [uncovered, remaining, chosen, candidates|None, pos]
    if frontier is not None:
        stack = [[int(fr[0], 16), fr[1], list(fr[2]), list(fr[3]) if fr[3] is not None else None, fr[4]]
                 for fr in frontier]
    elif symmetry:
        stack = [[universe & ~sets[0], t - 1, [0], None, 0]]
    else:
        stack = [[universe, t, [], None, 0]]

    nodes = 0
    while stack:
        frame = stack[-1]
        uncovered, remaining, chosen, cands, pos = frame
        if cands is None:
            nodes += 1
            if budget is not None and nodes > budget:
                serial = [[format(fr[0], "x"), fr[1], list(fr[2]), fr[3], fr[4]] for fr in stack]
                return SearchOutcome(False, None, nodes, True, serial)
            if uncovered == 0:
                return SearchOutcome(True, tuple(chosen), nodes, False, None)
            if remaining == 0 or _ceil_div(uncovered.bit_count(), fact) > remaining:
                stack.pop()
                continue
            # the uncovered assignment with fewest covering sets; every cover
            # must pay for it, so its candidate list is the branch set
            best_f, best_n = -1, None
            u = uncovered
            while u:
                low = u & -u
                f = low.bit_length() - 1
                n = len(covers[f])
                if best_n is None or n < best_n:
                    best_f, best_n = f, n
                u ^= low
            cands = sorted(covers[best_f], key=lambda i: (-(sets[i] & uncovered).bit_count(), i))
            frame[3] = cands
            frame[4] = 0
            pos = 0
        if pos >= len(cands):
            stack.pop()
            continue
        idx = cands[pos]
        frame[4] = pos + 1
        stack.append([uncovered & ~sets[idx], remaining - 1, chosen + [idx], None, 0])
    return SearchOutcome(False, None, nodes, False, None)


def decide_uncoverable(
    k: int,
    t: int,
    budget: int | None = None,
    symmetry: bool = True,
) -> bool:
    """True iff t columns suffice to block every assignment, i.e. iff an
    uncolorable k-fold cover of K_{k,t} exists.  Complete search; a budget
    overrun raises ResourceLimitError rather than guessing."""
    if k < 1 or k > EXACT_MAX_FOLD:
        raise InvalidParameterError(f"exact mode supports 1 <= k <= {EXACT_MAX_FOLD}")
    if t < 0:
        raise InvalidParameterError("t must be >= 0")
    out = _search_cover(k, t, budget=budget, symmetry=symmetry)
    if out.exhausted:
        raise ResourceLimitError(
            f"cover search for (k={k}, t={t}) exceeded {budget} nodes",
            bracket=(t, None),
            partial=out.frontier,
        )
    return out.found


# ---------------------------------------------------------------------------
# greedy column selection

def _greedy_small(k: int, steps: int | None):
    """Global maximum over all canonical columns; ties to the lex-first column."""
    cols, sets, _ = blocked_table(k)
    universe = (1 << k**k) - 1
    uncovered = universe
    chosen: list[ColumnClass] = []
    survivors: list[int] = []
    while (uncovered and steps is None) or (steps is not None and len(chosen) < steps):
        best_i, best_gain = 0, -1
        for i, s in enumerate(sets):
            gain = (s & uncovered).bit_count()
            if gain > best_gain:
                best_i, best_gain = i, gain
        chosen.append(cols[best_i])
        uncovered &= ~sets[best_i]
        survivors.append(uncovered.bit_count())
    return chosen, survivors


def _greedy_stagewise(k: int, steps: int | None):
    """Column built one fiber permutation at a time, maximizing the number of
    survivors whose partial image is still injective (exact conditional
    expectation of the final fresh coverage, up to a constant factor)."""
    kk = k**k
    digits = np.array([assignment_colors(i, k) for i in range(kk)], dtype=np.int16)
    perms_lex = all_permutations(k)
    mask_lacks_bit = [
        np.array([(m >> c) & 1 == 0 for m in range(1 << k)]) for c in range(k)
    ]
    alive = np.ones(kk, dtype=bool)
    chosen: list[ColumnClass] = []
    survivors: list[int] = []
    while (alive.any() and steps is None) or (steps is not None and len(chosen) < steps):
        ok = alive.copy()
        used = np.zeros(kk, dtype=np.int16)
        column = []
        for i in range(k):
            d = digits[:, i]
            key = (d.astype(np.int32) << k) | used
            table = np.bincount(key[ok], minlength=k << k).reshape(k, 1 << k)
            # gain[dv][c]: survivors with digit dv whose used colors avoid c
            gain = np.stack([table[:, mask_lacks_bit[c]].sum(axis=1) for c in range(k)], axis=1)
            best_perm, best_score = None, -1
            for sig in perms_lex:
                score = int(sum(gain[dv][sig[dv]] for dv in range(k)))
                if score > best_score:
                    best_perm, best_score = sig, score
            column.append(best_perm)
            v = np.array(best_perm, dtype=np.int16)[d]
            ok &= ((used >> v) & 1) == 0
            used |= (np.int16(1) << v)
        alive &= ~ok
        chosen.append(ColumnClass(tuple(column)))
        survivors.append(int(alive.sum()))
    return chosen, survivors


def greedy_columns(k: int, steps: int | None = None):
    """Columns chosen to maximize newly blocked assignments; stops when all
    assignments are blocked, or after exactly ``steps`` columns.

    Returns (columns, survivor counts after each column).
    """
    if k < 1 or k > GREEDY_MAX_FOLD:
        raise InvalidParameterError(f"greedy supports 1 <= k <= {GREEDY_MAX_FOLD}")
    if k <= EXACT_MAX_FOLD:
        return _greedy_small(k, steps)
    return _greedy_stagewise(k, steps)


# ---------------------------------------------------------------------------
# results and certificates

@dataclass
class MuResult:
    k: int
    method: str
    lo: int
    hi: int
    value: int | None
    witness_columns: list[ColumnClass]
    impossibility_log: dict = field(default_factory=dict)
    frontier: list | None = None

    def __post_init__(self):
        bound = counting_lower(self.k)
        if self.lo < bound:
            raise InvalidParameterError(f"lo {self.lo} below counting bound {bound}")
        if self.hi < self.lo:
            raise InvalidParameterError(f"hi {self.hi} < lo {self.lo}")
        if self.value is not None and not (self.lo == self.value == self.hi):
            raise InvalidParameterError("an exact value must pin lo == value == hi")

    @property
    def bracket(self) -> tuple[int, int]:
        return (self.lo, self.hi)


def mu_greedy(k: int) -> MuResult:
    """Certified upper bound: greedy columns whose blocked sets cover everything."""
    columns, survivors = greedy_columns(k)
    hi = len(columns)
    if survivors[-1] != 0:
        raise InvalidWitnessError("greedy terminated before covering the universe")
    if hi > analytic_upper(k) + 1e-9:
        raise InvalidWitnessError(f"greedy value {hi} above the analytic upper bound")
    return MuResult(
        k=k,
        method="greedy",
        lo=counting_lower(k),
        hi=hi,
        value=(hi if hi == counting_lower(k) else None),
        witness_columns=columns,
        impossibility_log={"lower_bound": "counting", "lo": counting_lower(k)},
    )


def mu_exact(
    k: int,
    budget: int | None = DEFAULT_MU_BUDGET,
    resume: MuResult | None = None,
) -> MuResult:
    """The exact threshold for k <= 4, or a correct bracket if the budget runs out.

    Scans t upward from the counting lower bound; each refuted t is a completed
    search, and the first coverable t is the answer.  A budget-bounded run
    returns lo = first unrefuted t, hi = greedy value, plus a resumable frontier.
    """
    if k < 1 or k > EXACT_MAX_FOLD:
        raise InvalidParameterError(f"exact mode supports 1 <= k <= {EXACT_MAX_FOLD}")
    greedy = mu_greedy(k)
    hi, hi_columns = greedy.hi, greedy.witness_columns
    lower0 = counting_lower(k)
    log: dict = {"bound": "ceil(uncovered/k!)", "counting_lower": lower0}
    nodes_used = 0
    start_t = lower0
    frontier = None
    if resume is not None and resume.frontier is not None:
        if resume.k != k:
            raise InvalidParameterError("resume state belongs to a different fold")
        start_t = resume.lo
        frontier = resume.frontier
        log.update(resume.impossibility_log)
    for t in range(start_t, hi):
        left = None if budget is None else budget - nodes_used
        out = _search_cover(k, t, budget=left, frontier=frontier)
        frontier = None
        nodes_used += out.nodes
        if out.exhausted:
            log[str(t)] = {"nodes": out.nodes, "complete": False}
            return MuResult(
                k=k, method="exact", lo=t, hi=hi, value=None,
                witness_columns=hi_columns, impossibility_log=log,
                frontier=out.frontier,
            )
        if out.found:
            cols, _, _ = blocked_table(k)
            witness = [cols[i] for i in out.chosen]
            log["witness_t"] = t
            return MuResult(
                k=k, method="exact", lo=t, hi=t, value=t,
                witness_columns=witness, impossibility_log=log,
            )
        log[str(t)] = {"nodes": out.nodes, "complete": True}
    return MuResult(
        k=k, method="exact", lo=hi, hi=hi, value=hi,
        witness_columns=hi_columns, impossibility_log=log,
    )


def uncolorable_cover_from_columns(k: int, columns) -> MatchingCover:
    """Assemble the K_{k,t} cover whose right vertices carry the given columns.

    Requires the blocked-set union to be the full universe; the result then
    admits no coloring, which callers re-verify through the solver.
    """
    columns = list(columns)
    if not columns:
        raise InvalidWitnessError("need at least one column")
    universe = (1 << k**k) - 1
    union = 0
    for col in columns:
        if col.fold != k:
            raise InvalidParameterError(f"column fold {col.fold} != {k}")
        union |= blocked_set(col)
    if union != universe:
        raise InvalidWitnessError(
            f"columns block {union.bit_count()} of {k**k} assignments; union is not full"
        )
    g = complete_bipartite(k, len(columns))
    perms = {}
    for j, col in enumerate(columns):
        for i in range(k):
            perms[(i, k + j)] = col.perms[i]
    return build_cover(g, k, perms)


# ---------------------------------------------------------------------------
# certificate files: a self-contained record whose claim can be re-verified
# without rerunning the search that produced it.

CLAIMS = ("uncolorable", "exact-mu", "bracket")


def columns_to_lists(columns) -> list:
    return [[list(p) for p in col.perms] for col in columns]


def columns_from_lists(raw, k: int) -> list[ColumnClass]:
    cols = []
    for entry in raw:
        perms = tuple(tuple(int(x) for x in p) for p in entry)
        if len(perms) != k:
            raise InvalidParameterError(f"column has {len(perms)} permutations, expected {k}")
        cols.append(ColumnClass(perms))
    return cols


def certificate_from_result(res: MuResult) -> dict:
    if res.value is not None:
        claim, t = "exact-mu", res.value
    else:
        claim, t = "bracket", res.hi
    return {
        "k": res.k,
        "claim": claim,
        "t": t,
        "columns": columns_to_lists(res.witness_columns),
        "verified": False,
        "lo": res.lo,
        "hi": res.hi,
        "method": res.method,
        "impossibility": {key: val for key, val in res.impossibility_log.items()},
    }


def certificate_for_cover_columns(k: int, columns) -> dict:
    return {
        "k": k,
        "claim": "uncolorable",
        "t": len(columns),
        "columns": columns_to_lists(columns),
        "verified": False,
    }


def certificate_dumps(cert: dict) -> str:
    return json.dumps(cert, sort_keys=True, indent=2) + "\n"


def save_certificate(cert: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(certificate_dumps(cert))


def load_certificate(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def check_certificate(cert: dict, budget: int | None = DEFAULT_MU_BUDGET) -> tuple[bool, str]:
    """Re-verify a certificate from its contents alone.

    The uncolorable side is re-derived through the independent backtracking
    solver, never trusted from the file.  Returns (ok, reason).
    """
    from .solver import find_coloring  # local to keep module deps one-way

    try:
        k = int(cert["k"])
        claim = str(cert["claim"])
        t = int(cert["t"])
        raw_columns = cert["columns"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidParameterError(f"certificate missing required field: {exc}") from exc
    if claim not in CLAIMS:
        raise InvalidParameterError(f"unknown claim {claim!r}")
    columns = columns_from_lists(raw_columns, k)

    if len(columns) != t:
        return False, f"claimed t={t} but certificate carries {len(columns)} columns"
    try:
        cov = uncolorable_cover_from_columns(k, columns)
    except InvalidWitnessError as exc:
        return False, str(exc)
    if find_coloring(cov) is not None:
        return False, "solver found a coloring for the claimed uncolorable cover"

    if claim == "uncolorable":
        return True, f"uncolorable cover of K_{{{k},{t}}} re-verified"

    if claim == "exact-mu":
        try:
            if decide_uncoverable(k, t - 1, budget=budget):
                return False, f"{t - 1} columns also cover; {t} is not minimal"
        except ResourceLimitError:
            return False, f"could not re-verify minimality of t={t} within budget"
        return True, f"exact threshold {t} re-verified (cover at {t}, impossibility at {t - 1})"

    lo = int(cert.get("lo", counting_lower(k)))
    hi = int(cert.get("hi", t))
    if hi != t:
        return False, f"bracket hi={hi} disagrees with t={t}"
    if lo > hi:
        return False, f"empty bracket [{lo}, {hi}]"
    if lo > counting_lower(k):
        try:
            if decide_uncoverable(k, lo - 1, budget=budget):
                return False, f"bracket lower end {lo} refuted: {lo - 1} columns cover"
        except ResourceLimitError:
            return False, f"could not re-verify bracket lower end {lo} within budget"
    return True, f"bracket [{lo}, {hi}] re-verified"
