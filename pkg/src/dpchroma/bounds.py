"""Closed-form threshold bounds and Monte Carlo validation of the probabilities.

For fold k the quantities of interest are

* ``list_threshold``   k**k, the classical list-coloring threshold;
* ``counting_lower``   ceil(k**k / k!): below it, t columns cannot block
  every assignment, so no uncolorable cover exists;
* ``bad_prob``         k!/k**k, the chance a uniformly random column blocks
  one fixed assignment;
* ``expected_survivors``  k**k * (1 - k!/k**k)**t, the expected number of
  assignments unblocked by t independent random columns;
* ``theorem3_m(t)``    t + floor(expected_survivors): the right side size at
  which the random construction plus one patch column per survivor is
  guaranteed uncolorable;
* ``analytic_upper``   1 + (k**k/k!) * (log(k!) + 1), what theorem3_m gives
  at the canonical choice t = ceil(k**k * log(k!) / k!).

Logs are natural.  Integer quantities are computed exactly (Python ints,
plus Fraction powers for the survivor expectation when feasible); the float
paths work in log space so nothing overflows through k = 20.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from .blocking import is_bad_for, iter_column_classes
from .errors import InvalidParameterError
from .model import FORMULA_MAX_FOLD, all_permutations

_EXACT_POW_LIMIT = 10**5  # largest exponent we evaluate as an exact Fraction power
_EPS = 1e-9


def _check_k(k: int, limit: int = FORMULA_MAX_FOLD) -> None:
    if not 1 <= k <= limit:
        raise InvalidParameterError(f"k must be in 1..{limit}, got {k}")


def list_threshold(k: int) -> int:
    return k**k


def counting_lower(k: int) -> int:
    return -(-(k**k) // factorial(k))


def log_factorial(k: int) -> float:
    return sum(math.log(i) for i in range(2, k + 1))


def bad_prob_fraction(k: int) -> Fraction:
    return Fraction(factorial(k), k**k)


def bad_prob(k: int) -> float:
    return factorial(k) / k**k


def chosen_t(k: int) -> int:
    """The canonical column count ceil(k**k * log(k!) / k!)."""
    _check_k(k)
    return math.ceil((k**k / factorial(k)) * log_factorial(k))


def analytic_upper(k: int) -> float:
    _check_k(k)
    return 1.0 + (k**k / factorial(k)) * (log_factorial(k) + 1.0)


def expected_survivors(k: int, t: int, exact: bool = False):
    """k**k * (1 - k!/k**k)**t; exact=True returns a Fraction."""
    _check_k(k)
    if t < 0:
        raise InvalidParameterError("t must be >= 0")
    kk, fact = k**k, factorial(k)
    if exact:
        return Fraction(kk) * Fraction(kk - fact, kk) ** t
    if kk == fact:  # k == 1: survivor probability collapses to 0
        return 1.0 if t == 0 else 0.0
    p = fact / kk
    return math.exp(k * math.log(k) + t * math.log1p(-p))


def theorem3_m(k: int, t: int) -> int:
    """t + floor(expected_survivors(k, t)), exact whenever feasible."""
    _check_k(k)
    if t < 0:
        raise InvalidParameterError("t must be >= 0")
    kk, fact = k**k, factorial(k)
    if t <= _EXACT_POW_LIMIT and k <= 8:
        surv = (kk - fact) ** t * kk  # floor((num/den)**t * kk) on one fraction line
        return t + surv // kk**t
    return t + math.floor(expected_survivors(k, t))


@dataclass(frozen=True)
class BoundsReport:
    k: int
    list_threshold: int
    counting_lower: int
    bad_prob: float
    chosen_t: int
    theorem3_m: int       # at chosen_t unless an override t was supplied
    analytic_upper: float
    t_used: int

    def chain_ok(self) -> bool:
        mid = chosen_t(self.k) + self.k**self.k / factorial(self.k)
        return (
            self.counting_lower <= self.analytic_upper + _EPS
            and theorem3_m(self.k, chosen_t(self.k)) <= mid + _EPS
            and mid <= self.analytic_upper + _EPS
        )


def bounds_report(k: int, t: int | None = None) -> BoundsReport:
    _check_k(k)
    t_used = chosen_t(k) if t is None else t
    report = BoundsReport(
        k=k,
        list_threshold=list_threshold(k),
        counting_lower=counting_lower(k),
        bad_prob=bad_prob(k),
        chosen_t=chosen_t(k),
        theorem3_m=theorem3_m(k, t_used),
        analytic_upper=analytic_upper(k),
        t_used=t_used,
    )
    if not report.chain_ok():
        raise InvalidParameterError(f"bound chain violated at k={k}; please report")
    return report


# ---------------------------------------------------------------------------
# exact probability by exhausting canonical columns

def exact_bad_prob(k: int, colors: tuple[int, ...] | None = None) -> Fraction:
    """Fraction of canonical columns blocking one fixed assignment.

    Exhaustive over all (k!)**(k-1) classes (guarded at k <= 4); every class
    stands for k! raw columns, so the class fraction equals the raw fraction.
    """
    if not 1 <= k <= 4:
        raise InvalidParameterError("exhaustive column probability limited to k <= 4")
    if colors is None:
        colors = (0,) * k
    hit = total = 0
    for col in iter_column_classes(k):
        total += 1
        if is_bad_for(colors, col):
            hit += 1
    return Fraction(hit, total)


# ---------------------------------------------------------------------------
# Monte Carlo: random covers drawn per block from spawned substreams, blocks
# combined in index order so results never depend on thread scheduling.

_POPCOUNT = np.array([bin(x).count("1") for x in range(256)], dtype=np.uint8)


def _survivor_block(k: int, t: int, block_size: int, seed_seq) -> np.ndarray:
    rng = np.random.default_rng(seed_seq)
    if t == 0:
        return np.full(block_size, k**k, dtype=np.int64)
    perms = np.argsort(rng.random((block_size, t, k, k)), axis=-1)
    inv = np.argsort(perms, axis=-1).astype(np.int16)
    pi = np.array(all_permutations(k), dtype=np.int64)  # (k!, k)
    idx = np.zeros((block_size, t, pi.shape[0]), dtype=np.int32)
    weight = 1
    for i in range(k):
        idx += weight * np.take(inv[:, :, i, :], pi[:, i], axis=-1)
        weight *= k
    flat = np.sort(idx.reshape(block_size, -1), axis=1)
    distinct = 1 + np.count_nonzero(np.diff(flat, axis=1), axis=1)
    return (k**k - distinct).astype(np.int64)


def monte_carlo_survivors(
    k: int,
    t: int,
    samples: int,
    seed: int,
    threads: int = 1,
    block_size: int = 4096,
) -> tuple[float, float]:
    """(mean, stderr) of the survivor count over random covers of K_{k,t}."""
    _check_k(k, limit=6)
    if samples < 1:
        raise InvalidParameterError("samples must be >= 1")
    if t < 0:
        raise InvalidParameterError("t must be >= 0")
    sizes = [block_size] * (samples // block_size)
    if samples % block_size:
        sizes.append(samples % block_size)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(lambda args: _survivor_block(k, t, *args), zip(sizes, seeds)))
    else:
        blocks = [_survivor_block(k, t, size, ss) for size, ss in zip(sizes, seeds)]
    values = np.concatenate(blocks)
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return mean, stderr


def _bad_prob_block(k: int, block_size: int, seed_seq) -> np.ndarray:
    rng = np.random.default_rng(seed_seq)
    perms = np.argsort(rng.random((block_size, k, k)), axis=-1)
    mapped = perms[:, :, 0]  # image of the fixed all-zeros assignment
    bits = np.bitwise_or.reduce(1 << mapped, axis=1)
    return _POPCOUNT[bits] == k


def monte_carlo_bad_prob(
    k: int,
    samples: int,
    seed: int,
    threads: int = 1,
    block_size: int = 65536,
) -> tuple[float, float]:
    """(estimate, stderr) of the chance a random column blocks a fixed assignment."""
    _check_k(k, limit=8)
    if samples < 1:
        raise InvalidParameterError("samples must be >= 1")
    sizes = [block_size] * (samples // block_size)
    if samples % block_size:
        sizes.append(samples % block_size)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(lambda args: _bad_prob_block(k, *args), zip(sizes, seeds)))
    else:
        blocks = [_bad_prob_block(k, size, ss) for size, ss in zip(sizes, seeds)]
    hits = np.concatenate(blocks)
    est = float(hits.mean())
    stderr = math.sqrt(est * (1.0 - est) / samples)
    return est, stderr


# ---------------------------------------------------------------------------
# table output

_COLUMNS = ("k", "list_threshold", "counting_lower", "mu_known", "theorem3_m", "analytic_upper")


def bounds_rows(kmax: int, mu_known: dict[int, str] | None = None, t: int | None = None) -> list[dict]:
    mu_known = mu_known or {}
    rows = []
    for k in range(1, kmax + 1):
        rep = bounds_report(k, t)
        rows.append(
            {
                "k": k,
                "list_threshold": rep.list_threshold,
                "counting_lower": rep.counting_lower,
                "mu_known": mu_known.get(k, "-"),
                "theorem3_m": rep.theorem3_m,
                "analytic_upper": f"{rep.analytic_upper:.3f}",
            }
        )
    return rows


def format_bounds_table(rows: list[dict]) -> str:
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in _COLUMNS}
    lines = ["  ".join(c.rjust(widths[c]) for c in _COLUMNS)]
    for r in rows:
        lines.append("  ".join(str(r[c]).rjust(widths[c]) for c in _COLUMNS))
    return "\n".join(lines) + "\n"


def format_bounds_csv(rows: list[dict]) -> str:
    lines = [",".join(_COLUMNS)]
    lines.extend(",".join(str(r[c]) for c in _COLUMNS) for r in rows)
    return "\n".join(lines) + "\n"
