"""Randomized two-agent search on HalfInTurn's tournament.

Each agent shuffles its own row and the agents query in concert: round
``t`` gives every occupied row its ``t``-th query, lower sites first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import sqrt
from typing import Sequence

import numpy as np

from .core import GuardExceeded
from .generators import half_in_turn_rows

EXACT_MAX_N = 13


def _placement(n: int, placement: Sequence[int]) -> tuple[int, int]:
    i, j = placement
    if i == j:
        raise ValueError("agents must occupy distinct sites")
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"sites must lie in [0, {n})")
    return i, j


def concert_cost(n: int, placement: Sequence[int], perm_i: Sequence[int],
                 perm_j: Sequence[int]) -> int:
    """Queries made by both agents up to and including first contact.

    ``perm_i`` and ``perm_j`` are the shuffled rows of the agents at
    ``placement[0]`` and ``placement[1]``.
    """
    i, j = _placement(n, placement)
    rows = half_in_turn_rows(n)
    if sorted(perm_i) != sorted(rows[i]) or sorted(perm_j) != sorted(rows[j]):
        raise ValueError("permutations must rearrange the agents' rows")
    seq = {i: list(perm_i), j: list(perm_j)}
    other = {i: j, j: i}
    first, second = sorted((i, j))
    made = 0
    for t in range(max(len(perm_i), len(perm_j))):
        for a in (first, second):
            if t < len(seq[a]):
                made += 1
                if seq[a][t] == other[a]:
                    return made
    raise AssertionError("HalfInTurn always connects every pair")


def expected_cost_exact(n: int, placement: Sequence[int]) -> Fraction:
    """Average concert cost over every pair of row permutations."""
    if n > EXACT_MAX_N:
        raise GuardExceeded(
            f"exact enumeration is limited to n <= {EXACT_MAX_N}; "
            "use monte_carlo_expected_cost")
    i, j = _placement(n, placement)
    rows = half_in_turn_rows(n)
    total = 0
    count = 0
    for pi in permutations(rows[i]):
        for pj in permutations(rows[j]):
            total += concert_cost(n, (i, j), pi, pj)
            count += 1
    return Fraction(total, count)


def worst_expected_cost(n: int) -> tuple[Fraction, tuple[int, int]]:
    """Largest exact expected cost over all placements, with the placement."""
    best = None
    for pair in combinations(range(n), 2):
        v = expected_cost_exact(n, pair)
        if best is None or v > best[0]:
            best = (v, pair)
    return best


def expected_cost_closed_form(n: int, placement: Sequence[int]) -> Fraction:
    """The same expectation from the position distribution of the contact.

    If ``a`` queries ``b`` at position ``p`` (uniform over ``a``'s row),
    ``b`` has by then made ``min(p-1, len_b)`` queries, plus one more when
    ``b < a`` and its row reaches round ``p``.
    """
    i, j = _placement(n, placement)
    rows = half_in_turn_rows(n)
    a, b = (i, j) if j in rows[i] else (j, i)
    la, lb = len(rows[a]), len(rows[b])
    total = sum(p + min(p - 1, lb) + (b < a and lb >= p) for p in range(1, la + 1))
    return Fraction(total, la)


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    stderr: float
    trials: int


def sample_row_permutations(n: int, placement: Sequence[int], trials: int,
                            rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Independent uniform shuffles of both agents' rows, one per trial."""
    i, j = _placement(n, placement)
    rows = half_in_turn_rows(n)
    pi = rng.permuted(np.broadcast_to(np.asarray(rows[i], dtype=np.int64), (trials, len(rows[i]))), axis=1)
    pj = rng.permuted(np.broadcast_to(np.asarray(rows[j], dtype=np.int64), (trials, len(rows[j]))), axis=1)
    return pi, pj


def concert_costs(n: int, placement: Sequence[int], perms_i: np.ndarray,
                  perms_j: np.ndarray) -> np.ndarray:
    """Vectorised :func:`concert_cost` over rows of permutation arrays."""
    i, j = _placement(n, placement)
    rows = half_in_turn_rows(n)
    if j in rows[i]:
        a, b, pa, lb = i, j, perms_i, len(rows[j])
    else:
        a, b, pa, lb = j, i, perms_j, len(rows[i])
    p = np.argmax(pa == b, axis=1) + 1
    return p + np.minimum(p - 1, lb) + ((b < a) & (lb >= p))


def monte_carlo_expected_cost(n: int, placement: Sequence[int], trials: int,
                              seed=None) -> MonteCarloEstimate:
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(seed)
    parts = []
    done = 0
    while done < trials:
        k = min(1 << 16, trials - done)
        parts.append(concert_costs(n, placement, *sample_row_permutations(n, placement, k, rng)))
        done += k
    costs = np.concatenate(parts).astype(float)
    se = costs.std(ddof=1) / sqrt(trials) if trials > 1 else 0.0
    return MonteCarloEstimate(float(costs.mean()), float(se), trials)


def monte_carlo_async_random_rows(n: int, placement: Sequence[int], trials: int,
                                  seed=None) -> MonteCarloEstimate:
    """Asynchronous variant: shuffled rows, adversarial timing.

    The queried agent may have finished its whole row first, so a trial
    costs the contact position plus the queried row's length. No bound is
    claimed for this protocol.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    i, j = _placement(n, placement)
    rows = half_in_turn_rows(n)
    a, b = (i, j) if j in rows[i] else (j, i)
    rng = np.random.default_rng(seed)
    pa = rng.permuted(np.broadcast_to(np.asarray(rows[a]), (trials, len(rows[a]))), axis=1)
    costs = (np.argmax(pa == b, axis=1) + 1 + len(rows[b])).astype(float)
    se = costs.std(ddof=1) / sqrt(trials) if trials > 1 else 0.0
    return MonteCarloEstimate(float(costs.mean()), float(se), trials)
