"""Brute-force ground truth for small instances.

Sites are labelled (every agent knows its own index), so no isomorphism
reduction is applied: every orientation counts as a distinct protocol.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import permutations
from math import comb, factorial, prod

import numpy as np

from . import _kernels
from .asynchronous import RowOrderedAlgorithm, async_cost
from .core import GuardExceeded, OrderedAlgorithm, Tournament, canonical_pairs, sync_cost

SYNC_MAX_N = 7
REFINE_MAX_N = 5
ASYNC_MAX_N = 5


@dataclass(frozen=True)
class OracleResult:
    n: int
    model: str
    optimum: int
    witness: Tournament | RowOrderedAlgorithm
    enumerated: int


def _guard(n: int, hi: int, what: str) -> None:
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > hi:
        raise GuardExceeded(f"{what} is limited to n <= {hi}, got {n}")


def _sync_chunk(args):
    n, lo, hi, bound = args
    pairs = np.array(canonical_pairs(n), dtype=np.int64)
    return _kernels.oracle_sync_range(n, lo, hi, pairs[:, 0], pairs[:, 1], bound)


def optimal_sync_cost(n: int, jobs: int | None = 1) -> OracleResult:
    """Cheapest synchronous protocol over every tournament on ``n`` sites.

    Each tournament is costed by greedy refinement. The mask space is cut
    into contiguous chunks; ``jobs > 1`` spreads them over processes. The
    witness is the smallest mask attaining the optimum however it is split.
    """
    _guard(n, SYNC_MAX_N, "optimal_sync_cost")
    total = 1 << comb(n, 2)
    jobs = jobs or os.cpu_count() or 1
    chunks = max(1, min(jobs * 4, total))
    edges = np.linspace(0, total, chunks + 1).astype(np.int64)
    bound = n * n  # exceeds every possible cost
    work = [(n, int(a), int(b), bound) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(jobs) as ex:
            parts = list(ex.map(_sync_chunk, work))
    else:
        parts = [_sync_chunk(w) for w in work]
    best, mask = min((int(c), int(m)) for c, m in parts if m >= 0)
    return OracleResult(n, "sync", best, Tournament.from_bits(n, mask), total)


def exhaustive_refine(t: Tournament) -> int:
    """Smallest cost over every total order of ``t``'s edges.

    Dynamic programming over the set of edges already scheduled: an edge's
    cost depends only on which edges of its two rows precede it, so the best
    order of a prefix set is independent of what follows.
    """
    _guard(t.n, REFINE_MAX_N, "exhaustive_refine")
    edges = t.edges()
    m = len(edges)
    row_mask = [0] * t.n
    for b, (i, _) in enumerate(edges):
        row_mask[i] |= 1 << b
    full = (1 << m) - 1
    best = [m + 1] * (1 << m)
    best[0] = 0
    for placed in range(full):
        here = best[placed]
        if here > m:
            continue
        for b, (i, j) in enumerate(edges):
            if placed >> b & 1:
                continue
            c = (row_mask[i] & placed).bit_count() + 1 + (row_mask[j] & placed).bit_count()
            nxt = placed | 1 << b
            v = max(here, c)
            if v < best[nxt]:
                best[nxt] = v
    return best[full]


def brute_force_refine(t: Tournament) -> int:
    """Minimum over literally every permutation of the edges (n <= 4)."""
    _guard(t.n, 4, "brute_force_refine")
    edges = t.edges()
    return min(sync_cost(OrderedAlgorithm(t, p)) for p in permutations(edges))


def _best_row_order(row: list[int], lengths: np.ndarray) -> tuple[int, tuple[int, ...]]:
    best = None
    for perm in permutations(row):
        worst = max((p + 1 + int(lengths[x]) for p, x in enumerate(perm)), default=0)
        if best is None or worst < best[0]:
            best = (worst, perm)
    return best


def optimal_async_cost(n: int) -> OracleResult:
    """Cheapest asynchronous protocol over all tournaments and row orders.

    A row's order only affects the costs of that row's own edges, so each
    row's permutations are searched separately; together they cover the
    whole product of row orders.
    """
    _guard(n, ASYNC_MAX_N, "optimal_async_cost")
    m = comb(n, 2)
    best = None
    enumerated = 0
    for mask in range(1 << m):
        t = Tournament.from_bits(n, mask)
        lengths = t.row_lengths()
        enumerated += prod(factorial(int(x)) for x in lengths)
        worst = 0
        rows = []
        for i in range(n):
            c, perm = _best_row_order(t.row(i), lengths)
            worst = max(worst, c)
            rows.append(list(perm))
        if best is None or worst < best[0]:
            best = (worst, rows)
    alg = RowOrderedAlgorithm(best[1])
    assert async_cost(alg) == best[0]
    return OracleResult(n, "async", best[0], alg, enumerated)
