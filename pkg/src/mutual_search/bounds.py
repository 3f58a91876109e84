"""Closed-form cost bounds and row-length checks.

Ceilings of irrational multiples are computed exactly with integer square
roots: for integers ``a`` and ``x >= 1``, ``ceil(a*x - sqrt(d)*x)`` equals
``a*x - isqrt(d*x*x)`` whenever ``sqrt(d)`` is irrational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import numpy as np

from .core import OrderedAlgorithm, sync_cost

MODELS = ("sync-det", "async-det", "oblivious", "randomized")


def lb_sync_det(n: int) -> int:
    """Deterministic synchronous lower bound: the larger of ``ceil(n/2)`` and
    ``ceil((4 - 2*sqrt(3)) * (n-1))``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    x = n - 1
    return max(-(-n // 2), 4 * x - isqrt(12 * x * x))


def ub_sr(n: int) -> int:
    """``ceil((2 - sqrt(2)) * (n-1))``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    x = n - 1
    return 2 * x - isqrt(2 * x * x)


def ub_asr(n: int) -> int:
    """``ceil((5 - sqrt(2)) * n / 4)``."""
    if n < 1:
        raise ValueError("n must be positive")
    # (5n - sqrt(2)n)/4 lies strictly inside ((A-1)/4, A/4) with A = 5n - isqrt(2n^2)
    a = 5 * n - isqrt(2 * n * n)
    return (a + 3) // 4


def lb_oblivious(n: int) -> int:
    if n < 2:
        raise ValueError("n must be at least 2")
    return 2 * (n // 2)  # == 2*ceil((n-1)/2)


def lb_randomized(n: int) -> Fraction:
    if n < 2:
        raise ValueError("n must be at least 2")
    return Fraction(n - 1, 8)


def randomized_concert_value(n: int) -> Fraction:
    """Worst-case expected cost of the randomized concert protocol as stated:
    ``(n+1)/2`` for odd ``n``, ``ceil((n+1)/2)`` for even ``n``."""
    if n % 2:
        return Fraction(n + 1, 2)
    return Fraction(n // 2 + 1)


def _violations(alg: OrderedAlgorithm, slack) -> list[int]:
    c = sync_cost(alg)
    lengths = np.sort(alg.row_lengths())
    return [k for k, length in enumerate(lengths.tolist()) if slack(length, c, k)]


def waste_lemma_check(alg: OrderedAlgorithm) -> list[int]:
    """Every ``k`` whose ``(k+1)``-st shortest row is longer than ``c/2 + k``.

    Always empty for a valid algorithm of cost ``c``.
    """
    return _violations(alg, lambda length, c, k: 2 * length > c + 2 * k)


def conjecture_check(alg: OrderedAlgorithm) -> list[int]:
    """Every ``k`` whose ``(k+1)``-st shortest row is longer than ``(c+k)/2``.

    The strengthened bound is known to fail for some algorithms, so a
    non-empty result is data, not an error.
    """
    return _violations(alg, lambda length, c, k: 2 * length > c + k)


def conjecture_premise(alg: OrderedAlgorithm) -> bool:
    """No row shorter than ``floor(c/2)``."""
    return int(alg.row_lengths().min()) >= sync_cost(alg) // 2


@dataclass(frozen=True)
class BoundReport:
    n: int
    model: str
    lower: int | Fraction
    upper: int | Fraction
    witnesses: tuple[str, ...] = field(default=())


def bound_report(n: int, model: str) -> BoundReport:
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")
    if n < 2:
        raise ValueError("n must be at least 2")
    if model == "randomized":
        return BoundReport(n, model, lb_randomized(n), randomized_concert_value(n), ("rhc",))
    if model == "oblivious":
        # the 2*ceil((n-1)/2) refinement needs n > 2; for two sites the floor is n-1
        v = lb_oblivious(n) if n > 2 else n - 1
        return BoundReport(n, model, v, v, ("halfinturn",))
    lower = lb_sync_det(n)
    if n == 2:
        return BoundReport(n, model, lower, 1, ("allinturn",))
    if model == "sync-det":
        return BoundReport(n, model, lower, ub_sr(n), ("sr",))
    return BoundReport(n, model, lower, ub_asr(n), ("asr",))
