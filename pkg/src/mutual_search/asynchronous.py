"""Asynchronous cost model: each row is ordered, rows are not interleaved.

An edge ``(i, j)`` costs its 1-based position in row ``i`` plus the full
length of row ``j``, since the queried agent may already have finished.
"""

from __future__ import annotations

from math import comb
from typing import Sequence

import numpy as np

from .core import Edge, Tournament, ValidationError


class RowOrderedAlgorithm:
    """Per-site query sequences, stored flat with row offsets."""

    __slots__ = ("targets", "offsets")

    def __init__(self, rows: Sequence[Sequence[int]] = None, *, targets=None, offsets=None):
        if rows is not None:
            lengths = np.fromiter((len(r) for r in rows), dtype=np.int64, count=len(rows))
            offsets = np.concatenate([[0], np.cumsum(lengths)])
            targets = (np.concatenate([np.asarray(r, dtype=np.int64) for r in rows])
                       if len(rows) else np.zeros(0, dtype=np.int64))
        self.targets = np.asarray(targets, dtype=np.int64)
        self.offsets = np.asarray(offsets, dtype=np.int64)
        self.targets.setflags(write=False)
        self.offsets.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.offsets) - 1

    def row(self, i: int) -> list[int]:
        return self.targets[self.offsets[i]:self.offsets[i + 1]].tolist()

    def rows(self) -> list[list[int]]:
        return [self.row(i) for i in range(self.n)]

    def row_lengths(self) -> np.ndarray:
        return np.diff(self.offsets)

    def sources(self) -> np.ndarray:
        return np.repeat(np.arange(self.n), self.row_lengths())

    def tournament(self) -> Tournament:
        adj = np.zeros((self.n, self.n), dtype=bool)
        adj[self.sources(), self.targets] = True
        return Tournament(adj)

    def validate(self) -> None:
        n = self.n
        if n < 2:
            raise ValidationError("need at least 2 sites")
        if len(self.targets) != comb(n, 2):
            raise ValidationError(f"{len(self.targets)} queries, expected {comb(n, 2)}")
        if len(self.targets) and (self.targets.min() < 0 or self.targets.max() >= n):
            raise ValidationError("target outside site range")
        src = self.sources()
        if len(np.unique(src * n + self.targets)) != len(src):
            raise ValidationError("a row repeats a target")
        self.tournament().validate()

    def __eq__(self, other):
        return (isinstance(other, RowOrderedAlgorithm)
                and np.array_equal(self.offsets, other.offsets)
                and np.array_equal(self.targets, other.targets))

    def __hash__(self):
        return hash((self.offsets.tobytes(), self.targets.tobytes()))

    def __repr__(self):
        return f"RowOrderedAlgorithm(n={self.n})"


def async_edge_costs(alg: RowOrderedAlgorithm, querier_offset: int = 1) -> np.ndarray:
    """Cost of every query, flat and aligned with ``alg.targets``.

    ``querier_offset=1`` counts the contacting query itself; 0 gives the
    0-based position convention.
    """
    src = alg.sources()
    pos = np.arange(len(alg.targets)) - alg.offsets[src] + querier_offset
    return pos + alg.row_lengths()[alg.targets]


def async_edge_cost(alg: RowOrderedAlgorithm, e: Sequence[int], querier_offset: int = 1) -> int:
    i, j = e
    row = alg.row(i)
    if j not in row:
        raise ValueError(f"{tuple(e)} is not an edge of this algorithm")
    return row.index(j) + querier_offset + int(alg.row_lengths()[j])


def async_cost(alg: RowOrderedAlgorithm, querier_offset: int = 1) -> int:
    return int(async_edge_costs(alg, querier_offset).max())


def async_worst_edge(alg: RowOrderedAlgorithm, querier_offset: int = 1) -> tuple[Edge, int]:
    costs = async_edge_costs(alg, querier_offset)
    p = int(costs.argmax())
    return Edge(int(alg.sources()[p]), int(alg.targets[p])), int(costs[p])
