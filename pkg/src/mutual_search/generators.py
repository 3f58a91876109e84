"""Constructions of the named protocols."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import _kernels
from .asynchronous import RowOrderedAlgorithm
from .core import OrderedAlgorithm, Tournament, delete_site, greedy_refine

GAP = -1
_PAD = -2


def _check_n(n: int, least: int = 2) -> None:
    if n < least:
        raise ValueError(f"n must be at least {least}, got {n}")


def all_in_turn(n: int) -> OrderedAlgorithm:
    """Site 0 queries everyone, then site 1 queries everyone above it, ..."""
    _check_n(n)
    return OrderedAlgorithm.from_order(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def half_in_turn_rows(n: int) -> list[list[int]]:
    """Row ``i`` queries the next ``n // 2`` sites cyclically; for even ``n``
    the upper half of the sites makes one query fewer."""
    if n < 2:
        return [[] for _ in range(n)]
    h = n // 2
    rows = []
    for i in range(n):
        length = h - 1 if (n % 2 == 0 and i >= h) else h
        rows.append([(i + d) % n for d in range(1, length + 1)])
    return rows


def half_in_turn(n: int) -> OrderedAlgorithm:
    _check_n(n)
    rows = half_in_turn_rows(n)
    return OrderedAlgorithm.from_order(n, [(i, j) for i, r in enumerate(rows) for j in r])


def saturated_half_in_turn(n: int) -> OrderedAlgorithm:
    """HalfInTurn padded with extra sites until its cost equals its longest row.

    Cost is ``ceil(2(n-1)/3)``. When ``n`` is a multiple of 3 the padding from
    the natural base leaves one unit of slack, so the ``n + 1`` version is
    built instead and one base site is dropped.
    """
    _check_n(n, 4)
    if n % 3 == 0:
        big = saturated_half_in_turn(n + 1)
        base = -(-2 * n // 3) + 1
        return delete_site(big, base - 1)
    cost = -(-2 * (n - 1) // 3)
    m = cost + 1
    # same result as calling saturate_extend n - m times, built in one go
    order = [(i, j) for i, r in enumerate(half_in_turn_rows(m)) for j in r]
    order += [(i, s) for s in range(m, n) for i in range(s)]
    return OrderedAlgorithm.from_order(n, order)


def random_tournament(n: int, seed=None) -> Tournament:
    _check_n(n)
    rng = np.random.default_rng(seed)
    flip = np.triu(rng.integers(0, 2, size=(n, n), dtype=np.int8).astype(bool), 1)
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    adj = (upper & ~flip) | (upper & flip).T
    return Tournament(adj)


def random_half_in_concert(n: int, seed) -> OrderedAlgorithm:
    """HalfInTurn's tournament with every row shuffled, run in rounds.

    Round ``t`` holds each row's ``t``-th query, rows in site order.
    """
    _check_n(n)
    rng = np.random.default_rng(seed)
    rows = [rng.permutation(r).tolist() if r else [] for r in half_in_turn_rows(n)]
    order = []
    for t in range(max(len(r) for r in rows)):
        for i, r in enumerate(rows):
            if t < len(r):
                order.append((i, r[t]))
    return OrderedAlgorithm.from_order(n, order)


@dataclass(frozen=True)
class SrParams:
    n: int
    u: int  # upper group size
    c: int  # lower group size, also the target cost

    def fits(self) -> bool:
        return self.c * self.c // 4 >= comb(self.u, 2) and self.c // 2 <= self.u


def sr_params(n: int) -> SrParams:
    """Smallest lower-group size ``c`` for which the two-group layout fits."""
    _check_n(n, 3)
    for c in range(1, n):
        p = SrParams(n, n - c, c)
        if p.fits():
            return p
    raise ValueError(f"no feasible group split for n={n}")


class RowLayout:
    """Per-row cells, each a target site or :data:`GAP`.

    ``cells`` is an ``(n, width)`` array padded past each row's end.
    """

    __slots__ = ("cells", "lengths")

    def __init__(self, cells, lengths):
        self.cells = np.asarray(cells, dtype=np.int64)
        self.lengths = np.asarray(lengths, dtype=np.int64)
        self.cells.setflags(write=False)
        self.lengths.setflags(write=False)

    @classmethod
    def from_rows(cls, rows) -> "RowLayout":
        width = max((len(r) for r in rows), default=0)
        cells = np.full((len(rows), width), _PAD, dtype=np.int64)
        for i, r in enumerate(rows):
            cells[i, :len(r)] = [GAP if x is None else x for x in r]
        return cls(cells, [len(r) for r in rows])

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    def row(self, i: int) -> list:
        """Row ``i`` with gaps as None."""
        return [None if x == GAP else x for x in self.cells[i, :self.lengths[i]].tolist()]

    def rows(self) -> list[list]:
        return [self.row(i) for i in range(self.n)]

    def _filled(self):
        mask = self.cells >= 0
        src = np.nonzero(mask)[0]
        return src, self.cells[mask]

    def tournament(self) -> Tournament:
        src, dst = self._filled()
        adj = np.zeros((self.n, self.n), dtype=bool)
        adj[src, dst] = True
        return Tournament(adj)

    def to_row_ordered(self) -> RowOrderedAlgorithm:
        """Drop gaps; positions then count actual queries only."""
        src, dst = self._filled()
        offsets = np.concatenate([[0], np.cumsum(np.bincount(src, minlength=self.n))])
        return RowOrderedAlgorithm(targets=dst, offsets=offsets)

    def __eq__(self, other):
        return isinstance(other, RowLayout) and self.rows() == other.rows()

    def __repr__(self):
        return f"RowLayout(n={self.n})"


def sr_layout(n: int) -> RowLayout:
    """The two-group row layout before any temporal order is chosen.

    Upper sites run HalfInTurn among themselves; lower row ``u+i`` ends with
    queries to ``n-1`` down to ``u+i+1`` and opens with ``ceil(i/2)`` slots,
    filled row by row with upper targets ``0, 1, 2, ...`` modulo ``u``. Each
    upper row then takes its remaining lower targets in decreasing order,
    right-aligned.
    """
    p = sr_params(n)
    u, c = p.u, p.c
    upper = half_in_turn_rows(u)
    width = max(1, max(len(r) for r in upper))
    padded = np.zeros((u, width), dtype=np.int64)
    for i, r in enumerate(upper):
        padded[i, :len(r)] = r
    cells, lengths, bad = _kernels.sr_cells(
        n, u, c, padded, np.array([len(r) for r in upper], dtype=np.int64), GAP, _PAD)
    if bad >= 0:
        raise ValueError(f"row {bad} cannot hold its lower-group targets")
    return RowLayout(cells, lengths)


def sr(n: int) -> tuple[Tournament, RowLayout]:
    layout = sr_layout(n)
    return layout.tournament(), layout


def sr_algorithm(n: int) -> OrderedAlgorithm:
    return greedy_refine(sr_layout(n).tournament())


def asr_layout(n: int) -> RowLayout:
    """SR's layout with each row's lower-group targets in reverse order."""
    u = sr_params(n).u
    base = sr_layout(n)
    # lower-group targets always form the tail of a row, gaps excluded
    cells = _kernels.reverse_suffix_from(base.cells, base.lengths, u)
    return RowLayout(cells, base.lengths)


def asr(n: int) -> RowOrderedAlgorithm:
    return asr_layout(n).to_row_ordered()


def sr_witness(n: int) -> OrderedAlgorithm:
    """A hand-made cost-``c`` order for SR, built by retiring in four blocks.

    Retirement runs backwards in time: lower-to-lower edges bottom row first
    and right to left, then upper-to-lower by increasing lower index, then
    the upper HalfInTurn block from its last query back, then the
    lower-to-upper slot edges.
    """
    p = sr_params(n)
    u, c = p.u, p.c
    t, layout = sr(n)
    adj = t.adj
    retired = []
    for i in range(c - 1, -1, -1):
        retired += [(u + i, x) for x in range(u + i + 1, n)]
    for j in range(c):
        retired += [(i, u + j) for i in range(u) if adj[i, u + j]]
    upper = half_in_turn_rows(u)
    block = [(i, x) for i, r in enumerate(upper) for x in r]
    retired += block[::-1]
    for i in range(c):
        retired += [(u + i, x) for x in layout.row(u + i) if x is not None and x < u]
    return OrderedAlgorithm(t, retired[::-1])
