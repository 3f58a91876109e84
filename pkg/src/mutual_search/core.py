"""Ordered tournaments, the synchronous cost model and refinement.

A synchronous two-agent protocol on ``n`` sites is a tournament (for every
pair of sites, which one queries the other) together with a total temporal
order on its edges. Refinement builds that order backwards in time: each
retired edge becomes the earliest of the edges retired so far.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _kernels


class ValidationError(ValueError):
    """A structure violates its invariants."""


class GuardExceeded(ValueError):
    """An exhaustive computation was asked for beyond its size guard."""


class Edge(NamedTuple):
    src: int  # querier
    dst: int  # queried site


def canonical_pairs(n: int) -> list[tuple[int, int]]:
    """All pairs ``(i, j)`` with ``i < j``, in lexicographic order."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class Tournament:
    """Exactly one directed edge between every pair of sites.

    Stored as a boolean adjacency matrix; ``adj[i, j]`` means ``i`` queries
    ``j``. Construction does not validate; call :meth:`validate`.
    """

    __slots__ = ("adj",)

    def __init__(self, adj):
        self.adj = _frozen(np.array(adj, dtype=bool))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Tournament":
        adj = np.zeros((n, n), dtype=bool)
        e = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if len(e):
            if e.min() < 0 or e.max() >= n:
                raise ValidationError(f"edge endpoint outside [0, {n})")
            adj[e[:, 0], e[:, 1]] = True
        return cls(adj)

    @classmethod
    def from_bits(cls, n: int, mask: int) -> "Tournament":
        """Bit ``b`` set means the ``b``-th canonical pair points ``j -> i``."""
        adj = np.zeros((n, n), dtype=bool)
        for b, (i, j) in enumerate(canonical_pairs(n)):
            if (mask >> b) & 1:
                adj[j, i] = True
            else:
                adj[i, j] = True
        return cls(adj)

    def to_bits(self) -> int:
        mask = 0
        for b, (i, j) in enumerate(canonical_pairs(self.n)):
            if self.adj[j, i]:
                mask |= 1 << b
        return mask

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    @property
    def num_edges(self) -> int:
        return comb(self.n, 2)

    def edges(self) -> list[Edge]:
        """Edges in canonical pair order."""
        out = []
        for i, j in canonical_pairs(self.n):
            out.append(Edge(i, j) if self.adj[i, j] else Edge(j, i))
        return out

    def has_edge(self, e: Sequence[int]) -> bool:
        i, j = e
        return 0 <= i < self.n and 0 <= j < self.n and bool(self.adj[i, j])

    def row(self, i: int) -> list[int]:
        return np.flatnonzero(self.adj[i]).tolist()

    def row_lengths(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def validate(self) -> None:
        a = self.adj
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValidationError("adjacency matrix must be square")
        if self.n < 2:
            raise ValidationError("a tournament needs at least 2 sites")
        if a.diagonal().any():
            raise ValidationError("self-loop in tournament")
        if (a & a.T).any():
            raise ValidationError("both directions present for some pair")
        off = ~np.eye(self.n, dtype=bool)
        if not (a | a.T)[off].all():
            raise ValidationError("some pair of sites has no edge")

    def __eq__(self, other):
        return isinstance(other, Tournament) and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash((self.n, self.adj.tobytes()))

    def __repr__(self):
        return f"Tournament(n={self.n})"


class OrderedAlgorithm:
    """A tournament plus a temporal order on its edges (earliest first)."""

    __slots__ = ("tournament", "order", "_costs")

    def __init__(self, tournament: Tournament, order):
        self.tournament = tournament
        self.order = _frozen(np.array(order, dtype=np.int64).reshape(-1, 2))
        self._costs = None

    @classmethod
    def from_order(cls, n: int, order: Iterable[Sequence[int]]) -> "OrderedAlgorithm":
        order = np.asarray(list(order), dtype=np.int64).reshape(-1, 2)
        return cls(Tournament.from_edges(n, order), order)

    @property
    def n(self) -> int:
        return self.tournament.n

    def edges(self) -> list[Edge]:
        return [Edge(int(a), int(b)) for a, b in self.order]

    def rows(self) -> list[list[int]]:
        """Each site's queries in temporal order."""
        rows = [[] for _ in range(self.n)]
        for a, b in self.order.tolist():
            rows[a].append(b)
        return rows

    def row_lengths(self) -> np.ndarray:
        return np.bincount(self.order[:, 0], minlength=self.n)

    def position(self, e: Sequence[int]) -> int:
        hit = np.flatnonzero((self.order[:, 0] == e[0]) & (self.order[:, 1] == e[1]))
        if not len(hit):
            raise ValueError(f"{tuple(e)} is not an edge of this algorithm")
        return int(hit[0])

    def edge_costs(self) -> np.ndarray:
        """Cost of each edge, aligned with :attr:`order`."""
        if self._costs is None:
            self._costs = _frozen(_kernels.edge_costs(self.n, self.order))
        return self._costs

    def validate(self) -> None:
        self.tournament.validate()
        n = self.n
        if len(self.order) != comb(n, 2):
            raise ValidationError(
                f"order has {len(self.order)} edges, expected {comb(n, 2)}")
        o = self.order
        if o.min() < 0 or o.max() >= n:
            raise ValidationError("edge endpoint out of range")
        if not self.tournament.adj[o[:, 0], o[:, 1]].all():
            raise ValidationError("order contains an edge outside the tournament")
        if len(np.unique(o[:, 0] * n + o[:, 1])) != len(o):
            raise ValidationError("order repeats an edge")

    def __eq__(self, other):
        return (isinstance(other, OrderedAlgorithm)
                and self.tournament == other.tournament
                and np.array_equal(self.order, other.order))

    def __hash__(self):
        return hash(self.order.tobytes())

    def __repr__(self):
        return f"OrderedAlgorithm(n={self.n})"


class Query(NamedTuple):
    time: int
    edge: Edge
    answer: int


@dataclass(frozen=True)
class Transcript:
    queries: tuple[Query, ...]

    @property
    def cost(self) -> int:
        return len(self.queries)


def edge_cost(alg: OrderedAlgorithm, e: Sequence[int]) -> int:
    return int(alg.edge_costs()[alg.position(e)])


def sync_cost(alg: OrderedAlgorithm) -> int:
    return int(alg.edge_costs().max())


def worst_edge(alg: OrderedAlgorithm) -> tuple[Edge, int]:
    """The earliest edge attaining the algorithm's cost."""
    costs = alg.edge_costs()
    p = int(costs.argmax())
    return Edge(*map(int, alg.order[p])), int(costs[p])


def simulate_sync(alg: OrderedAlgorithm, i: int, j: int) -> Transcript:
    """Replay a run with the two agents at sites ``i`` and ``j``."""
    if i == j:
        raise ValueError("agents must occupy distinct sites")
    n = alg.n
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"sites must lie in [0, {n})")
    out = []
    for t, (a, b) in enumerate(alg.order.tolist()):
        if a not in (i, j):
            continue
        hit = b == (j if a == i else i)
        out.append(Query(t, Edge(a, b), int(hit)))
        if hit:
            break
    return Transcript(tuple(out))


@dataclass(frozen=True)
class PartialAlgorithm:
    """A tournament whose temporally last edges have been fixed.

    ``retired`` lists edges in retirement order, so the last element is the
    earliest of them in time.
    """

    tournament: Tournament
    retired: tuple[Edge, ...] = ()
    remaining: tuple[int, ...] = field(default=None)
    _retired_set: frozenset = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.remaining is None:
            left = self.tournament.row_lengths().astype(np.int64)
            for e in self.retired:
                left[e[0]] -= 1
            object.__setattr__(self, "remaining", tuple(int(x) for x in left))
        if self._retired_set is None:
            object.__setattr__(self, "_retired_set",
                               frozenset(Edge(*e) for e in self.retired))

    @property
    def n(self) -> int:
        return self.tournament.n

    def is_retired(self, e: Sequence[int]) -> bool:
        return Edge(*e) in self._retired_set

    def unretired(self) -> list[Edge]:
        return [e for e in self.tournament.edges() if e not in self._retired_set]

    def is_total(self) -> bool:
        return len(self.retired) == self.tournament.num_edges

    def to_ordered(self) -> OrderedAlgorithm:
        if not self.is_total():
            raise ValueError("partial algorithm still has unretired edges")
        return OrderedAlgorithm(self.tournament, list(reversed(self.retired)))

    def validate(self) -> None:
        self.tournament.validate()
        if len(self._retired_set) != len(self.retired):
            raise ValidationError("an edge is retired twice")
        for e in self.retired:
            if not self.tournament.has_edge(e):
                raise ValidationError(f"retired edge {tuple(e)} not in tournament")


def _check_unretired(p: PartialAlgorithm, e) -> Edge:
    e = Edge(*e)
    if not p.tournament.has_edge(e):
        raise ValueError(f"{tuple(e)} is not an edge of this tournament")
    if p.is_retired(e):
        raise ValueError(f"{tuple(e)} is already retired")
    return e


def retiring_cost(p: PartialAlgorithm, e: Sequence[int]) -> int:
    e = _check_unretired(p, e)
    return p.remaining[e.src] + p.remaining[e.dst]


def retire(p: PartialAlgorithm, e: Sequence[int]) -> PartialAlgorithm:
    e = _check_unretired(p, e)
    left = list(p.remaining)
    left[e.src] -= 1
    return PartialAlgorithm(p.tournament, p.retired + (e,), tuple(left),
                            p._retired_set | {e})


TIE_BREAKS = ("lex", "revlex")


def greedy_refine(t: Tournament, tie_break: str = "lex") -> OrderedAlgorithm:
    """Optimal total order for ``t``: always retire a cheapest edge.

    Among equally cheap edges the lexicographically smallest ``(src, dst)``
    is retired (``"revlex"``: the largest). The resulting cost does not
    depend on this choice.
    """
    order, _ = greedy_refine_with_costs(t, tie_break)
    return OrderedAlgorithm(t, order)


def greedy_refine_with_costs(t: Tournament, tie_break: str = "lex"):
    """Like :func:`greedy_refine`, also returning each edge's retiring cost."""
    if tie_break not in TIE_BREAKS:
        raise ValueError(f"tie_break must be one of {TIE_BREAKS}")
    return _kernels.greedy_refine(t.adj, tie_break == "revlex")


def threshold_refine(t: Tournament, limit: int) -> OrderedAlgorithm | None:
    """A total order of cost at most ``limit``, or None if none exists.

    Retires edges in any order as long as each costs at most ``limit``;
    since retiring a cheap edge never hurts, this fails only when every
    refinement exceeds ``limit``.
    """
    ok, order, _ = _kernels.threshold_refine(t.adj, int(limit))
    if not ok:
        return None
    return OrderedAlgorithm(t, order)


def refinement_cost(t: Tournament) -> int:
    """Optimal cost over all total orders of ``t``, by bisection on the limit."""
    lengths = np.sort(t.row_lengths())
    lo = int(lengths[-1])
    hi = int(lengths[-1] + lengths[-2])  # every order achieves this
    while lo < hi:
        mid = (lo + hi) // 2
        ok, _, _ = _kernels.threshold_refine(t.adj, mid)
        if ok:
            hi = mid
        else:
            lo = mid + 1
    return lo


def is_saturated(alg: OrderedAlgorithm) -> bool:
    return sync_cost(alg) == int(alg.row_lengths().max())


def saturate_extend(alg: OrderedAlgorithm) -> OrderedAlgorithm:
    """Add a site queried by every old site, after all old queries."""
    if is_saturated(alg):
        raise ValueError("algorithm is saturated; adding a site would raise its cost")
    n = alg.n
    new = np.column_stack([np.arange(n), np.full(n, n)])
    return OrderedAlgorithm.from_order(n + 1, np.vstack([alg.order, new]))


def delete_site(alg: OrderedAlgorithm, x: int) -> OrderedAlgorithm:
    """Restrict to all sites but ``x`` and relabel the rest downwards.

    Dropping a site only removes queries, so no edge cost goes up.
    """
    o = alg.order
    keep = (o[:, 0] != x) & (o[:, 1] != x)
    o = o[keep]
    o = o - (o > x)
    return OrderedAlgorithm.from_order(alg.n - 1, o)


def oblivious_cost(t: Tournament) -> int:
    """Worst pair's total planned queries when nothing stops early."""
    lengths = np.sort(t.row_lengths())
    return int(lengths[-1] + lengths[-2])
