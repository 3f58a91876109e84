"""The ring-segments protocol for ``k`` agents.

Sites ``0 .. k(k-1)m - 1`` form a ring; the last ``m`` sites are left over.
Agents on the ring each get ``(k-1)m`` queries and walk ahead of
themselves; when a query hits another agent the two classes merge, pool
their budgets and carry on from the front class's position. Whoever is
still apart afterwards has its ring classes sweep the leftover sites.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import NamedTuple, Sequence

import numpy as np

from .core import GuardExceeded, ValidationError

EXHAUSTIVE_LIMIT = 10**6


@dataclass(frozen=True)
class RsConfig:
    k: int
    m: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.m < 1:
            raise ValueError("m must be at least 1")

    @property
    def ring(self) -> int:
        return self.k * (self.k - 1) * self.m

    @property
    def n(self) -> int:
        return self.ring + self.m

    @property
    def budget(self) -> int:
        """Ring queries granted to each agent that starts on the ring."""
        return (self.k - 1) * self.m

    @property
    def bound(self) -> int:
        return self.k * (self.k - 1) * self.m

    @classmethod
    def from_n(cls, n: int, k: int) -> "RsConfig":
        per = k * (k - 1) + 1
        if k < 2 or n % per:
            raise ValueError(f"n={n} is not a multiple of k(k-1)+1={per}")
        return cls(k, n // per)


@dataclass
class AgentClass:
    members: set
    frontier: int
    remaining_ring_budget: int
    queried: set = field(default_factory=set)
    ring_members: int = 0

    @property
    def key(self) -> int:
        return min(self.members)


class RsEvent(NamedTuple):
    step: int
    querier: int  # smallest member of the querying class
    target: int
    answer: bool
    merged: bool
    phase: int


@dataclass(frozen=True)
class RsTranscript:
    config: RsConfig
    placement: tuple[int, ...]
    events: tuple[RsEvent, ...]
    total_queries: int
    ring_queries: int
    initial_ring_classes: int

    def validate(self) -> None:
        """No ring site is queried twice, and ring queries stay in budget."""
        ring = [e.target for e in self.events if e.target < self.config.ring]
        if len(ring) != len(set(ring)):
            seen = set()
            dup = next(x for x in ring if x in seen or seen.add(x))
            raise AssertionError(f"ring site {dup} queried twice")
        if self.ring_queries > self.initial_ring_classes * self.config.budget:
            raise AssertionError("ring phase overspent its budget")


def _check_placement(cfg: RsConfig, placement: Sequence[int]) -> tuple[int, ...]:
    p = tuple(int(x) for x in placement)
    if len(p) != cfg.k:
        raise ValidationError(f"expected {cfg.k} agents, got {len(p)}")
    if len(set(p)) != len(p):
        raise ValidationError("placement sites must be distinct")
    if any(not 0 <= x < cfg.n for x in p):
        raise ValidationError(f"placement sites must lie in [0, {cfg.n})")
    return p


def _next_turn(classes: list, last: int):
    """Round robin by smallest member: first class keyed above ``last``."""
    if not classes:
        return None
    ordered = sorted(classes, key=lambda c: c.key)
    for c in ordered:
        if c.key > last:
            return c
    return ordered[0]


def rs_simulate(cfg: RsConfig, placement: Sequence[int]) -> RsTranscript:
    p = _check_placement(cfg, placement)
    ring = cfg.ring
    classes = []
    for s in sorted(p):
        on_ring = s < ring
        classes.append(AgentClass(
            members={s},
            frontier=(s + 1) % ring if on_ring else -1,
            remaining_ring_budget=cfg.budget if on_ring else 0,
            ring_members=int(on_ring)))
    owner = {s: c for c in classes for s in c.members}
    start_ring = sum(c.ring_members for c in classes)
    events = []
    ring_queries = 0

    def merge(a: AgentClass, b: AgentClass, front: AgentClass) -> None:
        a.members |= b.members
        a.queried |= b.queried
        a.remaining_ring_budget += b.remaining_ring_budget
        a.ring_members += b.ring_members
        a.frontier = front.frontier
        for s in b.members:
            owner[s] = a
        classes.remove(b)

    def fire(c: AgentClass, target: int, phase: int) -> None:
        c.queried.add(target)
        hit = owner.get(target)
        answer = hit is not None and hit is not c
        events.append(RsEvent(len(events), c.key, target, answer, answer, phase))
        if answer:
            # the queried class lies ahead, so its frontier is the merged one
            merge(c, hit, hit)

    last = -1
    while len(classes) > 1:
        active = [c for c in classes if c.remaining_ring_budget > 0]
        c = _next_turn(active, last)
        if c is None:
            break
        last = c.key
        t = c.frontier
        while t in c.members:
            t = (t + 1) % ring
        c.frontier = (t + 1) % ring
        c.remaining_ring_budget -= 1
        ring_queries += 1
        fire(c, t, 1)

    leftover = range(ring, cfg.n)
    last = -1
    while len(classes) > 1:
        # classes holding a ring agent do the sweeping; the rest only wait,
        # unless nobody started on the ring
        sweepers = [c for c in classes if c.ring_members] or classes
        todo = [c for c in sweepers
                if any(s not in c.members and s not in c.queried for s in leftover)]
        c = _next_turn(todo, last)
        if c is None:
            raise RuntimeError(f"agents at {p} never all met")
        last = c.key
        t = next(s for s in leftover if s not in c.members and s not in c.queried)
        fire(c, t, 2)

    tr = RsTranscript(cfg, p, tuple(events), len(events), ring_queries, start_ring)
    tr.validate()
    return tr


@dataclass(frozen=True)
class RsSweep:
    worst: int
    placement: tuple[int, ...]
    runs: int


def rs_sweep(cfg: RsConfig, mode: str = "exhaustive", count: int | None = None,
             seed=None) -> RsSweep:
    """Worst transcript cost over every placement, or over ``count`` random ones."""
    if mode == "exhaustive":
        total = comb(cfg.n, cfg.k)
        if total > EXHAUSTIVE_LIMIT:
            raise GuardExceeded(
                f"C({cfg.n},{cfg.k}) = {total} placements exceeds {EXHAUSTIVE_LIMIT}")
        places = combinations(range(cfg.n), cfg.k)
    elif mode == "sampled":
        if not count or count < 1:
            raise ValueError("sampled mode needs a positive count")
        rng = np.random.default_rng(seed)
        places = (tuple(sorted(rng.choice(cfg.n, cfg.k, replace=False).tolist()))
                  for _ in range(count))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    worst, arg, runs = -1, (), 0
    for pl in places:
        cost = rs_simulate(cfg, pl).total_queries
        runs += 1
        if cost > worst:
            worst, arg = cost, tuple(pl)
    return RsSweep(worst, arg, runs)


def rs_worst_cost(cfg: RsConfig, mode: str = "exhaustive", count: int | None = None,
                  seed=None) -> int:
    return rs_sweep(cfg, mode, count, seed).worst
