"""Invariants checked on generated instances."""

from itertools import combinations

import numpy as np
from hypothesis import given, settings, strategies as st

from mutual_search import io
from mutual_search.asynchronous import RowOrderedAlgorithm, async_cost, async_edge_costs
from mutual_search.bounds import (lb_oblivious, lb_sync_det, ub_asr, ub_sr,
                                  waste_lemma_check)
from mutual_search.core import (OrderedAlgorithm, Tournament, delete_site, edge_cost,
                                greedy_refine, oblivious_cost, refinement_cost,
                                saturate_extend, is_saturated, simulate_sync, sync_cost)
from mutual_search.multiagent import RsConfig, rs_simulate
from mutual_search.oracle import exhaustive_refine
from mutual_search.randomized import expected_cost_closed_form, expected_cost_exact

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def tournaments(draw, lo=2, hi=9):
    n = draw(st.integers(lo, hi))
    mask = draw(st.integers(0, (1 << (n * (n - 1) // 2)) - 1))
    return Tournament.from_bits(n, mask)


@st.composite
def ordered(draw, lo=2, hi=8):
    t = draw(tournaments(lo, hi))
    order = draw(st.permutations(t.edges()))
    return OrderedAlgorithm(t, order)


@given(tournaments())
def test_bits_round_trip(t):
    t.validate()
    assert Tournament.from_bits(t.n, t.to_bits()) == t


@given(tournaments(2, 5))
def test_greedy_is_optimal(t):
    assert sync_cost(greedy_refine(t)) == exhaustive_refine(t)


@given(tournaments(2, 12))
def test_tie_break_and_bisection_agree(t):
    c = sync_cost(greedy_refine(t))
    assert sync_cost(greedy_refine(t, "revlex")) == c
    assert refinement_cost(t) == c


@given(ordered())
def test_cost_between_longest_row_and_oblivious(alg):
    alg.validate()
    lengths = np.sort(alg.row_lengths())
    c = sync_cost(alg)
    assert lengths[-1] <= c <= oblivious_cost(alg.tournament)
    assert sync_cost(greedy_refine(alg.tournament)) <= c


@given(ordered())
def test_simulation_matches_edge_cost(alg):
    for i, j in combinations(range(alg.n), 2):
        e = (i, j) if alg.tournament.adj[i, j] else (j, i)
        assert simulate_sync(alg, i, j).cost == edge_cost(alg, e)


@given(tournaments(2, 12))
def test_waste_lemma(t):
    assert waste_lemma_check(greedy_refine(t)) == []


@given(ordered(3, 8))
def test_oblivious_floor(alg):
    assert oblivious_cost(alg.tournament) >= lb_oblivious(alg.n)


@given(ordered(), st.data())
def test_delete_site_is_monotone(alg, data):
    x = data.draw(st.integers(0, alg.n - 1))
    if alg.n > 2:
        assert sync_cost(delete_site(alg, x)) <= sync_cost(alg)


@given(tournaments(3, 9))
def test_extension_keeps_cost(t):
    alg = greedy_refine(t)
    if not is_saturated(alg):
        ext = saturate_extend(alg)
        ext.validate()
        assert sync_cost(ext) == sync_cost(alg)
        assert ext.row_lengths().max() == alg.row_lengths().max() + 1


@given(tournaments(2, 8), st.randoms(use_true_random=False))
def test_async_cost_formula(t, rnd):
    rows = [t.row(i) for i in range(t.n)]
    for r in rows:
        rnd.shuffle(r)
    alg = RowOrderedAlgorithm(rows)
    alg.validate()
    costs = async_edge_costs(alg)
    p = 0
    for i, r in enumerate(rows):
        for pos, j in enumerate(r):
            assert costs[p] == pos + 1 + len(rows[j])
            p += 1
    assert async_cost(alg, querier_offset=0) == async_cost(alg) - 1
    lengths = alg.row_lengths()
    if any(r and lengths[r[-1]] > 0 for r in rows):
        assert async_cost(alg) >= lengths.max() + 1


@given(st.integers(2, 3000))
def test_bound_ordering(n):
    assert lb_sync_det(n) <= ub_asr(n)
    if n > 2:
        assert lb_sync_det(n) <= ub_sr(n) <= ub_asr(n)


@given(tournaments())
def test_io_round_trip(t):
    assert io.loads(io.dumps(t)) == t
    alg = greedy_refine(t)
    assert io.loads(io.dumps(alg)) == alg
    rows = RowOrderedAlgorithm(alg.rows())
    assert io.loads(io.dumps(rows)) == rows


@st.composite
def rs_runs(draw):
    k = draw(st.integers(2, 5))
    m = draw(st.integers(1, 4))
    cfg = RsConfig(k, m)
    place = draw(st.lists(st.integers(0, cfg.n - 1), min_size=k, max_size=k, unique=True))
    return cfg, place


@given(rs_runs())
def test_rs_invariants(run):
    cfg, place = run
    tr = rs_simulate(cfg, place)
    ring = [e.target for e in tr.events if e.target < cfg.ring]
    assert len(ring) == len(set(ring))
    assert tr.ring_queries <= tr.initial_ring_classes * cfg.budget
    assert tr.total_queries <= cfg.bound
    assert tr.events[-1].merged
    assert sum(e.merged for e in tr.events) == cfg.k - 1


@given(st.integers(2, 11), st.data())
def test_randomized_closed_form(n, data):
    i, j = data.draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
    if n <= 8:
        assert expected_cost_exact(n, (i, j)) == expected_cost_closed_form(n, (i, j))
