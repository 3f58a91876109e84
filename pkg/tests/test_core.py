import numpy as np
import pytest

from mutual_search.core import (
    Edge, OrderedAlgorithm, PartialAlgorithm, Tournament, ValidationError, delete_site,
    edge_cost, greedy_refine, greedy_refine_with_costs, is_saturated, oblivious_cost,
    refinement_cost, retire, retiring_cost, saturate_extend, simulate_sync, sync_cost,
    threshold_refine, worst_edge)
from mutual_search.generators import all_in_turn, half_in_turn, random_tournament

# HalfInTurn_4 reordered to cost 2
HIT4_REORDERED = [(0, 1), (3, 0), (0, 2), (1, 3), (1, 2), (2, 3)]


def test_tournament_validation():
    Tournament.from_edges(3, [(0, 1), (1, 2), (2, 0)]).validate()
    with pytest.raises(ValidationError):
        Tournament.from_edges(3, [(0, 1), (1, 2)]).validate()
    with pytest.raises(ValidationError):
        Tournament.from_edges(3, [(0, 1), (1, 0), (1, 2), (0, 2)]).validate()
    with pytest.raises(ValidationError):
        Tournament.from_edges(2, [(0, 5)])


def test_bits_round_trip():
    for mask in range(8):
        t = Tournament.from_bits(3, mask)
        t.validate()
        assert t.to_bits() == mask


def test_edge_cost_examples():
    a = all_in_turn(4)
    assert edge_cost(a, (0, 2)) == 2
    assert edge_cost(all_in_turn(2), (0, 1)) == 1
    h = OrderedAlgorithm.from_order(4, HIT4_REORDERED)
    h.validate()
    assert h.tournament == half_in_turn(4).tournament
    assert edge_cost(h, (2, 3)) == 2


def test_sync_cost_examples():
    assert sync_cost(all_in_turn(4)) == 3
    assert sync_cost(half_in_turn(5)) == 4
    assert sync_cost(OrderedAlgorithm.from_order(4, HIT4_REORDERED)) == 2


def test_worst_edge_matches_cost():
    alg = half_in_turn(7)
    e, c = worst_edge(alg)
    assert c == sync_cost(alg) == edge_cost(alg, e)


def test_simulate_sync():
    a = all_in_turn(4)
    tr = simulate_sync(a, 0, 2)
    assert [(q.edge, q.answer) for q in tr.queries] == [(Edge(0, 1), 0), (Edge(0, 2), 1)]
    assert tr.cost == 2
    assert simulate_sync(a, 0, 3).cost == 3
    assert simulate_sync(all_in_turn(2), 0, 1).cost == 1
    with pytest.raises(ValueError):
        simulate_sync(a, 1, 1)


def test_simulate_agrees_with_edge_cost():
    alg = greedy_refine(random_tournament(9, seed=4))
    for i in range(9):
        for j in range(i + 1, 9):
            e = (i, j) if alg.tournament.adj[i, j] else (j, i)
            assert simulate_sync(alg, i, j).cost == edge_cost(alg, e)


def _partial_example():
    t = Tournament.from_edges(4, [(0, 3), (0, 1), (1, 2), (2, 0), (2, 3), (3, 1)])
    return retire(retire(PartialAlgorithm(t), (3, 1)), (2, 3))


def test_retiring_cost_examples():
    p = _partial_example()
    assert set(p.unretired()) == {Edge(0, 1), Edge(0, 3), Edge(1, 2), Edge(2, 0)}
    assert retiring_cost(p, (2, 0)) == 3
    assert retiring_cost(p, (0, 3)) == 2
    assert retiring_cost(PartialAlgorithm(all_in_turn(2).tournament), (0, 1)) == 1
    with pytest.raises(ValueError):
        retiring_cost(p, (2, 3))


def test_retire_to_total_reverses():
    t = half_in_turn(4).tournament
    seq = [Edge(*e) for e in HIT4_REORDERED]
    p = PartialAlgorithm(t)
    for e in reversed(seq):
        p = retire(p, e)
    assert p.is_total()
    assert p.to_ordered().edges() == seq
    with pytest.raises(ValueError):
        retire(p, seq[0])


def test_retiring_cost_is_final_cost():
    t = random_tournament(10, seed=8)
    order, costs = greedy_refine_with_costs(t)
    alg = OrderedAlgorithm(t, order)
    assert np.array_equal(alg.edge_costs(), costs)


def test_greedy_refine_examples():
    assert sync_cost(greedy_refine(half_in_turn(4).tournament)) == 2
    assert sync_cost(greedy_refine(all_in_turn(4).tournament)) == 3
    assert sync_cost(greedy_refine(all_in_turn(2).tournament)) == 1
    with pytest.raises(ValueError):
        greedy_refine(all_in_turn(3).tournament, tie_break="random")


def test_threshold_and_bisection_agree_with_greedy():
    for seed in range(20):
        t = random_tournament(11, seed=seed)
        c = sync_cost(greedy_refine(t))
        assert refinement_cost(t) == c
        ok = threshold_refine(t, c)
        assert ok is not None and sync_cost(ok) <= c
        assert threshold_refine(t, c - 1) is None


def test_saturation():
    assert is_saturated(all_in_turn(4))
    assert not is_saturated(half_in_turn(5))
    assert is_saturated(all_in_turn(2))
    ext = saturate_extend(half_in_turn(5))
    assert ext.n == 6 and sync_cost(ext) == 4
    with pytest.raises(ValueError):
        saturate_extend(all_in_turn(4))


def test_half_in_turn_9_extended_to_13():
    alg = half_in_turn(9)
    for _ in range(4):
        alg = saturate_extend(alg)
    alg.validate()
    assert alg.n == 13 and sync_cost(alg) == 8


def test_delete_site_never_raises_cost():
    alg = greedy_refine(random_tournament(9, seed=1))
    for x in range(9):
        d = delete_site(alg, x)
        d.validate()
        assert sync_cost(d) <= sync_cost(alg)


def test_oblivious_cost():
    assert oblivious_cost(all_in_turn(4).tournament) == 5
    assert oblivious_cost(half_in_turn(5).tournament) == 4
    assert oblivious_cost(all_in_turn(2).tournament) == 1


def test_ordered_validation_rejects_bad_orders():
    with pytest.raises(ValidationError):
        OrderedAlgorithm.from_order(3, [(0, 1), (1, 2)]).validate()
    t = all_in_turn(3).tournament
    with pytest.raises(ValidationError):
        OrderedAlgorithm(t, [(0, 1), (0, 1), (1, 2)]).validate()
    with pytest.raises(ValidationError):
        OrderedAlgorithm(t, [(0, 1), (0, 2), (2, 1)]).validate()
