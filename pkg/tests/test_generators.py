from pathlib import Path

import pytest

from mutual_search import generators as g
from mutual_search.core import is_saturated, saturate_extend, sync_cost, threshold_refine
from mutual_search.io import render_matrix

FIXTURES = Path(__file__).parent / "fixtures"


def fixture(name: str) -> str:
    return (FIXTURES / name).read_text()


def test_all_in_turn():
    a = g.all_in_turn(4)
    assert a.rows() == [[1, 2, 3], [2, 3], [3], []]
    assert sync_cost(a) == 3
    assert g.all_in_turn(2).edges() == [(0, 1)]


def test_half_in_turn():
    h = g.half_in_turn(5)
    assert h.rows()[3] == [4, 0] and h.rows()[4] == [0, 1]
    assert sync_cost(h) == 4
    assert g.half_in_turn(4).row_lengths().tolist() == [2, 2, 1, 1]


def test_displays_match_fixtures():
    assert render_matrix(g.all_in_turn(4)) == fixture("allinturn_4.txt")
    assert render_matrix(g.half_in_turn(5)) == fixture("halfinturn_5.txt")


def test_saturated_half_in_turn_examples():
    s = g.saturated_half_in_turn(13)
    assert sync_cost(s) == 8 and is_saturated(s)
    # 13 sites come from HalfInTurn_9 plus four extensions
    assert s.rows()[:9] == [r + list(range(9, 13)) for r in g.half_in_turn(9).rows()]
    assert sync_cost(g.saturated_half_in_turn(4)) == 2
    with pytest.raises(ValueError):
        g.saturated_half_in_turn(3)


def test_saturated_matches_repeated_extension():
    for n in (7, 13, 20, 41):
        m = -(-2 * (n - 1) // 3) + 1
        alg = g.half_in_turn(m)
        for _ in range(n - m):
            alg = saturate_extend(alg)
        assert g.saturated_half_in_turn(n) == alg


@pytest.mark.parametrize("n", [6, 9, 12, 30])
def test_saturated_multiples_of_three(n):
    s = g.saturated_half_in_turn(n)
    s.validate()
    assert sync_cost(s) == -(-2 * (n - 1) // 3)
    assert is_saturated(s)


def test_random_tournament_is_reproducible():
    a = g.random_tournament(12, seed=99)
    a.validate()
    assert a == g.random_tournament(12, seed=99)
    assert a != g.random_tournament(12, seed=100)


def test_random_half_in_concert():
    r = g.random_half_in_concert(5, seed=3)
    r.validate()
    assert r.tournament == g.half_in_turn(5).tournament
    # one query per row per round, rows in site order within a round
    assert [a for a, _ in r.edges()] == [0, 1, 2, 3, 4] * 2
    assert r == g.random_half_in_concert(5, seed=3)
    r3 = g.random_half_in_concert(3, seed=0)
    assert r3.rows() == [[1], [2], [0]]
    assert sync_cost(r3) == 2


def test_sr_params():
    assert (g.sr_params(14).u, g.sr_params(14).c) == (6, 8)
    assert (g.sr_params(50).u, g.sr_params(50).c) == (21, 29)
    assert (g.sr_params(1000).u, g.sr_params(1000).c) == (414, 586)
    assert not g.SrParams(1000, 415, 585).fits()


def test_sr_14_layout_matches_fixture():
    t, layout = g.sr(14)
    t.validate()
    assert render_matrix(layout) == fixture("sr_14.txt")
    assert layout.row(3) == [4, 5, None, 11, 10, 8, 7, 6]
    assert sync_cost(g.sr_algorithm(14)) == 8


def test_sr_14_slots_are_upper_targets():
    """Every cell the unfilled picture leaves open holds an upper site."""
    u = g.sr_params(14).u
    layout = g.sr_layout(14)
    for line in fixture("sr_14_slots.txt").splitlines():
        label, *cells = line.split()
        i = int(label[:-1])
        row = layout.row(i)
        assert len(row) == len(cells)
        for want, got in zip(cells, row):
            if want == "*":
                if i >= u:
                    assert got is not None and got < u
            else:
                assert got == int(want)


def test_asr_14_matches_fixture():
    assert render_matrix(g.asr_layout(14)) == fixture("asr_14.txt")
    a = g.asr(14)
    a.validate()
    assert a.row(4) == [5, 0, 6, 7, 8, 9, 11, 13]
    assert a.tournament() == g.sr(14)[0]


def test_small_layouts():
    assert g.sr_layout(3).rows() == [[None, 1], [2], [0]]
    assert g.sr_layout(4).rows() == [[1, 2], [3, 2], [3], [0]]


@pytest.mark.parametrize("n", [14, 50, 97])
def test_sr_witness_reaches_c(n):
    w = g.sr_witness(n)
    w.validate()
    assert sync_cost(w) == g.sr_params(n).c


def test_sr_achieves_its_group_size():
    for n in range(3, 120):
        assert threshold_refine(g.sr(n)[0], g.sr_params(n).c) is not None, n


def test_row_layout_round_trip():
    layout = g.sr_layout(20)
    assert g.RowLayout.from_rows(layout.rows()) == layout
    assert layout.to_row_ordered().tournament() == layout.tournament()


def test_sr_slot_accounting():
    for n in range(3, 501):
        p = g.sr_params(n)
        layout = g.sr_layout(n)
        # open slots in the lower block, and no row repeats a target
        slots = sum(sum(1 for x in layout.row(p.u + i) if x is not None and x < p.u)
                    for i in range(p.c))
        assert slots == sum((i + 1) // 2 for i in range(p.c)) == p.c * p.c // 4
        layout.to_row_ordered().validate()


def test_every_generator_validates():
    from math import comb
    for n in range(2, 201):
        algs = [g.all_in_turn(n), g.half_in_turn(n), g.random_half_in_concert(n, seed=n)]
        if n >= 3:
            algs += [g.sr_algorithm(n), g.sr_witness(n)]
        if n >= 4:
            algs.append(g.saturated_half_in_turn(n))
        for a in algs:
            a.validate()
            assert len(a.order) == comb(n, 2)
        if n >= 3:
            g.asr(n).validate()
