import pytest

from hypersat.grid import GridSpace
from hypersat.oracle import (BudgetExceeded, Golden, SearchBudget, compute_golden, copy_masks,
                             enumerate_cycles, is_saturated, min_sat, min_wsat, read_fixtures, write_fixtures)
from hypersat.percolation import EdgeSubgraph, PatternFamily, is_weakly_saturated
from hypersat.wsat import wsat_grid_formula

from conftest import FIXTURES


@pytest.mark.parametrize("k,r,d,m", [(2, 2, 2, 2), (2, 2, 3, 2), (2, 2, 3, 3), (3, 2, 2, 2), (3, 3, 2, 2)])
def test_oracle_matches_formula(k, r, d, m):
    sp = GridSpace(k, d)
    res = min_wsat(sp, PatternFamily.axis(sp, r, m))
    assert res.value == wsat_grid_formula(k, r, d, m)
    assert is_weakly_saturated(EdgeSubgraph.from_edges(sp, res.witness), PatternFamily.axis(sp, r, m))


@pytest.mark.parametrize("k,d,want", [(2, 3, 7), (3, 2, 8), (2, 2, 3)])
def test_oracle_cycles(k, d, want):
    sp = GridSpace(k, d)
    assert min_wsat(sp, PatternFamily.even_cycle(sp, 4)).value == want


def test_cycle_enumeration_small():
    assert len(enumerate_cycles(GridSpace.cube(3), 4)) == 6
    assert len(enumerate_cycles(GridSpace.cube(3), 6)) == 16
    assert len(enumerate_cycles(GridSpace(3, 2), 4)) == 4
    # the boundary plus four L-shaped unions of three unit squares
    assert len(enumerate_cycles(GridSpace(3, 2), 8)) == 5


def test_sat_values_and_ordering():
    for d in (2, 3):
        sp = GridSpace.cube(d)
        s = min_sat(sp, 2)
        w = min_wsat(sp, PatternFamily.subcube(sp, 2))
        assert w.value <= s.value
        assert is_saturated(sp, EdgeSubgraph.from_edges(sp, s.witness), 2)
    assert min_sat(GridSpace.cube(2), 2).value == 3


def test_is_saturated_small():
    sp = GridSpace.cube(2)
    assert not is_saturated(sp, EdgeSubgraph.full(sp), 2)
    assert is_saturated(sp, EdgeSubgraph.from_edges(sp, [0, 1, 2]), 2)
    assert not is_saturated(sp, EdgeSubgraph.from_edges(sp, [0, 1]), 2)


def test_budget_refuses_large_hosts():
    sp = GridSpace.cube(4)
    with pytest.raises(BudgetExceeded):
        min_wsat(sp, PatternFamily.subcube(sp, 2))
    with pytest.raises(BudgetExceeded):
        min_sat(GridSpace(2, 4), 2)
    with pytest.raises(BudgetExceeded):
        min_wsat(GridSpace.cube(3), PatternFamily.subcube(GridSpace.cube(3), 2), SearchBudget(16, 0.0))


def test_descending_search_gives_same_minimum():
    sp = GridSpace(3, 2)
    fam = PatternFamily.axis(sp, 2, 2)
    assert min_wsat(sp, fam, SearchBudget(16, 60, ascending=False)).value == 8


def test_copy_masks_shape():
    sp = GridSpace.cube(3)
    masks = copy_masks(PatternFamily.subcube(sp, 2))
    assert len(masks) == 6 and all(bin(x).count("1") == 4 for x in masks)


def test_golden_fixtures_reproduce():
    rows = read_fixtures(FIXTURES / "oracle_golden.txt")
    assert len(rows) >= 10
    for row in rows:
        assert compute_golden(row.k, row.d, row.family) == row


def test_fixture_roundtrip(tmp_path):
    rows = [Golden(2, 3, "subcube:2", 7, (0, 1, 2, 3, 4, 6, 8))]
    write_fixtures(tmp_path / "f.txt", rows, "cmd")
    assert read_fixtures(tmp_path / "f.txt") == rows
    assert (tmp_path / "f.txt").read_text().startswith("# generated by: cmd")
