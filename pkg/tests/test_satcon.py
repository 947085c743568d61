import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypersat import satcon
from hypersat.satcon import X, SatParams, derive_params


@pytest.fixture(scope="module")
def con12(cache_dir):
    return satcon.SatConstruction.create(2, 12, seed=0, cache_dir=cache_dir)


@pytest.fixture(scope="module")
def con15(cache_dir):
    return satcon.SatConstruction.create(2, 15, seed=0, cache_dir=cache_dir)


@pytest.mark.parametrize("m,d,t,s", [(2, 12, 1, 0), (2, 15, 1, 3), (2, 36, 2, 0), (2, 35, 1, 23), (3, 18, 1, 0)])
def test_derive_params(m, d, t, s):
    assert derive_params(m, d) == SatParams(m, d, t, s)


def test_derive_params_rejects():
    for m, d in [(1, 12), (2, 11)]:
        with pytest.raises(ValueError):
            derive_params(m, d)


def test_layout_covers_all_coordinates():
    p = derive_params(2, 40)
    covered = sorted(b for _, start, ln in p.layout() for b in range(start, start + ln))
    assert covered == list(range(40))


def test_scalar_and_vector_rules_agree(con12):
    sp = con12.space
    tab = sp.edge_table
    mask = con12.edge_mask(tab[:, 0], tab[:, 2])
    for e in range(sp.n_edges):
        assert bool(mask[e]) == con12.edge_in_g(int(tab[e, 0]), int(tab[e, 1]))
    codes = con12.class_codes(np.arange(sp.n_vertices, dtype=np.int64))
    assert all(codes[v] == con12.class_code(v) for v in range(0, sp.n_vertices, 7))


def test_census_matches_closed_form(con12, con15):
    for con in (con12, con15):
        assert satcon.class_census(con) == satcon.class_sizes_closed_form(con.params)


def test_closed_form_sums_to_host():
    for m, d in [(2, 36), (3, 18), (2, 100)]:
        sizes = satcon.class_sizes_closed_form(derive_params(m, d))
        assert sum(sizes.values()) == 2**d and sizes["X"] >= 0


def test_d12_base_graph(con12):
    g = satcon.build_base_graph(con12)
    assert g.n_edges == 12
    assert satcon.verify_qm_free(g, 2)
    assert all(satcon.check_observations(con12, g).values())
    assert satcon.verify_a0_saturation(con12) == (True, 0)


def test_d15_witnesses(con15):
    ok, n = satcon.verify_a0_saturation(con15)
    assert ok and n > 0
    for u, v in satcon.a0_edges(con15):
        assert not con15.edge_in_g(u, v)
        verts = con15.witness_subcube(u, v)
        assert len(verts) == 4 and u in verts and v in verts


def test_non_adjacent_pair_rejected(con12):
    with pytest.raises(ValueError):
        con12.edge_in_g(0, 3)
    with pytest.raises(ValueError):
        con12.edge_in_g(5, 5)


def test_qm_detection():
    from hypersat.grid import GridSpace
    from hypersat.percolation import EdgeSubgraph
    sp = GridSpace.cube(4)
    assert satcon.count_qm_copies(EdgeSubgraph.full(sp), 2) == (24, 24)
    assert satcon.count_qm_copies(EdgeSubgraph.full(sp), 3) == (8, 8)
    assert satcon.verify_qm_free(EdgeSubgraph.empty(sp), 2)


@settings(max_examples=20)
@given(st.integers(0, 2**32))
def test_completion_of_random_free_graph_is_saturated(seed):
    from hypersat.grid import GridSpace
    from hypersat.oracle import is_saturated as oracle_saturated
    from hypersat.percolation import EdgeSubgraph
    sp = GridSpace.cube(4)
    rng = random.Random(seed)
    g = EdgeSubgraph.empty(sp)
    for e in rng.sample(range(sp.n_edges), 6):
        g.present[e] = True
        if not satcon.verify_qm_free(g, 2):
            g.present[e] = False
    full = satcon.complete_to_saturated(g, 2)
    assert g.issubset(full)
    assert satcon.is_saturated(full, 2) and oracle_saturated(sp, full, 2)


def test_sampled_checks(con15):
    assert satcon.verify_qm_free_sampled(con15, 2000, seed=3)
    ok, drawn = satcon.verify_qm_free_targeted(con15, 200, seed=3, batch=1 << 14)
    assert ok and drawn > 0
    pairs = satcon.sample_a0_edges(con15, 5, seed=1)
    assert all(con15.class_code(u) == 0 == con15.class_code(v) for u, v in pairs)


def test_vertex_class_str():
    assert str(satcon.VertexClass(X)) == "X"
    assert str(satcon.VertexClass(1)) == "A_1"
