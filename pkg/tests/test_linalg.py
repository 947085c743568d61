from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hypersat.grid import AxisSubgrid, GridSpace
from hypersat.linalg import (CertSpace, build_edge_vectors, certify_all_copies, construction_rank,
                             dependency_certificate, in_general_position, moment_vectors, null_combination,
                             rank_exact, rank_lower_bound, rank_mod_p, y_vectors)
from hypersat.wsat import build_wsat_graph, wsat_grid_formula


def test_moment_vectors():
    assert moment_vectors(3, 3) == [(1, 1), (2, 4), (3, 9)]
    assert moment_vectors(2, 2) == [(1,), (2,)]
    assert moment_vectors(4, 1) == [(), (), (), ()]
    assert in_general_position(moment_vectors(7, 4))


def test_y_vectors_examples():
    assert y_vectors(4, 3) == [(1,), (-1,), (1,)]
    assert y_vectors(5, 4) == [(1, 0), (0, 1), (-1, -1), (1, 0)]
    assert y_vectors(3, 2) == [(), ()]


@given(st.integers(2, 12), st.data())
def test_y_vector_laws(k, data):
    r = data.draw(st.integers(2, k))
    ys = y_vectors(k, r)
    assert len(ys) == k - 1
    for t in range(k - 1 - (r - 2) + 1):
        window = ys[t : t + r - 2]
        if window:
            assert rank_exact([list(y) for y in window]) == r - 2
    for t in range(k - 1 - (r - 1) + 1):
        window = ys[t : t + r - 1]
        assert all(sum(col) == 0 for col in zip(*window))


def test_cert_space_dimension():
    cs = CertSpace(GridSpace(4, 2), 3, 2)
    assert cs.dim == 16 * 1 + 8 * 1


def test_edge_vector_examples():
    cs, vecs = build_edge_vectors(2, 2, 2, 2)
    e = GridSpace.cube(2).edge_between(0, 1)
    assert vecs[e] == {cs.vertex_offset(0): 1, cs.vertex_offset(1): 1}
    cs, vecs = build_edge_vectors(3, 3, 1, 1)
    sp = GridSpace(3, 1)
    assert vecs[sp.edge_between(1, 2)] == {cs.line_offset(0): -1}
    for k, r, d, m in [(4, 3, 3, 3), (3, 3, 3, 2)]:
        cs, vecs = build_edge_vectors(k, r, d, m)
        for vec in vecs.values():
            blocks = {i // (m - 1) if i < cs.line_offset(0) else ("L", i) for i in vec}
            assert len(blocks) <= 3


@pytest.mark.parametrize("args,want", [((2, 2, 3, 2), 7), ((3, 2, 2, 2), 8), ((2, 2, 2, 2), 3)])
def test_rank_examples(args, want):
    assert rank_lower_bound(*args) == want


@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=1, max_size=6))
def test_bareiss_agrees_with_modular(rows):
    assert rank_exact(rows) == rank_mod_p(rows)


def test_rank_of_dependent_rows():
    assert rank_exact([[1, 2, 3], [2, 4, 6], [0, 0, 0]]) == 1
    assert rank_exact([[0, 0], [0, 0]]) == 0


def test_null_combination_normalized():
    c = null_combination([(1,), (2,)])
    assert c == [Fraction(1), Fraction(-1, 2)]
    c = null_combination(moment_vectors(3, 3))
    assert c[0] == 1 and all(x != 0 for x in c)


def test_certificate_unit_square():
    sp = GridSpace.cube(2)
    cert = dependency_certificate(AxisSubgrid(2, (0, 1), (0, 0), ()), 2, 2, 2, 2)
    assert cert.verified
    vals = set(cert.coefficients.values())
    assert vals == {Fraction(1), Fraction(-1, 2)}
    assert sorted(cert.coefficients) == list(sp.edges())
    js = cert.to_json()
    assert js["verified"] and len(js["coefficients"]) == 4


def test_certificate_path_copy():
    cert = dependency_certificate(AxisSubgrid(3, (0,), (0,), ()), 3, 3, 1, 1)
    assert cert.verified and set(cert.coefficients.values()) == {Fraction(1)}


def test_certificate_square_in_p3():
    cert = dependency_certificate(AxisSubgrid(2, (0, 1), (1, 0), ()), 3, 2, 2, 2)
    assert cert.verified


def test_certificate_rejects_wrong_shape():
    with pytest.raises(ValueError):
        dependency_certificate(AxisSubgrid(2, (0, 1), (0, 0), ()), 3, 3, 2, 2)


@pytest.mark.parametrize("k,r,d,m", [(4, 3, 2, 2), (2, 2, 4, 3), (4, 4, 2, 2), (3, 3, 3, 3)])
def test_all_copies_certified(k, r, d, m):
    n, ok = certify_all_copies(k, r, d, m)
    assert n > 0 and ok == n


@pytest.mark.parametrize("k,r,d,m", [(2, 2, 3, 2), (3, 2, 2, 2), (3, 3, 2, 2), (4, 3, 2, 2), (3, 3, 3, 2)])
def test_construction_is_independent(k, r, d, m):
    g = build_wsat_graph(k, r, d, m)
    assert construction_rank(k, r, d, m) == g.n_edges == wsat_grid_formula(k, r, d, m)


def test_rank_refuses_large_hosts():
    with pytest.raises(ValueError):
        rank_lower_bound(4, 2, 5, 2, max_edges=1000)
