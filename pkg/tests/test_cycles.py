import networkx as nx
import pytest

from hypersat.cycles import build_base_tree, build_cycle_tree, x_vertex
from hypersat.grid import GridSpace
from hypersat.oracle import all_fail_at
from hypersat.percolation import PatternFamily, percolate

CASES = [(2, 2, 2), (2, 3, 2), (2, 3, 3), (2, 4, 3), (2, 4, 4), (3, 2, 2), (3, 3, 2), (4, 2, 2),
         (3, 3, 3), (2, 5, 3), (4, 3, 2), (3, 4, 3)]


def as_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.space.n_vertices))
    h.add_edges_from(g.space.endpoints(e) for e in g.edges())
    return h


@pytest.mark.parametrize("l", [2, 3, 4, 5])
def test_base_tree(l):
    g = build_base_tree(l)
    assert g.n_edges == 2**l - 1
    assert nx.is_tree(as_nx(g))
    sp = g.space
    for t in range(1, l + 1):
        assert sp.edge_between(x_vertex(t - 1), x_vertex(t)) in g


def test_base_tree_l2_shape():
    g = build_base_tree(2)
    assert g.edges() == sorted(GridSpace.cube(2).edge_between(a, b) for a, b in [(0, 1), (0, 2), (1, 3)])


@pytest.mark.parametrize("k,d,l", CASES)
def test_cycle_tree_percolates(k, d, l):
    g = build_cycle_tree(k, d, l)
    assert g.n_edges == k**d - 1
    assert nx.is_tree(as_nx(g))
    cert = percolate(g, PatternFamily.even_cycle(g.space, 2 * l))
    assert cert.complete and cert.verify()


def test_range_checks():
    for bad in [(1, 2, 2), (2, 2, 3), (2, 1, 1)]:
        with pytest.raises(ValueError):
            build_cycle_tree(*bad)


@pytest.mark.parametrize("k,d,l", [(2, 2, 2), (2, 3, 2), (3, 2, 2)])
def test_one_edge_fewer_never_percolates(k, d, l):
    sp = GridSpace(k, d)
    assert all_fail_at(sp, PatternFamily.even_cycle(sp, 2 * l), k**d - 2)
