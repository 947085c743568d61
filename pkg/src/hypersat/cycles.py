"""Spanning trees of P_k^d that are weakly saturated for the even cycle C_{2l}.

The tree is built recursively: the base case is a levelled tree on Q_l,
extra dimensions are added by copying the tree into layer 0 and joining
layers along the new coordinate, and larger sides are handled by hanging
the vertices with top coordinates off a tree on P_{k-1}^d.
"""

from __future__ import annotations

from .grid import GridSpace
from .percolation import EdgeSubgraph


def _check(k: int, d: int, l: int) -> None:
    if k < 2 or l < 2 or d < l:
        raise ValueError(f"need k >= 2 and d >= l >= 2, got k={k}, d={d}, l={l}")


def x_vertex(t: int) -> int:
    """t ones followed by zeros, as a little-endian bitmask."""
    return (1 << t) - 1


def build_base_tree(l: int) -> EdgeSubgraph:
    """Tree on Q_l: each vertex of weight t >= 1 has one parent of weight t-1."""
    if l < 2:
        raise ValueError(f"need l >= 2, got {l}")
    space = GridSpace(2, l)
    g = EdgeSubgraph.empty(space)
    for v in range(1, 1 << l):
        t = bin(v).count("1")
        if t == 1 or v == x_vertex(t):
            parent = x_vertex(t - 1)
        else:
            parent = min(v ^ (1 << b) for b in range(l)
                         if v >> b & 1 and v ^ (1 << b) != x_vertex(t - 1))
        g.present[space.edge_between(v, parent)] = True
    return g


def _add_dimension(prev: EdgeSubgraph, k: int) -> EdgeSubgraph:
    """Tree on P_k^d from one on P_k^(d-1): copy into the layer x_d = 0, plus every edge along x_d."""
    d = prev.space.d + 1
    space = GridSpace(k, d)
    g = EdgeSubgraph.empty(space)
    # a vertex of P_k^(d-1) is the same id in layer 0 of P_k^d
    for e in prev.edges():
        u, v = prev.space.endpoints(e)
        g.present[space.edge_between(u, v)] = True
    last = d - 1
    p = space.powers[last]
    for w in range(prev.space.n_vertices):
        for c in range(k - 1):
            g.present[space.edge_id(w + c * p, last)] = True
    return g


def _grow_side(prev: EdgeSubgraph, k: int) -> EdgeSubgraph:
    """Tree on P_k^d from one on P_(k-1)^d.

    Vertices with no coordinate equal to k-1 carry the old tree; any other
    vertex is joined to the vertex obtained by lowering its first top
    coordinate from k-1 to k-2.
    """
    d = prev.space.d
    space = GridSpace(k, d)
    g = EdgeSubgraph.empty(space)
    for e in prev.edges():
        a, b = prev.space.endpoints(e)
        g.present[space.edge_between(space.encode(prev.space.decode(a)),
                                     space.encode(prev.space.decode(b)))] = True
    for v in range(space.n_vertices):
        cs = space.decode(v)
        top = [i for i, c in enumerate(cs) if c == k - 1]
        if top:
            i = top[0]
            g.present[space.edge_id(v - space.powers[i], i)] = True
    return g


def build_cycle_tree(k: int, d: int, l: int) -> EdgeSubgraph:
    """A k^d - 1 edge spanning tree of P_k^d that is weakly C_{2l}-saturated.

    Recursion lowers d to l first, then k to 2.
    """
    _check(k, d, l)
    if d > l:
        return _add_dimension(build_cycle_tree(k, d - 1, l), k)
    if k > 2:
        return _grow_side(build_cycle_tree(k - 1, d, l), k)
    return build_base_tree(l)
