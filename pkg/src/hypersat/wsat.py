"""Weak saturation numbers for axis-aligned subgrids and the matching extremal graphs."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .grid import GridSpace
from .percolation import EdgeSubgraph


@dataclass(frozen=True)
class WsatParams:
    k: int
    r: int
    d: int
    m: int

    def __post_init__(self):
        if not 2 <= self.r <= self.k:
            raise ValueError(f"need k >= r >= 2, got k={self.k}, r={self.r}")
        if not 1 <= self.m <= self.d:
            raise ValueError(f"need d >= m >= 1, got d={self.d}, m={self.m}")

    @property
    def space(self) -> GridSpace:
        return GridSpace(self.k, self.d)


def wsat_grid_formula(k: int, r: int, d: int, m: int) -> int:
    """Minimum size of a weakly saturated subgraph of P_k^d for axis-aligned P_r^m (exact)."""
    WsatParams(k, r, d, m)
    a, b = k - r + 1, r - 2  # python already has 0**0 == 1
    first = sum(
        (m - 1 + i) * comb(d, j) * comb(d - j, i) * a**j * b**i
        for j in range(d + 1)
        for i in range(d - j + 1)
    )
    second = sum(
        (m - 1 - j) * comb(d, j) * comb(d - j, i) * a**j * b**i
        for j in range(m - 1)
        for i in range(d - j + 1)
    )
    return first - second


def wsat_cube_formula(d: int, m: int) -> int:
    if not 1 <= m <= d:
        raise ValueError(f"need d >= m >= 1, got d={d}, m={m}")
    return (m - 1) * 2**d - sum((m - 1 - j) * comb(d, j) for j in range(m - 1))


def downward_edges(space: GridSpace, v: int, r: int, m: int) -> list[int]:
    """Edges kept below v: every small nonzero coordinate, plus the first min(L(v), m-1) large ones."""
    cs = space.decode(v)
    out = []
    n_large = 0
    for j, c in enumerate(cs):
        if c == 0:
            continue
        below = v - space.powers[j]
        if c <= r - 2:
            out.append(space.edge_id(below, j))
        elif n_large < m - 1:
            out.append(space.edge_id(below, j))
            n_large += 1
    return out


def build_wsat_graph(k: int, r: int, d: int, m: int) -> EdgeSubgraph:
    space = WsatParams(k, r, d, m).space
    g = EdgeSubgraph.empty(space)
    for v in range(space.n_vertices):
        for e in downward_edges(space, v, r, m):
            g.present[e] = True
    return g


def canonical_percolation_order(g: EdgeSubgraph, k: int, r: int, d: int, m: int) -> list[int]:
    """Missing edges sorted by the weight of their upper endpoint, then by id."""
    space = WsatParams(k, r, d, m).space
    if g.space != space:
        raise ValueError("graph lives on a different host")
    table = space.edge_table
    miss = np.flatnonzero(~g.present)
    upper_weight = space.coord_table[table[miss, 1]].sum(axis=1)
    keyed = sorted(zip(upper_weight.tolist(), miss.tolist()))
    return [e for _, e in keyed]
