"""Grids P_k^d and hypercubes Q_d = P_2^d: vertex, edge and line encodings.

Vertices are little-endian mixed-radix integers, so on Q_d a vertex id is
the bitmask of its coordinates.  Edges are numbered densely: all edges in
direction 0 first, then direction 1, and so on; inside a direction the
lower endpoint is compressed by giving the edge coordinate radix k-1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterator, Sequence

import numpy as np

MAX_VERTICES = 2**64

# above this many vertices the numpy tables are refused
MATERIALIZE_LIMIT = 2**22


class HostTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class GridSpace:
    k: int
    d: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"side length k must be >= 2, got {self.k}")
        if self.d < 1:
            raise ValueError(f"dimension d must be >= 1, got {self.d}")
        if self.k**self.d > MAX_VERTICES:
            raise ValueError(f"P_{self.k}^{self.d} has more than 2^64 vertices")

    @classmethod
    def cube(cls, d: int) -> "GridSpace":
        return cls(2, d)

    @property
    def is_cube(self) -> bool:
        return self.k == 2

    @cached_property
    def n_vertices(self) -> int:
        return self.k**self.d

    @cached_property
    def edges_per_dir(self) -> int:
        return (self.k - 1) * self.k ** (self.d - 1)

    @cached_property
    def n_edges(self) -> int:
        return self.d * self.edges_per_dir

    @cached_property
    def n_lines(self) -> int:
        return self.d * self.k ** (self.d - 1)

    @cached_property
    def powers(self) -> tuple[int, ...]:
        return tuple(self.k**i for i in range(self.d + 1))

    def __str__(self) -> str:
        return f"Q_{self.d}" if self.k == 2 else f"P_{self.k}^{self.d}"

    # -- vertices ---------------------------------------------------------

    def encode(self, coords: Sequence[int]) -> int:
        if len(coords) != self.d:
            raise ValueError(f"expected {self.d} coordinates, got {len(coords)}")
        v = 0
        for i, c in enumerate(coords):
            if not 0 <= c < self.k:
                raise ValueError(f"coordinate {i} = {c} outside [0, {self.k})")
            v += c * self.powers[i]
        return v

    def decode(self, v: int) -> tuple[int, ...]:
        self.check_vertex(v)
        k = self.k
        out = []
        for _ in range(self.d):
            v, c = divmod(v, k)
            out.append(c)
        return tuple(out)

    def coord(self, v: int, i: int) -> int:
        return (v // self.powers[i]) % self.k

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n_vertices:
            raise ValueError(f"vertex id {v} outside [0, {self.n_vertices})")

    def neighbors(self, v: int) -> list[int]:
        self.check_vertex(v)
        out = []
        for i in range(self.d):
            c = self.coord(v, i)
            p = self.powers[i]
            if c > 0:
                out.append(v - p)
            if c < self.k - 1:
                out.append(v + p)
        return sorted(out)

    def weight(self, v: int) -> int:
        return sum(self.decode(v))

    def vertex_stats(self, v: int, r: int) -> tuple[int, int]:
        """Return (|v|, L(v)): coordinate sum and number of coordinates >= r-1."""
        if not 2 <= r <= self.k:
            raise ValueError(f"need 2 <= r <= k, got r={r}, k={self.k}")
        cs = self.decode(v)
        return sum(cs), sum(1 for c in cs if c >= r - 1)

    # -- edges ------------------------------------------------------------

    def edge_id(self, base: int, direction: int) -> int:
        """Dense id of the edge {base, base + e_direction}."""
        if not 0 <= direction < self.d:
            raise ValueError(f"direction {direction} outside [0, {self.d})")
        self.check_vertex(base)
        p = self.powers[direction]
        low = base % p
        rest = base // p
        mid = rest % self.k
        high = rest // self.k
        if mid > self.k - 2:
            raise ValueError(f"vertex {base} has top coordinate in direction {direction}")
        return direction * self.edges_per_dir + low + p * (mid + (self.k - 1) * high)

    def edge_base(self, e: int) -> tuple[int, int]:
        """Inverse of edge_id: (lower endpoint, direction)."""
        self.check_edge(e)
        direction, c = divmod(e, self.edges_per_dir)
        p = self.powers[direction]
        low = c % p
        rest = c // p
        mid = rest % (self.k - 1)
        high = rest // (self.k - 1)
        return low + p * (mid + self.k * high), direction

    def endpoints(self, e: int) -> tuple[int, int]:
        base, direction = self.edge_base(e)
        return base, base + self.powers[direction]

    def edge_between(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        diff = v - u
        for i, p in enumerate(self.powers[:-1]):
            if diff == p and self.coord(u, i) < self.k - 1:
                return self.edge_id(u, i)
        raise ValueError(f"vertices {u} and {v} are not adjacent in {self}")

    def check_edge(self, e: int) -> None:
        if not 0 <= e < self.n_edges:
            raise ValueError(f"edge id {e} outside [0, {self.n_edges})")

    def line_of_edge(self, e: int) -> tuple[int, int]:
        """(line index, position) where the edge joins coordinate values position, position+1."""
        direction, c = divmod(e, self.edges_per_dir)
        p = self.powers[direction]
        low = c % p
        rest = c // p
        mid = rest % (self.k - 1)
        high = rest // (self.k - 1)
        return direction * self.k ** (self.d - 1) + low + p * high, mid

    def edges(self) -> range:
        return range(self.n_edges)

    # -- materialized tables ------------------------------------------------

    def _require_materializable(self) -> None:
        if self.n_vertices > MATERIALIZE_LIMIT:
            raise HostTooLarge(f"{self} has {self.n_vertices} vertices; too large to materialize")

    @cached_property
    def edge_table(self) -> np.ndarray:
        """int64 array (n_edges, 3) of (lower endpoint, upper endpoint, direction)."""
        self._require_materializable()
        k, d = self.k, self.d
        rows = []
        for direction in range(d):
            p = k**direction
            c = np.arange(self.edges_per_dir, dtype=np.int64)
            low = c % p
            rest = c // p
            mid = rest % (k - 1)
            high = rest // (k - 1)
            base = low + p * (mid + k * high)
            rows.append(np.stack([base, base + p, np.full_like(base, direction)], axis=1))
        return np.concatenate(rows)

    def edge_ids(self, bases: np.ndarray, direction: int) -> np.ndarray:
        """Vectorized edge_id for an array of lower endpoints in one direction."""
        p = self.powers[direction]
        bases = np.asarray(bases, dtype=np.int64)
        low = bases % p
        rest = bases // p
        mid = rest % self.k
        high = rest // self.k
        return direction * self.edges_per_dir + low + p * (mid + (self.k - 1) * high)

    @cached_property
    def coord_table(self) -> np.ndarray:
        self._require_materializable()
        ids = np.arange(self.n_vertices, dtype=np.int64)
        return (ids[:, None] // np.array(self.powers[:-1], dtype=np.int64)) % self.k


@dataclass(frozen=True)
class Line:
    direction: int
    anchor: int

    def vertices(self, space: GridSpace) -> list[int]:
        p = space.powers[self.direction]
        return [self.anchor + c * p for c in range(space.k)]

    def edges(self, space: GridSpace) -> list[int]:
        return [space.edge_id(v, self.direction) for v in self.vertices(space)[:-1]]


def lines(space: GridSpace) -> Iterator[Line]:
    for direction in range(space.d):
        p = space.powers[direction]
        for v in range(space.n_vertices):
            if (v // p) % space.k == 0:
                yield Line(direction, v)


@dataclass(frozen=True)
class AxisSubgrid:
    """Axis-aligned copy of P_r^m: m intervals of length r, other coordinates fixed.

    ``fixed`` lists the values of the non-varying coordinates in ascending
    coordinate order.
    """

    r: int
    dirs: tuple[int, ...]
    starts: tuple[int, ...]
    fixed: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.dirs)

    def anchor(self, space: GridSpace) -> int:
        """Vertex of the copy with every coordinate minimal."""
        v = 0
        fixed = iter(self.fixed)
        starts = dict(zip(self.dirs, self.starts))
        for i in range(space.d):
            c = starts[i] if i in starts else next(fixed)
            v += c * space.powers[i]
        return v

    def vertices(self, space: GridSpace) -> list[int]:
        a = self.anchor(space)
        steps = [space.powers[i] for i in self.dirs]
        out = []
        for offs in itertools.product(range(self.r), repeat=self.m):
            out.append(a + sum(o * s for o, s in zip(offs, steps)))
        return sorted(out)

    def edges(self, space: GridSpace) -> list[int]:
        a = self.anchor(space)
        steps = [space.powers[i] for i in self.dirs]
        out = []
        for offs in itertools.product(range(self.r), repeat=self.m):
            v = a + sum(o * s for o, s in zip(offs, steps))
            for j, direction in enumerate(self.dirs):
                if offs[j] < self.r - 1:
                    out.append(space.edge_id(v, direction))
        return sorted(out)

    def describe(self) -> str:
        return f"r={self.r} dirs={list(self.dirs)} starts={list(self.starts)} fixed={list(self.fixed)}"


def _check_rm(space: GridSpace, r: int, m: int) -> None:
    if not 2 <= r <= space.k:
        raise ValueError(f"need 2 <= r <= k, got r={r}, k={space.k}")
    if not 1 <= m <= space.d:
        raise ValueError(f"need 1 <= m <= d, got m={m}, d={space.d}")


def count_axis_subgrids(space: GridSpace, r: int, m: int) -> int:
    _check_rm(space, r, m)
    return comb(space.d, m) * (space.k - r + 1) ** m * space.k ** (space.d - m)


def enumerate_axis_subgrids(space: GridSpace, r: int, m: int) -> Iterator[AxisSubgrid]:
    _check_rm(space, r, m)
    k, d = space.k, space.d
    for dirs in itertools.combinations(range(d), m):
        for starts in itertools.product(range(k - r + 1), repeat=m):
            for fixed in itertools.product(range(k), repeat=d - m):
                yield AxisSubgrid(r, dirs, starts, fixed)


def subgrids_through_edge(space: GridSpace, e: int, r: int, m: int) -> Iterator[AxisSubgrid]:
    """All axis-aligned copies of P_r^m that contain edge e."""
    _check_rm(space, r, m)
    base, direction = space.edge_base(e)
    cs = space.decode(base)
    k = space.k
    others = [i for i in range(space.d) if i != direction]
    for extra in itertools.combinations(others, m - 1):
        dirs = tuple(sorted(extra + (direction,)))
        ranges = []
        for i in dirs:
            if i == direction:
                lo, hi = max(0, cs[i] - r + 2), min(cs[i], k - r)
            else:
                lo, hi = max(0, cs[i] - r + 1), min(cs[i], k - r)
            ranges.append(range(lo, hi + 1))
        fixed = tuple(cs[i] for i in range(space.d) if i not in dirs)
        for starts in itertools.product(*ranges):
            yield AxisSubgrid(r, dirs, starts, fixed)
