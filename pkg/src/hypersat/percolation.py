"""Edge bootstrap percolation on grids.

An absent edge may be added when doing so completes a copy of the pattern
through it.  ``percolate`` runs the process in rounds: every edge addable
against the start-of-round graph is added, in ascending edge id, with a
witness copy recorded for it.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .grid import GridSpace, count_axis_subgrids, enumerate_axis_subgrids, subgrids_through_edge

MAX_CYCLE_HALF = 8


@dataclass(frozen=True)
class PatternFamily:
    """Target subgraphs: axis-aligned P_r^m copies, or all cycles of one even length."""

    space: GridSpace
    kind: str
    r: int = 2
    m: int = 1
    length: int = 0

    def __post_init__(self):
        if self.kind == "axis":
            if not 2 <= self.r <= self.space.k or not 1 <= self.m <= self.space.d:
                raise ValueError(f"bad axis family r={self.r} m={self.m} on {self.space}")
        elif self.kind == "cycle":
            if self.length < 4 or self.length % 2 or self.length > 2 * MAX_CYCLE_HALF:
                raise ValueError(f"cycle length must be even in [4, {2 * MAX_CYCLE_HALF}]")
        else:
            raise ValueError(f"unknown family kind {self.kind!r}")

    @classmethod
    def axis(cls, space: GridSpace, r: int, m: int) -> "PatternFamily":
        return cls(space, "axis", r=r, m=m)

    @classmethod
    def subcube(cls, space: GridSpace, m: int) -> "PatternFamily":
        # every Q_m inside Q_d is a subcube, so on k=2 this is the full family
        return cls(space, "axis", r=2, m=m)

    @classmethod
    def even_cycle(cls, space: GridSpace, length: int) -> "PatternFamily":
        return cls(space, "cycle", length=length)

    @classmethod
    def parse(cls, space: GridSpace, text: str) -> "PatternFamily":
        """Parse ``subcube:M``, ``axis:R:M`` or ``cycle:LEN``."""
        parts = text.split(":")
        try:
            if parts[0] == "subcube" and len(parts) == 2:
                return cls.subcube(space, int(parts[1]))
            if parts[0] == "axis" and len(parts) == 3:
                return cls.axis(space, int(parts[1]), int(parts[2]))
            if parts[0] == "cycle" and len(parts) == 2:
                return cls.even_cycle(space, int(parts[1]))
        except ValueError as exc:
            raise ValueError(f"bad family {text!r}: {exc}") from None
        raise ValueError(f"bad family {text!r}; expected subcube:M, axis:R:M or cycle:LEN")

    def __str__(self) -> str:
        if self.kind == "cycle":
            return f"cycle:{self.length}"
        if self.space.k == 2:
            return f"subcube:{self.m}"
        return f"axis:{self.r}:{self.m}"

    @cached_property
    def copy_edges(self) -> np.ndarray:
        """(n_copies, edges_per_copy) edge ids of every axis copy, in enumeration order."""
        if self.kind != "axis":
            raise TypeError("cycle families are not enumerated")
        rows = [c.edges(self.space) for c in enumerate_axis_subgrids(self.space, self.r, self.m)]
        per = self.m * self.r ** (self.m - 1) * (self.r - 1)
        return np.array(rows, dtype=np.int64).reshape(len(rows), per)


@dataclass
class EdgeSubgraph:
    space: GridSpace
    present: np.ndarray

    def __post_init__(self):
        self.present = np.asarray(self.present, dtype=bool)
        if self.present.shape != (self.space.n_edges,):
            raise ValueError(f"edge mask has shape {self.present.shape}, host has {self.space.n_edges} edges")

    @classmethod
    def empty(cls, space: GridSpace) -> "EdgeSubgraph":
        return cls(space, np.zeros(space.n_edges, dtype=bool))

    @classmethod
    def full(cls, space: GridSpace) -> "EdgeSubgraph":
        return cls(space, np.ones(space.n_edges, dtype=bool))

    @classmethod
    def from_edges(cls, space: GridSpace, edges: Iterable[int]) -> "EdgeSubgraph":
        g = cls.empty(space)
        for e in edges:
            space.check_edge(e)
            g.present[e] = True
        return g

    def edges(self) -> list[int]:
        return np.flatnonzero(self.present).tolist()

    def missing(self) -> list[int]:
        return np.flatnonzero(~self.present).tolist()

    @property
    def n_edges(self) -> int:
        return int(self.present.sum())

    def __contains__(self, e: int) -> bool:
        return bool(self.present[e])

    def copy(self) -> "EdgeSubgraph":
        return EdgeSubgraph(self.space, self.present.copy())

    def is_full(self) -> bool:
        return bool(self.present.all())

    def issubset(self, other: "EdgeSubgraph") -> bool:
        return bool(np.all(other.present[self.present]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, EdgeSubgraph):
            return NotImplemented
        return self.space == other.space and bool(np.array_equal(self.present, other.present))

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.space.n_vertices)]
        table = self.space.edge_table[self.present]
        for u, v, _ in table.tolist():
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def degree(self) -> np.ndarray:
        table = self.space.edge_table[self.present]
        return np.bincount(table[:, :2].ravel(), minlength=self.space.n_vertices)

    def is_connected_spanning(self) -> bool:
        adj = self.adjacency()
        seen = [False] * self.space.n_vertices
        seen[0] = True
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        return all(seen)


# -- detection ----------------------------------------------------------------


def _axis_witness(g: EdgeSubgraph, e: int, family: PatternFamily) -> Optional[tuple[int, ...]]:
    present = g.present
    for copy in subgrids_through_edge(family.space, e, family.r, family.m):
        es = copy.edges(family.space)
        if all(present[x] or x == e for x in es):
            return tuple(es)
    return None


def _l1(space: GridSpace, coords: list[tuple[int, ...]], a: int, b: int) -> int:
    return sum(abs(x - y) for x, y in zip(coords[a], coords[b]))


def find_path(adj: Sequence[Sequence[int]], space: GridSpace, src: int, dst: int, n_edges: int,
              coords: Optional[list] = None) -> Optional[list[int]]:
    """Simple path with exactly n_edges edges from src to dst, as a vertex list, or None."""
    if coords is None:
        coords = _Coords(space)
    path = [src]
    on_path = {src}

    def dfs(x: int, left: int) -> bool:
        if left == 0:
            return x == dst
        for y in adj[x]:
            if y in on_path:
                continue
            if y == dst and left != 1:
                continue
            dist = _l1(space, coords, y, dst)
            if dist > left - 1 or (left - 1 - dist) % 2:
                continue
            path.append(y)
            on_path.add(y)
            if dfs(y, left - 1):
                return True
            path.pop()
            on_path.discard(y)
        return False

    return path if dfs(src, n_edges) else None


class _Coords:
    """Lazy vertex -> coordinate tuple cache."""

    def __init__(self, space: GridSpace):
        self.space = space
        self._cache: dict[int, tuple[int, ...]] = {}

    def __getitem__(self, v: int) -> tuple[int, ...]:
        c = self._cache.get(v)
        if c is None:
            c = self._cache[v] = self.space.decode(v)
        return c


def _cycle_witness(g: EdgeSubgraph, e: int, family: PatternFamily, adj=None, coords=None) -> Optional[tuple[int, ...]]:
    space = family.space
    u, v = space.endpoints(e)
    if adj is None:
        adj = g.adjacency()
    path = find_path(adj, space, u, v, family.length - 1, coords)
    if path is None:
        return None
    es = [space.edge_between(a, b) for a, b in zip(path, path[1:])]
    return tuple(sorted(es + [e]))


def creates_new_copy(g: EdgeSubgraph, e: int, family: PatternFamily) -> Optional[tuple[int, ...]]:
    """Edge ids of a pattern copy through ``e`` inside G + e, or None.

    Any copy through ``e`` is new, because ``e`` is absent from G.
    """
    if g.present[e]:
        raise ValueError(f"edge {e} is already present")
    if family.kind == "axis":
        return _axis_witness(g, e, family)
    return _cycle_witness(g, e, family)


# -- certificates -----------------------------------------------------------------


@dataclass
class PercolationCertificate:
    family: PatternFamily
    initial: EdgeSubgraph
    order: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)
    final: Optional[EdgeSubgraph] = None

    def __post_init__(self):
        if self.final is None:
            final = self.initial.copy()
            for e, _ in self.order:
                final.present[e] = True
            self.final = final

    @property
    def complete(self) -> bool:
        return self.final.is_full()

    def to_text(self) -> str:
        sp = self.family.space
        lines = [f"# host {sp.k} {sp.d} family {self.family}",
                 "# initial " + " ".join(map(str, self.initial.edges()))]
        for e, wit in self.order:
            lines.append(f"add {e} witness " + " ".join(map(str, wit)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, family: PatternFamily, initial: EdgeSubgraph) -> "PercolationCertificate":
        order = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            head, _, rest = line.partition(" witness ")
            tag, e = head.split()
            if tag != "add":
                raise ValueError(f"bad certificate line {line!r}")
            order.append((int(e), tuple(int(x) for x in rest.split())))
        return cls(family, initial, order)

    def verify(self) -> bool:
        """Replay from the initial graph and check every witness."""
        g = self.initial.copy()
        for e, wit in self.order:
            if g.present[e]:
                return False
            g.present[e] = True
            if not witness_valid(g, e, wit, self.family):
                return False
        return g == self.final


def witness_valid(g: EdgeSubgraph, e: int, witness: Sequence[int], family: PatternFamily) -> bool:
    """Whether ``witness`` is a family member through e with every edge present in g."""
    wit = sorted(witness)
    if e not in wit or not all(g.present[x] for x in wit):
        return False
    space = family.space
    if family.kind == "axis":
        return any(c.edges(space) == wit for c in subgrids_through_edge(space, e, family.r, family.m))
    if len(wit) != family.length or len(set(wit)) != len(wit):
        return False
    deg: dict[int, list[int]] = {}
    for x in wit:
        a, b = space.endpoints(x)
        deg.setdefault(a, []).append(b)
        deg.setdefault(b, []).append(a)
    if len(deg) != family.length or any(len(n) != 2 for n in deg.values()):
        return False
    # connected 2-regular graph on len(wit) vertices is a single cycle
    start = next(iter(deg))
    prev, cur, steps = start, deg[start][0], 1
    while cur != start:
        nxt = deg[cur][0] if deg[cur][0] != prev else deg[cur][1]
        prev, cur = cur, nxt
        steps += 1
    return steps == family.length


# -- closure -------------------------------------------------------------------------


def _axis_round(present: np.ndarray, family: PatternFamily) -> list[tuple[int, tuple[int, ...]]]:
    ce = family.copy_edges
    if len(ce) == 0:
        return []
    miss = ~present[ce]
    ready = np.flatnonzero(miss.sum(axis=1) == 1)
    found: dict[int, int] = {}
    for c in ready.tolist():
        e = int(ce[c][miss[c]][0])
        if e not in found:
            found[e] = c
    return [(e, tuple(sorted(ce[found[e]].tolist()))) for e in sorted(found)]


def _cycle_round(g: EdgeSubgraph, family: PatternFamily, workers: int) -> list[tuple[int, tuple[int, ...]]]:
    adj = g.adjacency()
    coords = _Coords(family.space)
    cands = g.missing()

    def test(e):
        return _cycle_witness(g, e, family, adj, coords)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(test, cands))
    else:
        results = [test(e) for e in cands]
    return [(e, w) for e, w in zip(cands, results) if w is not None]


def percolate(g0: EdgeSubgraph, family: PatternFamily, workers: int = 1) -> PercolationCertificate:
    """Round-based closure of g0 under the family, with a witness per added edge."""
    if g0.space != family.space:
        raise ValueError("graph and family live on different hosts")
    g = g0.copy()
    order: list[tuple[int, tuple[int, ...]]] = []
    while True:
        if family.kind == "axis":
            added = _axis_round(g.present, family)
        else:
            added = _cycle_round(g, family, workers)
        if not added:
            break
        for e, _ in added:
            g.present[e] = True
        order.extend(added)
    return PercolationCertificate(family, g0.copy(), order, g)


def is_weakly_saturated(g0: EdgeSubgraph, family: PatternFamily) -> bool:
    return percolate(g0, family).complete


def replay_order(g0: EdgeSubgraph, order: Iterable[int], family: PatternFamily) -> PercolationCertificate:
    """Add edges in the given order, each needing a witness at its turn; raise if one has none."""
    g = g0.copy()
    steps = []
    for e in order:
        wit = creates_new_copy(g, e, family)
        if wit is None:
            raise ValueError(f"edge {e} creates no new copy at its turn")
        g.present[e] = True
        steps.append((e, wit))
    return PercolationCertificate(family, g0.copy(), steps, g)


def sequential_closure(g0: EdgeSubgraph, family: PatternFamily, rng: random.Random) -> EdgeSubgraph:
    """One-edge-at-a-time closure, choosing uniformly among currently addable edges."""
    g = g0.copy()
    while True:
        cands = [e for e in g.missing() if creates_new_copy(g, e, family) is not None]
        if not cands:
            return g
        g.present[rng.choice(cands)] = True


def family_size(family: PatternFamily) -> int:
    if family.kind == "axis":
        return count_axis_subgrids(family.space, family.r, family.m)
    raise TypeError("cycle families are not counted")
