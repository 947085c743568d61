"""Brute-force minimum weak saturation and saturation numbers on tiny hosts.

Subgraphs are int bitmasks over edge ids and every pattern copy is
precomputed as a mask, so the closure and the saturation test are a few
integer operations per copy.  Search is by increasing edge count, so the
first hit is a minimum.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .grid import GridSpace
from .percolation import EdgeSubgraph, PatternFamily


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    max_edges: int = 16
    time_limit: float = 600.0
    ascending: bool = True

    @classmethod
    def for_wsat(cls, time_limit: float = 600.0) -> "SearchBudget":
        return cls(16, time_limit)

    @classmethod
    def for_sat(cls, time_limit: float = 600.0) -> "SearchBudget":
        return cls(12, time_limit)

    def admit(self, space: GridSpace) -> None:
        if space.n_edges > self.max_edges:
            raise BudgetExceeded(f"{space} has {space.n_edges} edges, cap is {self.max_edges}")


@dataclass(frozen=True)
class OracleResult:
    value: int
    witness: tuple[int, ...]
    checked: int


def _mask(edges: Iterable[int]) -> int:
    out = 0
    for e in edges:
        out |= 1 << e
    return out


def enumerate_cycles(space: GridSpace, length: int) -> list[int]:
    """Edge masks of all cycles of the given length in the host."""
    adj = [space.neighbors(v) for v in range(space.n_vertices)]
    found: set[int] = set()
    for start in range(space.n_vertices):
        # start is the smallest vertex on the cycle
        path = [start]
        on = {start}

        def dfs(x: int) -> None:
            if len(path) == length:
                if start in adj[x] and path[1] < x:
                    vs = path + [start]
                    found.add(_mask(space.edge_between(a, b) for a, b in zip(vs, vs[1:])))
                return
            for y in adj[x]:
                if y > start and y not in on:
                    path.append(y)
                    on.add(y)
                    dfs(y)
                    on.discard(y)
                    path.pop()

        dfs(start)
    return sorted(found)


def copy_masks(family: PatternFamily) -> list[int]:
    if family.kind == "axis":
        return [_mask(row) for row in family.copy_edges.tolist()]
    return enumerate_cycles(family.space, family.length)


def closure_mask(g: int, copies: list[int], full: int) -> int:
    """Fixed point of adding any edge that is the only missing edge of some copy."""
    changed = True
    while changed and g != full:
        changed = False
        for c in copies:
            miss = c & ~g
            if miss and miss & (miss - 1) == 0:
                g |= miss
                changed = True
    return g


def _connected(space: GridSpace, g: int, ends: list[tuple[int, int]]) -> bool:
    parent = list(range(space.n_vertices))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = space.n_vertices
    for e, (u, v) in enumerate(ends):
        if g >> e & 1:
            a, b = find(u), find(v)
            if a != b:
                parent[a] = b
                comps -= 1
    return comps == 1


def _search(space: GridSpace, budget: SearchBudget, start: int, accept) -> OracleResult:
    t0 = time.monotonic()
    n = space.n_edges
    checked = 0
    sizes = range(start, n + 1) if budget.ascending else range(n, start - 1, -1)
    best: Optional[OracleResult] = None
    for c in sizes:
        hit = None
        for combo in itertools.combinations(range(n), c):
            checked += 1
            if checked & 4095 == 1 and time.monotonic() - t0 > budget.time_limit:
                raise BudgetExceeded(f"time limit {budget.time_limit}s hit at size {c}")
            g = _mask(combo)
            if accept(g):
                hit = combo
                break
        if hit is not None:
            best = OracleResult(c, hit, checked)
            if budget.ascending:
                return best
    if best is None:
        raise ValueError("no subgraph qualifies")
    return best


def min_wsat(space: GridSpace, family: PatternFamily, budget: SearchBudget | None = None) -> OracleResult:
    """Smallest weakly saturated subgraph, by exhaustive search."""
    budget = budget or SearchBudget.for_wsat()
    budget.admit(space)
    if family.space != space:
        raise ValueError("family lives on a different host")
    copies = copy_masks(family)
    full = (1 << space.n_edges) - 1
    ends = [space.endpoints(e) for e in space.edges()]

    if family.kind == "cycle":
        # a disconnected graph never gains an edge between its components
        def accept(g: int) -> bool:
            return _connected(space, g, ends) and closure_mask(g, copies, full) == full
        start = space.n_vertices - 1
    else:
        def accept(g: int) -> bool:
            return closure_mask(g, copies, full) == full
        start = 0
    return _search(space, budget, start, accept)


def saturated_mask(g: int, copies: list[int], n_edges: int) -> bool:
    """Pattern-free, and every absent edge completes some copy."""
    if any(c & g == c for c in copies):
        return False
    for e in range(n_edges):
        bit = 1 << e
        if g & bit:
            continue
        h = g | bit
        if not any(c & bit and c & h == c for c in copies):
            return False
    return True


def is_saturated(space: GridSpace, g: EdgeSubgraph, m: int) -> bool:
    if not space.is_cube:
        raise ValueError("saturation oracle works on hypercubes only")
    if g.space != space:
        raise ValueError("graph lives on a different host")
    if space.n_edges > SearchBudget.for_wsat().max_edges:
        # too big for the mask engine; the vectorized checker is also exhaustive
        from .satcon import is_saturated as big_is_saturated
        return big_is_saturated(g, m)
    copies = copy_masks(PatternFamily.subcube(space, m))
    return saturated_mask(_mask(g.edges()), copies, space.n_edges)


def min_sat(space: GridSpace, m: int, budget: SearchBudget | None = None) -> OracleResult:
    """Smallest Q_m-saturated subgraph of Q_d, by exhaustive search."""
    budget = budget or SearchBudget.for_sat()
    if not space.is_cube:
        raise ValueError("saturation oracle works on hypercubes only")
    budget.admit(space)
    copies = copy_masks(PatternFamily.subcube(space, m))
    return _search(space, budget, 0, lambda g: saturated_mask(g, copies, space.n_edges))


def all_fail_at(space: GridSpace, family: PatternFamily, c: int) -> bool:
    """True when no c-edge subgraph percolates."""
    copies = copy_masks(family)
    full = (1 << space.n_edges) - 1
    return not any(closure_mask(_mask(combo), copies, full) == full
                   for combo in itertools.combinations(range(space.n_edges), c))


# fixtures -----------------------------------------------------------------

@dataclass(frozen=True)
class Golden:
    k: int
    d: int
    family: str
    value: int
    witness: tuple[int, ...]

    def to_line(self) -> str:
        return f"host {self.k} {self.d} | {self.family} | {self.value} | {' '.join(map(str, self.witness))}"

    @classmethod
    def from_line(cls, line: str) -> "Golden":
        host, family, value, witness = (p.strip() for p in line.split("|"))
        tag, k, d = host.split()
        if tag != "host":
            raise ValueError(f"bad fixture line {line!r}")
        return cls(int(k), int(d), family, int(value), tuple(int(x) for x in witness.split()))


def read_fixtures(path: str | Path) -> list[Golden]:
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(Golden.from_line(line))
    return out


def write_fixtures(path: str | Path, rows: list[Golden], command: str) -> None:
    text = f"# generated by: {command}\n" + "".join(r.to_line() + "\n" for r in rows)
    Path(path).write_text(text)


def compute_golden(k: int, d: int, family: str) -> Golden:
    space = GridSpace(k, d)
    if family.startswith("sat:"):
        res = min_sat(space, int(family.split(":")[1]))
    else:
        res = min_wsat(space, PatternFamily.parse(space, family))
    return Golden(k, d, family, res.value, res.witness)
