"""Hamming codes in Q_{2^t-1} and 3-edge-colourings of Q_s without monochromatic C4 or C6.

Small cubes are coloured by seeded min-conflicts search over all edges;
large cubes by trying the 27 colourings whose colour depends only on the
direction and the number of ones below and above it.  Either way a
colouring is checked exhaustively against every 4- and 6-cycle before it
is returned.
"""

from __future__ import annotations

import itertools
import logging
import os
import random
import time
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterator, Optional

import numpy as np

from .grid import GridSpace

log = logging.getLogger(__name__)

MAX_CODE_LENGTH = 63


# -- Hamming codes ------------------------------------------------------------------


def syndrome(x: int) -> int:
    """XOR of (i+1) over set bits i; zero exactly on Hamming codewords."""
    s = 0
    i = 1
    while x:
        if x & 1:
            s ^= i
        x >>= 1
        i += 1
    return s


@lru_cache(maxsize=None)
def syndrome_table(n: int) -> np.ndarray:
    """Syndromes of all n-bit words (n <= 24)."""
    if n > 24:
        raise ValueError("table only for n <= 24")
    tab = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        tab[1 << b : 1 << (b + 1)] = tab[: 1 << b] ^ (b + 1)
    return tab


@dataclass(frozen=True)
class HammingCode:
    t: int
    members: frozenset

    @property
    def n(self) -> int:
        return 2**self.t - 1

    def __contains__(self, x: int) -> bool:
        return x in self.members


def hamming_code(t: int) -> HammingCode:
    if t < 1:
        raise ValueError(f"need t >= 1, got {t}")
    n = 2**t - 1
    if n > MAX_CODE_LENGTH:
        raise ValueError(f"code length 2^{t}-1 exceeds {MAX_CODE_LENGTH}")
    if n > 24:
        raise ValueError("member list too large to materialize; use is_codeword")
    tab = syndrome_table(n)
    return HammingCode(t, frozenset(np.flatnonzero(tab == 0).tolist()))


def is_codeword(x: int) -> bool:
    return syndrome(x) == 0


def code_neighbor(x: int) -> int:
    """The unique codeword at distance at most 1 from x."""
    s = syndrome(x)
    return x if s == 0 else x ^ (1 << (s - 1))


def verify_perfect_code(code: HammingCode) -> bool:
    """Independent, dominating every non-member exactly once, and of size 2^(2^t - t - 1)."""
    n = code.n
    members = code.members
    if any(not 0 <= c < 2**n for c in members):
        return False
    if len(members) != 2 ** (2**code.t - code.t - 1):
        return False
    for x in range(2**n):
        hits = sum(1 for b in range(n) if x ^ (1 << b) in members)
        if x in members:
            if hits:
                return False
        elif hits != 1:
            return False
    return True


# -- short cycles ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _local_cycles(dims: int, length: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Cycles of Q_dims of the given length that use every direction, as (base, dir) edge lists."""
    n = 1 << dims
    adj = [[v ^ (1 << b) for b in range(dims)] for v in range(n)]
    found = set()
    out = []

    def dfs(path):
        if len(path) == length:
            if path[0] in adj[path[-1]]:
                verts = path + [path[0]]
                edges = tuple(sorted((min(a, b), (a ^ b).bit_length() - 1) for a, b in zip(verts, verts[1:])))
                dirs = {dd for _, dd in edges}
                if len(dirs) == dims and edges not in found:
                    found.add(edges)
                    out.append(edges)
            return
        for y in adj[path[-1]]:
            if y not in path and y > path[0]:
                dfs(path + [y])

    for s in range(n):
        dfs([s])
    return tuple(sorted(out))


def enumerate_short_cycles(s: int, length: int) -> Iterator[list[int]]:
    """Every 4- or 6-cycle of Q_s exactly once, as sorted edge-id lists.

    A 4-cycle spans a square in two directions and a 6-cycle spans a Q_3
    (each direction used twice), so it suffices to place the cycles of
    Q_2 / Q_3 into every subcube.
    """
    if length not in (4, 6):
        raise ValueError("length must be 4 or 6")
    dims = length // 2
    if s < dims:
        return
    space = GridSpace(2, s)
    local = _local_cycles(dims, length)
    for dirs in itertools.combinations(range(s), dims):
        others = [b for b in range(s) if b not in dirs]
        for rest in range(1 << len(others)):
            anchor = 0
            for idx, b in enumerate(others):
                if rest >> idx & 1:
                    anchor |= 1 << b
            for cyc in local:
                es = []
                for lb, ld in cyc:
                    v = anchor
                    for idx, b in enumerate(dirs):
                        if lb >> idx & 1:
                            v |= 1 << b
                    es.append(space.edge_id(v, dirs[ld]))
                yield sorted(es)


def cycle_count(s: int, length: int) -> int:
    from math import comb

    if length == 4:
        return comb(s, 2) * 2 ** (s - 2) if s >= 2 else 0
    return comb(s, 3) * 2 ** (s - 3) * 16 if s >= 3 else 0


def cycle_matrix(s: int) -> np.ndarray:
    """(n_cycles, 6) edge ids; 4-cycles padded by repeating their first two edges."""
    rows = [c + c[:2] for c in enumerate_short_cycles(s, 4)]
    rows += list(enumerate_short_cycles(s, 6))
    if not rows:
        return np.zeros((0, 6), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


# -- colourings ------------------------------------------------------------------


@dataclass
class EdgeColoring:
    s: int
    colors: np.ndarray  # uint8 per edge id of Q_s
    seed: Optional[int] = None

    def __post_init__(self):
        self.colors = np.asarray(self.colors, dtype=np.uint8)
        n_edges = self.s * 2 ** (self.s - 1) if self.s > 0 else 0
        if self.colors.shape != (n_edges,):
            raise ValueError(f"Q_{self.s} has {n_edges} edges, got {self.colors.shape}")

    def color(self, e: int) -> int:
        return int(self.colors[e])

    def color_of(self, u: int, v: int) -> int:
        """Colour of the Q_s edge between vertices u and v."""
        x = u ^ v
        b = x.bit_length() - 1
        base = min(u, v)
        # edge id in Q_s: direction * 2^(s-1) + base with bit b removed
        low = base & ((1 << b) - 1)
        high = base >> (b + 1)
        return int(self.colors[(b << (self.s - 1)) + low + (high << b)])


class BudgetExhausted(RuntimeError):
    pass


def _cube_edge_ids(s: int, bases: np.ndarray, direction: int) -> np.ndarray:
    low = bases & ((1 << direction) - 1)
    high = bases >> (direction + 1)
    return (direction << (s - 1)) + low + (high << direction)


def _anchors(s: int, dirs: tuple[int, ...]) -> np.ndarray:
    """All vertices of Q_s whose bits in ``dirs`` are zero."""
    free = [b for b in range(s) if b not in dirs]
    idx = np.arange(1 << len(free), dtype=np.int64)
    out = np.zeros_like(idx)
    for pos, b in enumerate(free):
        out |= ((idx >> pos) & 1) << b
    return out


def count_monochromatic(coloring: EdgeColoring, deadline: Optional[float] = None,
                        stop_at: Optional[int] = None) -> int:
    """Monochromatic 4- and 6-cycles, streamed one direction set at a time.

    Raises BudgetExhausted if ``deadline`` (a time.monotonic value) passes.
    """
    s, colors = coloring.s, coloring.colors
    total = 0
    for length in (4, 6):
        dims = length // 2
        if s < dims:
            continue
        local = _local_cycles(dims, length)
        for dirs in itertools.combinations(range(s), dims):
            if deadline is not None and time.monotonic() > deadline:
                raise BudgetExhausted("verification ran out of time")
            anchors = _anchors(s, dirs)
            # local vertex lb -> global offset
            offs = [sum(1 << dirs[i] for i in range(dims) if lb >> i & 1) for lb in range(1 << dims)]
            for cyc in local:
                first = None
                same = None
                for lb, ld in cyc:
                    c = colors[_cube_edge_ids(s, anchors | offs[lb], dirs[ld])]
                    if first is None:
                        first = c
                        same = np.ones(len(c), dtype=bool)
                    else:
                        same &= c == first
                total += int(same.sum())
                if stop_at is not None and total >= stop_at:
                    return total
    return total


def verify_coloring(coloring: EdgeColoring, deadline: Optional[float] = None) -> bool:
    """Exhaustive: colours lie in {0,1,2} and no 4- or 6-cycle is monochromatic."""
    if coloring.colors.size and coloring.colors.max() > 2:
        return False
    return count_monochromatic(coloring, deadline, stop_at=1) == 0


def verify_coloring_slow(coloring: EdgeColoring) -> bool:
    """Reference check through the plain cycle enumerator."""
    for length in (4, 6):
        for cyc in enumerate_short_cycles(coloring.s, length):
            if len({int(coloring.colors[e]) for e in cyc}) == 1:
                return False
    return True


def _local_search(s: int, rng: random.Random, deadline: float, noise: float = 0.2) -> Optional[np.ndarray]:
    """Min-conflicts search on the number of monochromatic short cycles."""
    n_edges = s * 2 ** (s - 1)
    cm = cycle_matrix(s)
    lengths = np.where(cm[:, 4] == cm[:, 0], 4, 6)
    # edge -> cycles through it; 4-cycles are padded, so deduplicate
    through: list[list[int]] = [[] for _ in range(n_edges)]
    for ci, row in enumerate(cm.tolist()):
        for e in set(row):
            through[e].append(ci)
    cyc_edges = [sorted(set(row)) for row in cm.tolist()]
    lengths = lengths.tolist()

    colors = [rng.randrange(3) for _ in range(n_edges)]
    counts = [[0, 0, 0] for _ in cyc_edges]
    for ci, es in enumerate(cyc_edges):
        for e in es:
            counts[ci][colors[e]] += 1
    bad = {ci for ci in range(len(cyc_edges)) if max(counts[ci]) == lengths[ci]}

    steps = 0
    while bad:
        steps += 1
        if steps % 256 == 0 and time.monotonic() > deadline:
            return None
        ci = rng.choice(tuple(bad))
        best, best_moves = None, []
        for e in cyc_edges[ci]:
            a = colors[e]
            for b in range(3):
                if b == a:
                    continue
                delta = 0
                for cj in through[e]:
                    cnt, ln = counts[cj], lengths[cj]
                    if cnt[a] == ln:
                        delta -= 1
                    if cnt[b] == ln - 1:
                        delta += 1
                if best is None or delta < best:
                    best, best_moves = delta, [(e, b)]
                elif delta == best:
                    best_moves.append((e, b))
        if best > 0 and rng.random() < noise:
            e = rng.choice(cyc_edges[ci])
            b = rng.choice([x for x in range(3) if x != colors[e]])
        else:
            e, b = rng.choice(best_moves)
        a = colors[e]
        colors[e] = b
        for cj in through[e]:
            cnt = counts[cj]
            cnt[a] -= 1
            cnt[b] += 1
            if max(cnt) == lengths[cj]:
                bad.add(cj)
            else:
                bad.discard(cj)
    return np.array(colors, dtype=np.uint8)


def _backtrack(s: int) -> Optional[np.ndarray]:
    """Exact search by edge-ordered backtracking; only sensible for s <= 4."""
    n_edges = s * 2 ** (s - 1)
    cycles = [c for length in (4, 6) for c in enumerate_short_cycles(s, length)]
    # check each cycle once its largest edge id is coloured
    closing: list[list[list[int]]] = [[] for _ in range(n_edges)]
    for c in cycles:
        closing[max(c)].append(c)
    colors = [0] * n_edges

    def go(e: int) -> bool:
        if e == n_edges:
            return True
        for col in range(3):
            colors[e] = col
            if all(len({colors[x] for x in c}) > 1 for c in closing[e]) and go(e + 1):
                return True
        return False

    return np.array(colors, dtype=np.uint8) if go(0) else None


def weight_coloring(s: int, a: int, b: int, c: int) -> np.ndarray:
    """Colour of edge (x, i) = a*i + b*(ones of x below i) + c*(ones of x above i) mod 3."""
    n = s * 2 ** (s - 1)
    e = np.arange(n, dtype=np.int64)
    direction = e >> (s - 1)
    rest = e & ((1 << (s - 1)) - 1)
    # rest is the base with bit `direction` removed: bits below stay, bits above shift down
    below = np.zeros(n, dtype=np.int64)
    above = np.zeros(n, dtype=np.int64)
    for bit in range(s - 1):
        on = (rest >> bit) & 1
        is_below = bit < direction
        below += on * is_below
        above += on * ~is_below
    return ((a * direction + b * below + c * above) % 3).astype(np.uint8)


def _family_search(s: int, rng: random.Random, deadline: float) -> Optional[EdgeColoring]:
    params = list(itertools.product(range(3), repeat=3))
    rng.shuffle(params)
    for a, b, c in params:
        col = EdgeColoring(s, weight_coloring(s, a, b, c))
        if verify_coloring(col, deadline):
            log.info("Q_%d: weight colouring (a,b,c)=(%d,%d,%d) verified", s, a, b, c)
            return col
    return None


LOCAL_SEARCH_MAX_DIM = 10


def find_coloring(s: int, seed: int = 0, budget: float = 60.0, method: str = "auto") -> EdgeColoring:
    """A verified colouring of Q_s, or BudgetExhausted after ``budget`` seconds.

    ``method`` is "local" (min-conflicts search over all edges, backtracking
    fallback for s <= 4), "family" (search over the 27 weight colourings,
    each verified exhaustively) or "auto", which picks local search up to
    Q_10 and the family search above it.
    """
    if s < 0:
        raise ValueError("need s >= 0")
    if s <= 1:
        return EdgeColoring(s, np.zeros(s, dtype=np.uint8), seed)
    if method == "auto":
        method = "local" if s <= LOCAL_SEARCH_MAX_DIM else "family"
    deadline = time.monotonic() + budget
    rng = random.Random(seed)
    if method == "family":
        try:
            col = _family_search(s, rng, deadline)
        except BudgetExhausted:
            col = None
        if col is None:
            raise BudgetExhausted(f"no weight colouring of Q_{s} verified within {budget}s")
        col.seed = seed
        return col
    if method != "local":
        raise ValueError(f"unknown method {method!r}")
    attempt = 0
    while time.monotonic() < deadline:
        colors = _local_search(s, rng, deadline)
        attempt += 1
        if colors is None and s <= 4:
            colors = _backtrack(s)
        if colors is not None:
            col = EdgeColoring(s, colors, seed)
            if verify_coloring(col):
                log.info("Q_%d colouring found after %d attempt(s)", s, attempt)
                return col
            log.warning("local search returned an invalid colouring; retrying")
    raise BudgetExhausted(f"no valid colouring of Q_{s} within {budget}s (seed {seed})")


# -- cache files -----------------------------------------------------------------


def default_cache_dir() -> Path:
    return Path(os.environ.get("HYPERSAT_CACHE", Path.home() / ".cache" / "hypersat"))


def coloring_path(cache_dir: Path, s: int, seed: int) -> Path:
    return Path(cache_dir) / f"coloring_s{s}_seed{seed}.txt"


def write_coloring(coloring: EdgeColoring, path: Path) -> None:
    lines = [f"s {coloring.s} seed {coloring.seed if coloring.seed is not None else 0}"]
    lines += [f"{e} {int(c)}" for e, c in enumerate(coloring.colors)]
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text("\n".join(lines) + "\n")


def read_coloring(path: Path) -> EdgeColoring:
    lines = Path(path).read_text().split("\n")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "s" or head[2] != "seed":
        raise ValueError(f"{path}: bad header {lines[0]!r}")
    s, seed = int(head[1]), int(head[3])
    colors = []
    for i, line in enumerate(l for l in lines[1:] if l.strip()):
        e, c = map(int, line.split())
        if e != i:
            raise ValueError(f"{path}: edges must be listed in ascending order")
        colors.append(c)
    return EdgeColoring(s, np.array(colors, dtype=np.uint8), seed)


def cached_coloring(s: int, seed: int = 0, budget: float = 60.0,
                    cache_dir: Optional[Path] = None) -> EdgeColoring:
    """Load the persisted colouring for (s, seed) verbatim, or search and persist one."""
    cache_dir = default_cache_dir() if cache_dir is None else Path(cache_dir)
    path = coloring_path(cache_dir, s, seed)
    if path.exists():
        col = read_coloring(path)
        if col.s != s or not verify_coloring(col):
            raise ValueError(f"{path}: cached colouring is invalid")
        return col
    col = find_coloring(s, seed, budget)
    write_coloring(col, path)
    return col


def code_path(cache_dir: Path, t: int) -> Path:
    return Path(cache_dir) / f"hamming_t{t}.txt"


def write_code(code: HammingCode, path: Path) -> None:
    lines = [f"t {code.t}"] + [str(x) for x in sorted(code.members)]
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text("\n".join(lines) + "\n")


def read_code(path: Path) -> HammingCode:
    lines = [l for l in Path(path).read_text().split("\n") if l.strip()]
    tag, t = lines[0].split()
    if tag != "t":
        raise ValueError(f"{path}: bad header {lines[0]!r}")
    return HammingCode(int(t), frozenset(int(x) for x in lines[1:]))
