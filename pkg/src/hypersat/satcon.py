"""A sparse (Q_d, Q_m)-saturated graph built from a Hamming code and a 3-edge-colouring.

Coordinates of Q_d are split into m blocks of 6n bits (n = 2^t - 1), each cut
into six sub-blocks of n bits labelled (r, gamma) with r in {0,1}, gamma in
{0,1,2} (sub-block index 3r + gamma), followed by a tail of s bits.  A
vertex is classified by which sub-blocks hold Hamming codewords; edges are
then chosen by a local rule, so membership of any edge can be decided
without building the graph.

Blocks are numbered 1..m as in the construction, and m+1 denotes the tail.
Bit b of a vertex id is coordinate b.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterator, Optional

import numpy as np

from .codes import EdgeColoring, HammingCode, cached_coloring, code_neighbor, hamming_code, syndrome_table
from .grid import GridSpace
from .percolation import EdgeSubgraph

X = -1  # class code for the exceptional set X


@dataclass(frozen=True)
class SatParams:
    m: int
    d: int
    t: int
    s: int

    @property
    def n(self) -> int:
        """Sub-block length 2^t - 1."""
        return 2**self.t - 1

    @property
    def block(self) -> int:
        return 6 * self.n

    @property
    def tail_offset(self) -> int:
        return self.m * self.block

    def sub_offset(self, i: int, r: int, gamma: int) -> int:
        return (i - 1) * self.block + (3 * r + gamma) * self.n

    def layout(self) -> list[tuple[str, int, int]]:
        """(label, first coordinate, length) for every sub-block and the tail, in coordinate order."""
        out = []
        for i in range(1, self.m + 1):
            for r in (0, 1):
                for gamma in (0, 1, 2):
                    out.append((f"({i},{r},{gamma})", self.sub_offset(i, r, gamma), self.n))
        out.append(("tail", self.tail_offset, self.s))
        return out

    def block_of(self, bit: int) -> int:
        """Block 1..m containing coordinate ``bit``, or m+1 for the tail."""
        return min(bit // self.block, self.m) + 1


def derive_params(m: int, d: int) -> SatParams:
    """The unique t >= 1, 0 <= s < 6m*2^t with d = 6m(2^t - 1) + s."""
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    if d < 6 * m:
        raise ValueError(f"d = {d} too small: need d >= 6m = {6 * m}")
    t = 1
    while 6 * m * (2 ** (t + 1) - 1) <= d:
        t += 1
    s = d - 6 * m * (2**t - 1)
    assert 0 <= s < 6 * m * 2**t
    return SatParams(m, d, t, s)


@dataclass(frozen=True)
class VertexClass:
    j: int  # X for the exceptional set

    @property
    def is_x(self) -> bool:
        return self.j == X

    def __str__(self) -> str:
        return "X" if self.is_x else f"A_{self.j}"


@dataclass
class SatConstruction:
    """Parameters plus the code and the two colourings (blocks, tail) the rule needs."""

    params: SatParams
    code: HammingCode
    phi_block: EdgeColoring
    phi_tail: EdgeColoring

    def __post_init__(self):
        p = self.params
        if self.code.t != p.t:
            raise ValueError(f"code has t={self.code.t}, parameters need t={p.t}")
        if self.phi_block.s != p.block or self.phi_tail.s != p.s:
            raise ValueError("colourings do not match the block and tail dimensions")

    @classmethod
    def create(cls, m: int, d: int, seed: int = 0, budget: float = 600.0, cache_dir=None) -> "SatConstruction":
        p = derive_params(m, d)
        return cls(p, hamming_code(p.t),
                   cached_coloring(p.block, seed, budget, cache_dir),
                   cached_coloring(p.s, seed, budget, cache_dir))

    @property
    def space(self) -> GridSpace:
        return GridSpace(2, self.params.d)

    # -- scalar rule ---------------------------------------------------------

    def sub(self, v: int, i: int, r: int, gamma: int) -> int:
        p = self.params
        return (v >> p.sub_offset(i, r, gamma)) & ((1 << p.n) - 1)

    def block_value(self, v: int, i: int) -> int:
        """v(i): the restriction to block i (i = m+1 gives the tail)."""
        p = self.params
        if i == p.m + 1:
            return v >> p.tail_offset
        return (v >> ((i - 1) * p.block)) & ((1 << p.block) - 1)

    def in_code(self, x: int) -> bool:
        return x in self.code.members

    def code_triples(self, v: int) -> list[tuple[int, int, int]]:
        return [(i, r, g) for i in range(1, self.params.m + 1) for r in (0, 1) for g in (0, 1, 2)
                if self.in_code(self.sub(v, i, r, g))]

    def class_code(self, v: int) -> int:
        trip = self.code_triples(v)
        blocks = [i for i, _, _ in trip]
        if len(blocks) != len(set(blocks)):
            return X
        return len(trip)

    def classify(self, v: int) -> VertexClass:
        return VertexClass(self.class_code(v))

    def phi(self, u: int, v: int, k: int) -> int:
        """Colour of the edge u(k)v(k) in Q_{6n} (k <= m) or Q_s (k = m+1)."""
        col = self.phi_tail if k == self.params.m + 1 else self.phi_block
        return col.color_of(self.block_value(u, k), self.block_value(v, k))

    def edge_in_g(self, u: int, v: int) -> bool:
        """Whether the construction puts the Q_d edge uv into G."""
        p = self.params
        diff = u ^ v
        if diff == 0 or diff & (diff - 1) or diff >> p.d:
            raise ValueError(f"{u} and {v} are not adjacent in Q_{p.d}")
        cu, cv = self.class_code(u), self.class_code(v)
        if cu == X or cv == X:
            return False
        if abs(cu - cv) == 1:
            return min(cu, cv) <= p.m - 2
        if cu != cv or not 1 <= cu <= p.m - 1:
            return False
        j = cu
        k = p.block_of(diff.bit_length() - 1)
        if k <= p.m:
            for r in (0, 1):
                for g in (0, 1, 2):
                    a = self.sub(u, k, r, g)
                    if a == self.sub(v, k, r, g) and self.in_code(a):
                        return False
        gamma_uv = self.phi(u, v, k)
        base = bin(v).count("1") + bin(self.block_value(v, k)).count("1") + j - 1
        for i in range(1, p.m + 1):
            if i == k:
                continue
            wi = bin(self.block_value(v, i)).count("1")
            for r in (0, 1):
                for g in (0, 1, 2):
                    if self.in_code(self.sub(v, i, r, g)):
                        if g != gamma_uv or (base + wi) % 2 != r:
                            return False
        return True

    def witness_subcube(self, u: int, v: int) -> list[int]:
        """The 2^m vertices of a Q_m through uv whose other edges all lie in G (u, v in A_0)."""
        p = self.params
        if self.class_code(u) != 0 or self.class_code(v) != 0:
            raise ValueError("both endpoints must lie in A_0")
        diff = u ^ v
        if diff == 0 or diff & (diff - 1):
            raise ValueError(f"{u} and {v} are not adjacent")
        k = p.block_of(diff.bit_length() - 1)
        gamma = self.phi(u, v, k)
        chosen = [i for i in range(1, p.m + 1) if i != k][: p.m - 1]
        flips = []
        wv = bin(v).count("1") + bin(self.block_value(v, k)).count("1")
        for i in chosen:
            r = (wv + bin(self.block_value(v, i)).count("1")) % 2
            x = self.sub(v, i, r, gamma)
            c = code_neighbor(x)
            flips.append((x ^ c) << p.sub_offset(i, r, gamma))
        out = []
        for sel in itertools.product((0, 1), repeat=len(flips)):
            mask = 0
            for bit, f in zip(sel, flips):
                if bit:
                    mask |= f
            out.extend((u ^ mask, v ^ mask))
        return sorted(out)

    # -- vectorized rule -------------------------------------------------------

    @cached_property
    def _syn(self) -> np.ndarray:
        return syndrome_table(self.params.n)

    def code_flags(self, verts: np.ndarray) -> np.ndarray:
        """bool (N, m, 6): sub-block (i, 3r+gamma) of each vertex is a codeword."""
        p = self.params
        verts = np.asarray(verts, dtype=np.int64)
        mask = (1 << p.n) - 1
        out = np.empty((len(verts), p.m, 6), dtype=bool)
        for i in range(p.m):
            for q in range(6):
                out[:, i, q] = self._syn[(verts >> (i * p.block + q * p.n)) & mask] == 0
        return out

    def class_codes(self, verts: np.ndarray) -> np.ndarray:
        flags = self.code_flags(verts)
        per_block = flags.sum(axis=2)
        j = per_block.sum(axis=1)
        return np.where((per_block >= 2).any(axis=1), X, j)

    def edge_mask(self, lower: np.ndarray, bits: np.ndarray) -> np.ndarray:
        """Vectorized edge_in_g for edges (lower, lower | 1<<bit), lower having that bit clear."""
        p = self.params
        u = np.asarray(lower, dtype=np.int64)
        bits = np.asarray(bits, dtype=np.int64)
        v = u | (np.int64(1) << bits)
        fu, fv = self.code_flags(u), self.code_flags(v)
        cu = np.where((fu.sum(2) >= 2).any(1), X, fu.sum((1, 2)))
        cv = np.where((fv.sum(2) >= 2).any(1), X, fv.sum((1, 2)))
        valid = (cu != X) & (cv != X)
        step1 = valid & (np.abs(cu - cv) == 1) & (np.minimum(cu, cv) <= p.m - 2)
        j = cv
        step2 = valid & (cu == cv) & (j >= 1) & (j <= p.m - 1)

        k0 = np.minimum(bits // p.block, p.m)  # 0-based block, m = tail
        rows = np.arange(len(u))
        in_tail = k0 == p.m
        # (i): no untouched sub-block of block k holds a codeword
        sub_hit = np.where(in_tail, -1, (bits - k0 * p.block) // p.n)
        kk = np.where(in_tail, 0, k0)
        shared = fv[rows, kk, :] & fu[rows, kk, :]
        shared[rows, np.maximum(sub_hit, 0)] &= in_tail  # the changed sub-block is never shared
        cond_i = in_tail | ~shared.any(axis=1)

        gamma = self._phi_vec(u, bits, k0)
        wv = np.bitwise_count(v).astype(np.int64)
        blockw = np.empty((len(u), p.m + 1), dtype=np.int64)
        bmask = (1 << p.block) - 1
        for i in range(p.m):
            blockw[:, i] = np.bitwise_count((v >> (i * p.block)) & bmask)
        blockw[:, p.m] = np.bitwise_count(v >> p.tail_offset)
        base = wv + blockw[rows, k0] + j - 1
        ok = np.ones(len(u), dtype=bool)
        for i in range(p.m):
            par = (base + blockw[:, i]) % 2
            for r in (0, 1):
                for g in (0, 1, 2):
                    applies = fv[:, i, 3 * r + g] & (k0 != i)
                    ok &= ~applies | ((gamma == g) & (par == r))
        return step1 | (step2 & cond_i & ok)

    def _phi_vec(self, u: np.ndarray, bits: np.ndarray, k0: np.ndarray) -> np.ndarray:
        p = self.params
        out = np.zeros(len(u), dtype=np.int64)
        in_block = k0 < p.m
        for sel, col, width in ((in_block, self.phi_block, p.block), (~in_block, self.phi_tail, p.s)):
            if width == 0 or not sel.any():
                continue
            off = np.where(in_block[sel], k0[sel] * p.block, p.tail_offset)
            local = (u[sel] >> off) & ((1 << width) - 1)
            q = bits[sel] - off
            low = local & ((np.int64(1) << q) - 1)
            high = local >> (q + 1)
            out[sel] = col.colors[(q << (width - 1)) + low + (high << q)]
        return out


# -- materialized graph ------------------------------------------------------------


def build_base_graph(con: SatConstruction) -> EdgeSubgraph:
    space = con.space
    table = space.edge_table
    return EdgeSubgraph(space, con.edge_mask(table[:, 0], table[:, 2]))


def _cube_edge_id(d: int, base: int, bit: int) -> int:
    return (bit << (d - 1)) + (base & ((1 << bit) - 1)) + ((base >> (bit + 1)) << bit)


def _cube_edge_ids(d: int, bases: np.ndarray, bit: int) -> np.ndarray:
    return (bit << (d - 1)) + (bases & ((1 << bit) - 1)) + ((bases >> (bit + 1)) << bit)


def subcube_edges(d: int, anchor: int, dirs) -> list[int]:
    out = []
    for sel in itertools.product((0, 1), repeat=len(dirs)):
        w = anchor
        for bit, b in zip(sel, dirs):
            if bit:
                w |= 1 << b
        for b in dirs:
            if not w >> b & 1:
                out.append(_cube_edge_id(d, w, b))
    return out


def count_qm_copies(g: EdgeSubgraph, m: int) -> tuple[int, int]:
    """(number of Q_m copies in g, number of subcubes checked), exhaustively."""
    d = g.space.d
    present = g.present
    found = checked = 0
    local = [(w, b) for w in range(1 << m) for b in range(m) if not w >> b & 1]
    for dirs in itertools.combinations(range(d), m):
        free = [b for b in range(d) if b not in dirs]
        idx = np.arange(1 << len(free), dtype=np.int64)
        anchors = np.zeros_like(idx)
        for pos, b in enumerate(free):
            anchors |= ((idx >> pos) & 1) << b
        alive = np.ones(len(anchors), dtype=bool)
        for w, b in local:
            off = sum(1 << dirs[i] for i in range(m) if w >> i & 1)
            alive &= present[_cube_edge_ids(d, anchors | off, dirs[b])]
        found += int(alive.sum())
        checked += len(anchors)
    return found, checked


def verify_qm_free(g: EdgeSubgraph, m: int) -> bool:
    """Exhaustive: no Q_m subgraph (every copy of Q_m in Q_d is a subcube)."""
    return count_qm_copies(g, m)[0] == 0


def random_subcube(d: int, m: int, rng: random.Random) -> tuple[int, tuple[int, ...]]:
    dirs = tuple(sorted(rng.sample(range(d), m)))
    anchor = rng.getrandbits(d)
    for b in dirs:
        anchor &= ~(1 << b)
    return anchor, dirs


def verify_qm_free_sampled(con: SatConstruction, n: int, seed: int) -> bool:
    """Check n uniformly random subcubes through the local rule alone."""
    d, m = con.params.d, con.params.m
    rng = random.Random(seed)
    for _ in range(n):
        anchor, dirs = random_subcube(d, m, rng)
        if all(_edge_in_g_by_id(con, d, e) for e in subcube_edges(d, anchor, dirs)):
            return False
    return True


def verify_qm_free_targeted(con: SatConstruction, n: int, seed: int,
                            batch: int = 1 << 16) -> tuple[bool, int]:
    """Check n random subcubes that each contain a random edge of G.

    G-edges are found by drawing host edges in numpy batches and keeping
    those the vectorized rule accepts.  Returns (no copy found, host edges drawn).
    """
    d, m = con.params.d, con.params.m
    rng = np.random.default_rng(seed)
    pick = random.Random(seed)
    done = drawn = 0
    while done < n:
        u = rng.integers(0, 1 << d, size=batch, dtype=np.int64)
        bits = rng.integers(0, d, size=batch, dtype=np.int64)
        lower = u & ~(np.int64(1) << bits)
        keep = np.flatnonzero(con.edge_mask(lower, bits))
        for idx in keep.tolist():
            base, bit = int(lower[idx]), int(bits[idx])
            extra = pick.sample([b for b in range(d) if b != bit], m - 1)
            anchor = base
            for b in extra:
                anchor &= ~(1 << b)
            dirs = tuple(sorted(extra + [bit]))
            if all(_edge_in_g_by_id(con, d, e) for e in subcube_edges(d, anchor, dirs)):
                return False, drawn + idx + 1
            done += 1
            if done == n:
                return True, drawn + idx + 1
        drawn += batch
    return True, drawn


def _edge_in_g_by_id(con: SatConstruction, d: int, e: int) -> bool:
    bit, rest = divmod(e, 1 << (d - 1))
    base = (rest & ((1 << bit) - 1)) | ((rest >> bit) << (bit + 1))
    return con.edge_in_g(base, base | (1 << bit))


def creates_qm(present: np.ndarray, d: int, m: int, e: int) -> bool:
    """Whether adding e to the graph closes some Q_m through it."""
    bit, rest = divmod(e, 1 << (d - 1))
    base = (rest & ((1 << bit) - 1)) | ((rest >> bit) << (bit + 1))
    others = [b for b in range(d) if b != bit]
    for extra in itertools.combinations(others, m - 1):
        anchor = base
        for b in extra:
            anchor &= ~(1 << b)
        dirs = tuple(sorted(extra + (bit,)))
        if all(present[x] or x == e for x in subcube_edges(d, anchor, dirs)):
            return True
    return False


def is_saturated(g: EdgeSubgraph, m: int) -> bool:
    """Q_m-free, and every absent edge closes a Q_m (both checked exhaustively)."""
    if not g.space.is_cube:
        raise ValueError("saturation is defined here for hypercube hosts")
    if not verify_qm_free(g, m):
        return False
    d = g.space.d
    return all(creates_qm(g.present, d, m, e) for e in g.missing())


def complete_to_saturated(g: EdgeSubgraph, m: int) -> EdgeSubgraph:
    """Greedy maximal Q_m-free supergraph: one ascending pass, then a full verification."""
    if not g.space.is_cube:
        raise ValueError("completion needs a hypercube host")
    if not verify_qm_free(g, m):
        raise ValueError("input graph already contains Q_m")
    d = g.space.d
    present = g.present.copy()
    for e in np.flatnonzero(~present).tolist():
        if not creates_qm(present, d, m, e):
            present[e] = True
    out = EdgeSubgraph(g.space, present)
    # a rejected edge stays rejected as edges are added, so one pass is stable
    if not is_saturated(out, m):
        raise AssertionError("greedy completion is not saturated")
    return out


# -- A_0 saturation --------------------------------------------------------------


def witness_ok(con: SatConstruction, u: int, v: int) -> bool:
    d, m = con.params.d, con.params.m
    verts = con.witness_subcube(u, v)
    if len(set(verts)) != 2**m or u not in verts or v not in verts:
        return False
    anchor = min(verts)
    spread = 0
    for w in verts:
        spread |= w ^ anchor
    dirs = [b for b in range(d) if spread >> b & 1]
    if len(dirs) != m:
        return False
    uv = _cube_edge_id(d, min(u, v), (u ^ v).bit_length() - 1)
    return all(e == uv or _edge_in_g_by_id(con, d, e) for e in subcube_edges(d, anchor, dirs))


def a0_edges(con: SatConstruction) -> Iterator[tuple[int, int]]:
    """Every host edge with both endpoints in A_0 (materializes the class table)."""
    space = con.space
    codes = con.class_codes(np.arange(space.n_vertices, dtype=np.int64))
    for u in np.flatnonzero(codes == 0).tolist():
        for b in range(space.d):
            v = u | (1 << b)
            if v != u and codes[v] == 0:
                yield u, v


def sample_a0_edges(con: SatConstruction, n: int, seed: int, batch: int = 4096) -> list[tuple[int, int]]:
    """n host edges with both endpoints in A_0 by rejection sampling."""
    d = con.params.d
    rng = np.random.default_rng(seed)
    out: list[tuple[int, int]] = []
    while len(out) < n:
        u = rng.integers(0, 1 << d, size=batch, dtype=np.int64)
        bits = rng.integers(0, d, size=batch, dtype=np.int64)
        v = u ^ (np.int64(1) << bits)
        both = (con.class_codes(u) == 0) & (con.class_codes(v) == 0)
        for a, b in zip(u[both].tolist(), v[both].tolist()):
            out.append((min(a, b), max(a, b)))
            if len(out) == n:
                break
    return out


def verify_a0_saturation(con: SatConstruction, sample: Optional[int] = None, seed: int = 0) -> tuple[bool, int]:
    """(all witnesses valid, number of A_0 edges checked): exhaustive, or ``sample`` random ones."""
    edges = list(a0_edges(con)) if sample is None else sample_a0_edges(con, sample, seed)
    return all(witness_ok(con, u, v) for u, v in edges), len(edges)


# -- observations and census -------------------------------------------------------


def check_observations(con: SatConstruction, g: EdgeSubgraph) -> dict[str, bool]:
    """The five edge-level properties of the base graph, each checked on every edge of g."""
    p = con.params
    table = g.space.edge_table[g.present]
    u, v, bit = table[:, 0], table[:, 1], table[:, 2]
    cu, cv = con.class_codes(u), con.class_codes(v)
    fu, fv = con.code_flags(u), con.code_flags(v)
    subs_u = np.stack([(u >> (i * p.block + q * p.n)) & ((1 << p.n) - 1)
                       for i in range(p.m) for q in range(6)], axis=1).reshape(len(u), p.m, 6)
    subs_v = np.stack([(v >> (i * p.block + q * p.n)) & ((1 << p.n) - 1)
                       for i in range(p.m) for q in range(6)], axis=1).reshape(len(v), p.m, 6)
    same = subs_u == subs_v
    iso = (cu != X) & (cv != X) & (cu != p.m) & (cv != p.m)
    a0_indep = ~((cu == 0) & (cv == 0))
    # a shared codeword sub-block pins the whole block
    fixed_block = (same & fu).any(axis=2)
    block_same = same.all(axis=2)
    c_fixes = ~fixed_block | block_same
    tail_edge = bit >= p.tail_offset
    tail_ok = ~tail_edge | ((cu == cv) & (cu >= 1) & (cu <= p.m - 1))
    one_side = ~(~same & fu & fv)
    return {
        "A_m and X isolated": bool(iso.all()),
        "A_0 independent": bool(a0_indep.all()),
        "shared codeword fixes block": bool(c_fixes.all()),
        "tail edges inside A_j, 1<=j<=m-1": bool(tail_ok.all()),
        "changed sub-block has at most one codeword end": bool(one_side.all()),
    }


def class_census(con: SatConstruction) -> dict[str, int]:
    codes = con.class_codes(np.arange(con.space.n_vertices, dtype=np.int64))
    out = {"X": int((codes == X).sum())}
    for j in range(con.params.m + 1):
        out[f"A_{j}"] = int((codes == j).sum())
    return out


def class_sizes_closed_form(p: SatParams) -> dict[str, int]:
    """Exact class sizes from per-block counts of codeword sub-blocks."""
    c = 2 ** (2**p.t - p.t - 1)
    free = 2**p.n - c
    none_ = free**6
    one = 6 * c * free**5
    out = {}
    for j in range(p.m + 1):
        out[f"A_{j}"] = comb(p.m, j) * one**j * none_ ** (p.m - j) * 2**p.s
    out["X"] = 2**p.d - sum(out.values())
    return {"X": out["X"], **{f"A_{j}": out[f"A_{j}"] for j in range(p.m + 1)}}


def edge_accounting(con: SatConstruction, g_sat: EdgeSubgraph) -> dict:
    """Edge count of the completed graph against the degree-sum bounds."""
    p = con.params
    census = class_census(con)
    a1 = census["A_1"]
    rest = census["X"] + sum(census[f"A_{j}"] for j in range(2, p.m + 1))
    c = 2 ** (2**p.t - p.t - 1)
    report = {
        "d": p.d, "m": p.m, "t": p.t, "s": p.s,
        "edges": g_sat.n_edges,
        "edges_per_vertex": g_sat.n_edges / 2**p.d,
        "census": census,
        "degree_bound": p.d * a1 + p.d * rest,
        "a1_bound": 6 * p.m * c * 2 ** (p.d - p.n),
        "d_a1_bound_over_2d": 6 * p.m * p.d * 2 ** (p.d - p.t) / 2**p.d,
        "bound_72m2": 72 * p.m**2,
    }
    if p.s == 0:
        report["bound_36m2"] = 36 * p.m**2
    return report
