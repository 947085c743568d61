"""Exact rank lower bounds for weak saturation of axis-aligned subgrids.

Every edge e of P_k^d gets a vector f_e in a space with one (m-1)-dimensional
block per vertex and one (r-2)-dimensional block per line.  Each axis copy
of P_r^m carries a linear dependency among its edge vectors with all
coefficients nonzero, so the rank of all f_e bounds wsat from below.

All values are integers or Fractions; nothing here uses floating point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .grid import AxisSubgrid, GridSpace, enumerate_axis_subgrids
from .wsat import WsatParams, wsat_grid_formula

Vec = tuple[int, ...]

# a large prime below 2^63 for the modular fast path
PRIME = 9223372036854775783


def moment_vectors(d: int, m: int) -> list[Vec]:
    """z_i = (i, i^2, ..., i^(m-1)) for i = 1..d; any m-1 of them are independent."""
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    return [tuple(i**p for p in range(1, m)) for i in range(1, d + 1)]


def y_vectors(k: int, r: int) -> list[Vec]:
    """y_1 .. y_{k-1} in Z^(r-2): a standard basis start, then each y_t = -(previous r-2)."""
    if not 2 <= r <= k:
        raise ValueError(f"need k >= r >= 2, got k={k}, r={r}")
    dim = r - 2
    ys: list[Vec] = [tuple(int(i == t) for i in range(dim)) for t in range(dim)]
    for t in range(dim + 1, k):
        # ys is 0-indexed: ys[t-1] is y_t
        window = ys[t - r + 1 : t - 1]
        ys.append(tuple(-sum(col) for col in zip(*window)))
    if dim == 0:
        ys = [() for _ in range(k - 1)]
    return ys


def det_exact(rows: Sequence[Sequence[int | Fraction]]) -> Fraction:
    n = len(rows)
    a = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                for j in range(c, n):
                    a[i][j] -= f * a[c][j]
    return det


def in_general_position(vectors: Sequence[Vec], limit: int = 10**5) -> bool:
    """Every dim-sized subset has nonzero determinant (exhaustive up to ``limit`` subsets)."""
    if not vectors:
        return True
    dim = len(vectors[0])
    if dim == 0:
        return True
    if comb(len(vectors), dim) > limit:
        raise ValueError("too many subsets for an exhaustive check")
    return all(det_exact(sub) != 0 for sub in itertools.combinations(vectors, dim))


@dataclass(frozen=True)
class CertSpace:
    space: GridSpace
    r: int
    m: int

    @property
    def vertex_dim(self) -> int:
        return self.m - 1

    @property
    def line_dim(self) -> int:
        return self.r - 2

    @property
    def dim(self) -> int:
        return self.space.n_vertices * self.vertex_dim + self.space.n_lines * self.line_dim

    def vertex_offset(self, v: int) -> int:
        return v * self.vertex_dim

    def line_offset(self, line: int) -> int:
        return self.space.n_vertices * self.vertex_dim + line * self.line_dim


def edge_vector(cs: CertSpace, e: int, zs: Sequence[Vec], ys: Sequence[Vec]) -> dict[int, int]:
    """Sparse f_e: z_i on both endpoint blocks, y_t on the line block (t = larger coordinate)."""
    u, v = cs.space.endpoints(e)
    _, direction = cs.space.edge_base(e)
    line, pos = cs.space.line_of_edge(e)
    out: dict[int, int] = {}
    z = zs[direction]
    for x in (u, v):
        off = cs.vertex_offset(x)
        for i, val in enumerate(z):
            if val:
                out[off + i] = val
    y = ys[pos]  # t = pos + 1, ys is 0-indexed
    off = cs.line_offset(line)
    for i, val in enumerate(y):
        if val:
            out[off + i] = val
    return out


def build_edge_vectors(k: int, r: int, d: int, m: int) -> tuple[CertSpace, dict[int, dict[int, int]]]:
    p = WsatParams(k, r, d, m)
    cs = CertSpace(p.space, r, m)
    zs, ys = moment_vectors(d, m), y_vectors(k, r)
    return cs, {e: edge_vector(cs, e, zs, ys) for e in p.space.edges()}


def _dense(vectors: Sequence[dict[int, int]], ncols: int) -> list[list[int]]:
    rows = []
    for vec in vectors:
        row = [0] * ncols
        for i, val in vec.items():
            row[i] = val
        rows.append(row)
    return rows


def rank_exact(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank, prev = 0, 1
    for col in range(ncols):
        p = next((i for i in range(rank, nrows) if a[i][col] != 0), None)
        if p is None:
            continue
        a[rank], a[p] = a[p], a[rank]
        piv = a[rank]
        pv = piv[col]
        for i in range(rank + 1, nrows):
            row = a[i]
            f = row[col]
            if f == 0:
                for j in range(col + 1, ncols):
                    if row[j]:
                        row[j] = row[j] * pv // prev
            else:
                for j in range(col + 1, ncols):
                    row[j] = (pv * row[j] - f * piv[j]) // prev
            row[col] = 0
        prev = pv
        rank += 1
        if rank == nrows:
            break
    return rank


def rank_mod_p(rows: list[list[int]], p: int = PRIME) -> int:
    a = [[x % p for x in r] for r in rows]
    a = [r for r in a if any(r)]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][col], -1, p)
        prow = [x * inv % p for x in a[rank]]
        a[rank] = prow
        for i in range(rank + 1, nrows):
            f = a[i][col]
            if f:
                row = a[i]
                for j in range(col, ncols):
                    if prow[j]:
                        row[j] = (row[j] - f * prow[j]) % p
        rank += 1
        if rank == nrows:
            break
    return rank


def span_rank(vectors: Sequence[dict[int, int]], ncols: int) -> int:
    rows = _dense(vectors, ncols)
    return rank_exact(rows)


def rank_lower_bound(k: int, r: int, d: int, m: int, max_edges: int = 10**4) -> int:
    """dim span{f_e : e in E(P_k^d)}, computed exactly."""
    cs, vecs = build_edge_vectors(k, r, d, m)
    if len(vecs) > max_edges:
        raise ValueError(f"host has {len(vecs)} edges, limit {max_edges}")
    return span_rank([vecs[e] for e in sorted(vecs)], cs.dim)


@dataclass
class DependencyCertificate:
    copy: AxisSubgrid
    coefficients: dict[int, Fraction] = field(default_factory=dict)
    verified: bool = False

    def to_json(self) -> dict:
        return {
            "copy": {"r": self.copy.r, "dirs": list(self.copy.dirs),
                     "starts": list(self.copy.starts), "fixed": list(self.copy.fixed)},
            "coefficients": {str(e): [c.numerator, c.denominator]
                             for e, c in sorted(self.coefficients.items())},
            "verified": self.verified,
        }


class DegenerateNullSpace(ArithmeticError):
    pass


def solve_exact(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(a)
    m = [list(row) + [rhs] for row, rhs in zip(a, b)]
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            raise DegenerateNullSpace("singular system")
        m[c], m[p] = m[p], m[c]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c] / m[c][c]
                for j in range(c, n + 1):
                    m[i][j] -= f * m[c][j]
    return [m[i][n] / m[i][i] for i in range(n)]


def null_combination(vectors: Sequence[Vec]) -> list[Fraction]:
    """Coefficients c with sum c_i z_i = 0 and c_0 = 1, for len(vectors) = dim + 1 vectors."""
    n = len(vectors)
    dim = len(vectors[0]) if vectors else 0
    if n != dim + 1:
        raise ValueError(f"need exactly dim+1 vectors, got {n} in dimension {dim}")
    if dim == 0:
        return [Fraction(1)]
    # columns are vectors[1:], right side is -vectors[0]
    a = [[Fraction(vectors[j][i]) for j in range(1, n)] for i in range(dim)]
    b = [Fraction(-vectors[0][i]) for i in range(dim)]
    rest = solve_exact(a, b)
    c = [Fraction(1)] + rest
    if any(x == 0 for x in c):
        raise DegenerateNullSpace("zero coefficient; vectors not in general position")
    return c


def dependency_certificate(copy: AxisSubgrid, k: int, r: int, d: int, m: int) -> DependencyCertificate:
    WsatParams(k, r, d, m)
    if copy.r != r or copy.m != m:
        raise ValueError("copy does not match (r, m)")
    space = GridSpace(k, d)
    cs = CertSpace(space, r, m)
    zs, ys = moment_vectors(d, m), y_vectors(k, r)
    c = dict(zip(copy.dirs, null_combination([zs[i] for i in copy.dirs])))
    starts = dict(zip(copy.dirs, copy.starts))

    def interior_count(v: int) -> int:
        return sum(1 for i in copy.dirs if starts[i] < space.coord(v, i) < starts[i] + r - 1)

    coeffs: dict[int, Fraction] = {}
    for v in copy.vertices(space):
        for i in copy.dirs:
            if space.coord(v, i) != starts[i]:
                continue
            # v is the lower endpoint of a line of the copy in direction i
            scale = Fraction(2 ** interior_count(v)) * c[i]
            p = space.powers[i]
            for step in range(r - 1):
                coeffs[space.edge_id(v + step * p, i)] = scale

    total: dict[int, Fraction] = {}
    for e, de in coeffs.items():
        for idx, val in edge_vector(cs, e, zs, ys).items():
            total[idx] = total.get(idx, Fraction(0)) + de * val
    ok = all(x == 0 for x in total.values()) and all(x != 0 for x in coeffs.values())
    ok = ok and sorted(coeffs) == copy.edges(space)
    return DependencyCertificate(copy, coeffs, ok)


def certify_all_copies(k: int, r: int, d: int, m: int) -> tuple[int, int]:
    """(number of copies, number whose certificate verified)."""
    space = GridSpace(k, d)
    n = ok = 0
    for copy in enumerate_axis_subgrids(space, r, m):
        n += 1
        ok += dependency_certificate(copy, k, r, d, m).verified
    return n, ok


def construction_rank(k: int, r: int, d: int, m: int) -> int:
    """Rank of the edge vectors of the explicit weakly saturated graph."""
    from .wsat import build_wsat_graph

    g = build_wsat_graph(k, r, d, m)
    cs, vecs = build_edge_vectors(k, r, d, m)
    return span_rank([vecs[e] for e in g.edges()], cs.dim)


def rank_report(k: int, r: int, d: int, m: int) -> dict:
    rank = rank_lower_bound(k, r, d, m)
    formula = wsat_grid_formula(k, r, d, m)
    return {"k": k, "r": r, "d": d, "m": m, "rank": rank, "formula": formula, "equal": rank == formula}
