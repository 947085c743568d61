"""Command-line front end: build constructions, check them, print certificates.

Exit codes: 0 verified, 1 verification failed, 2 usage error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, TextIO

from . import codes, cycles, linalg, oracle, satcon, wsat
from .grid import GridSpace
from .percolation import EdgeSubgraph, PatternFamily, percolate

OK, FAILED, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class GraphDocument:
    k: int
    d: int
    edges: list[int]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        space = GridSpace(self.k, self.d)
        if any(b <= a for a, b in zip(self.edges, self.edges[1:])):
            raise ValueError("edges must be strictly ascending")
        if self.edges and not 0 <= self.edges[0] <= self.edges[-1] < space.n_edges:
            raise ValueError(f"edge id out of range for {space}")

    @property
    def space(self) -> GridSpace:
        return GridSpace(self.k, self.d)

    @classmethod
    def from_graph(cls, g: EdgeSubgraph, meta: Optional[dict] = None) -> "GraphDocument":
        return cls(g.space.k, g.space.d, g.edges(), dict(meta or {}))

    def graph(self) -> EdgeSubgraph:
        return EdgeSubgraph.from_edges(self.space, self.edges)

    def to_json(self) -> str:
        body = {"k": self.k, "d": self.d, "edges": list(self.edges), "meta": self.meta}
        return json.dumps(body, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "GraphDocument":
        try:
            body = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"not a graph document: {exc}") from None
        if not isinstance(body, dict) or not {"k", "d", "edges"} <= body.keys():
            raise ValueError("graph document needs k, d and edges")
        return cls(int(body["k"]), int(body["d"]), [int(e) for e in body["edges"]], body.get("meta", {}))


def export_dot(doc: GraphDocument) -> str:
    space = doc.space
    lines = ["graph G {"]
    for v in range(space.n_vertices):
        label = "(" + ",".join(map(str, space.decode(v))) + ")"
        lines.append(f'  v{v} [label="{label}"];')
    for e in doc.edges:
        u, v = space.endpoints(e)
        lines.append(f"  v{u} -- v{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- helpers ----------------------------------------------------------------------


def _emit_graph(args, g: EdgeSubgraph, meta: dict, out: TextIO) -> None:
    doc = GraphDocument.from_graph(g, meta)
    text = export_dot(doc) if args.format == "dot" else doc.to_json()
    if args.output:
        Path(args.output).write_text(text)
    else:
        out.write(text)


def _read_doc(args, stdin: TextIO) -> GraphDocument:
    text = stdin.read() if args.input in (None, "-") else Path(args.input).read_text()
    return GraphDocument.from_json(text)


def _cache_dir(args) -> Path:
    return Path(args.cache_dir) if args.cache_dir else codes.default_cache_dir()


def _cert_path(args, doc: GraphDocument, family: str) -> Path:
    if args.cert:
        return Path(args.cert)
    digest = hashlib.sha1(doc.to_json().encode() + family.encode()).hexdigest()[:12]
    return _cache_dir(args) / "certificates" / f"percolate_k{doc.k}_d{doc.d}_{digest}.txt"


# -- subcommands ------------------------------------------------------------------


def cmd_formula(args, out, stdin) -> int:
    if args.kind == "wsat":
        out.write(f"{wsat.wsat_grid_formula(args.k, args.r, args.d, args.m)}\n")
    else:
        out.write(f"{wsat.wsat_cube_formula(args.d, args.m)}\n")
    return OK


def cmd_build(args, out, stdin) -> int:
    if args.kind == "wsat":
        g = wsat.build_wsat_graph(args.k, args.r, args.d, args.m)
        family = str(PatternFamily.axis(g.space, args.r, args.m))
        meta = {"construction": "wsat", "k": args.k, "r": args.r, "d": args.d, "m": args.m,
                "family": family, "formula": wsat.wsat_grid_formula(args.k, args.r, args.d, args.m)}
    elif args.kind == "cycle-tree":
        g = cycles.build_cycle_tree(args.k, args.d, args.l)
        meta = {"construction": "cycle-tree", "k": args.k, "d": args.d, "l": args.l,
                "family": f"cycle:{2 * args.l}"}
    else:
        if args.seed is None:
            raise UsageError("build sat needs an explicit --seed")
        con = satcon.SatConstruction.create(args.m, args.d, seed=args.seed,
                                            budget=args.budget, cache_dir=_cache_dir(args))
        g = satcon.build_base_graph(con)
        meta = {"construction": "sat-base", "m": args.m, "d": args.d, "seed": args.seed,
                "t": con.params.t, "s": con.params.s, "census": satcon.class_census(con)}
        if args.complete:
            g = satcon.complete_to_saturated(g, args.m)
            meta["construction"] = "sat-completed"
            meta["accounting"] = satcon.edge_accounting(con, g)
    _emit_graph(args, g, meta, out)
    return OK


def cmd_check(args, out, stdin) -> int:
    doc = _read_doc(args, stdin)
    g = doc.graph()
    if args.kind == "percolate":
        family = args.family or doc.meta.get("family")
        if not family:
            raise UsageError("check percolate needs --family")
        fam = PatternFamily.parse(g.space, family)
        cert = percolate(g, fam, workers=args.threads)
        path = _cert_path(args, doc, family)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(cert.to_text())
        ok = cert.complete and cert.verify()
        out.write(f"{'verified' if ok else 'not percolating'}: {len(cert.order)} edges added, "
                  f"{cert.final.n_edges}/{g.space.n_edges} present\n")
        out.write(f"certificate: {path}\n")
        return OK if ok else FAILED
    if not g.space.is_cube:
        raise UsageError(f"check {args.kind} needs a hypercube host")
    if args.kind == "qmfree":
        found, checked = satcon.count_qm_copies(g, args.m)
        ok = found == 0
        out.write(f"{'verified' if ok else 'failed'}: {found} copies of Q_{args.m} in {checked} subcubes\n")
    else:
        ok = oracle.is_saturated(g.space, g, args.m)
        out.write(f"{'verified' if ok else 'failed'}: Q_{args.m}-saturated = {ok}\n")
    return OK if ok else FAILED


def cmd_cert(args, out, stdin) -> int:
    if args.kind == "rank":
        rep = linalg.rank_report(args.k, args.r, args.d, args.m)
        out.write(json.dumps(rep, sort_keys=True) + "\n")
        return OK if rep["equal"] else FAILED
    certs = [linalg.dependency_certificate(c, args.k, args.r, args.d, args.m)
             for c in linalg.enumerate_axis_subgrids(GridSpace(args.k, args.d), args.r, args.m)]
    out.write(json.dumps([c.to_json() for c in certs], sort_keys=True) + "\n")
    return OK if all(c.verified for c in certs) else FAILED


def cmd_oracle(args, out, stdin) -> int:
    space = GridSpace(args.k, args.d)
    if args.kind == "wsat":
        if not args.family:
            raise UsageError("oracle wsat needs --family")
        budget = oracle.SearchBudget(args.max_edges or 16, args.time_limit)
        res = oracle.min_wsat(space, PatternFamily.parse(space, args.family), budget)
    else:
        budget = oracle.SearchBudget(args.max_edges or 12, args.time_limit)
        res = oracle.min_sat(space, args.m, budget)
    out.write(json.dumps({"value": res.value, "witness": list(res.witness),
                          "checked": res.checked}, sort_keys=True) + "\n")
    return OK


def cmd_coloring(args, out, stdin) -> int:
    cache = _cache_dir(args)
    if args.kind == "find":
        col = codes.find_coloring(args.s, seed=args.seed, budget=args.budget, method=args.method)
        path = codes.coloring_path(cache, args.s, args.seed)
        codes.write_coloring(col, path)
        out.write(f"verified: Q_{args.s} colouring written to {path}\n")
        return OK
    path = Path(args.file) if args.file else codes.coloring_path(cache, args.s, args.seed)
    if not path.exists():
        raise UsageError(f"no colouring file at {path}")
    col = codes.read_coloring(path)
    bad = codes.count_monochromatic(col)
    out.write(f"{'verified' if bad == 0 else 'failed'}: {bad} monochromatic C4/C6 in Q_{col.s}\n")
    return OK if bad == 0 else FAILED


def cmd_hamming(args, out, stdin) -> int:
    code = codes.hamming_code(args.t)
    ok = codes.verify_perfect_code(code)
    path = codes.code_path(_cache_dir(args), args.t)
    codes.write_code(code, path)
    out.write(f"{'verified' if ok else 'failed'}: t={args.t} n={code.n} size={len(code.members)} -> {path}\n")
    return OK if ok else FAILED


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypersat", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=1, help="worker threads for percolation rounds")
    p.add_argument("--cache-dir", default=None, help="colouring/code/certificate cache (default $HYPERSAT_CACHE)")
    sub = p.add_subparsers(dest="cmd", required=True)

    f = sub.add_parser("formula", help="closed-form weak saturation numbers")
    f.add_argument("kind", choices=["wsat", "cube"])
    f.add_argument("-k", type=int, default=2)
    f.add_argument("-r", type=int, default=2)
    f.add_argument("-d", type=int, required=True)
    f.add_argument("-m", type=int, required=True)
    f.set_defaults(func=cmd_formula)

    b = sub.add_parser("build", help="emit a construction as a graph document")
    b.add_argument("kind", choices=["wsat", "sat", "cycle-tree"])
    b.add_argument("-k", type=int, default=2)
    b.add_argument("-r", type=int, default=2)
    b.add_argument("-d", type=int, required=True)
    b.add_argument("-m", type=int, default=2)
    b.add_argument("-l", type=int, default=2, help="half the cycle length")
    b.add_argument("--seed", type=int, default=None)
    b.add_argument("--budget", type=float, default=600.0, help="colouring search seconds")
    b.add_argument("--complete", action="store_true", help="greedily complete to a saturated graph")
    b.add_argument("--format", choices=["json", "dot"], default="json")
    b.add_argument("-o", "--output", default=None)
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", help="verify a graph document read from a file or stdin")
    c.add_argument("kind", choices=["percolate", "saturated", "qmfree"])
    c.add_argument("-i", "--input", default="-", help="graph document path, or - for stdin")
    c.add_argument("--family", default=None, help="subcube:M, axis:R:M or cycle:LEN")
    c.add_argument("-m", type=int, default=2)
    c.add_argument("--cert", default=None, help="where to write the percolation certificate")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("cert", help="linear-algebra lower-bound certificates")
    r.add_argument("kind", choices=["rank", "copies"])
    r.add_argument("-k", type=int, required=True)
    r.add_argument("-r", type=int, required=True)
    r.add_argument("-d", type=int, required=True)
    r.add_argument("-m", type=int, required=True)
    r.set_defaults(func=cmd_cert)

    o = sub.add_parser("oracle", help="exhaustive minimum on a tiny host")
    o.add_argument("kind", choices=["wsat", "sat"])
    o.add_argument("-k", type=int, default=2)
    o.add_argument("-d", type=int, required=True)
    o.add_argument("-m", type=int, default=2)
    o.add_argument("--family", default=None)
    o.add_argument("--max-edges", type=int, default=None)
    o.add_argument("--time-limit", type=float, default=600.0)
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("coloring", help="find or verify C4/C6-free 3-edge-colourings")
    g.add_argument("kind", choices=["find", "verify"])
    g.add_argument("-s", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--budget", type=float, default=60.0)
    g.add_argument("--method", choices=["auto", "local", "family"], default="auto")
    g.add_argument("--file", default=None)
    g.set_defaults(func=cmd_coloring)

    h = sub.add_parser("hamming", help="build, verify and cache a Hamming code")
    h.add_argument("-t", type=int, required=True)
    h.set_defaults(func=cmd_hamming)
    return p


def run(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None,
        stdin: TextIO = None) -> int:
    out, err, stdin = out or sys.stdout, err or sys.stderr, stdin or sys.stdin
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args, out, stdin)
    except (oracle.BudgetExceeded, codes.BudgetExhausted) as exc:
        err.write(f"budget exhausted: {exc}\n")
        return BUDGET
    except (UsageError, ValueError, TypeError, FileNotFoundError) as exc:
        err.write(f"error: {exc}\n")
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
