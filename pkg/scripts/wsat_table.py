"""Closed form vs construction vs engine vs rank over a parameter grid.

    python3 scripts/wsat_table.py --kmax 4 --dmax 3
"""

import argparse
import time

from hypersat.linalg import rank_lower_bound
from hypersat.percolation import PatternFamily, percolate
from hypersat.wsat import build_wsat_graph, wsat_grid_formula


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=4)
    ap.add_argument("--dmax", type=int, default=3)
    ap.add_argument("--rank-edges", type=int, default=200, help="skip the rank above this host size")
    args = ap.parse_args()
    print(f"{'k':>2} {'r':>2} {'d':>2} {'m':>2} {'formula':>8} {'built':>6} {'perc':>5} {'rank':>6}")
    t0 = time.perf_counter()
    for k in range(2, args.kmax + 1):
        for r in range(2, k + 1):
            for d in range(1, args.dmax + 1):
                for m in range(1, d + 1):
                    g = build_wsat_graph(k, r, d, m)
                    ok = percolate(g, PatternFamily.axis(g.space, r, m)).complete
                    rank = (rank_lower_bound(k, r, d, m) if g.space.n_edges <= args.rank_edges else "-")
                    print(f"{k:>2} {r:>2} {d:>2} {m:>2} {wsat_grid_formula(k, r, d, m):>8} "
                          f"{g.n_edges:>6} {str(ok):>5} {rank:>6}")
    print(f"# {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
