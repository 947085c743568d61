"""Search for C4/C6-free 3-edge-colourings of Q_s and cache them.

    python3 scripts/find_coloring.py 4 6 8 12 18 --seed 0
"""

import argparse
import logging
import time

from hypersat.codes import cached_coloring, count_monochromatic, default_cache_dir


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("dims", type=int, nargs="+")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--budget", type=float, default=600.0)
    ap.add_argument("--cache-dir", default=None)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    cache = args.cache_dir or default_cache_dir()
    for s in args.dims:
        t0 = time.perf_counter()
        col = cached_coloring(s, args.seed, args.budget, cache)
        bad = count_monochromatic(col)
        print(f"Q_{s}: {len(col.colors)} edges, {bad} monochromatic cycles, {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
