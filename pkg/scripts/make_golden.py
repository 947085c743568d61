"""Recompute the oracle golden fixtures.

    python3 scripts/make_golden.py tests/fixtures/oracle_golden.txt
"""

import argparse
import sys
import time

from hypersat.oracle import compute_golden, write_fixtures

CASES = [
    (2, 2, "subcube:2"),
    (2, 3, "subcube:2"),
    (2, 3, "subcube:3"),
    (3, 2, "axis:2:2"),
    (3, 2, "axis:3:2"),
    (2, 3, "cycle:4"),
    (3, 2, "cycle:4"),
    (2, 2, "sat:2"),
    (2, 3, "sat:2"),
    (2, 3, "sat:3"),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out")
    args = ap.parse_args()
    rows = []
    for k, d, fam in CASES:
        t0 = time.perf_counter()
        g = compute_golden(k, d, fam)
        print(f"{g.to_line()}   ({time.perf_counter() - t0:.2f}s)", file=sys.stderr)
        rows.append(g)
    write_fixtures(args.out, rows, "python3 scripts/make_golden.py " + args.out)


if __name__ == "__main__":
    main()
