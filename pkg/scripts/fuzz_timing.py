"""Run the engine-equivalence fuzzer over several seeds and time each batch."""

import argparse
import time

from hof import rewrite
from hof.cli import check_program
from hof.gen import generate


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seeds", type=int, nargs="+", default=[1, 2, 3, 42])
    ap.add_argument("--max-depth", type=int, default=6)
    ap.add_argument("--max-count", type=int, default=8)
    args = ap.parse_args()
    for seed in args.seeds:
        t0 = time.perf_counter()
        progs = generate(args.count, seed, args.max_depth, args.max_count)
        bad = sum(check_program(p, rewrite.DEFAULT_FUEL) is not None for p in progs)
        dt = time.perf_counter() - t0
        print(f"seed={seed:<6} programs={args.count} disagreements={bad} seconds={dt:.2f}")


if __name__ == "__main__":
    main()
