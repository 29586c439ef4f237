"""Sweep the iterator count and compare engine cost.

For each n, builds ``iter[N] n (\\i:N. \\a:N. add a i) 1`` and reports the
rewrite step count, the elaborated board count and wall time per engine.
"""

import argparse
import time

from hof import machine, rewrite, syntax as S
from hof.parser import parse
from hof.ty import N


def row(n: int, c: S.Term) -> tuple:
    t = S.apps(S.Iter(N), S.Lit(n), c, S.Lit(1))
    t0 = time.perf_counter()
    trace = rewrite.normalize(t)
    t1 = time.perf_counter()
    circ = machine.elaborate(machine.instantiate(t))
    value = machine.run(circ)
    t2 = time.perf_counter()
    assert trace.final == S.Lit(value)
    return n, value, len(trace.steps), len(circ.boards), len(circ.links), t1 - t0, t2 - t1


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=64)
    ap.add_argument("--step", type=int, default=8)
    args = ap.parse_args()
    c = parse(r"\i:N. \a:N. add a i")
    print(f"{'n':>5} {'value':>8} {'steps':>7} {'boards':>7} {'links':>7} {'sym_s':>8} {'circ_s':>8}")
    for n in [1, *range(args.step, args.max_n + 1, args.step)]:
        n_, v, steps, boards, links, ts, tc = row(n, c)
        print(f"{n_:>5} {v:>8} {steps:>7} {boards:>7} {links:>7} {ts:>8.4f} {tc:>8.4f}")


if __name__ == "__main__":
    main()
