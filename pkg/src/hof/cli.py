"""``hof`` command line: check, eval, netlist, diff, fuzz.

Exit codes: 0 ok, 1 parse/type/semantic error, 2 I/O error, 3 fuel exhausted.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import machine, rewrite
from .gen import GenConfig, Generator
from .netlist import emit_dot, emit_netlist
from .parser import ParseError, Program, parse_program
from .syntax import Lit, Term, print_canonical
from .ty import N, show_type
from .typecheck import TypeCheckError, TypeMismatch, typecheck

EXIT_OK, EXIT_ERROR, EXIT_IO, EXIT_FUEL = 0, 1, 2, 3


@dataclass
class RunConfig:
    engine: str = "symbolic"
    fuel: int = rewrite.DEFAULT_FUEL
    trace_path: str | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.fuel < 1:
            raise ValueError("fuel must be at least 1")
        if self.engine not in ("symbolic", "circuit"):
            raise ValueError(f"unknown engine {self.engine!r}")


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def load(path: str) -> Term:
    """Parse and typecheck a program file; returns ``main`` with definitions inlined."""
    try:
        src = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise _Fail(EXIT_IO, f"{path}: {e.strerror or e}") from None
    try:
        prog = parse_program(src)
        seen = []
        for name, ty, body in prog.defs:
            inlined = Program(seen + [(name, ty, body)], body).inline()
            found = typecheck(inlined)
            if found != ty:
                raise TypeMismatch(ty, found, f"def {name}")
            seen.append((name, ty, body))
        main = prog.inline()
        typecheck(main)
    except ParseError as e:
        raise _Fail(EXIT_ERROR, f"{path}:{e.line}:{e.col}: syntax error: {e}") from None
    except TypeCheckError as e:
        raise _Fail(EXIT_ERROR, f"{path}: {type(e).__name__}: {e}") from None
    return main


def _need_nat(main: Term) -> None:
    ty = typecheck(main)
    if ty != N:
        raise _Fail(EXIT_ERROR, f"TypeMismatch: main has type {show_type(ty)}, expected N")


def run_symbolic(main: Term, fuel: int, trace_path: str | None = None) -> int:
    trace = rewrite.normalize(main, fuel)
    if trace_path:
        Path(trace_path).write_text(trace.format(), encoding="utf-8")
    if not isinstance(trace.final, Lit):
        raise rewrite.StuckTerm(trace.final)
    return trace.final.n


def run_circuit(main: Term, fuel: int, trace_path: str | None = None) -> int:
    c = machine.instantiate(main)
    try:
        machine.elaborate(c, fuel)
    finally:
        if trace_path:
            Path(trace_path).write_text(c.event_log(), encoding="utf-8")
    return machine.run(c)


def _guard(fn: Callable[[], int]) -> int:
    try:
        return fn()
    except _Fail as e:
        _err(str(e))
        return e.code
    except rewrite.FuelExhausted as e:
        _err(f"{type(e).__name__}: {e}")
        return EXIT_FUEL
    except OSError as e:
        _err(f"{type(e).__name__}: {e}")
        return EXIT_IO
    except (rewrite.StuckTerm, machine.CircuitError, ValueError) as e:
        _err(f"{type(e).__name__}: {e}")
        return EXIT_ERROR


def cmd_check(file: str) -> int:
    def go():
        print(show_type(typecheck(load(file))))
        return EXIT_OK

    return _guard(go)


def cmd_eval(file: str, config: RunConfig) -> int:
    def go():
        main = load(file)
        _need_nat(main)
        runner = run_symbolic if config.engine == "symbolic" else run_circuit
        print(runner(main, config.fuel, config.trace_path))
        return EXIT_OK

    return _guard(go)


def cmd_netlist(file: str, out_path: str | None, format: str = "text") -> int:
    def go():
        main = load(file)
        c = machine.instantiate(main)
        if format == "dot":
            text = emit_dot(machine.elaborate(c, dissolve=False))
        else:
            text = emit_netlist(machine.elaborate(c))
        if out_path in (None, "-"):
            sys.stdout.write(text)
        else:
            Path(out_path).write_text(text, encoding="utf-8")
        return EXIT_OK

    return _guard(go)


def cmd_diff(file: str, config: RunConfig) -> int:
    def go():
        main = load(file)
        _need_nat(main)
        s = run_symbolic(main, config.fuel)
        c = run_circuit(main, config.fuel)
        print(f"symbolic={s} circuit={c}")
        return EXIT_OK if s == c else EXIT_ERROR

    return _guard(go)


def check_program(main: Term, fuel: int, circuit_eval=None) -> str | None:
    """Run both engines and the netlist gate; a failure description or ``None``."""
    try:
        s = run_symbolic(main, fuel)
        c = machine.instantiate(main)
        machine.elaborate(c, fuel)
        v = circuit_eval(c) if circuit_eval else machine.run(c)
        emit_netlist(c)
    except Exception as e:  # every engine error is a counterexample here
        return f"{type(e).__name__}: {e}"
    if s != v:
        return f"symbolic={s} circuit={v}"
    return None


def cmd_fuzz(count: int, seed: int, max_depth: int = 6, max_count: int = 8, circuit_eval=None, generator=None) -> int:
    if count < 1:
        _err("count must be at least 1")
        return EXIT_ERROR
    gen = generator or Generator(seed, GenConfig(max_depth, max_count))
    failures = 0
    for i in range(count):
        prog = gen.program()
        problem = check_program(prog, rewrite.DEFAULT_FUEL, circuit_eval)
        if problem:
            failures += 1
            print(f"# case {i}: {problem}")
            print(f"main = {print_canonical(prog)}")
    print(f"fuzz: {count} programs, {failures} disagreements (seed={seed}, max_depth={max_depth}, max_count={max_count})")
    return EXIT_OK if failures == 0 else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hof", description="Higher-order combinator language: rewriting and circuit engines.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("check", help="print the type of main")
    s.add_argument("file")

    s = sub.add_parser("eval", help="evaluate main (type N)")
    s.add_argument("file")
    s.add_argument("--engine", choices=["symbolic", "circuit"], default="symbolic")
    s.add_argument("--fuel", type=int, default=rewrite.DEFAULT_FUEL)
    s.add_argument("--trace", dest="trace_path")

    s = sub.add_parser("netlist", help="elaborate main and write its netlist")
    s.add_argument("file")
    s.add_argument("-o", "--output", dest="out_path", default="-")
    s.add_argument("--format", choices=["text", "dot"], default="text")

    s = sub.add_parser("diff", help="compare both engines on main")
    s.add_argument("file")
    s.add_argument("--fuel", type=int, default=rewrite.DEFAULT_FUEL)

    s = sub.add_parser("fuzz", help="compare both engines on random programs")
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--max-depth", type=int, default=6)
    s.add_argument("--max-count", type=int, default=8)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "check":
            return cmd_check(args.file)
        if args.cmd == "eval":
            return cmd_eval(args.file, RunConfig(args.engine, args.fuel, args.trace_path))
        if args.cmd == "netlist":
            return cmd_netlist(args.file, args.out_path, args.format)
        if args.cmd == "diff":
            return cmd_diff(args.file, RunConfig("symbolic", args.fuel))
        return cmd_fuzz(args.count, args.seed, args.max_depth, args.max_count)
    except ValueError as e:
        _err(str(e))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
