"""Normal-order term rewriting for the combinator language.

One call to :func:`step` contracts the leftmost-outermost redex.  The rule
names are part of the trace format::

    BETA  PAIR-FST  PAIR-SND  ID  PR-BASE  PR-STEP  ITER-BASE  ITER-STEP
    COMP  DELTA-SUCC  DELTA-ADD

There is no sharing: an argument substituted twice is reduced twice, so a
trace spells out every rewriting in the naive chain.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

from . import syntax as S
from .syntax import App, Lit, apps, spine

DEFAULT_FUEL = 1_000_000

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))


class StuckTerm(Exception):
    def __init__(self, term: S.Term):
        self.term = term
        super().__init__(f"stuck term: {S.print_canonical(term)[:200]}")


class FuelExhausted(Exception):
    def __init__(self, steps_taken: int, last_term):
        self.steps_taken = steps_taken
        self.last_term = last_term
        super().__init__(f"fuel exhausted after {steps_taken} steps")


@dataclass(frozen=True)
class Step:
    rule: str
    before: S.Term
    after: S.Term


@dataclass
class Trace:
    steps: list[Step] = field(default_factory=list)
    final: S.Term | None = None

    def rules(self) -> list[str]:
        return [s.rule for s in self.steps]

    def format(self) -> str:
        lines = [f"step {k} [{s.rule}]: {S.print_canonical(s.after)}" for k, s in enumerate(self.steps, 1)]
        lines.append(f"normal: {S.print_canonical(self.final)}")
        return "\n".join(lines) + "\n"


def _contract(head: S.Term, args: list[S.Term]):
    """Redex formed by ``head`` applied to a prefix of ``args``, if any."""
    n = len(args)
    if n == 0:
        if isinstance(head, S.Fst) and isinstance(head.t, S.Pair):
            return "PAIR-FST", head.t.l
        if isinstance(head, S.Snd) and isinstance(head.t, S.Pair):
            return "PAIR-SND", head.t.r
        return None
    if isinstance(head, S.Lam):
        return "BETA", apps(S.subst(head.body, head.name, args[0]), *args[1:])
    if isinstance(head, S.Fst) and isinstance(head.t, S.Pair):
        return "PAIR-FST", apps(head.t.l, *args)
    if isinstance(head, S.Snd) and isinstance(head.t, S.Pair):
        return "PAIR-SND", apps(head.t.r, *args)
    if isinstance(head, S.IdAt):
        return "ID", apps(*args)
    if isinstance(head, S.Succ):
        if isinstance(args[0], Lit):
            return "DELTA-SUCC", apps(Lit(args[0].n + 1), *args[1:])
        return None
    if isinstance(head, S.Add):
        if n >= 2 and isinstance(args[0], Lit) and isinstance(args[1], Lit):
            return "DELTA-ADD", apps(Lit(args[0].n + args[1].n), *args[2:])
        return None
    if isinstance(head, S.PR):
        k = head.k
        if n >= k + 1 and isinstance(args[0], Lit):
            xs = args[1 : k + 1]
            rest = args[k + 1 :]
            count = args[0].n
            if count == 1:
                return "PR-BASE", apps(head.h, *xs, *rest)
            prev = Lit(count - 1)
            return "PR-STEP", apps(head.g, prev, apps(head, prev, *xs), *xs, *rest)
        return None
    if isinstance(head, S.Iter):
        if n >= 3 and isinstance(args[0], Lit):
            count, c, a = args[0].n, args[1], args[2]
            if count == 1:
                return "ITER-BASE", apps(a, *args[3:])
            prev = Lit(count - 1)
            return "ITER-STEP", apps(c, prev, apps(head, prev, c, a), *args[3:])
        return None
    if isinstance(head, S.Comp):
        if n >= 2 and isinstance(args[0], S.Pair):
            f, g = args[0].l, args[0].r
            return "COMP", apps(App(g, App(f, args[1])), *args[2:])
        return None
    if isinstance(head, (Lit, S.Pair)):
        raise StuckTerm(apps(head, *args))
    return None


def _step_head(head: S.Term, normal: dict):
    if isinstance(head, S.Lam):
        r = _step(head.body, normal)
        return r and (r[0], S.Lam(head.name, head.annot, r[1]))
    if isinstance(head, S.Pair):
        r = _step(head.l, normal)
        if r:
            return r[0], S.Pair(r[1], head.r)
        r = _step(head.r, normal)
        return r and (r[0], S.Pair(head.l, r[1]))
    if isinstance(head, S.Fst):
        r = _step(head.t, normal)
        return r and (r[0], S.Fst(r[1]))
    if isinstance(head, S.Snd):
        r = _step(head.t, normal)
        return r and (r[0], S.Snd(r[1]))
    if isinstance(head, S.PR):
        r = _step(head.h, normal)
        if r:
            return r[0], S.PR(r[1], head.g, head.k)
        r = _step(head.g, normal)
        return r and (r[0], S.PR(head.h, r[1], head.k))
    return None


def _step(t: S.Term, normal: dict):
    # ``normal`` maps id -> term for subterms already known to be normal; it
    # holds the terms so their ids stay valid for the whole normalization.
    if id(t) in normal:
        return None
    head, args = spine(t)
    r = _contract(head, args)
    if r:
        return r
    r = _step_head(head, normal)
    if r:
        return r[0], apps(r[1], *args)
    for i, a in enumerate(args):
        r = _step(a, normal)
        if r:
            return r[0], apps(head, *args[:i], r[1], *args[i + 1 :])
    normal[id(t)] = t
    return None


def step(t: S.Term) -> tuple[str, S.Term] | None:
    """Contract the leftmost-outermost redex of ``t``; ``None`` when normal."""
    return _step(t, {})


def _kids(head: S.Term) -> list[S.Term]:
    if isinstance(head, S.Lam):
        return [head.body]
    if isinstance(head, S.Pair):
        return [head.l, head.r]
    if isinstance(head, (S.Fst, S.Snd)):
        return [head.t]
    if isinstance(head, S.PR):
        return [head.h, head.g]
    return []


def _build(head: S.Term, nk: int, children: list[S.Term]) -> S.Term:
    kids, args = children[:nk], children[nk:]
    if isinstance(head, S.Lam):
        head = S.Lam(head.name, head.annot, kids[0])
    elif isinstance(head, S.Pair):
        head = S.Pair(kids[0], kids[1])
    elif isinstance(head, S.Fst):
        head = S.Fst(kids[0])
    elif isinstance(head, S.Snd):
        head = S.Snd(kids[0])
    elif isinstance(head, S.PR):
        head = S.PR(kids[0], kids[1], head.k)
    return apps(head, *args)


def _plug(path: list, t: S.Term) -> S.Term:
    for head, nk, children, i in reversed(path):
        children = children[:]
        children[i] = t
        t = _build(head, nk, children)
    return t


def normalize(t: S.Term, fuel: int = DEFAULT_FUEL) -> Trace:
    """Rewrite to normal form, recording each step; same order as :func:`step`.

    Keeps a zipper to the last contraction instead of searching from the
    root every time.  A contraction can only create a new redex at its
    immediate parent (redex shape depends on the top constructors of the
    spine's members), so only that parent is re-examined; everything left of
    the focus is already normal.
    """
    if fuel < 1:
        raise ValueError("fuel must be positive")
    trace = Trace()
    normal: dict = {}
    root = cur = t
    path: list = []  # frames [head, n_head_kids, children, index]
    while True:
        if id(cur) not in normal:
            head, args = spine(cur)
            r = _contract(head, args)
            if r:
                if len(trace.steps) >= fuel:
                    raise FuelExhausted(fuel, root)
                cur = r[1]
                after = _plug(path, cur)
                trace.steps.append(Step(r[0], root, after))
                root = after
                if path:
                    h, nk, children, i = path.pop()
                    children[i] = cur
                    cur = _build(h, nk, children)
                continue
            kids = _kids(head)
            children = kids + args
            if children:
                path.append([head, len(kids), children, 0])
                cur = children[0]
                continue
            normal[id(cur)] = cur
        while path:
            f = path[-1]
            f[2][f[3]] = cur
            f[3] += 1
            if f[3] < len(f[2]):
                cur = f[2][f[3]]
                break
            path.pop()
            cur = _build(f[0], f[1], f[2])
            normal[id(cur)] = cur
        else:
            trace.final = cur
            return trace


def evaluate(t: S.Term, fuel: int = DEFAULT_FUEL) -> int:
    """Normalize a closed program of type N down to its numeral."""
    final = normalize(t, fuel).final
    if not isinstance(final, Lit):
        raise StuckTerm(final)
    return final.n
