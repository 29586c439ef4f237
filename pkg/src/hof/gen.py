"""Random closed, well-typed programs built top-down by target type.

Each node picks a constructor family first (primitive 50%, composition 20%,
pr/iter 20%, lambda/application 10%) and then a form of that family valid
at the requested type.  Recursion counts are literals in ``1..max_count``;
``depth`` bounds the nesting of generator calls.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import syntax as S
from .ty import Arrow, N, Prod, Ty, nat_fn

NN = nat_fn(1)
NNN = nat_fn(2)

FAMILIES = ("prim", "comp", "rec", "lam")
WEIGHTS = (50, 20, 20, 10)


@dataclass
class GenConfig:
    max_depth: int = 6
    max_count: int = 8


class Generator:
    def __init__(self, seed: int | None = None, config: GenConfig | None = None):
        self.rng = random.Random(seed)
        self.cfg = config or GenConfig()
        self._names = 0

    def program(self) -> S.Term:
        self._names = 0
        return self.gen(N, self.cfg.max_depth, ())

    # helpers

    def fresh(self, stem: str) -> str:
        self._names += 1
        return f"{stem}{self._names}"

    def lit(self) -> S.Term:
        return S.Lit(self.rng.randint(1, self.cfg.max_count))

    def count(self, depth: int) -> S.Term:
        # Occasionally a computed count, so staged elaboration gets exercised.
        if depth > 0 and self.cfg.max_count > 1 and self.rng.random() < 0.15:
            return S.App(S.Succ(), S.Lit(self.rng.randint(1, self.cfg.max_count - 1)))
        return self.lit()

    def var(self, ty: Ty, env) -> S.Term | None:
        names = [n for n, t in env if t == ty]
        return S.Var(self.rng.choice(names)) if names else None

    def lam(self, dom: Ty, cod: Ty, depth: int, env) -> S.Term:
        x = self.fresh("x" if dom == N else "f")
        return S.Lam(x, dom, self.gen(cod, depth - 1, env + ((x, dom),)))

    # generation

    def gen(self, ty: Ty, depth: int, env) -> S.Term:
        if depth <= 0:
            return self.leaf(ty, env)
        family = self.rng.choices(FAMILIES, WEIGHTS)[0]
        t = getattr(self, f"_{family}")(ty, depth, env)
        return t if t is not None else self.leaf(ty, env)

    def leaf(self, ty: Ty, env) -> S.Term:
        v = self.var(ty, env)
        if v is not None and self.rng.random() < 0.5:
            return v
        if ty == N:
            return self.lit()
        if ty == NN:
            return self.rng.choice([S.Succ(), S.IdAt(N), S.App(S.Add(), self.lit())])
        if ty == NNN:
            return S.Add()
        if isinstance(ty, Prod):
            return S.Pair(self.leaf(ty.left, env), self.leaf(ty.right, env))
        if isinstance(ty, Arrow):
            x = self.fresh("x" if ty.dom == N else "f")
            return S.Lam(x, ty.dom, self.leaf(ty.cod, env + ((x, ty.dom),)))
        raise TypeError(ty)

    def _prim(self, ty: Ty, depth: int, env):
        r = self.rng.random()
        d = depth - 1
        if ty == N:
            if r < 0.25:
                return self.leaf(N, env)
            if r < 0.5:
                return S.App(S.Succ(), self.gen(N, d, env))
            if r < 0.8:
                return S.apps(S.Add(), self.gen(N, d, env), self.gen(N, d, env))
            if r < 0.9:
                return S.App(S.IdAt(N), self.gen(N, d, env))
            other = self.rng.choice([N, NN])
            if self.rng.random() < 0.5:
                return S.Fst(S.Pair(self.gen(N, d, env), self.gen(other, d, env)))
            return S.Snd(S.Pair(self.gen(other, d, env), self.gen(N, d, env)))
        if ty == NN:
            if r < 0.4:
                return self.leaf(NN, env)
            if r < 0.8:
                return S.App(S.Add(), self.gen(N, d, env))
            return S.App(S.IdAt(NN), self.gen(NN, d, env))
        if ty == NNN:
            return S.Add() if r < 0.7 else S.App(S.IdAt(NNN), self.gen(NNN, d, env))
        return None

    def _comp(self, ty: Ty, depth: int, env):
        d = depth - 1
        if ty == N:
            f = self.gen(NN, d, env)
            g = self.gen(NN, d, env)
            return S.apps(S.Comp(N, N, N), S.Pair(f, g), self.gen(N, d, env))
        if isinstance(ty, Arrow) and ty.dom == N:
            f = self.gen(NN, d, env)
            g = self.gen(Arrow(N, ty.cod), d, env)
            return S.App(S.Comp(N, N, ty.cod), S.Pair(f, g))
        return None

    def _rec(self, ty: Ty, depth: int, env):
        d = depth - 1
        r = self.rng.random()
        if ty == N:
            if r < 0.4:
                c = self.lam(N, NN, d, env)
                return S.apps(S.Iter(N), self.count(d), c, self.gen(N, d, env))
            if r < 0.6:
                c = self.lam(N, Arrow(NN, NN), d, env)
                return S.apps(S.Iter(NN), self.count(d), c, self.gen(NN, d, env), self.gen(N, d, env))
            if r < 0.8:
                return S.App(self._pr(0, d, env), self.count(d))
            return S.apps(self._pr(1, d, env), self.count(d), self.gen(N, d, env))
        if ty == NN:
            if r < 0.5:
                return S.apps(S.Iter(N), self.count(d), self.lam(N, NN, d, env))
            return S.App(self._pr(1, d, env), self.count(d))
        if ty == NNN:
            return self._pr(1, d, env)
        return None

    def _pr(self, k: int, depth: int, env) -> S.Term:
        h = self.gen(nat_fn(k), depth, env)
        n, r = self.fresh("n"), self.fresh("r")
        inner = env + ((n, N), (r, N))
        names = []
        for _ in range(k):
            names.append(self.fresh("x"))
        body_env = inner + tuple((x, N) for x in names)
        body = self.gen(N, depth - 1, body_env)
        for x in reversed(names):
            body = S.Lam(x, N, body)
        g = S.Lam(n, N, S.Lam(r, N, body))
        return S.PR(h, g, k)

    def _lam(self, ty: Ty, depth: int, env):
        d = depth - 1
        if isinstance(ty, Arrow):
            return self.lam(ty.dom, ty.cod, depth, env)
        dom = self.rng.choice([N, N, NN])
        return S.App(self.lam(dom, ty, depth, env), self.gen(dom, d, env))


def generate(count: int, seed: int, max_depth: int = 6, max_count: int = 8) -> list[S.Term]:
    g = Generator(seed, GenConfig(max_depth, max_count))
    return [g.program() for _ in range(count)]
