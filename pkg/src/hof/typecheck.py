from __future__ import annotations

from . import syntax as S
from .ty import Arrow, N, Prod, Ty, arrows, nat_fn, show_type


class TypeCheckError(Exception):
    pass


class TypeMismatch(TypeCheckError):
    def __init__(self, expected: Ty | str, found: Ty, location: str = ""):
        self.expected = expected
        self.found = found
        self.location = location
        exp = expected if isinstance(expected, str) else show_type(expected)
        where = f" at {location}" if location else ""
        super().__init__(f"type mismatch{where}: expected {exp}, found {show_type(found)}")


class UnboundVariable(TypeCheckError):
    def __init__(self, name: str, location: str = ""):
        self.name = name
        self.location = location
        where = f" at {location}" if location else ""
        super().__init__(f"unbound variable {name!r}{where}")


def iter_type(a: Ty) -> Ty:
    return arrows(N, Arrow(N, Arrow(a, a)), Arrow(a, a))


def comp_type(a: Ty, b: Ty, c: Ty) -> Ty:
    return Arrow(Prod(Arrow(a, b), Arrow(b, c)), Arrow(a, c))


def _loc(t: S.Term) -> str:
    pos = t.pos
    where = f"{pos[0]}:{pos[1]} " if pos else ""
    text = S.print_canonical(t)
    if len(text) > 60:
        text = text[:57] + "..."
    return f"{where}{text}"


def typecheck(t: S.Term, ctx: dict[str, Ty] | None = None) -> Ty:
    """Type of ``t`` under ``ctx`` (empty for closed programs)."""
    return _check(t, ctx or {})


def _check(t: S.Term, ctx: dict[str, Ty]) -> Ty:
    if isinstance(t, S.Lit):
        return N
    if isinstance(t, S.Var):
        if t.name not in ctx:
            raise UnboundVariable(t.name, _loc(t))
        return ctx[t.name]
    if isinstance(t, S.Succ):
        return nat_fn(1)
    if isinstance(t, S.Add):
        return nat_fn(2)
    if isinstance(t, S.IdAt):
        return Arrow(t.t, t.t)
    if isinstance(t, S.Iter):
        return iter_type(t.at)
    if isinstance(t, S.Comp):
        return comp_type(t.at_a, t.at_b, t.at_c)
    if isinstance(t, S.Lam):
        inner = dict(ctx)
        inner[t.name] = t.annot
        return Arrow(t.annot, _check(t.body, inner))
    if isinstance(t, S.App):
        ft = _check(t.fun, ctx)
        at = _check(t.arg, ctx)
        if not isinstance(ft, Arrow):
            raise TypeMismatch("a function type", ft, _loc(t.fun))
        if ft.dom != at:
            raise TypeMismatch(ft.dom, at, _loc(t.arg))
        return ft.cod
    if isinstance(t, S.Pair):
        return Prod(_check(t.l, ctx), _check(t.r, ctx))
    if isinstance(t, (S.Fst, S.Snd)):
        pt = _check(t.t, ctx)
        if not isinstance(pt, Prod):
            raise TypeMismatch("a product type", pt, _loc(t.t))
        return pt.left if isinstance(t, S.Fst) else pt.right
    if isinstance(t, S.PR):
        ht = _check(t.h, ctx)
        if ht != nat_fn(t.k):
            raise TypeMismatch(nat_fn(t.k), ht, _loc(t.h))
        gt = _check(t.g, ctx)
        if gt != nat_fn(t.k + 2):
            raise TypeMismatch(nat_fn(t.k + 2), gt, _loc(t.g))
        return nat_fn(t.k + 1)
    raise TypeError(f"not a term: {t!r}")
