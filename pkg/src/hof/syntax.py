"""Terms of the combinator language and their canonical printing."""

from __future__ import annotations

from dataclasses import dataclass, field

from .ty import Ty, show_type


class Term:
    __slots__ = ()

    def __str__(self) -> str:
        return print_canonical(self)


# Source positions ride along for diagnostics but never take part in equality.
def _pos():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Lit(Term):
    n: int
    pos: tuple[int, int] | None = _pos()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"numerals start at 1, got {self.n}")


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True, slots=True)
class Lam(Term):
    name: str
    annot: Ty
    body: Term
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True, slots=True)
class App(Term):
    fun: Term
    arg: Term
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True, slots=True)
class Pair(Term):
    l: Term
    r: Term
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True, slots=True)
class Fst(Term):
    t: Term
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True, slots=True)
class Snd(Term):
    t: Term
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True, slots=True)
class Succ(Term):
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True, slots=True)
class Add(Term):
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True, slots=True)
class IdAt(Term):
    t: Ty
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True, slots=True)
class PR(Term):
    h: Term
    g: Term
    k: int
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True, slots=True)
class Iter(Term):
    at: Ty
    pos: tuple[int, int] | None = _pos()


@dataclass(frozen=True, slots=True)
class Comp(Term):
    at_a: Ty
    at_b: Ty
    at_c: Ty
    pos: tuple[int, int] | None = _pos()


def apps(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split ``f a1 ... an`` into ``(f, [a1, ..., an])``."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def free_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.name}
    if isinstance(t, App):
        return free_vars(t.fun) | free_vars(t.arg)
    if isinstance(t, Pair):
        return free_vars(t.l) | free_vars(t.r)
    if isinstance(t, (Fst, Snd)):
        return free_vars(t.t)
    if isinstance(t, PR):
        return free_vars(t.h) | free_vars(t.g)
    return set()


def print_canonical(t: Term) -> str:
    """Fully parenthesized rendering; ``parse`` inverts it exactly."""
    if isinstance(t, Lit):
        return str(t.n)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Succ):
        return "succ"
    if isinstance(t, Add):
        return "add"
    if isinstance(t, IdAt):
        return f"id[{show_type(t.t)}]"
    if isinstance(t, Iter):
        return f"iter[{show_type(t.at)}]"
    if isinstance(t, Comp):
        return f"comp[{show_type(t.at_a)}, {show_type(t.at_b)}, {show_type(t.at_c)}]"
    if isinstance(t, PR):
        return f"pr[{t.k}]({print_canonical(t.h)}, {print_canonical(t.g)})"
    if isinstance(t, Lam):
        return f"(\\{t.name}:{show_type(t.annot)}. {print_canonical(t.body)})"
    if isinstance(t, App):
        return f"({print_canonical(t.fun)} {print_canonical(t.arg)})"
    if isinstance(t, Pair):
        return f"({print_canonical(t.l)}, {print_canonical(t.r)})"
    if isinstance(t, Fst):
        return f"(fst {print_canonical(t.t)})"
    if isinstance(t, Snd):
        return f"(snd {print_canonical(t.t)})"
    raise TypeError(f"not a term: {t!r}")


def fresh_name(base: str, avoid: set[str]) -> str:
    stem = base.split("_")[0] if "_" in base and base.rsplit("_", 1)[1].isdigit() else base
    i = 1
    while f"{stem}_{i}" in avoid:
        i += 1
    return f"{stem}_{i}"


def subst(t: Term, name: str, value: Term, fv: set[str] | None = None) -> Term:
    """Capture-avoiding ``t[name := value]``."""
    if fv is None:
        fv = free_vars(value)
    if isinstance(t, Var):
        return value if t.name == name else t
    if isinstance(t, Lam):
        if t.name == name:
            return t
        if t.name in fv:
            body_fv = free_vars(t.body)
            if name not in body_fv:
                return t
            new = fresh_name(t.name, fv | body_fv | {name})
            body = subst(t.body, t.name, Var(new))
            return Lam(new, t.annot, subst(body, name, value, fv))
        return Lam(t.name, t.annot, subst(t.body, name, value, fv))
    if isinstance(t, App):
        return App(subst(t.fun, name, value, fv), subst(t.arg, name, value, fv))
    if isinstance(t, Pair):
        return Pair(subst(t.l, name, value, fv), subst(t.r, name, value, fv))
    if isinstance(t, Fst):
        return Fst(subst(t.t, name, value, fv))
    if isinstance(t, Snd):
        return Snd(subst(t.t, name, value, fv))
    if isinstance(t, PR):
        return PR(subst(t.h, name, value, fv), subst(t.g, name, value, fv), t.k)
    return t
