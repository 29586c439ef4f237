"""Type expressions: the base type N, arrows and binary products."""

from __future__ import annotations

from dataclasses import dataclass


class Ty:
    __slots__ = ()

    def __str__(self) -> str:
        return show_type(self)


@dataclass(frozen=True, slots=True)
class Nat(Ty):
    pass


@dataclass(frozen=True, slots=True)
class Arrow(Ty):
    dom: Ty
    cod: Ty


@dataclass(frozen=True, slots=True)
class Prod(Ty):
    left: Ty
    right: Ty


N = Nat()


def arrows(*tys: Ty) -> Ty:
    """Right-nested arrow: ``arrows(a, b, c) == a -> (b -> c)``."""
    out = tys[-1]
    for t in reversed(tys[:-1]):
        out = Arrow(t, out)
    return out


def nat_fn(arity: int) -> Ty:
    """Curried ``N -> ... -> N`` taking ``arity`` arguments (``N`` when 0)."""
    return arrows(*([N] * (arity + 1)))


def type_equal(a: Ty, b: Ty) -> bool:
    return a == b


def order(t: Ty) -> int:
    if isinstance(t, Nat):
        return 0
    if isinstance(t, Prod):
        return max(order(t.left), order(t.right))
    if isinstance(t, Arrow):
        return max(order(t.dom) + 1, order(t.cod))
    raise TypeError(f"not a type: {t!r}")


def show_type(t: Ty) -> str:
    if isinstance(t, Nat):
        return "N"
    if isinstance(t, Prod):
        return f"({show_type(t.left)} ; {show_type(t.right)})"
    if isinstance(t, Arrow):
        dom = show_type(t.dom)
        if isinstance(t.dom, Arrow):
            dom = f"({dom})"
        return f"{dom} -> {show_type(t.cod)}"
    raise TypeError(f"not a type: {t!r}")
