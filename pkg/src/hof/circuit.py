"""Boards, typed port trees and links.

A board of type ``T`` exposes the port tree of ``T`` at plug polarity.  Going
into the domain of an arrow flips polarity, so a board of type ``A -> B``
has a socket subtree ``in`` for ``A`` and a plug subtree ``out`` for ``B``;
products keep polarity and name their halves ``0`` and ``1``.  Links join
single ``N`` terminals; a link between higher-order subtrees is the bundle
of its leaf links, directed by polarity.

Structural boards (shells) also have an inside: seen from within the board,
every terminal has the opposite polarity, which is how a lambda's body reads
its parameter socket and drives its result plug.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .ty import Arrow, Nat, Prod, Ty, show_type

PLUG = "plug"
SOCKET = "socket"

LIT = "LIT"
INPUT = "INPUT"
PRIM_SUCC = "PRIM-SUCC"
PRIM_ADD = "PRIM-ADD"
PRIM_ID = "PRIM-ID"
LAMBDA_SHELL = "LAMBDA-SHELL"
COMP_BOARD = "COMP-BOARD"
ITER_SHELL = "ITER-SHELL"
PR_SHELL = "PR-SHELL"

# Boards that survive elaboration: they only carry N wires.
FIRST_ORDER_KINDS = frozenset({LIT, INPUT, PRIM_SUCC, PRIM_ADD})
SHELL_KINDS = frozenset({PRIM_ID, LAMBDA_SHELL, COMP_BOARD, ITER_SHELL, PR_SHELL})

Path = tuple[str, ...]
Terminal = tuple[int, Path]


class CircuitError(Exception):
    pass


class LinkTypeMismatch(CircuitError):
    def __init__(self, expected: Ty, found: Ty):
        self.expected = expected
        self.found = found
        super().__init__(f"link type mismatch: expected {show_type(expected)}, found {show_type(found)}")


class SocketOccupied(CircuitError):
    def __init__(self, terminal: Terminal):
        self.terminal = terminal
        super().__init__(f"socket {fmt_terminal(terminal)} already has an incoming link")


def flip(polarity: str) -> str:
    return SOCKET if polarity == PLUG else PLUG


def fmt_path(path: Path) -> str:
    return ".".join(path) if path else "out"


def fmt_terminal(t: Terminal) -> str:
    return f"{t[0]}.{fmt_path(t[1])}"


@dataclass(frozen=True)
class PortTree:
    ty: Ty
    polarity: str
    children: tuple[tuple[str, "PortTree"], ...] = ()

    def leaves(self, prefix: Path = ()) -> list[tuple[Path, str]]:
        if not self.children:
            return [(prefix, self.polarity)]
        out = []
        for label, sub in self.children:
            out.extend(sub.leaves(prefix + (label,)))
        return out


def port_tree(ty: Ty, polarity: str = PLUG) -> PortTree:
    if isinstance(ty, Nat):
        return PortTree(ty, polarity)
    if isinstance(ty, Prod):
        return PortTree(ty, polarity, (("0", port_tree(ty.left, polarity)), ("1", port_tree(ty.right, polarity))))
    if isinstance(ty, Arrow):
        return PortTree(ty, polarity, (("in", port_tree(ty.dom, flip(polarity))), ("out", port_tree(ty.cod, polarity))))
    raise TypeError(f"not a type: {ty!r}")


def subtype(ty: Ty, path: Path) -> Ty:
    for label in path:
        if isinstance(ty, Arrow) and label in ("in", "out"):
            ty = ty.dom if label == "in" else ty.cod
        elif isinstance(ty, Prod) and label in ("0", "1"):
            ty = ty.left if label == "0" else ty.right
        else:
            raise KeyError(f"no port {label!r} in {show_type(ty)}")
    return ty


@dataclass
class Board:
    id: int
    kind: str
    ty: Ty
    n: int | None = None
    parent: int | None = None
    expanded: bool = False
    data: dict[str, Any] = field(default_factory=dict, repr=False)

    @property
    def label(self) -> str:
        return f"{self.kind}({self.n})" if self.kind == LIT else self.kind

    @property
    def interface(self) -> PortTree:
        return port_tree(self.ty, PLUG)


@dataclass(frozen=True)
class Port:
    """A subtree of a board's interface, seen from outside or from inside."""

    board: int
    path: Path
    ty: Ty
    inside: bool = False

    @property
    def key(self) -> Terminal:
        return (self.board, self.path)

    @property
    def positive(self) -> bool:
        """True when this side drives values out of the subtree root."""
        return (self.path.count("in") % 2 == 0) != self.inside

    def child(self, label: str) -> Port:
        return Port(self.board, self.path + (label,), subtype(self.ty, (label,)), self.inside)

    def at(self, path: Path) -> Port:
        p = self
        for label in path:
            p = p.child(label)
        return p

    def flipped(self) -> Port:
        return Port(self.board, self.path, self.ty, not self.inside)

    def __str__(self) -> str:
        return fmt_terminal(self.key)


@dataclass(frozen=True)
class ApplyRecord:
    fn_ty: Ty
    arg_ty: Ty
    links: int


@dataclass(frozen=True)
class Composite:
    """Result of :func:`compose_link`: ``inp`` of the first, ``out`` of the second."""

    inp: Port
    out: Port
    ty: Ty


class Circuit:
    def __init__(self, source: str = ""):
        self.source = source
        self.boards: dict[int, Board] = {}
        # dst terminal -> src terminal; one driver per terminal.
        self.links: dict[Terminal, Terminal] = {}
        self.root: Port | None = None
        self.root_terms: list[Terminal] = []
        self.events: list[str] = []
        self.applications: list[ApplyRecord] = []
        self.expansions: dict[int, int] = {}
        # Fallback for re-using a function-typed terminal: a recipe, or the
        # key of another terminal whose fallback applies.
        self.bound: dict[Terminal, Any] = {}
        self.pending: list[int] = []
        self.parent: int | None = None
        self.dissolved = False
        self.link_events = 0
        self._next_id = 1

    def add_board(self, kind: str, ty: Ty, n: int | None = None, **data) -> Board:
        b = Board(self._next_id, kind, ty, n=n, parent=self.parent, data=data)
        self._next_id += 1
        self.boards[b.id] = b
        self.events.append(f"board {b.id} {b.label} : {show_type(ty)}")
        if kind in SHELL_KINDS:
            self.pending.append(b.id)
        return b

    def port(self, board: Board | int, inside: bool = False) -> Port:
        b = self.boards[board] if isinstance(board, int) else board
        return Port(b.id, (), b.ty, inside)

    def link(self, src: Terminal, dst: Terminal) -> None:
        if dst in self.links:
            raise SocketOccupied(dst)
        self.links[dst] = src
        self.link_events += 1
        self.events.append(f"link {fmt_terminal(src)} -> {fmt_terminal(dst)}")

    def fallback(self, key: Terminal):
        seen = set()
        fb = self.bound.get(key)
        while isinstance(fb, tuple):
            if fb in seen:
                return None
            seen.add(fb)
            fb = self.bound.get(fb)
        return fb

    def event_log(self) -> str:
        return "".join(e + "\n" for e in self.events)

    def count(self, kind: str) -> int:
        return sum(1 for b in self.boards.values() if b.kind == kind)


def link_ports(c: Circuit, src: Port, dst: Port) -> int:
    """Link positive ``src`` into negative ``dst`` leaf by leaf; returns the link count."""
    if src.ty != dst.ty:
        raise LinkTypeMismatch(dst.ty, src.ty)
    if not src.positive or dst.positive:
        raise CircuitError(f"cannot link {src} -> {dst}: polarity")
    before = c.link_events
    _link_tree(c, src, dst)
    return c.link_events - before


def _link_tree(c: Circuit, src: Port, dst: Port) -> None:
    ty = src.ty
    if isinstance(ty, Nat):
        c.link(src.key, dst.key)
    elif isinstance(ty, Prod):
        _link_tree(c, src.child("0"), dst.child("0"))
        _link_tree(c, src.child("1"), dst.child("1"))
    else:
        c.bound.setdefault(dst.key, src.key)
        # The argument flows backwards: the consumer drives the producer's input.
        _link_tree(c, dst.child("in"), src.child("in"))
        _link_tree(c, src.child("out"), dst.child("out"))


def apply_links(c: Circuit, fport: Port, arg: Port) -> Port:
    """Apply the function at ``fport`` to the board subtree ``arg`` by linking.

    An ``N`` argument costs one link; an ``A -> B`` argument with base ``A``
    and ``B`` costs two: the function's argument plug into ``arg``'s socket
    and ``arg``'s result plug back into the function.
    """
    if not isinstance(fport.ty, Arrow):
        raise LinkTypeMismatch(Arrow(arg.ty, arg.ty), fport.ty)
    if fport.ty.dom != arg.ty:
        raise LinkTypeMismatch(fport.ty.dom, arg.ty)
    n = link_ports(c, arg, fport.child("in"))
    c.applications.append(ApplyRecord(fport.ty, arg.ty, n))
    return fport.child("out")


def compose_link(c: Circuit, first: Port | Composite, second: Port | Composite) -> Composite:
    """Connect ``first``'s output to ``second``'s input; the pair acts as ``A -> C``."""
    f_in, f_out = _ends(first)
    s_in, s_out = _ends(second)
    if f_out.ty != s_in.ty:
        raise LinkTypeMismatch(s_in.ty, f_out.ty)
    link_ports(c, f_out, s_in)
    return Composite(f_in, s_out, Arrow(f_in.ty, s_out.ty))


def _ends(x: Port | Composite) -> tuple[Port, Port]:
    if isinstance(x, Composite):
        return x.inp, x.out
    if not isinstance(x.ty, Arrow):
        raise LinkTypeMismatch(Arrow(x.ty, x.ty), x.ty)
    return x.child("in"), x.child("out")
