"""Circuit semantics: instantiate a term as boards, reconfigure, then run.

``instantiate`` lays the program out as boards joined by links; lambda,
comp, id, iter and pr boards stay closed shells.  ``elaborate`` opens the
shells one at a time, each opening adding boards and links inside it, until
only N wiring remains.  Iterator and pr shells need their count first: the
count wire is evaluated on the circuit built so far, and a shell whose count
is not ready yet waits for the others.  Finally the opened shells are
dissolved, every path through them becoming a direct link, and ``run``
evaluates the remaining dataflow graph.

A function-typed value is held as a recipe that builds a fresh board; a
board used at a second site is therefore a structural copy.  Values of type
N are terminals and fan out freely.
"""

from __future__ import annotations

from collections import deque
from graphlib import CycleError, TopologicalSorter

from . import syntax as S
from .circuit import (
    COMP_BOARD,
    INPUT,
    ITER_SHELL,
    LAMBDA_SHELL,
    LIT,
    PR_SHELL,
    PRIM_ADD,
    PRIM_ID,
    PRIM_SUCC,
    ApplyRecord,
    Circuit,
    CircuitError,
    Port,
    Terminal,
    apply_links,
    compose_link,
    fmt_terminal,
    link_ports,
)
from .rewrite import DEFAULT_FUEL, FuelExhausted
from .ty import Arrow, N, Nat, Prod, Ty, nat_fn, order
from .typecheck import comp_type, iter_type, typecheck


class UnresolvedCount(CircuitError):
    def __init__(self, board: int):
        self.board = board
        super().__init__(f"count of board {board} cannot be reduced to a literal")


class DanglingSocket(CircuitError):
    def __init__(self, terminal: Terminal):
        self.terminal = terminal
        super().__init__(f"socket {fmt_terminal(terminal)} has no incoming link")


class CycleDetected(CircuitError):
    pass


class CannotCopy(CircuitError):
    pass


class ElaborationFuelExhausted(FuelExhausted):
    pass


class _NotReady(Exception):
    pass


# -- values -----------------------------------------------------------------
#
# N       -> Port of type N (a terminal that drives a value)
# A ; B   -> tuple of two values
# A -> B  -> Recipe


class Recipe:
    ty: Ty

    def materialize(self, m: _Machine) -> Port:
        raise NotImplementedError


class BoardRecipe(Recipe):
    def __init__(self, kind: str, ty: Ty, **data):
        self.kind, self.ty, self.data = kind, ty, data

    def materialize(self, m):
        return m.c.port(m.c.add_board(self.kind, self.ty, **self.data))


class AppRecipe(Recipe):
    """``f arg`` at function type, or one component of it at ``sub``."""

    def __init__(self, f, arg, ty: Ty, sub: tuple[str, ...] = ()):
        self.f, self.arg, self.ty, self.sub = f, arg, ty, sub

    def materialize(self, m):
        return m.apply(self.f, self.arg).at(self.sub)


class PortRecipe(Recipe):
    """An existing function-typed port: used once, then copied from its fallback."""

    def __init__(self, port: Port):
        self.port, self.ty, self.used = port, port.ty, False

    def materialize(self, m):
        if not self.used:
            self.used = True
            return self.port
        fb = m.c.fallback(self.port.key)
        if fb is None:
            raise CannotCopy(f"no board to copy for second use of {self.port}")
        return fb.materialize(m)


class _Machine:
    def __init__(self, c: Circuit, types: dict[int, Ty]):
        self.c = c
        self.types = types

    # evaluation of syntax into wiring

    def eval(self, t: S.Term, env: dict):
        c = self.c
        if isinstance(t, S.Lit):
            return c.port(c.add_board(LIT, N, n=t.n))
        if isinstance(t, S.Var):
            return env[t.name]
        if isinstance(t, S.Succ):
            return BoardRecipe(PRIM_SUCC, nat_fn(1))
        if isinstance(t, S.Add):
            return BoardRecipe(PRIM_ADD, nat_fn(2))
        if isinstance(t, S.IdAt):
            return BoardRecipe(PRIM_ID, Arrow(t.t, t.t))
        if isinstance(t, S.Iter):
            return BoardRecipe(ITER_SHELL, iter_type(t.at))
        if isinstance(t, S.Comp):
            return BoardRecipe(COMP_BOARD, comp_type(t.at_a, t.at_b, t.at_c))
        if isinstance(t, S.PR):
            return BoardRecipe(PR_SHELL, nat_fn(t.k + 1), term=t, env=env)
        if isinstance(t, S.Lam):
            return BoardRecipe(LAMBDA_SHELL, self.types[id(t)], term=t, env=env)
        if isinstance(t, S.App):
            f = self.eval(t.fun, env)
            a = self.eval(t.arg, env)
            return self.apply_value(f, a, self.types[id(t)])
        if isinstance(t, S.Pair):
            return (self.eval(t.l, env), self.eval(t.r, env))
        if isinstance(t, S.Fst):
            return self.eval(t.t, env)[0]
        if isinstance(t, S.Snd):
            return self.eval(t.t, env)[1]
        raise TypeError(f"not a term: {t!r}")

    def apply(self, f: Recipe, arg) -> Port:
        """Materialize ``f``, link ``arg`` into it, return its output port."""
        c = self.c
        fport = f.materialize(self)
        if isinstance(arg, Recipe):
            aport = arg.materialize(self)
            if not isinstance(arg, PortRecipe):
                c.bound.setdefault(aport.key, arg)
            return apply_links(c, fport, aport)
        if isinstance(arg, Port):
            return apply_links(c, fport, arg)
        n = self.link_value(arg, fport.child("in"))
        c.applications.append(ApplyRecord(fport.ty, fport.ty.dom, n))
        return fport.child("out")

    def apply_value(self, f, arg, cod: Ty):
        if isinstance(cod, Arrow):
            return AppRecipe(f, arg, cod)
        out = self.apply(f, arg)
        return self.view(out, lambda sub: AppRecipe(f, arg, cod, sub))

    def apply_all(self, f, args: list):
        for a in args:
            f = self.apply_value(f, a, f.ty.cod)
        return f

    def view(self, port: Port, copier=None, sub: tuple[str, ...] = ()):
        """Value carried by a positive port."""
        if isinstance(port.ty, Nat):
            return port
        if isinstance(port.ty, Prod):
            return (
                self.view(port.child("0"), copier, sub + ("0",)),
                self.view(port.child("1"), copier, sub + ("1",)),
            )
        if copier is not None:
            self.c.bound.setdefault(port.key, copier(sub))
        return PortRecipe(port)

    def link_value(self, v, dst: Port) -> int:
        """Drive the negative port ``dst`` with value ``v``."""
        c = self.c
        if isinstance(dst.ty, Prod):
            return self.link_value(v[0], dst.child("0")) + self.link_value(v[1], dst.child("1"))
        if isinstance(v, Recipe):
            src = v.materialize(self)
            if not isinstance(v, PortRecipe):
                c.bound.setdefault(src.key, v)
            return link_ports(c, src, dst)
        return link_ports(c, v, dst)

    # shell expansion

    def expand(self, b) -> None:
        c = self.c
        inner = c.port(b, inside=True)
        if b.kind in (ITER_SHELL, PR_SHELL):
            n = self.resolve(inner.child("in").key)
            c.events.append(f"expand {b.id} {b.kind} n={n}")
        else:
            c.events.append(f"expand {b.id} {b.kind}")
        b.expanded = True
        c.parent = b.id
        try:
            if b.kind == LAMBDA_SHELL:
                lam = b.data["term"]
                env = dict(b.data["env"])
                env[lam.name] = self.view(inner.child("in"))
                self.link_value(self.eval(lam.body, env), inner.child("out"))
            elif b.kind == PRIM_ID:
                self.link_value(self.view(inner.child("in")), inner.child("out"))
            elif b.kind == COMP_BOARD:
                f = self.view(inner.at(("in", "0")))
                g = self.view(inner.at(("in", "1")))
                x = self.view(inner.at(("out", "in")))
                y = self.apply_value(f, x, f.ty.cod)
                z = self.apply_value(g, y, g.ty.cod)
                self.link_value(z, inner.at(("out", "out")))
            elif b.kind == ITER_SHELL:
                self._expand_iter(b, inner, n)
            elif b.kind == PR_SHELL:
                self._expand_pr(b, inner, n)
            else:
                raise CircuitError(f"cannot expand {b.kind}")
        finally:
            c.parent = None

    def _expand_iter(self, b, inner: Port, n: int) -> None:
        c = self.c
        step_fn = self.view(inner.at(("out", "in")))
        start = self.view(inner.at(("out", "out", "in")))
        sink = inner.at(("out", "out", "out"))
        c.expansions[b.id] = n - 1
        if n == 1:
            self.link_value(start, sink)
            return
        stages = []
        for i in range(1, n):
            index = c.port(c.add_board(LIT, N, n=i))
            stages.append(self.apply(step_fn, index))
        chain = stages[0]
        for s in stages[1:]:
            chain = compose_link(c, chain, s)
        self.link_value(start, stages[0].child("in"))
        last = stages[-1].child("out")
        link_ports(c, last, sink)

    def _expand_pr(self, b, inner: Port, n: int) -> None:
        c = self.c
        t, env = b.data["term"], b.data["env"]
        k = t.k
        params = [self.view(inner.at(("out",) * j + ("in",))) for j in range(1, k + 1)]
        sink = inner.at(("out",) * (k + 1))
        c.expansions[b.id] = n - 1
        acc = self.eval(t.h, env)
        if k:
            acc = self.apply_all(acc, params)
        for i in range(1, n):
            g = self.eval(t.g, env)
            index = c.port(c.add_board(LIT, N, n=i))
            acc = self.apply_all(g, [index, acc, *params])
        self.link_value(acc, sink)

    # staged evaluation of count wires

    def resolve(self, key: Terminal) -> int:
        c = self.c
        memo: dict[Terminal, int] = {}

        def value(k: Terminal) -> int:
            if k in memo:
                return memo[k]
            bid, path = k
            b = c.boards[bid]
            if b.kind == LIT:
                v = b.n
            elif b.kind == PRIM_SUCC and path == ("out",):
                v = value(driver((bid, ("in",)))) + 1
            elif b.kind == PRIM_ADD and path == ("out", "out"):
                v = value(driver((bid, ("in",)))) + value(driver((bid, ("out", "in"))))
            elif b.kind == INPUT:
                raise _NotReady(k)
            else:
                v = value(driver(k))
            memo[k] = v
            return v

        def driver(k: Terminal) -> Terminal:
            src = c.links.get(k)
            if src is None:
                raise _NotReady(k)
            return src

        return value(key)


def annotate_types(t: S.Term) -> dict[int, Ty]:
    """Type of every Lam and App node, keyed by node identity."""
    out: dict[int, Ty] = {}

    def walk(t, ctx):
        if isinstance(t, S.Lam):
            inner = dict(ctx)
            inner[t.name] = t.annot
            ty = Arrow(t.annot, walk(t.body, inner))
            out[id(t)] = ty
            return ty
        if isinstance(t, S.App):
            ft = walk(t.fun, ctx)
            walk(t.arg, ctx)
            out[id(t)] = ft.cod
            return ft.cod
        if isinstance(t, S.Pair):
            return Prod(walk(t.l, ctx), walk(t.r, ctx))
        if isinstance(t, (S.Fst, S.Snd)):
            pt = walk(t.t, ctx)
            return pt.left if isinstance(t, S.Fst) else pt.right
        if isinstance(t, S.PR):
            walk(t.h, ctx)
            walk(t.g, ctx)
        if isinstance(t, S.Var):
            return ctx[t.name]
        return typecheck(t, ctx)

    walk(t, {})
    return out


def instantiate(t: S.Term) -> Circuit:
    """Lay out a closed, well-typed term as boards and links; nothing is expanded."""
    ty = typecheck(t)
    c = Circuit(source=S.print_canonical(t))
    m = _Machine(c, annotate_types(t))
    c.machine = m
    c.term = t
    v = m.eval(t, {})
    if isinstance(v, Recipe):
        root = v.materialize(m)
        c.bound.setdefault(root.key, v)
    elif isinstance(v, Port):
        root = v
    else:
        raise CircuitError(f"program of product type {ty} has no single root board")
    c.root = root
    return c


def _open_inputs(root: Port) -> list[Port]:
    """Input sockets of a first-order root, outermost first."""
    out = []
    p = root
    while isinstance(p.ty, Arrow):
        out.append(p.child("in"))
        p = p.child("out")
    return out


def elaborate(c: Circuit, fuel: int = DEFAULT_FUEL, dissolve: bool = True) -> Circuit:
    """Expand shells until only N wiring remains reachable from the root."""
    if fuel < 1:
        raise ValueError("fuel must be positive")
    m: _Machine = c.machine
    root = c.root
    if isinstance(root.ty, Arrow) and order(root.ty) == 1 and not c.root_terms:
        for inp in _open_inputs(root):
            ib = c.add_board(INPUT, N)
            c.link((ib.id, ()), inp.key)
    steps = 0
    queue = deque(c.pending)
    c.pending.clear()
    waiting: list[int] = []
    progressed = False
    while True:
        while queue:
            bid = queue.popleft()
            b = c.boards[bid]
            if b.expanded:
                continue
            steps += 1
            if steps > fuel:
                raise ElaborationFuelExhausted(fuel, c)
            try:
                m.expand(b)
            except _NotReady:
                waiting.append(bid)
                continue
            progressed = True
            queue.extend(c.pending)
            c.pending.clear()
        if not waiting or not progressed:
            break
        queue.extend(waiting)
        waiting, progressed = [], False
    c.pending = waiting
    if dissolve:
        _dissolve(c)
        if isinstance(root.ty, Nat):
            stuck = [bid for bid in c.pending if bid in c.boards]
            if stuck:
                raise UnresolvedCount(stuck[0])
    return c


def _dissolve(c: Circuit) -> None:
    """Replace every path through an opened shell by a direct link, drop dead boards."""
    opened = {bid for bid, b in c.boards.items() if b.expanded}
    links = c.links

    def source(k: Terminal | None) -> Terminal | None:
        while k is not None and k[0] in opened:
            k = links.get(k)
        return k

    direct = {}
    for dst, src in links.items():
        if dst[0] in opened:
            continue
        s = source(src)
        if s is not None:
            direct[dst] = s

    roots = [source((c.root.board, p)) for p in _plug_leaves(c.root)]
    c.root_terms = [r for r in roots if r is not None]

    keep: set[int] = set()
    todo = [r[0] for r in c.root_terms]
    by_board: dict[int, list[Terminal]] = {}
    for dst, src in direct.items():
        by_board.setdefault(dst[0], []).append(src)
    while todo:
        bid = todo.pop()
        if bid in keep:
            continue
        keep.add(bid)
        todo.extend(src[0] for src in by_board.get(bid, ()))

    c.boards = {bid: b for bid, b in c.boards.items() if bid in keep}
    c.links = {d: s for d, s in sorted(direct.items()) if d[0] in keep}
    c.dissolved = True


def _plug_leaves(root: Port) -> list[tuple[str, ...]]:
    from .circuit import PLUG, port_tree

    tree = port_tree(root.ty, PLUG if root.positive else "socket")
    return [root.path + p for p, pol in tree.leaves() if pol == PLUG]


def run(c: Circuit, inputs: list[int] | None = None) -> int:
    """Evaluate the elaborated N-wire dataflow graph at the root."""
    if not c.dissolved:
        raise CircuitError("circuit is not elaborated")
    inputs = list(inputs or [])
    input_ids = [bid for bid, b in c.boards.items() if b.kind == INPUT]
    if len(c.root_terms) != 1:
        raise CircuitError("root is not a single N wire")
    given = dict(zip(sorted(input_ids), inputs))

    deps: dict[int, set[int]] = {}
    for bid, b in c.boards.items():
        if b.kind not in (LIT, INPUT, PRIM_SUCC, PRIM_ADD):
            raise CircuitError(f"board {bid} ({b.kind}) is not first-order")
        deps[bid] = set()
        for sock in _sockets(b.kind):
            src = c.links.get((bid, sock))
            if src is None:
                raise DanglingSocket((bid, sock))
            deps[bid].add(src[0])
    try:
        order_ = list(TopologicalSorter(deps).static_order())
    except CycleError as e:
        raise CycleDetected(f"cycle through boards {e.args[1]}") from None

    val: dict[int, int] = {}
    for bid in order_:
        b = c.boards[bid]
        if b.kind == LIT:
            val[bid] = b.n
        elif b.kind == INPUT:
            if bid not in given:
                raise DanglingSocket((bid, ()))
            val[bid] = given[bid]
        elif b.kind == PRIM_SUCC:
            val[bid] = val[c.links[(bid, ("in",))][0]] + 1
        else:
            val[bid] = val[c.links[(bid, ("in",))][0]] + val[c.links[(bid, ("out", "in"))][0]]
    return val[c.root_terms[0][0]]


def _sockets(kind: str) -> list[tuple[str, ...]]:
    if kind == PRIM_SUCC:
        return [("in",)]
    if kind == PRIM_ADD:
        return [("in",), ("out", "in")]
    return []


def evaluate(t: S.Term, fuel: int = DEFAULT_FUEL) -> int:
    """``run(elaborate(instantiate(t)))`` for a closed program of type N."""
    return run(elaborate(instantiate(t), fuel))
