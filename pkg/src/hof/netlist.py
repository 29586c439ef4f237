"""Text netlist and DOT export of circuits.

Netlist syntax::

    hofnetlist 1
    source sha256:<hex>
    board <id> <kind> : <type>
    link <id>.<path> -> <id>.<path>
    root <id>.<path>
"""

from __future__ import annotations

import hashlib

from .circuit import FIRST_ORDER_KINDS, PLUG, Circuit, CircuitError, Terminal, fmt_path, fmt_terminal, port_tree
from .ty import Arrow, Nat, Ty, order, show_type

FORMAT_VERSION = 1


class NotFirstOrder(CircuitError):
    def __init__(self, terminal: Terminal, ty: Ty):
        self.terminal = terminal
        self.ty = ty
        super().__init__(f"port {fmt_terminal(terminal)} has type {show_type(ty)} of order {order(ty)}")


def source_hash(c: Circuit) -> str:
    return hashlib.sha256(c.source.encode("utf-8")).hexdigest()


def _higher_order_port(ty: Ty, path=()) -> tuple[tuple, Ty] | None:
    """First argument or result subtree of a board that is not a plain N wire."""
    if isinstance(ty, Nat):
        return None
    if isinstance(ty, Arrow):
        if not isinstance(ty.dom, Nat):
            return path + ("in",), ty.dom
        return _higher_order_port(ty.cod, path + ("out",))
    return path, ty


def check_first_order(c: Circuit) -> None:
    root = c.root
    if root is not None and order(root.ty) > 1:
        bad = _higher_order_port(root.ty, root.path)
        raise NotFirstOrder((root.board, bad[0]), bad[1])
    for bid, b in c.boards.items():
        bad = _higher_order_port(b.ty)
        if bad is not None:
            raise NotFirstOrder((bid, bad[0]), bad[1])
        if b.kind not in FIRST_ORDER_KINDS:
            raise NotFirstOrder((bid, ()), b.ty)


def _roots(c: Circuit) -> list[Terminal]:
    if c.dissolved:
        return list(c.root_terms)
    r = c.root
    tree = port_tree(r.ty, PLUG)
    return [(r.board, r.path + p) for p, pol in tree.leaves() if pol == PLUG]


def emit_netlist(c: Circuit) -> str:
    check_first_order(c)
    lines = [f"hofnetlist {FORMAT_VERSION}", f"source sha256:{source_hash(c)}"]
    for bid in sorted(c.boards):
        b = c.boards[bid]
        lines.append(f"board {bid} {b.label} : {show_type(b.ty)}")
    for dst, src in sorted(c.links.items(), key=lambda kv: (kv[1], kv[0])):
        lines.append(f"link {fmt_terminal(src)} -> {fmt_terminal(dst)}")
    for r in _roots(c):
        lines.append(f"root {fmt_terminal(r)}")
    return "\n".join(lines) + "\n"


def _node(c: Circuit, t: Terminal) -> str:
    b = c.boards[t[0]]
    if b.kind in FIRST_ORDER_KINDS:
        return f"b{b.id}"
    return f"p{b.id}_" + "_".join(t[1]) if t[1] else f"p{b.id}_out"


def emit_dot(c: Circuit) -> str:
    """Render boards as nodes, shells as clusters of their port terminals."""
    children: dict[int | None, list[int]] = {}
    for bid in sorted(c.boards):
        parent = c.boards[bid].parent
        children.setdefault(parent if parent in c.boards else None, []).append(bid)

    inner_edges: dict[int | None, list[tuple[Terminal, Terminal]]] = {}
    for dst, src in sorted(c.links.items(), key=lambda kv: (kv[1], kv[0])):
        owner = src[0] if src[0] == dst[0] and c.boards[src[0]].kind not in FIRST_ORDER_KINDS else None
        inner_edges.setdefault(owner, []).append((src, dst))

    out = ["digraph hof {", "  rankdir=LR;", "  node [shape=box, fontname=monospace];"]

    def edge_line(src: Terminal, dst: Terminal, indent: str) -> str:
        label = f"{fmt_path(src[1])} -> {fmt_path(dst[1])}"
        return f'{indent}{_node(c, src)} -> {_node(c, dst)} [label="{label}"];'

    def emit(bid: int, indent: str) -> None:
        b = c.boards[bid]
        if b.kind in FIRST_ORDER_KINDS:
            out.append(f'{indent}b{bid} [label="{b.label}#{bid}"];')
            return
        out.append(f"{indent}subgraph cluster_b{bid} {{")
        out.append(f'{indent}  label="{b.label}#{bid} : {show_type(b.ty)}";')
        for path, pol in port_tree(b.ty, PLUG).leaves():
            shape = "triangle" if pol == PLUG else "invtriangle"
            out.append(f'{indent}  {_node(c, (bid, path))} [label="{fmt_path(path)}", shape={shape}];')
        for child in children.get(bid, ()):
            emit(child, indent + "  ")
        for src, dst in inner_edges.get(bid, ()):
            out.append(edge_line(src, dst, indent + "  "))
        out.append(f"{indent}}}")

    for bid in children.get(None, ()):
        emit(bid, "  ")
    for src, dst in inner_edges.get(None, ()):
        out.append(edge_line(src, dst, "  "))
    for i, r in enumerate(_roots(c)):
        out.append(f'  root{i} [label="root", shape=doublecircle];')
        out.append(f"  {_node(c, r)} -> root{i};")
    out.append("}")
    return "\n".join(out) + "\n"


