import re

import pytest
from hypothesis import given

from conftest import PROGRAMS, programs
from hof.machine import elaborate, instantiate
from hof.netlist import NotFirstOrder, emit_dot, emit_netlist, source_hash
from hof.parser import parse, parse_program


def netlist(src):
    return emit_netlist(elaborate(instantiate(parse(src))))


def sum5():
    return parse_program((PROGRAMS / "sum5.hof").read_text()).inline()


def test_single_literal():
    lines = netlist("7").splitlines()
    assert lines[0] == "hofnetlist 1"
    assert re.fullmatch(r"source sha256:[0-9a-f]{64}", lines[1])
    assert lines[2:] == ["board 1 LIT(7) : N", "root 1.out"]


def test_composed_successors():
    text = netlist("comp[N, N, N] (succ, succ)")
    boards = [l for l in text.splitlines() if l.startswith("board")]
    assert sum("PRIM-SUCC" in b for b in boards) == 2
    assert sum("INPUT" in b for b in boards) == 1
    succ_ids = [b.split()[1] for b in boards if "PRIM-SUCC" in b]
    assert f"link {succ_ids[0]}.out -> {succ_ids[1]}.in" in text


def test_sum_program():
    text = emit_netlist(elaborate(instantiate(sum5())))
    assert text.count("PRIM-ADD") == 4
    assert text.count("LIT(1)") >= 1


def test_higher_order_root_rejected():
    with pytest.raises(NotFirstOrder):
        netlist("iter[N]")


def test_unelaborated_shell_rejected():
    with pytest.raises(NotFirstOrder):
        emit_netlist(instantiate(parse("comp[N, N, N] (succ, succ) 1")))


def test_dot_clusters_follow_nesting():
    dot = emit_dot(elaborate(instantiate(parse("comp[N, N, N] (succ, succ) 3")), dissolve=False))
    assert dot.startswith("digraph hof {")
    assert "subgraph cluster_b" in dot
    assert 'label="in.0.out -> in.1.in"' in dot


def test_dot_pr_stages_nested():
    dot = emit_dot(elaborate(instantiate(sum5()), dissolve=False))
    lines = dot.splitlines()
    pr = next(i for i, l in enumerate(lines) if "PR-SHELL#" in l)
    depth = len(lines[pr]) - len(lines[pr].lstrip())
    inside = []
    for l in lines[pr + 1 :]:
        if l.strip() == "}" and len(l) - len(l.lstrip()) == depth - 2:
            break
        inside.append(l)
    assert sum("LAMBDA-SHELL#" in l for l in inside) >= 4


def test_source_hash_tracks_program():
    a, b = instantiate(parse("add 1 2")), instantiate(parse("add 2 1"))
    assert source_hash(a) != source_hash(b)


@given(programs())
def test_netlist_is_deterministic(t):
    assert emit_netlist(elaborate(instantiate(t))) == emit_netlist(elaborate(instantiate(t)))


@given(programs())
def test_netlist_counts_match_circuit(t):
    c = elaborate(instantiate(t))
    text = emit_netlist(c)
    assert sum(l.startswith("board ") for l in text.splitlines()) == len(c.boards)
    assert sum(l.startswith("link ") for l in text.splitlines()) == len(c.links)
