import pytest
from hypothesis import given, settings

import oracle
from conftest import PROGRAMS, programs
from hof import syntax as S
from hof.parser import parse, parse_program
from hof.rewrite import FuelExhausted, StuckTerm, evaluate, normalize, step
from hof.ty import N
from hof.typecheck import typecheck

SUM = r"pr[0](1, \n:N. \r:N. add r (succ n))"


def sum5():
    return parse_program((PROGRAMS / "sum5.hof").read_text()).inline()


def test_step_on_pr_application():
    rule, after = step(sum5())
    assert rule == "PR-STEP"
    f = parse(SUM)
    assert S.print_canonical(after) == S.print_canonical(S.apps(f.g, S.Lit(4), S.App(f, S.Lit(4))))


def test_iter_base():
    t = parse(r"iter[N] 1 (\i:N. \a:N. a) 5")
    assert step(t) == ("ITER-BASE", S.Lit(5))


def test_numeral_is_normal():
    assert step(S.Lit(7)) is None


def test_sum_program():
    tr = normalize(sum5())
    assert tr.final == S.Lit(15)
    assert [r for r in tr.rules() if r.startswith("PR")] == ["PR-STEP"] * 4 + ["PR-BASE"]


def test_trace_chains():
    tr = normalize(sum5())
    for a, b in zip(tr.steps, tr.steps[1:]):
        assert a.after is b.before
    assert tr.steps[-1].after is tr.final
    assert tr.format().splitlines()[-1] == "normal: 15"


def test_comp_rule():
    tr = normalize(parse("comp[N, N, N] (succ, add 2) 3"))
    assert tr.rules()[0] == "COMP"
    assert tr.final == S.Lit(6)


def test_delta_add_needs_literals():
    assert step(parse("add 1")) is None
    assert step(parse("add 1 2")) == ("DELTA-ADD", S.Lit(3))


def test_projections_and_identity():
    assert evaluate(parse("snd (succ, 4)")) == 4
    assert normalize(parse("id[N] 2")).rules() == ["ID"]


def test_stuck_and_fuel():
    with pytest.raises(StuckTerm):
        normalize(S.App(S.Lit(1), S.Lit(2)))
    with pytest.raises(FuelExhausted) as e:
        normalize(sum5(), fuel=2)
    assert e.value.steps_taken == 2


def test_no_sharing():
    # The argument is duplicated before it is reduced, so it is reduced twice.
    tr = normalize(parse(r"(\x:N. add x x) (succ 1)"))
    assert tr.rules().count("DELTA-SUCC") == 2


@pytest.mark.parametrize("n", range(1, 9))
def test_iterator_closed_form(n):
    t = S.apps(S.Iter(N), S.Lit(n), parse(r"\i:N. \a:N. add a i"), S.Lit(1))
    assert evaluate(t) == 1 + n * (n - 1) // 2 == oracle.denote(t)


@given(programs(max_depth=5, max_count=5))
def test_normalize_matches_repeated_step(t):
    tr = normalize(t)
    cur, seen = t, []
    while (r := step(cur)) is not None:
        seen.append(r)
        cur = r[1]
    assert [(s.rule, s.after) for s in tr.steps] == seen
    assert tr.final == cur


@given(programs())
def test_determinism(t):
    assert normalize(t).format() == normalize(t).format()


@settings(max_examples=30)
@given(programs(max_depth=3, max_count=4))
def test_subject_reduction(t):
    ty = typecheck(t)
    for s in normalize(t).steps:
        assert typecheck(s.after) == ty


@given(programs())
def test_nat_normal_forms_are_numerals(t):
    assert isinstance(normalize(t).final, S.Lit)


@given(programs(max_depth=5, max_count=6))
def test_agrees_with_oracle(t):
    assert evaluate(t) == oracle.denote(t)
