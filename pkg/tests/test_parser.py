import pytest
from hypothesis import given

from conftest import programs
from hof import syntax as S
from hof.parser import ParseError, parse, parse_program
from hof.ty import N, nat_fn


def test_lambda_example():
    t = parse(r"\x:N. succ x")
    assert t == S.Lam("x", N, S.App(S.Succ(), S.Var("x")))


def test_application_is_left_associative():
    assert parse("add 2 3") == S.App(S.App(S.Add(), S.Lit(2)), S.Lit(3))


def test_pr_and_comp_forms():
    t = parse(r"pr[0](1, \n:N. \r:N. add r (succ n))")
    assert isinstance(t, S.PR) and t.k == 0 and t.h == S.Lit(1)
    c = parse("comp[N, N, N] (succ, succ)")
    assert c == S.App(S.Comp(N, N, N), S.Pair(S.Succ(), S.Succ()))
    assert parse("iter[N -> N]") == S.Iter(nat_fn(1))


def test_unicode_lambda_and_comments():
    assert parse("λx:N. x  # identity") == parse(r"\x:N. x")


def test_program_inlines_definitions():
    prog = parse_program("def two : N = succ 1\nmain = add two two\n")
    assert prog.inline() == S.apps(S.Add(), S.App(S.Succ(), S.Lit(1)), S.App(S.Succ(), S.Lit(1)))


def test_error_reports_position_and_expected():
    with pytest.raises(ParseError) as e:
        parse("succ (add 1")
    assert (e.value.line, e.value.col) == (1, 12)
    assert ")" in e.value.expected


def test_error_on_second_line():
    with pytest.raises(ParseError) as e:
        parse_program("def f : N = 1\nmain = \\x N. x\n")
    assert e.value.line == 2
    assert ":" in e.value.expected


def test_zero_literal_rejected():
    with pytest.raises(ParseError, match="numerals start at 1"):
        parse("succ 0")


def test_printer_examples():
    assert S.print_canonical(parse("succ 1")) == "(succ 1)"
    assert S.print_canonical(parse(r"\x:N. x")) == r"(\x:N. x)"
    assert S.print_canonical(parse("fst (1, 2)")) == "(fst (1, 2))"


@given(programs())
def test_print_parse_roundtrip(t):
    assert parse(S.print_canonical(t)) == t
