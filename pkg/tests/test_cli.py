import subprocess
import sys

import pytest

from conftest import PROGRAMS
from hof import machine, syntax as S
from hof.cli import RunConfig, cmd_fuzz, main

SUM5 = str(PROGRAMS / "sum5.hof")


def write(tmp_path, text):
    p = tmp_path / "prog.hof"
    p.write_text(text)
    return str(p)


def test_check_prints_type(capsys):
    assert main(["check", SUM5]) == 0
    assert capsys.readouterr().out.strip() == "N"
    assert main(["check", str(PROGRAMS / "iter_type.hof")]) == 0
    assert capsys.readouterr().out.strip() == "N -> (N -> N -> N) -> N -> N"


def test_check_type_error(tmp_path, capsys):
    assert main(["check", write(tmp_path, "main = succ add\n")]) == 1
    assert "TypeMismatch" in capsys.readouterr().err


def test_check_syntax_error(tmp_path, capsys):
    assert main(["check", write(tmp_path, "main = succ (\n")]) == 1
    assert "syntax error" in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert main(["check", str(tmp_path / "nope.hof")]) == 2


@pytest.mark.parametrize("engine", ["symbolic", "circuit"])
def test_eval(engine, capsys):
    assert main(["eval", SUM5, "--engine", engine]) == 0
    assert capsys.readouterr().out.strip() == "15"


def test_eval_trace_file(tmp_path):
    out = tmp_path / "t.txt"
    assert main(["eval", SUM5, "--trace", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("step 1 [PR-STEP]: ")
    assert lines[-1] == "normal: 15"


def test_eval_out_of_fuel():
    assert main(["eval", SUM5, "--fuel", "2"]) == 3


def test_eval_needs_numeral_main(capsys):
    assert main(["eval", str(PROGRAMS / "comp_succ.hof")]) == 1


def test_netlist_dot(capsys):
    assert main(["netlist", str(PROGRAMS / "lit.hof"), "--format", "dot"]) == 0
    assert capsys.readouterr().out.startswith("digraph")


def test_netlist_to_file(tmp_path):
    out = tmp_path / "n.txt"
    assert main(["netlist", SUM5, "-o", str(out)]) == 0
    assert out.read_text().startswith("hofnetlist 1\n")


def test_netlist_higher_order(capsys):
    assert main(["netlist", str(PROGRAMS / "iter_type.hof")]) == 1
    assert "NotFirstOrder" in capsys.readouterr().err


def test_diff(capsys):
    assert main(["diff", SUM5]) == 0
    assert capsys.readouterr().out.strip() == "symbolic=15 circuit=15"


class _Constant:
    def program(self):
        return S.Lit(1)


def test_fuzz_trivial_program(capsys):
    assert cmd_fuzz(1, 0, generator=_Constant()) == 0
    assert "1 programs, 0 disagreements" in capsys.readouterr().out


def test_fuzz_reports_counterexample(capsys):
    broken = lambda c: machine.run(c) + 1  # noqa: E731
    assert cmd_fuzz(3, 0, circuit_eval=broken) != 0
    out = capsys.readouterr().out
    assert "main = " in out and "3 disagreements" in out


def test_fuzz_seed_determinism(capsys):
    main(["fuzz", "--count", "20", "--seed", "7"])
    first = capsys.readouterr().out
    main(["fuzz", "--count", "20", "--seed", "7"])
    assert capsys.readouterr().out == first


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(fuel=0)
    with pytest.raises(ValueError):
        RunConfig(engine="quantum")


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "hof", "eval", SUM5], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "15"
