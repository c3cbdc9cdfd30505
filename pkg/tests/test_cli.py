from __future__ import annotations

import io
import subprocess
import sys

import pytest

from spinplanar import relations
from spinplanar.cli import run_command


def run(*argv: str) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_dims_table():
    code, out, _ = run("--n", "2", "dims")
    assert code == 0
    rows = [line.split("\t") for line in out.strip().splitlines()[1:]]
    assert rows == [[str(k), str(p), str(m)] for k, p, m in zip(range(5), (1, 2, 4, 8, 16), (2, 2, 4, 8, 16))]


def test_dims_respects_max_k():
    code, out, _ = run("--n", "3", "--max-k", "2", "dims")
    assert code == 0 and out.strip().splitlines()[-1] == "2\t9\t9"


def test_eval_expression():
    code, out, _ = run("--n", "2", "eval", "-e", "capR(id(1,+))")
    assert code == 0
    assert "sqrt(2) * colour 0 +" in out


def test_eval_scalar():
    code, out, _ = run("--n", "3", "eval", "-e", "tr(s(2))")
    assert code == 0 and out.splitlines()[-1] == "1/3"


def test_eval_diagram_text():
    code, out, _ = run("--n", "2", "eval", "-d", "colour 1 +;match: (1,2);labels: 1=2")
    assert code == 0 and out.splitlines()[-1] == "tau 1/2"


def test_normalize():
    code, out, _ = run("--n", "2", "normalize", "-e", "E(2,+,1)")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "basis coordinates in (2,+)"
    assert [ln.split("\t")[1] for ln in lines[1:]] == ["1/2"] * 4
    assert lines[2].split("\t")[2] == "w v1 w v2 w"


def test_gram_and_multtable():
    code, out, _ = run("--n", "2", "gram", "3", "-")
    assert code == 0 and out.strip().endswith("diagonal positive: yes")
    code, out, _ = run("--n", "2", "multtable", "2", "+")
    assert code == 0 and "e^{1}_{2} * e^{2}_{1} = e^{1}_{1}" in out


def test_usage_errors_exit_two():
    assert run("--n", "2", "bogus")[0] == 2
    assert run("dims")[0] == 2
    assert run("--n", "2", "--frobnicate", "dims")[0] == 2
    assert run("--n", "0", "dims")[0] == 2
    code, _, err = run("--n", "2", "eval", "-e", "s(1) +")
    assert code == 2 and "column 7" in err


def test_black_channel_suite_passes():
    code, out, _ = run("--n", "3", "verify", "black-channel")
    assert code == 0
    assert sum(line.startswith("PASS black-channel/class ") for line in out.splitlines()) == 6


def test_iso_check():
    code, out, _ = run("--n", "2", "iso-check", "3")
    assert code == 0 and out.strip().endswith("4/4 checks passed")


def test_mutated_black_channel_is_caught(monkeypatch):
    monkeypatch.setattr(relations, "black_channel_scale", lambda n: relations.Scalar(1, 0, n))
    code, out, _ = run("--n", "2", "verify", "all")
    assert code == 1
    assert "FAIL black-channel/" in out
    assert "first counterexample:" in out
    assert "relation black-channel" in out


def test_verify_all_is_deterministic():
    first = run("--n", "2", "verify", "all")
    second = run("--n", "2", "verify", "all")
    assert first[0] == 0
    assert first == second


@pytest.mark.parametrize("argv", [["--n", "2", "dims"]])
def test_module_entry_point(argv):
    proc = subprocess.run([sys.executable, "-m", "spinplanar", *argv], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("k\t")
