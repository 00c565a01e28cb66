import json
import shutil
import subprocess

import pytest

from mixbraid import cli
from mixbraid.diagram import close_algebraic, format_diagram, parse_diagram
from mixbraid.words import parse_word


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eq(capsys):
    assert run(capsys, "eq", "g=1 n=3; a1 s2", "g=1 n=3; s2 a1") == (0, "equal\n", "")
    code, out, _ = run(capsys, "eq", "g=1 n=2; a1 s1", "g=1 n=2; s1 a1", "--assert")
    assert code == 1 and out == "not equal\n"


def test_invariant(capsys):
    assert run(capsys, "invariant", "--functional", "homology", "g=2 n=1; a1 a2")[:2] == (0, "t1*t2\n")
    code, out, _ = run(capsys, "invariant", "g=2 n=2; a1 s1", "--winding", "--json")
    assert json.loads(out) == {"invariant": "t1", "winding": [[1, 0]]}


def test_search_pair(capsys):
    code, out, _ = run(capsys, "search", "g=2 n=1; a1 a2", "g=2 n=1; a2 a1", "--depth", "10", "--assert")
    assert code == 1
    assert "no certificate within budget" in out


def test_search_and_replay(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "g=2 n=2; a1 s1", "g=2 n=2; s1 a1", "--depth", "2", "--json")
    data = json.loads(out)
    assert code == 0 and data["status"] == "found"
    path = tmp_path / "cert.txt"
    path.write_text(data["certificate"])
    code, out, _ = run(capsys, "replay", str(path), "--assert")
    assert code == 0 and out.endswith("verified\n")


def test_word_commands(capsys):
    assert run(capsys, "parse", "g=1 n=2; a1 a1^-1 s1^2")[1] == "g=1 n=2; s1^2\n"
    assert run(capsys, "nf", "g=0 n=3; s1 s2 s1")[1] == "m=3|inf=1\n"
    assert run(capsys, "convert", "g=2 n=1; a1", "--to", "b")[1] == "g=2 n=1; b1 b2^-1\n"
    assert run(capsys, "convert", "g=3 n=1; b1", "--to", "a")[1] == "g=3 n=1; a1 a2 a3\n"
    assert run(capsys, "embed", "g=2 n=1; a1")[1] == "m=3; s2 s1 s1 s2^-1\n"
    assert run(capsys, "lmove", "g=1 n=2; s1", "--split", "1", "--index", "3")[1] == "g=1 n=3; s1 s2\n"
    assert run(capsys, "stab", "g=1 n=1; a1", "--split", "0", "--sign", "-1")[1] == "g=1 n=2; s1^-1 a1\n"
    assert run(capsys, "stab", "g=1 n=2; a1 s1", "--undo")[1] == "g=1 n=1; a1\n"
    assert run(capsys, "conj", "g=1 n=2; a1", "--index", "1")[1] == "g=1 n=2; s1^-1 a1 s1\n"


def test_diagram_pipeline(capsys, tmp_path):
    code, out, _ = run(capsys, "close", "g=1 n=1; a1")
    assert code == 0
    assert parse_diagram(out) == close_algebraic(parse_word("g=1 n=1; a1"))
    path = tmp_path / "d.mxd"
    path.write_text(out)
    code, out, _ = run(capsys, "braid", str(path))
    assert out == "layout=Fo; s1 s1\n"
    code, out, _ = run(capsys, "algebraize", out.strip())
    assert out == "g=1 n=1; a1\n"
    code, out, _ = run(capsys, "algebraize", "--diagram", str(path))
    assert out == "g=1 n=1; a1\n"
    code, out, _ = run(capsys, "braid", "--example", "handle_pair_under")
    assert out == "layout=FuF; s2 s2 s1 s1\n"
    code, out, _ = run(capsys, "close", "--geometric", "layout=FuF; s2 s2 s1 s1")
    assert out.startswith("g=2\ncap 2 u\n")


def test_axioms(capsys):
    code, out, _ = run(capsys, "axioms", "--samples", "50", "--assert")
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(capsys, "axioms", "--functional", "broken-lambda", "--samples", "50", "--assert")
    assert code == 1
    assert [line.endswith("FAIL") for line in out.splitlines()] == [False, False, False, True]


def test_errors(capsys):
    code, _, err = run(capsys, "parse", "g=2 n=3; s3")
    assert code == 1 and err.startswith("error:")
    with pytest.raises(SystemExit) as info:
        cli.main(["frobnicate"])
    assert info.value.code == 2
    code, _, err = run(capsys, "braid", "/nonexistent/file")
    assert code == 1


def test_output_is_stable(capsys):
    first = run(capsys, "search", "g=2 n=2; a1 s1", "g=2 n=2; s1 a1", "--depth", "2")
    second = run(capsys, "search", "g=2 n=2; a1 s1", "g=2 n=2; s1 a1", "--depth", "2")
    assert first == second


@pytest.mark.skipif(shutil.which("mixbraid") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["mixbraid", "eq", "g=1 n=3; a1 s2", "g=1 n=3; s2 a1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "equal\n"
    proc = subprocess.run(["mixbraid"], capture_output=True, text=True)
    assert proc.returncode == 2
