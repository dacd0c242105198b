import json
import subprocess
import sys

import pytest

from intervalgb import cli
from intervalgb.parse import ParseError, parse_problem, render_problem

ROOT = __import__("pathlib").Path(__file__).resolve().parent.parent
PROBLEMS = sorted((ROOT / "problems").glob("*.*poly"))


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("path", PROBLEMS, ids=lambda p: p.name)
def test_render_round_trip(path):
    pf = parse_problem(path.read_text())
    text = render_problem(pf)
    again = parse_problem(text)
    assert render_problem(again) == text
    assert again.variables == pf.variables and again.parameters == pf.parameters
    assert again.boxes == pf.boxes and again.signs == pf.signs and again.eps == pf.eps
    assert [str(p.format()) for p in again.polys] == [str(p.format()) for p in pf.polys]


@pytest.mark.parametrize("text, line, col", [
    ("vars x;\npoly (3,1]*x;", 2, 6),
    ("vars x;\npoly [1,inf]*x;", 2, 6),
    ("vars x, x;", 1, 9),
    ("vars x;\npoly x + * 2;", 2, 10),
    ("vars x;\npoly x + y;", 2, 10),
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as info:
        parse_problem(text)
    assert (info.value.line, info.value.col) == (line, col)


def test_interval_needs_comma():
    pf = parse_problem("vars x;\npoly (1/2)*x + [1,2];")
    assert len(pf.polys) == 1


class TestCommands:
    def test_gb(self, capsys):
        code, out, _ = run(capsys, "gb", ROOT / "problems/triangular.poly")
        assert code == 0
        assert "z^15 - 3*z^14 + 5*z^12 - 3*z^10 - z^9 - z^8 + 4*z^6 - 6*z^4 + 4*z^2 - 1" in out

    def test_cgs_rows(self, capsys):
        code, out, _ = run(capsys, "cgs", ROOT / "problems/cyclic.ppoly", "--json")
        assert code == 0
        rows = json.loads(out)["branches"]
        assert len(rows) == 4
        assert rows[2] == {"E": ["a", "b"], "N": ["c"], "G": ["x^2*c - y", "y^2*c - x"]}

    def test_cgs_verify(self, capsys):
        code, out, _ = run(capsys, "cgs", ROOT / "problems/cyclic.ppoly", "--json",
                           "--verify", 30, "--seed", 4)
        assert code == 0 and json.loads(out)["violations"] == 0

    def test_igs(self, capsys):
        code, out, _ = run(capsys, "igs", ROOT / "problems/linear.ipoly", "--json", "--verify", 20)
        payload = json.loads(out)
        assert code == 0 and payload["violations"] == 0
        assert all(r["consistency"] == "certified" for r in payload["branches"])

    def test_solve_uni(self, capsys):
        code, out, _ = run(capsys, "solve-uni", ROOT / "problems/quadratic.ipoly")
        assert code == 0 and out.strip() == "[-1.30278, -0.366025] U [1, 3]"

    def test_idivides(self, capsys):
        code, out, _ = run(capsys, "idivides", ROOT / "problems/idivides.ipoly", "--json")
        payload = json.loads(out)
        assert code == 0 and payload["verdict"] is True

    def test_eps(self, capsys):
        code, out, _ = run(capsys, "eps-divides", ROOT / "problems/eps_divides.poly", "--json")
        assert code == 0 and json.loads(out)["eps"] == "2"

    def test_fuzzy(self, capsys):
        code, out, _ = run(capsys, "fuzzy", ROOT / "problems/fuzzy_solvable.ppoly", "--json")
        payload = json.loads(out)
        assert code == 0
        assert payload["branches"] == [{"E": [], "N": ["h - 1"], "G": ["1"], "consistency": "certified",
                                        "certificate": payload["branches"][0]["certificate"],
                                        "witness": payload["branches"][0]["witness"]}]
        assert payload["endpoint"]["status"] == "consistent"


@pytest.mark.parametrize("command, name", [
    ("gb", "triangular.poly"),
    ("cgs", "cyclic.ppoly"),
    ("igs", "linear.ipoly"),
    ("fuzzy", "fuzzy_unsolvable.ppoly"),
])
def test_json_and_text_agree(capsys, command, name):
    _, text, _ = run(capsys, command, ROOT / "problems" / name)
    _, js, _ = run(capsys, command, ROOT / "problems" / name, "--json")
    payload = json.loads(js)
    rows = payload.get("branches") or [{"G": payload["basis"]}]
    for row in rows:
        for key in ("E", "N", "G"):
            for p in row.get(key, []):
                assert p in text


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.ipoly"
    bad.write_text("vars x;\npoly (3,1]*x;\n")
    code, _, err = run(capsys, "solve-uni", bad)
    assert code == 1 and "line 2" in err


def test_missing_file_exit_code(tmp_path, capsys):
    code, _, _ = run(capsys, "gb", tmp_path / "nope.poly")
    assert code == 1


def test_validation_error_exit_code(capsys):
    code, _, err = run(capsys, "solve-uni", ROOT / "problems/idivides.ipoly")
    assert code == 1 and err


def test_internal_error_exit_code(capsys, monkeypatch):
    def boom(args, pf):
        raise RuntimeError("boom")
    monkeypatch.setitem(cli.COMMANDS, "gb", boom)
    code, _, err = run(capsys, "gb", ROOT / "problems/triangular.poly")
    assert code == 2 and "internal error" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "intervalgb", "solve-uni",
                          str(ROOT / "problems/quadratic.ipoly")],
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "[-1.30278, -0.366025] U [1, 3]"


def test_stdin(monkeypatch, capsys):
    import io
    monkeypatch.setattr(sys, "stdin", io.StringIO("vars x;\npoly [1,2]*x + [2,4];\n"))
    code, out, _ = run(capsys, "solve-uni", "-")
    assert code == 0 and out.strip() == "[-4, -1]"
