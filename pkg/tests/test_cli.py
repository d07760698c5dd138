import json

import pytest

from conftest import DATA, PRINTED_E
from toricdef import cli
from toricdef.family import FamilyError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(p)


def test_all_on_hexagon(capsys):
    code, out, _ = run(capsys, "all", "--input", str(DATA / "hexagon.json"))
    assert code == 0
    assert "t1: 1" in out
    for e in PRINTED_E:
        assert cli.fmt_vec(e) in out
    assert "dim W_k: [0, 1, 0]" in out
    assert "relation failures: 0" in out
    assert "special fiber equals f: true" in out
    assert "count: 20" in out
    code2, out2, _ = run(capsys, "all", "--input", str(DATA / "hexagon.json"))
    assert out == out2


def test_json_carries_the_same_content(capsys):
    path = str(DATA / "hexagon.json")
    _, text, _ = run(capsys, "toric-ideal", "--input", path)
    _, raw, _ = run(capsys, "toric-ideal", "--input", path, "--format", "json")
    report = json.loads(raw)["toric-ideal"]
    assert report["count"] == 20
    for row in report["f"]:
        assert row in text
    assert text.splitlines() == cli.render_text({"toric-ideal": report})


def test_t1_on_heptagon(capsys):
    code, out, _ = run(capsys, "t1", "--input", str(DATA / "heptagon.json"), "--format", "json")
    assert code == 0
    rep = json.loads(out)["t1"]
    assert rep["t1"] == rep["via V"] == rep["via E"] == 1
    assert set(rep["C rays"]) == {"(13, 0, 15, 10)", "(2, 15, 0, 5)"}


def test_hilbert_on_orthant(capsys):
    code, out, _ = run(capsys, "hilbert", "--input", str(DATA / "orthant.json"), "--format", "json")
    assert code == 0
    rep = json.loads(out)["hilbert"]
    assert sorted(rep["elements"]) == ["(0, 0, 1)", "(0, 1, 0)", "(1, 0, 0)"]


def test_eta_table_on_hexagon(capsys):
    _, out, _ = run(capsys, "eta-table", "--input", str(DATA / "hexagon.json"))
    assert "c=(-1, -1) | v=(2, 1) | lambda=(1, 1, 0, 0, 0, 0) | eta*=(1, 2, 0, 0) | eta0*=3" in out


def test_degrees_on_square(capsys):
    code, out, _ = run(capsys, "degrees", "--input", str(DATA / "square.json"), "--format", "json")
    assert code == 0
    rep = json.loads(out)["degrees"]
    assert rep["interesting degrees"] == ["(0, 0, 1)"]
    assert rep["dim V"] == rep["dim V companion"]


def test_degrees_reports_missing_companion(capsys):
    code, out, _ = run(capsys, "degrees", "--input", str(DATA / "heptagon.json"))
    assert code == 0
    assert "companion: not defined" in out


def test_missing_file(capsys):
    code, out, err = run(capsys, "t1", "--input", "/nonexistent/cone.json")
    assert code == 2 and not out and "input error" in err


@pytest.mark.parametrize("text", ["not json", '{"rays": "x"}'])
def test_malformed_input(capsys, tmp_path, text):
    code, _, err = run(capsys, "t1", "--input", write(tmp_path, "c.json", text))
    assert code == 2 and "input error" in err


def test_bad_degree_bound(capsys):
    code, _, err = run(capsys, "t1", "--input", str(DATA / "hexagon.json"), "--max-degree", "0")
    assert code == 2 and "positive" in err


@pytest.mark.parametrize(
    "data, message",
    [
        ({"rays": [[0, 0, 1], [2, 0, 1], [0, 2, 1]], "R": [0, 0, 1]}, "smooth"),
        ({"rays": [[0, 0, 1], [1, 0, 1], [0, 1, 1]], "R": [0, 0, 2]}, "primitive"),
        ({"rays": [[0, 0, 1], [1, 0, 1], [0, 1, 1]], "R": [0, 0, -1]}, "negative"),
    ],
)
def test_hypothesis_failures(capsys, tmp_path, data, message):
    code, _, err = run(capsys, "t1", "--input", write(tmp_path, "c.json", data))
    assert code == 3
    assert "hypothesis violated" in err and message in err


def test_internal_failure(capsys, monkeypatch):
    def boom(self, stage):
        raise FamilyError("broken")

    monkeypatch.setattr(cli.Pipeline, "report", boom)
    code, _, err = run(capsys, "lift", "--input", str(DATA / "hexagon.json"))
    assert code == 4 and "invariant failure" in err


def test_unknown_stage(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["bogus", "--input", "x"])
    assert exc.value.code == 2
