import json
import shutil
import subprocess

import pytest

from ckm.cli import main
from ckm.harness.generate import random_scene
from ckm.harness.scenario import emit_scenario, quadrilateral_scenario, tetragon_scenario


def _write(tmp_path, sc, name="s.json"):
    p = tmp_path / name
    p.write_text(emit_scenario(sc))
    return str(p)


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_inline(capsys):
    code, out, _ = _run(capsys, "classify", "--plane", '{"k": [9, 1, 1]}')
    assert code == 0 and json.loads(out)["kind"] == "minkowski"
    code, out, _ = _run(capsys, "classify", "--plane", '{"phi": [[1,0,0],[0,1,0],[0,0,-1]]}')
    assert json.loads(out)["kind"] == "hyperbolic"
    code, out, _ = _run(capsys, "classify", "--plane", '{"q": [0.5, 0, 0]}')
    assert json.loads(out)["q"] == ["0.5", "0.0", "0.0"]


def test_classify_bad_input(capsys):
    code, _, err = _run(capsys, "classify", "--plane", '{"k": [1, 1')
    assert code == 2 and "ParseError" in err
    code, _, err = _run(capsys, "classify", "--plane", '{"O": [1, 1, 1]}')
    assert code == 2 and "CircumcenterForbiddenPosition" in err


def test_miquel_anchor(tmp_path, capsys):
    path = _write(tmp_path, quadrilateral_scenario("elliptic", "q", (0, 0, 0), (1, 1, 1)))
    code, out, _ = _run(capsys, "miquel", "--scenario", path)
    doc = json.loads(out)
    assert code == 0 and doc["verified"]
    assert doc["point"] == ["1.0", "-1.0", "1.0"]


def test_miquel_affine_anchor(tmp_path, capsys):
    path = _write(tmp_path, quadrilateral_scenario("euclidean", "k", (1, 1, 1), (1, 2, 3)))
    code, out, _ = _run(capsys, "miquel", "--scenario", path)
    doc = json.loads(out)
    # (-12:3:-4) up to the canonical scale
    assert [float(x) for x in doc["point"]] == pytest.approx([1, -0.25, 1 / 3])
    assert len(doc["circular_points"]) == 2


def test_tetragon_anchor(tmp_path, capsys):
    path = _write(tmp_path, tetragon_scenario("elliptic", (0, 0, 0), (2, 2, -1)))
    code, out, _ = _run(capsys, "tetragon", "--scenario", path)
    doc = json.loads(out)
    assert code == 0
    assert doc["concyclic"]["on_circumcircle"] and doc["concyclic"]["on_diagonal"]
    assert float(doc["concyclic"]["delta_sum"]) == pytest.approx(1)


def test_tetragon_rejects_quadrilateral(tmp_path, capsys):
    path = _write(tmp_path, random_scene("elliptic", 1))
    code, _, err = _run(capsys, "tetragon", "--scenario", path)
    assert code == 2 and "SchemaError" in err


def test_verify_and_unknown_suite(capsys):
    code, out, err = _run(capsys, "verify", "--suite", "thm1", "--trials", "10", "--seed", "7")
    assert code == 0 and json.loads(out.splitlines()[-1])["failures"] == 0
    assert "trials in" in err and "trials in" not in out
    code, _, err = _run(capsys, "verify", "--suite", "nope", "--trials", "1")
    assert code == 2 and "UnknownSuite" in err


def test_figure_writes_svg(tmp_path, capsys):
    path = _write(tmp_path, random_scene("hyperbolic", 4))
    out = tmp_path / "f.svg"
    code, _, _ = _run(capsys, "figure", "--scenario", path, "--out", str(out))
    assert code == 0 and out.read_text().rstrip().endswith("</svg>")


def test_missing_file(capsys):
    code, _, err = _run(capsys, "miquel", "--scenario", "/nonexistent.json")
    assert code == 2


@pytest.mark.skipif(shutil.which("ckm") is None, reason="console script not installed")
def test_console_script(tmp_path):
    res = subprocess.run(["ckm", "classify", "--plane", '{"k": [4, 1, 1]}'], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["kind"] == "galilean"
