import json
from importlib import resources

import pytest

from cusp.cli import EXIT_GEOMETRY, EXIT_INPUT, EXIT_OK, EXIT_VERIFY, builtin_recipes, main


def test_dual_command(capsys):
    assert main(["dual", "6,9"]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "3,2,2,2,3,2,2,2,2,2,2"
    assert out[1] == "Q=21 Q'=3"


def test_dual_rejects_bad_cycles(capsys):
    assert main(["dual", "2,2"]) == EXIT_INPUT
    assert main(["dual", "6,x"]) == EXIT_INPUT


def test_charge_and_monodromy(capsys):
    assert main(["charge", "4,6,5"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "18"
    assert main(["monodromy", "4,6,5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "trace = 105" in out and "word = " in out


def test_bundled_recipes():
    assert {"figure6", "charge3_model1", "charge3_model2"} <= set(builtin_recipes())


def test_construct_and_verify(tmp_path, capsys):
    out = tmp_path / "fig6"
    assert main(["construct", "figure6", "--out", str(out)]) == EXIT_OK
    names = {p.name for p in out.iterdir()}
    assert {"base.json", "surface.json", "complex.json", "report.json",
            "surgery_points.json"} <= names
    report = json.loads((out / "report.json").read_text())
    assert report["ok"] and report["checks"]["charge_total"] == 24
    assert main(["verify", str(out / "complex.json")]) == EXIT_OK


def test_verify_detects_tampering(tmp_path, capsys):
    out = tmp_path / "m1"
    assert main(["construct", "charge3_model1", "--out", str(out)]) == EXIT_OK
    doc = json.loads((out / "complex.json").read_text())
    doc["edges"][0]["d"] += 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert main(["verify", str(bad)]) == EXIT_VERIFY


def test_verify_input_errors(tmp_path, capsys):
    assert main(["verify", str(tmp_path / "missing.json")]) == EXIT_INPUT
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"format": "cusp-complex/1", "faces": [], "edges": []}))
    assert main(["verify", str(empty)]) == EXIT_INPUT
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert main(["verify", str(junk)]) == EXIT_INPUT


def test_construct_geometric_failure(tmp_path, capsys):
    rec = {"toric_cycle": [0, 0, 0, 0], "lengths": [4, 4, 4, 4],
           "surgeries": [{"op": "blowup", "edge": 0, "size": 9}]}
    p = tmp_path / "r.json"
    p.write_text(json.dumps(rec))
    assert main(["construct", str(p), "--out", str(tmp_path / "o")]) == EXIT_GEOMETRY
    assert "EdgeTooShort" in capsys.readouterr().err


def test_construct_requires_recipe(capsys):
    assert main(["construct"]) == EXIT_INPUT
    assert main(["construct", "no_such_recipe"]) == EXIT_INPUT


def test_config_wrapper(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"recipe": "charge3_model2.json", "options": {}}))
    src = resources.files("cusp") / "recipes" / "charge3_model2.json"
    (tmp_path / "charge3_model2.json").write_text(src.read_text())
    assert main(["construct", "--recipe", str(cfg), "--out", str(tmp_path / "o")]) == EXIT_OK


def test_render_svg(tmp_path, capsys):
    assert main(["render", "figure6", "--out", str(tmp_path), "--grid"]) == EXIT_OK
    svg = (tmp_path / "base.svg").read_text()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert (tmp_path / "surface.svg").exists()
