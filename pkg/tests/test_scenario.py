import copy
import json
from importlib import resources
from pathlib import Path

import numpy as np
import pytest

from loewnerpencil import cases
from loewnerpencil import scenario as sc

DOCS_SCHEMA = Path(__file__).resolve().parents[1] / "docs" / "scenario-schema.json"


def _bundled():
    root = resources.files("loewnerpencil") / "scenarios"
    return sorted(p for p in root.iterdir() if p.name.endswith(".json"))


def _small_doc(**extra):
    doc = {
        "name": "small",
        "system": {"type": "pole_residue", "poles": [-2.1, -0.1], "residues": [0.5, 0.5]},
        "points": {"mu": [[0, 1], [0, -1]], "lambda": [-1.0, 2.0]},
        "analyses": ["loewner", "rho", "eta", "pseudospectra", "montecarlo", "svbounds"],
        "noise": {"sigma": 1e-3, "trials": 20, "seed": 9},
        "pseudospectra": {"region": [-3, 1, -1, 1], "nx": 12, "ny": 9, "levels": [0.01], "slope_directions": 5},
    }
    doc.update(extra)
    return doc


def _write(tmp_path, doc, name="s.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def test_docs_schema_is_in_sync():
    assert json.loads(DOCS_SCHEMA.read_text(encoding="utf-8")) == json.loads(json.dumps(sc.SCHEMA))


@pytest.mark.parametrize("path", _bundled(), ids=lambda p: p.name)
def test_bundled_scenarios_validate(path):
    doc = sc.load_scenario(path)
    assert doc["name"] == path.name[:-5]


@pytest.mark.parametrize(
    "mutate, where",
    [
        (lambda d: d["system"].update(poles="x"), "system.poles"),
        (lambda d: d["points"].update(mu=[[1, 2, 3]]), "points.mu[0]"),
        (lambda d: d["noise"].update(trials=0), "noise.trials"),
        (lambda d: d["pseudospectra"].update(region=[0, 1]), "pseudospectra.region"),
        (lambda d: d.update(analyses=["loewner", "spectra"]), "analyses[1]"),
        (lambda d: d.pop("noise"), "<root>"),
        (lambda d: d.update(extra=1), "<root>"),
    ],
)
def test_validation_names_the_field(mutate, where):
    doc = _small_doc()
    mutate(doc)
    with pytest.raises(sc.ScenarioError) as info:
        sc.validate_scenario(doc)
    assert str(info.value).startswith(f"scenario field {where}:")


def test_invalid_json_reports_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"name": "x",\n  "system": }', encoding="utf-8")
    with pytest.raises(sc.ScenarioError, match="line 2"):
        sc.load_scenario(path)


def test_system_types_build():
    pr = sc.build_system({"type": "pole_residue", "poles": [-1, [-2, 1]], "residues": [1, 2]})
    assert pr.transfer(0.5)[0, 0] == pytest.approx(1 / 1.5 + 2 / (0.5 + 2 - 1j))
    diag = sc.build_system({"type": "diagonal", "poles": [-1, -2], "b": [[1], [1]], "c": [[1], [2]]})
    assert np.allclose(diag.transfer(1.0), [[0.5 + 2 / 3]])
    poly = sc.build_system({"type": "polynomial", "coeffs": [1, 2]})
    assert poly.transfer(3.0)[0, 0] == pytest.approx(7.0)
    ss = sc.build_system({"type": "state_space", "C": [[1]], "E": [[1]], "A": [[-1]], "B": [[1]]})
    assert ss.transfer(1.0)[0, 0] == pytest.approx(0.5)


def test_context_falls_back_to_pencil_triples_for_state_space():
    ctx = sc.build_context(cases.two_pole_state_space(), *cases.two_pole_points(1))
    ref = sc.build_context(cases.two_pole_system(), *cases.two_pole_points(1))
    idx = np.argsort(ctx.poles().real)
    assert np.allclose(ctx.poles()[idx], np.sort(ref.poles().real))
    assert np.allclose(ctx.rho().rho[idx], ref.rho().rho[np.argsort(ref.poles().real)], rtol=1e-8)


def test_run_is_byte_identical_across_runs(tmp_path):
    path = _write(tmp_path, _small_doc())
    first = json.loads(sc.run_scenario(path, tmp_path / "a").read_text())
    second = json.loads(sc.run_scenario(path, tmp_path / "b").read_text())
    assert first == second
    assert first["failures"] == []
    files = {a["file"] for a in first["artifacts"]}
    assert {"loewner.csv", "rho.csv", "eta.csv", "montecarlo.csv", "pseudospectra.csv"} <= files
    for a in first["artifacts"]:
        assert (tmp_path / "a" / a["file"]).read_bytes() == (tmp_path / "b" / a["file"]).read_bytes()


def test_json_format_outputs(tmp_path):
    doc = _small_doc(analyses=["loewner", "rho", "eta"], output={"format": "json"})
    out = tmp_path / "o"
    index = json.loads(sc.run_scenario(_write(tmp_path, doc), out).read_text())
    assert [a["file"] for a in index["artifacts"]] == ["loewner.json", "rho.json", "eta.json"]
    rho = json.loads((out / "rho.json").read_text())
    assert len(rho["rho"]) == 2


def test_empty_analysis_list_writes_empty_index(tmp_path):
    doc = {"name": "empty", "system": _small_doc()["system"], "analyses": []}
    index = json.loads(sc.run_scenario(_write(tmp_path, doc), tmp_path / "o").read_text())
    assert index == {"scenario": "empty", "format": "csv", "artifacts": [], "failures": []}


def test_failing_analysis_is_recorded_and_others_run(tmp_path):
    # a rectangular pencil has no pseudospectra; the other analyses still run
    doc = _small_doc(analyses=["loewner", "pseudospectra", "rho"])
    doc["points"]["lambda"] = [-1.0, 2.0, 3.0]
    index = json.loads(sc.run_scenario(_write(tmp_path, doc), tmp_path / "o").read_text())
    assert [f["analysis"] for f in index["failures"]] == ["pseudospectra"]
    assert "square" in index["failures"][0]["error"]
    assert [a["analysis"] for a in index["artifacts"]] == ["loewner", "rho"]


def test_bundled_scenario_runs(tmp_path):
    path = next(p for p in _bundled() if p.name == "example42.json")
    index = json.loads(sc.run_scenario(path, tmp_path).read_text())
    assert index["failures"] == []
    assert len(index["artifacts"]) == 3


def test_svbounds_without_separation_leaves_bound_empty():
    ctx = sc.build_context(cases.ten_pole_system(), *cases.ten_pole_points(1))
    curves = dict((name, bound) for name, _, bound in sc.svd_decay(ctx, ["cauchy_mu_lambda"]))
    assert curves["cauchy_mu_lambda"] is None
    ctx2 = sc.build_context(cases.ten_pole_system(), *cases.ten_pole_points(2))
    name, sigma, bound = sc.svd_decay(ctx2, ["cauchy_mu_lambda"])[0]
    assert np.all(sigma <= bound + 1e-13 * sigma[0])


def test_distance_scan_analysis(tmp_path):
    doc = copy.deepcopy(_small_doc(analyses=["distance_scan"], distance_scan={"shifts": [0, 10, 100]}))
    doc["points"] = {"mu": [1.0, 3.0], "lambda": [0.0, 2.0]}
    index = json.loads(sc.run_scenario(_write(tmp_path, doc), tmp_path / "o").read_text())
    assert index["failures"] == [] and index["artifacts"]
