import argparse
import json
import subprocess
import sys

import numpy as np
import pytest

from loewnerpencil import cases
from loewnerpencil.artifacts import quadruple_from_json
from loewnerpencil.cli import main, parse_complex, parse_complex_list, parse_region
from loewnerpencil.loewner import build_loewner, sample_tangential


@pytest.mark.parametrize(
    "text, value",
    [("1", 1), ("-2.5", -2.5), ("1i", 1j), ("-3i", -3j), ("1+2i", 1 + 2j), ("1e-3-4.5i", 1e-3 - 4.5j), (" 2 + 1i ", 2 + 1j)],
)
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("text", ["", "1j", "abc", "1+2", "1++2i", "i1", "nan", "inf"])
def test_parse_complex_rejects(text):
    with pytest.raises(argparse.ArgumentTypeError):
        parse_complex(text)


def test_parse_lists_and_region():
    assert np.array_equal(parse_complex_list("1,2i,-1-1i"), [1, 2j, -1 - 1j])
    with pytest.raises(argparse.ArgumentTypeError):
        parse_complex_list("1,,2")
    assert parse_region("-3,1,-1,1") == (-3.0, 1.0, -1.0, 1.0)
    with pytest.raises(argparse.ArgumentTypeError):
        parse_region("0,1,2")


def test_sensitivity_table(capsys):
    assert main(["sensitivity", "--system", "example1", "--setting", "1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].split() == ["pole", "rho", "zeta", "bound", "eta"]
    assert out[1].split()[1] == "2.202e+02"
    assert out[3].startswith("cond_left")


def test_build_one_point_round_trip(tmp_path):
    out = tmp_path / "q.json"
    assert main(["build", "--system", "example1", "--mu", "1i", "--lambda", "0", "--format", "json", "--out", str(out)]) == 0
    quad = quadruple_from_json(out.read_text())
    assert quad.shape == (1, 1)
    ref = build_loewner(sample_tangential(cases.two_pole_system(), [1j], [0.0]))
    assert np.array_equal(quad.l, ref.l) and np.array_equal(quad.ls, ref.ls)


def test_bounds_csv_columns(tmp_path):
    assert main(["bounds", "--example", "2", "--setting", "2", "--matrices", "cauchy_mu_lambda", "--out", str(tmp_path)]) == 0
    rows = (tmp_path / "svbounds.csv").read_text().splitlines()
    assert rows[0] == "matrix,index,sigma_actual,sigma_bound"
    assert len(rows) == 11
    for r in rows[1:]:
        _, _, actual, bound = r.split(",")
        assert float(actual) <= float(bound)


def test_bounds_without_separation_leaves_column_empty(capsys):
    assert main(["bounds", "--example", "2", "--setting", "1", "--matrices", "cauchy_mu_lambda"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "matrix,index,sigma_actual,sigma_bound"
    assert len(rows) == 11 and all(r.endswith(",") for r in rows[1:])


def test_pseudospectra_and_montecarlo_to_directory(tmp_path):
    args = ["--system", "example1", "--setting", "1"]
    assert main(["pseudospectra", *args, "--region=-3,1,-1,1", "--nx", "6", "--ny", "5", "--directions", "3", "--out", str(tmp_path / "p")]) == 0
    assert (tmp_path / "p" / "pseudospectra.csv").exists()
    assert main(["montecarlo", *args, "--sigma", "1e-3", "--trials", "5", "--seed", "1", "--out", str(tmp_path / "m")]) == 0
    assert any((tmp_path / "m").iterdir())


def test_exit_codes(tmp_path, capsys):
    assert main(["sensitivity", "--system", "example1", "--mu", "1,2", "--lambda", "2,3"]) == 3
    assert main(["sensitivity", "--system", "nonexistent"]) == 3
    assert main(["build", "--system", "example1", "--mu=-0.1", "--lambda", "0"]) == 3
    with pytest.raises(SystemExit) as info:
        main(["sensitivity", "--system", "example1", "--mu", "1j"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["bounds", "--example", "2", "--matrices", "hankel"])
    assert info.value.code == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "x"}')
    assert main(["scenario", "run", str(bad)]) == 3


def test_scenario_run_exit_code_reflects_failures(tmp_path, capsys):
    doc = {
        "name": "rect",
        "system": {"type": "pole_residue", "poles": [-2.1, -0.1], "residues": [0.5, 0.5]},
        "points": {"mu": [1.0, 2.0], "lambda": [0.0, 0.5, 1.5]},
        "analyses": ["loewner", "pseudospectra"],
        "pseudospectra": {"region": [-3, 1, -1, 1], "nx": 4, "ny": 4},
    }
    path = tmp_path / "rect.json"
    path.write_text(json.dumps(doc))
    assert main(["scenario", "run", str(path), "--out", str(tmp_path / "o")]) == 4
    doc["analyses"] = ["loewner"]
    path.write_text(json.dumps(doc))
    assert main(["scenario", "run", str(path), "--out", str(tmp_path / "o2")]) == 0


def test_system_file_argument(tmp_path, capsys):
    path = tmp_path / "sys.json"
    path.write_text(json.dumps({"type": "pole_residue", "poles": [-1.0, -3.0], "residues": [1.0, 2.0]}))
    assert main(["sensitivity", "--system", str(path), "--mu", "1,2", "--lambda=-0.5,-2"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 5


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "loewnerpencil.cli", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "scenario" in res.stdout
