"""Scenario files: validation and the artifact runner.

A scenario is a JSON document naming a system, interpolation points and a
list of analyses. :func:`run_scenario` writes one artifact per analysis
(plus auxiliary files for some), then an ``index.json`` listing each file
with its SHA-256 checksum and any analysis that failed. Outputs contain no
timestamps, so identical inputs give identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

import jsonschema
import numpy as np

from . import artifacts as art
from . import numerics as nx
from . import pseudospectra as ps
from . import sensitivity as se
from . import svbounds as sb
from .loewner import (
    HermiteDataSet,
    LoewnerQuadruple,
    build_hermite_loewner,
    build_loewner,
    cauchy,
    sample_hermite,
    sample_tangential,
)
from .systems import MimoPoleResidue, PolynomialTF, SisoPoleResidue, StateSpaceSystem, SystemModel

__all__ = [
    "SCHEMA",
    "ANALYSES",
    "ScenarioError",
    "Context",
    "load_scenario",
    "validate_scenario",
    "build_system",
    "build_context",
    "run_scenario",
]

ANALYSES = ("loewner", "rho", "eta", "pseudospectra", "montecarlo", "svbounds", "distance_scan")
SVD_MATRICES = ("cauchy_mu_lambda", "loewner", "cauchy_mu_pi", "cauchy_lambda_pi")

_NUM = {"type": "number"}
_CNUM = {
    "oneOf": [
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    ]
}
_CVEC = {"type": "array", "items": _CNUM, "minItems": 1}
_CMAT = {"type": "array", "items": _CVEC, "minItems": 1}


def _system_branch(kind: str, required: list[str], props: dict) -> dict:
    return {
        "if": {"properties": {"type": {"const": kind}}},
        "then": {
            "required": required,
            "properties": {"type": {"const": kind}, **props},
            "additionalProperties": False,
        },
    }


SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "loewnerpencil scenario",
    "type": "object",
    "required": ["name", "system", "analyses"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string", "minLength": 1, "pattern": "^[A-Za-z0-9_.-]+$"},
        "description": {"type": "string"},
        "system": {
            "type": "object",
            "required": ["type"],
            "properties": {"type": {"enum": ["pole_residue", "state_space", "diagonal", "polynomial"]}},
            "allOf": [
                _system_branch("pole_residue", ["poles", "residues"], {"poles": _CVEC, "residues": _CVEC}),
                _system_branch("state_space", ["C", "E", "A", "B"], {"C": _CMAT, "E": _CMAT, "A": _CMAT, "B": _CMAT}),
                _system_branch("diagonal", ["poles", "b", "c"], {"poles": _CVEC, "b": _CMAT, "c": _CMAT}),
                _system_branch("polynomial", ["coeffs"], {"coeffs": _CVEC}),
            ],
        },
        "points": {
            "type": "object",
            "required": ["mu"],
            "additionalProperties": False,
            "properties": {
                "mu": _CVEC,
                "lambda": _CVEC,
                "hermite": {"type": "boolean"},
                "left_dirs": _CMAT,
                "right_dirs": _CMAT,
            },
        },
        "analyses": {"type": "array", "items": {"enum": list(ANALYSES)}, "uniqueItems": True},
        "noise": {
            "type": "object",
            "required": ["sigma", "trials", "seed"],
            "additionalProperties": False,
            "properties": {
                "sigma": {"type": "number", "minimum": 0},
                "trials": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0},
            },
        },
        "pseudospectra": {
            "type": "object",
            "required": ["region"],
            "additionalProperties": False,
            "properties": {
                "region": {"type": "array", "items": _NUM, "minItems": 4, "maxItems": 4},
                "nx": {"type": "integer", "minimum": 2},
                "ny": {"type": "integer", "minimum": 2},
                "nu": {"type": ["number", "null"], "minimum": 0},
                "delta": {"type": ["number", "null"], "minimum": 0},
                "levels": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
                "slope_directions": {"type": "integer", "minimum": 0},
                "slope_seed": {"type": "integer", "minimum": 0},
            },
        },
        "distance_scan": {
            "type": "object",
            "required": ["shifts"],
            "additionalProperties": False,
            "properties": {"shifts": {"type": "array", "items": _NUM, "minItems": 2}},
        },
        "svbounds": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"matrices": {"type": "array", "items": {"enum": list(SVD_MATRICES)}, "minItems": 1}},
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"directory": {"type": "string"}, "format": {"enum": ["csv", "json"]}},
        },
    },
    "allOf": [
        {
            "if": {"properties": {"analyses": {"contains": {"const": name}}}, "required": ["analyses"]},
            "then": {"required": [block]},
        }
        for name, block in (
            ("montecarlo", "noise"),
            ("pseudospectra", "pseudospectra"),
            ("distance_scan", "distance_scan"),
        )
    ]
    + [
        {
            "if": {
                "properties": {"analyses": {"contains": {"enum": [a for a in ANALYSES]}}},
                "required": ["analyses"],
            },
            "then": {"required": ["points"]},
        }
    ],
}


class ScenarioError(ValueError):
    """Scenario file is malformed or inconsistent."""


def _where(path) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<root>"


def validate_scenario(doc: Any) -> dict:
    """Validate against :data:`SCHEMA`; the error message names the offending field."""
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise ScenarioError(f"scenario field {_where(err.absolute_path)}: {err.message}")
    return doc


def load_scenario(path: str | Path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return validate_scenario(doc)


def _cvec(x) -> np.ndarray:
    return np.array([art.decode_complex(z) for z in x], dtype=complex)


def build_system(spec: dict) -> SystemModel:
    kind = spec["type"]
    if kind == "pole_residue":
        return SisoPoleResidue(_cvec(spec["poles"]), _cvec(spec["residues"]))
    if kind == "state_space":
        return StateSpaceSystem(*(art.decode_matrix(spec[k]) for k in ("C", "E", "A", "B")))
    if kind == "diagonal":
        # b and c list one vector per pole.
        return MimoPoleResidue(_cvec(spec["poles"]), art.decode_matrix(spec["c"]).T, art.decode_matrix(spec["b"]).T)
    if kind == "polynomial":
        return PolynomialTF(_cvec(spec["coeffs"]))
    raise ScenarioError(f"unknown system type {kind!r}")


@dataclass
class Context:
    """Everything the analyses share: system, data, quadruple and eigen-triples."""

    system: SystemModel
    data: Any
    quad: LoewnerQuadruple
    _triples: list | None = None

    @property
    def hermite(self) -> bool:
        return isinstance(self.data, HermiteDataSet)

    @property
    def pole_residue(self) -> bool:
        return isinstance(self.system, SisoPoleResidue)

    def triples(self) -> list[se.EigenTriple]:
        if self._triples is None:
            if self.pole_residue:
                self._triples = se.eigen_triples(self.system, self.data)
            else:
                self._triples = se.eigen_triples_from_pencil(self.quad.ls, self.quad.l)
        return self._triples

    def poles(self) -> np.ndarray:
        return np.array([t.value for t in self.triples()])

    def rho(self) -> se.UnstructuredReport:
        if self.pole_residue:
            return se.unstructured_report(self.system, self.data)
        return se.rho_unstructured(self.triples(), self.quad.l, self.quad.ls)

    def eta(self, sigmas=()) -> se.StructuredReport:
        if self.pole_residue:
            return se.structured_report(self.system, self.data, sigmas)
        tr = self.triples()
        if self.hermite:
            a, b = se.structured_T(self.data, tr)
            return se.eta_report(
                {"value": a, "derivative": b}, {"value": self.data.values, "derivative": self.data.derivatives}, self.poles(), sigmas
            )
        s_mu, s_lam = se.structured_S(self.data, tr)
        return se.eta_report(
            {"mu": s_mu, "lambda": s_lam},
            {"mu": self.data.left_vals[:, 0], "lambda": self.data.right_vals[:, 0]},
            self.poles(),
            sigmas,
        )


def build_context(system: SystemModel, mu, lam=None, hermite: bool = False, left_dirs=None, right_dirs=None) -> Context:
    if hermite:
        data = sample_hermite(system, mu)
        quad = build_hermite_loewner(data)
    else:
        if lam is None:
            raise ScenarioError("points.lambda is required unless points.hermite is true")
        data = sample_tangential(system, mu, lam, left_dirs, right_dirs)
        quad = build_loewner(data)
    return Context(system, data, quad)


def _context_from(doc: dict) -> Context:
    pts = doc["points"]
    sys = build_system(doc["system"])
    lam = _cvec(pts["lambda"]) if "lambda" in pts else None
    ld = art.decode_matrix(pts["left_dirs"]) if "left_dirs" in pts else None
    rd = art.decode_matrix(pts["right_dirs"]) if "right_dirs" in pts else None
    return build_context(sys, _cvec(pts["mu"]), lam, bool(pts.get("hermite", False)), ld, rd)


# ---------------------------------------------------------------- analyses
# Each returns a list of (file stem, text) pairs; the extension follows the format.


def _c(z) -> list[float]:
    return art.encode_complex(z)


def analysis_loewner(ctx: Context, doc: dict, fmt: str) -> list[tuple[str, str]]:
    text = art.quadruple_to_json(ctx.quad) if fmt == "json" else art.quadruple_to_csv(ctx.quad)
    return [("loewner", text)]


def analysis_rho(ctx: Context, doc: dict, fmt: str) -> list[tuple[str, str]]:
    r = ctx.rho()
    if fmt == "json":
        out = {
            "poles": [_c(z) for z in r.poles],
            "rho": r.rho.tolist(),
            "zeta": r.zeta.tolist(),
            "bound_per_pole": r.bound_per_pole.tolist(),
            "rho_l2": r.rho_l2,
            "rho_l1": r.rho_l1,
            "bound_l2": r.bound_l2,
            "bound_l1": r.bound_l1,
            "cond_left": r.cond_left,
            "cond_right": r.cond_right,
            "weights": list(r.weights),
        }
        return [("rho", json.dumps(out, indent=1) + "\n")]
    header = ["pole_re", "pole_im", "rho", "zeta", "bound", "cond_left", "cond_right", "rho_l2", "bound_l2", "bound_l1"]
    rows = [
        [float(z.real), float(z.imag), float(r.rho[i]), float(r.zeta[i]), float(r.bound_per_pole[i]),
         r.cond_left, r.cond_right, r.rho_l2, r.bound_l2, r.bound_l1]
        for i, z in enumerate(r.poles)
    ]
    return [("rho", art.table(header, rows))]


def analysis_eta(ctx: Context, doc: dict, fmt: str) -> list[tuple[str, str]]:
    sigmas = (doc["noise"]["sigma"],) if "noise" in doc else ()
    e = ctx.eta(sigmas)
    if fmt == "json":
        out = {
            "poles": [_c(z) for z in e.poles],
            "eta": e.eta.tolist(),
            "blocks": {k: v.tolist() for k, v in e.blocks.items()},
            "gaussian_std": {repr(s): v.tolist() for s, v in e.gaussian_std.items()},
        }
        return [("eta", json.dumps(out, indent=1) + "\n")]
    rows = []
    for i, z in enumerate(e.poles):
        rows.append(["eta", "", i, float(z.real), float(z.imag), float(e.eta[i])])
        for s, v in e.gaussian_std.items():
            rows.append([f"std_sigma={art.fmt(s)}", "", i, float(z.real), float(z.imag), float(v[i])])
    for name, m in e.blocks.items():
        for j in range(m.shape[0]):
            for i, z in enumerate(e.poles):
                rows.append([name, j, i, float(z.real), float(z.imag), float(m[j, i])])
    return [("eta", art.table(["block", "measurement", "pole_index", "pole_re", "pole_im", "value"], rows))]


def analysis_pseudospectra(ctx: Context, doc: dict, fmt: str) -> list[tuple[str, str]]:
    cfg = doc["pseudospectra"]
    q = ctx.quad
    if q.shape[0] != q.shape[1]:
        raise ScenarioError("pseudospectra need a square pencil (q = k)")
    grid = ps.grid_epsilon(
        q.ls, q.l, tuple(cfg["region"]), (cfg.get("nx", ps.DEFAULT_RESOLUTION), cfg.get("ny", ps.DEFAULT_RESOLUTION)),
        cfg.get("nu"), cfg.get("delta"),
    )
    out = [("pseudospectra", ps.grid_to_json(grid) if fmt == "json" else ps.grid_to_csv(grid))]
    if cfg.get("levels"):
        out.append(("pseudospectra_contours", ps.contours_to_csv(ps.contour_lines(grid, cfg["levels"]))))
    ndir = cfg.get("slope_directions", 100)
    if ndir:
        rho = ctx.rho()
        rows = []
        for i, z in enumerate(ctx.poles()):
            est = ps.slope_estimate(q.ls, q.l, z, directions=ndir, seed=cfg.get("slope_seed", 0), nu=cfg.get("nu"), delta=cfg.get("delta"))
            rows.append([i, float(z.real), float(z.imag), est.xi, float(rho.rho[i]), str(bool(np.all(est.slopes <= rho.rho[i])))])
        out.append(("pseudospectra_slopes", art.table(["pole_index", "pole_re", "pole_im", "xi", "rho", "xi_le_rho"], rows)))
    return out


def analysis_montecarlo(ctx: Context, doc: dict, fmt: str) -> list[tuple[str, str]]:
    nz = doc["noise"]
    ref = ctx.poles()
    pred = ctx.eta().eta * nz["sigma"]
    mc = se.monte_carlo_poles(ctx.data, nz["sigma"], nz["trials"], nz["seed"], reference=ref, predicted_std=pred)
    if fmt == "json":
        out = {
            "sigma": mc.sigma,
            "seed": mc.seed,
            "trials": int(mc.samples.shape[0]),
            "failed": int(mc.failed.sum()),
            "outliers": int(mc.outliers.sum()),
            "reference": [_c(z) for z in ref],
            "empirical_std": mc.std.tolist(),
            "predicted_std": pred.tolist(),
            "samples": [[_c(z) for z in row] for row in mc.samples],
        }
        return [("montecarlo", json.dumps(out, indent=1) + "\n")]
    rows = []
    for t in range(mc.samples.shape[0]):
        for i in range(ref.size):
            z = mc.samples[t, i]
            rows.append([t, i, float(z.real), float(z.imag), int(mc.outliers[t]), int(mc.failed[t])])
    return [("montecarlo", art.table(["trial", "pole_index", "re", "im", "outlier", "failed"], rows))]


def _svd_targets(ctx: Context, names) -> list[tuple[str, np.ndarray, Any, Any, str]]:
    data = ctx.data
    if ctx.hermite:
        raise ScenarioError("singular-value bounds need distinct left and right points")
    mu, lam = data.mu, data.lam
    poles = ctx.poles()
    table_ = {
        "cauchy_mu_lambda": (lambda: cauchy(mu, lam), mu, lam, "cauchy"),
        "loewner": (lambda: ctx.quad.l, mu, lam, "loewner"),
        "cauchy_mu_pi": (lambda: cauchy(mu, poles), mu, poles, "cauchy"),
        "cauchy_lambda_pi": (lambda: cauchy(lam, poles), lam, poles, "cauchy"),
    }
    return [(n, table_[n][0](), table_[n][1], table_[n][2], table_[n][3]) for n in names]


def svd_decay(ctx: Context, names=SVD_MATRICES) -> list[tuple[str, np.ndarray, np.ndarray | None]]:
    """``(matrix name, singular values, bound curve or None)``; the bound is None when intervals overlap."""
    out = []
    for name, m, x, y, kind in _svd_targets(ctx, names):
        s = nx.svd(m).singular_values
        try:
            geom = sb.IntervalPairGeometry.from_nodes(x, y)
            bound = sb.decay_curve(geom, s, kind)
        except ValueError:
            bound = None
        out.append((name, s, bound))
    return out


def analysis_svbounds(ctx: Context, doc: dict, fmt: str) -> list[tuple[str, str]]:
    names = doc.get("svbounds", {}).get("matrices", list(SVD_MATRICES))
    res = svd_decay(ctx, names)
    if fmt == "json":
        out = {
            n: {"sigma_actual": s.tolist(), "sigma_bound": None if b is None else b.tolist()} for n, s, b in res
        }
        return [("svbounds", json.dumps(out, indent=1) + "\n")]
    rows = []
    for n, s, b in res:
        for i, x in enumerate(s):
            rows.append([n, i + 1, float(x), "" if b is None else float(b[i])])
    return [("svbounds", art.table(["matrix", "index", "sigma_actual", "sigma_bound"], rows))]


def analysis_distance_scan(ctx: Context, doc: dict, fmt: str) -> list[tuple[str, str]]:
    if not ctx.pole_residue or ctx.hermite:
        raise ScenarioError("distance_scan needs a pole_residue system with distinct points")
    scan = se.distance_scaling(ctx.system, ctx.data.mu, ctx.data.lam, doc["distance_scan"]["shifts"])
    if fmt == "json":
        out = {
            "shifts": scan.shifts.tolist(),
            "distance": scan.distance.tolist(),
            "poles": [_c(z) for z in scan.poles],
            "rho": scan.rho.tolist(),
            "eta": scan.eta.tolist(),
            "rho_slope": scan.rho_slope.tolist(),
            "eta_slope": scan.eta_slope.tolist(),
        }
        return [("distance_scan", json.dumps(out, indent=1) + "\n")]
    rows = []
    for s in range(scan.shifts.size):
        for i in range(scan.poles.size):
            rows.append([float(scan.shifts[s]), float(scan.distance[s]), i, float(scan.rho[s, i]), float(scan.eta[s, i]),
                         float(scan.rho_slope[i]), float(scan.eta_slope[i])])
    return [("distance_scan", art.table(["shift", "distance", "pole_index", "rho", "eta", "rho_slope", "eta_slope"], rows))]


RUNNERS: dict[str, Callable[[Context, dict, str], list[tuple[str, str]]]] = {
    "loewner": analysis_loewner,
    "rho": analysis_rho,
    "eta": analysis_eta,
    "pseudospectra": analysis_pseudospectra,
    "montecarlo": analysis_montecarlo,
    "svbounds": analysis_svbounds,
    "distance_scan": analysis_distance_scan,
}


def run_scenario(path: str | Path, out_dir: str | Path | None = None) -> Path:
    """Run every analysis of the scenario at ``path``; returns the index file path.

    A failing analysis is recorded in the index and does not stop the others.
    Setting-up failures (system or data construction) raise.
    """
    doc = load_scenario(path)
    output = doc.get("output", {})
    fmt = output.get("format", "csv")
    target = Path(out_dir) if out_dir is not None else Path(output.get("directory", f"out/{doc['name']}"))
    target.mkdir(parents=True, exist_ok=True)
    ctx = _context_from(doc) if doc["analyses"] else None
    entries, failures = [], []
    for name in doc["analyses"]:
        try:
            produced = RUNNERS[name](ctx, doc, fmt)
        except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
            failures.append({"analysis": name, "error": f"{type(exc).__name__}: {exc}"})
            continue
        for stem, text in produced:
            ext = "json" if text.lstrip().startswith(("{", "[")) else "csv"
            fpath = art.write_atomic(target / f"{stem}.{ext}", text)
            entries.append({"analysis": name, "file": fpath.name, "sha256": art.sha256_file(fpath)})
    index = {"scenario": doc["name"], "format": fmt, "artifacts": entries, "failures": failures}
    return art.write_atomic(target / "index.json", json.dumps(index, indent=1) + "\n")
