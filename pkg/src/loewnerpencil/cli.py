"""Command-line front end.

Subcommands: ``build``, ``sensitivity``, ``pseudospectra``, ``montecarlo``,
``bounds`` and ``scenario run``. Exit codes: 0 success, 2 usage error,
3 validation error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from . import artifacts as art
from . import cases
from . import numerics as nx
from . import scenario as sc
from .systems import PoleError

__all__ = ["main", "parse_complex", "parse_complex_list", "EXIT_OK", "EXIT_USAGE", "EXIT_VALIDATION", "EXIT_NUMERICAL"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_NUMERICAL = 4

_LITERAL_RE = re.compile(r"^[0-9.eE+-]*i?$")


def parse_complex(text: str) -> complex:
    """Parse ``re``, ``imi`` or ``re+imi`` (also ``re-imi``); ``i`` alone is the unit."""
    s = text.strip().replace(" ", "")
    if not s or not _LITERAL_RE.match(s):
        raise argparse.ArgumentTypeError(f"malformed complex literal {text!r}; expected re, imi or re+imi")
    try:
        return complex(s[:-1] + "j" if s.endswith("i") else s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed complex literal {text!r}; expected re, imi or re+imi") from None


def parse_complex_list(text: str) -> np.ndarray:
    items = [t for t in text.split(",")]
    if not items or any(not t.strip() for t in items):
        raise argparse.ArgumentTypeError(f"malformed point list {text!r}")
    return np.array([parse_complex(t) for t in items], dtype=complex)


def parse_region(text: str) -> tuple[float, float, float, float]:
    try:
        vals = tuple(float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed region {text!r}; expected re_min,re_max,im_min,im_max") from None
    if len(vals) != 4:
        raise argparse.ArgumentTypeError(f"region needs four numbers, got {len(vals)}")
    return vals


# ---------------------------------------------------------------- context


def _builtin(name: str, setting: int | None):
    """Return ``(system, mu, lam, hermite)`` for a named example."""
    if name == "example1":
        s = setting or 1
        if s not in cases.TWO_POLE_SETTINGS:
            raise ValueError(f"example1 has settings {cases.TWO_POLE_SETTINGS}, got {s}")
        mu, lam = cases.two_pole_points(s)
        return cases.two_pole_system(), mu, lam, False
    if name == "example2":
        s = setting or 1
        if s not in cases.TEN_POLE_SETTINGS:
            raise ValueError(f"example2 has settings {cases.TEN_POLE_SETTINGS}, got {s}")
        mu, lam = cases.ten_pole_points(s)
        return cases.ten_pole_system(), mu, lam, False
    if name == "example42":
        mu, lam = cases.fifth_order_points()
        return cases.fifth_order_system(), mu, lam, False
    if name == "example43":
        return cases.fifth_order_system(), cases.fifth_order_hermite_points(), None, True
    return None


BUILTIN_SYSTEMS = ("example1", "example2", "example42", "example43")


def _context(args) -> sc.Context:
    name = args.system
    if name is None and getattr(args, "example", None) is not None:
        name = f"example{args.example}"
    if name is None:
        raise ValueError("--system (or --example) is required")
    found = _builtin(name, args.setting)
    if found is not None:
        system, mu, lam, hermite = found
    else:
        path = Path(name)
        if not path.is_file():
            raise ValueError(f"--system {name!r} is neither a built-in example {BUILTIN_SYSTEMS} nor a file")
        doc = json.loads(path.read_text(encoding="utf-8"))
        if "system" in doc:
            doc = sc.validate_scenario(doc)
            pts = doc.get("points", {})
            spec = doc["system"]
        else:
            sc.validate_scenario({"name": "cli", "system": doc, "analyses": []})
            pts, spec = {}, doc
        system = sc.build_system(spec)
        mu = sc._cvec(pts["mu"]) if "mu" in pts else None
        lam = sc._cvec(pts["lambda"]) if "lambda" in pts else None
        hermite = bool(pts.get("hermite", False))
    if args.mu is not None:
        mu = args.mu
    if args.lam is not None:
        lam = args.lam
    if getattr(args, "hermite", False):
        hermite = True
    if mu is None:
        raise ValueError("no interpolation points: pass --mu (and --lambda)")
    return sc.build_context(system, mu, None if hermite else lam, hermite)


def _emit(args, produced: list[tuple[str, str]]) -> None:
    if args.out is None:
        for _, text in produced:
            sys.stdout.write(text)
        return
    out = Path(args.out)
    if len(produced) == 1 and out.suffix:
        art.write_atomic(out, produced[0][1])
        return
    for stem, text in produced:
        ext = "json" if text.lstrip().startswith(("{", "[")) else "csv"
        art.write_atomic(out / f"{stem}.{ext}", text)


def _e(x: float) -> str:
    return f"{x:.3e}"


# ---------------------------------------------------------------- subcommands


def cmd_build(args) -> int:
    ctx = _context(args)
    _emit(args, sc.analysis_loewner(ctx, {}, args.format))
    return EXIT_OK


def cmd_sensitivity(args) -> int:
    ctx = _context(args)
    r = ctx.rho()
    sigmas = (args.sigma,) if args.sigma is not None else ()
    eta = ctx.eta(sigmas)
    print(f"{'pole':>24} {'rho':>10} {'zeta':>10} {'bound':>10} {'eta':>10}")
    for i, z in enumerate(r.poles):
        print(f"{z.real:>11.3e}{z.imag:+.3e}i {_e(r.rho[i]):>10} {_e(r.zeta[i]):>10} {_e(r.bound_per_pole[i]):>10} {_e(eta.eta[i]):>10}")
    print(f"cond_left {_e(r.cond_left)}  cond_right {_e(r.cond_right)}")
    print(f"rho_l2 {_e(r.rho_l2)}  bound_l2 {_e(r.bound_l2)}  rho_l1 {_e(r.rho_l1)}  bound_l1 {_e(r.bound_l1)}")
    if args.out is not None:
        doc = {"noise": {"sigma": args.sigma, "trials": 1, "seed": 0}} if args.sigma is not None else {}
        _emit(args, sc.analysis_rho(ctx, doc, args.format) + sc.analysis_eta(ctx, doc, args.format))
    return EXIT_OK


def cmd_pseudospectra(args) -> int:
    ctx = _context(args)
    region = args.region
    if region is None:
        p = ctx.poles()
        pad = max(1.0, 0.25 * float(np.ptp(p.real) + np.ptp(p.imag)))
        region = (p.real.min() - pad, p.real.max() + pad, p.imag.min() - pad, p.imag.max() + pad)
    doc = {
        "pseudospectra": {
            "region": list(region),
            "nx": args.nx,
            "ny": args.ny,
            "nu": args.nu,
            "delta": args.delta,
            "levels": args.levels or [],
            "slope_directions": args.directions,
            "slope_seed": args.seed,
        }
    }
    _emit(args, sc.analysis_pseudospectra(ctx, doc, args.format))
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    ctx = _context(args)
    doc = {"noise": {"sigma": args.sigma, "trials": args.trials, "seed": args.seed}}
    _emit(args, sc.analysis_montecarlo(ctx, doc, args.format))
    return EXIT_OK


def cmd_bounds(args) -> int:
    ctx = _context(args)
    doc = {"svbounds": {"matrices": args.matrices}} if args.matrices else {}
    _emit(args, sc.analysis_svbounds(ctx, doc, args.format))
    return EXIT_OK


def cmd_scenario_run(args) -> int:
    index = sc.run_scenario(args.path, args.out)
    doc = json.loads(index.read_text(encoding="utf-8"))
    for a in doc["artifacts"]:
        print(f"{a['analysis']:<14} {a['file']:<32} {a['sha256'][:16]}")
    for f in doc["failures"]:
        print(f"FAILED {f['analysis']}: {f['error']}", file=sys.stderr)
    print(index)
    return EXIT_NUMERICAL if doc["failures"] else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep argparse's usage exit code
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser, out_help: str = "output file or directory (default: stdout)") -> None:
    p.add_argument("--system", help=f"built-in example {BUILTIN_SYSTEMS} or a JSON system/scenario file")
    p.add_argument("--example", type=int, choices=(1, 2), help="shorthand for --system exampleN")
    p.add_argument("--setting", type=int, help="setting number of a built-in example")
    p.add_argument("--mu", type=parse_complex_list, help="left points, comma separated re+imi literals")
    p.add_argument("--lambda", dest="lam", type=parse_complex_list, help="right points, comma separated re+imi literals")
    p.add_argument("--hermite", action="store_true", help="sample values and derivatives at --mu")
    p.add_argument("--out", help=out_help)
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="loewnerpencil", description="Loewner pencils, eigenvalue sensitivities and pseudospectra.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="build the Loewner quadruple")
    _add_common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("sensitivity", help="print rho and eta per pole")
    _add_common(p, "directory for rho/eta files")
    p.add_argument("--sigma", type=float, help="noise level for predicted pole std")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("pseudospectra", help="pseudospectral grid of (Ls, L)")
    _add_common(p, "directory for grid, contour and slope files (default: stdout)")
    p.add_argument("--region", type=parse_region, help="re_min,re_max,im_min,im_max")
    p.add_argument("--nx", type=int, default=200)
    p.add_argument("--ny", type=int, default=200)
    p.add_argument("--nu", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--levels", type=lambda s: [float(t) for t in s.split(",")], help="contour levels, comma separated")
    p.add_argument("--directions", type=int, default=100, help="slope sample directions (0 disables)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_pseudospectra)

    p = sub.add_parser("montecarlo", help="pole scatter under measurement noise")
    _add_common(p)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("bounds", help="singular values with decay bounds")
    _add_common(p)
    p.add_argument("--matrices", type=lambda s: s.split(","), help=f"subset of {sc.SVD_MATRICES}")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("scenario", help="scenario files")
    ssub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    r = ssub.add_parser("run", help="run a scenario file")
    r.add_argument("path")
    r.add_argument("--out", help="output directory (overrides the scenario's)")
    r.set_defaults(func=cmd_scenario_run)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "matrices", None):
        bad = [m for m in args.matrices if m not in sc.SVD_MATRICES]
        if bad:
            build_parser().error(f"unknown matrices {bad}; choose from {sc.SVD_MATRICES}")
    try:
        return args.func(args)
    except (nx.NumericsError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, PoleError, json.JSONDecodeError, OSError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
