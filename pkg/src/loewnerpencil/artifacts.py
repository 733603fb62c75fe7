"""Serialization of quadruples, tables and scenario outputs.

Data files use the shortest round-trip ``repr`` of every float, so parsing a
written file gives back bitwise-identical numbers. Complex numbers are
stored as ``[re, im]`` pairs in JSON and as separate ``_re``/``_im`` columns in
CSV.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .loewner import LoewnerQuadruple

__all__ = [
    "encode_complex",
    "decode_complex",
    "encode_matrix",
    "decode_matrix",
    "quadruple_to_json",
    "quadruple_from_json",
    "quadruple_to_csv",
    "fmt",
    "table",
    "write_atomic",
    "sha256_file",
]


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def decode_complex(x) -> complex:
    """Accept ``[re, im]`` or a plain real number."""
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(float(x), 0.0)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(t, (int, float)) for t in x):
        return complex(float(x[0]), float(x[1]))
    raise ValueError(f"expected a number or an [re, im] pair, got {x!r}")


def encode_matrix(m) -> list[list[list[float]]]:
    a = np.atleast_2d(np.asarray(m, dtype=complex))
    return [[encode_complex(z) for z in row] for row in a]


def decode_matrix(rows) -> np.ndarray:
    return np.array([[decode_complex(z) for z in row] for row in rows], dtype=complex)


def quadruple_to_json(quad: LoewnerQuadruple) -> str:
    doc = {
        "provenance": quad.provenance,
        "W": encode_matrix(quad.w),
        "L": encode_matrix(quad.l),
        "Ls": encode_matrix(quad.ls),
        "V": encode_matrix(quad.v),
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def quadruple_from_json(text: str) -> LoewnerQuadruple:
    doc = json.loads(text)
    try:
        return LoewnerQuadruple(
            w=decode_matrix(doc["W"]),
            l=decode_matrix(doc["L"]),
            ls=decode_matrix(doc["Ls"]),
            v=decode_matrix(doc["V"]),
            provenance=doc.get("provenance", {}),
        )
    except KeyError as exc:
        raise ValueError(f"quadruple JSON lacks field {exc}") from None


def fmt(x: float) -> str:
    """Shortest round-trip text for a float (``nan``/``inf`` spelled out)."""
    return repr(float(x))


def quadruple_to_csv(quad: LoewnerQuadruple) -> str:
    lines = ["matrix,row,col,re,im"]
    for name, m in (("W", quad.w), ("L", quad.l), ("Ls", quad.ls), ("V", quad.v)):
        for i, row in enumerate(m):
            for j, z in enumerate(row):
                lines.append(f"{name},{i},{j},{fmt(z.real)},{fmt(z.imag)}")
    return "\n".join(lines) + "\n"


def table(header: list[str], rows: list[list]) -> str:
    """CSV text; floats use :func:`fmt`, everything else ``str``."""
    out = [",".join(header)]
    for r in rows:
        out.append(",".join(fmt(x) if isinstance(x, (float, np.floating)) else str(x) for x in r))
    return "\n".join(out) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> Path:
    """Write UTF-8 text with LF endings via a temporary file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def sha256_file(path: str | os.PathLike) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
