"""Pseudospectra of matrix pencils and the local slope of eigenvalue motion.

For a pencil ``(A, E)`` and weights ``nu, delta`` the pseudospectral level at
``z`` is

    eps(z) = sigma_min(z E - A) / (delta + nu |z|),

the smallest ``eps`` for which ``z`` is an eigenvalue of some
``(A + eps dA, E + eps dE)`` with ``||dA|| <= delta`` and ``||dE|| <= nu``.
A rank-one pair built from the singular vectors of ``z E - A`` attains it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import contourpy
import numpy as np

from . import numerics as nx

__all__ = [
    "PseudospectraGrid",
    "SlopeEstimate",
    "epsilon_at",
    "grid_epsilon",
    "grid_minima",
    "contour_lines",
    "slope_estimate",
    "grid_to_csv",
    "grid_to_json",
    "contours_to_csv",
]

DEFAULT_RESOLUTION = 200


@dataclass(frozen=True, eq=False)
class PseudospectraGrid:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    nx: int
    ny: int
    nu: float
    delta: float
    values: np.ndarray  # shape (ny, nx)

    @property
    def re(self) -> np.ndarray:
        return np.linspace(self.re_min, self.re_max, self.nx)

    @property
    def im(self) -> np.ndarray:
        return np.linspace(self.im_min, self.im_max, self.ny)

    @property
    def cell(self) -> tuple[float, float]:
        return ((self.re_max - self.re_min) / (self.nx - 1), (self.im_max - self.im_min) / (self.ny - 1))


def _weights(a: np.ndarray, e: np.ndarray, nu, delta) -> tuple[float, float]:
    nu = nx.norm2(e) if nu is None else float(nu)
    delta = nx.norm2(a) if delta is None else float(delta)
    if nu < 0 or delta < 0:
        raise ValueError(f"nu and delta must be nonnegative, got {nu}, {delta}")
    if nu == 0 and delta == 0:
        raise ValueError("nu and delta cannot both be zero")
    return nu, delta


def _pencil(a, e) -> tuple[np.ndarray, np.ndarray]:
    a = nx.as_matrix(a, "A")
    e = nx.as_matrix(e, "E")
    if a.shape != e.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"pencil must be square with equal shapes, got {a.shape} and {e.shape}")
    return a, e


def epsilon_at(a, e, z, nu=None, delta=None) -> float:
    a, e = _pencil(a, e)
    nu, delta = _weights(a, e, nu, delta)
    z = complex(z)
    den = delta + nu * abs(z)
    if den == 0:
        raise ValueError("delta + nu |z| vanishes at z = 0")
    return nx.sigma_min(z * e - a) / den


def grid_epsilon(
    a,
    e,
    region: tuple[float, float, float, float],
    resolution: tuple[int, int] = (DEFAULT_RESOLUTION, DEFAULT_RESOLUTION),
    nu: float | None = None,
    delta: float | None = None,
) -> PseudospectraGrid:
    """Evaluate ``eps(z)`` on a uniform grid over ``region = (re_min, re_max, im_min, im_max)``.

    ``nu`` and ``delta`` default to ``||E||_2`` and ``||A||_2``.
    """
    a, e = _pencil(a, e)
    re_min, re_max, im_min, im_max = (float(x) for x in region)
    if not (re_max > re_min and im_max > im_min):
        raise ValueError(f"empty region {region}")
    n_re, n_im = (int(x) for x in resolution)
    if n_re < 2 or n_im < 2:
        raise ValueError(f"grid needs at least 2 x 2 points, got {resolution}")
    nu, delta = _weights(a, e, nu, delta)
    re = np.linspace(re_min, re_max, n_re)
    im = np.linspace(im_min, im_max, n_im)
    vals = np.empty((n_im, n_re))
    for r, y in enumerate(im):
        for c, x in enumerate(re):
            z = complex(x, y)
            den = delta + nu * abs(z)
            if den == 0:
                raise ValueError("delta = 0 and the grid contains z = 0, where eps(z) is undefined")
            vals[r, c] = np.linalg.svd(z * e - a, compute_uv=False)[-1] / den
    return PseudospectraGrid(re_min, re_max, im_min, im_max, n_re, n_im, nu, delta, vals)


def grid_minima(grid: PseudospectraGrid) -> list[complex]:
    """Grid points that are strict-or-equal minima of their 8-neighbourhood (edges excluded)."""
    v = grid.values
    out = []
    for r in range(1, grid.ny - 1):
        for c in range(1, grid.nx - 1):
            block = v[r - 1 : r + 2, c - 1 : c + 2]
            if v[r, c] <= block.min():
                out.append(complex(grid.re[c], grid.im[r]))
    return out


def contour_lines(grid: PseudospectraGrid, levels) -> list[tuple[float, np.ndarray]]:
    """Marching-squares polylines of ``eps(z) = level``; returns ``(level, points)`` pairs."""
    gen = contourpy.contour_generator(x=grid.re, y=grid.im, z=grid.values, line_type="Separate")
    out = []
    for lev in levels:
        for seg in gen.lines(float(lev)):
            out.append((float(lev), seg[:, 0] + 1j * seg[:, 1]))
    return out


@dataclass(frozen=True, eq=False)
class SlopeEstimate:
    """Finite-difference slopes ``|pi(eps2) - pi(eps1)| / (eps2 - eps1)`` per sampled direction."""

    eigenvalue: complex
    slopes: np.ndarray
    probe_eps: tuple[float, float]

    @property
    def xi(self) -> float:
        return float(np.max(self.slopes)) if self.slopes.size else 0.0


def _unit_direction(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return z / np.linalg.norm(z, 2)


def slope_estimate(
    a,
    e,
    eigenvalue,
    probe_eps: tuple[float, float] = (1e-8, 2e-8),
    directions: int | list[tuple[np.ndarray, np.ndarray]] = 100,
    seed: int = 0,
    nu: float | None = None,
    delta: float | None = None,
) -> SlopeEstimate:
    """Sampled local slope of the eigenvalue ``eigenvalue`` under pencil perturbations.

    Each direction is a pair ``(dA, dE)`` scaled to ``||dA||_2 = delta`` and
    ``||dE||_2 = nu``. With ``directions`` an integer, that many Gaussian pairs
    are drawn from ``numpy.random.default_rng(seed)``; a list of pairs is used
    as given (after scaling; zero matrices stay zero).
    """
    a, e = _pencil(a, e)
    eps1, eps2 = (float(x) for x in probe_eps)
    if not (0 < eps1 < eps2 <= 1e-4):
        raise ValueError(f"need 0 < eps1 < eps2 <= 1e-4, got {probe_eps}")
    nu, delta = _weights(a, e, nu, delta)
    z0 = complex(eigenvalue)
    n = a.shape[0]
    if isinstance(directions, int):
        rng = np.random.default_rng(seed)
        dirs = [(_unit_direction(rng, n), _unit_direction(rng, n)) for _ in range(directions)]
    else:
        dirs = []
        for da, de in directions:
            da = np.asarray(da, dtype=complex)
            de = np.asarray(de, dtype=complex)
            na, ne = np.linalg.norm(da, 2), np.linalg.norm(de, 2)
            dirs.append((da / na if na > 0 else da, de / ne if ne > 0 else de))
    vals0 = nx.generalized_eig(a, e)[0]
    sep = np.sort(np.abs(vals0 - z0))
    gap = sep[1] if sep.size > 1 else np.inf
    slopes = []
    for da, de in dirs:
        shifted = []
        for eps in (eps1, eps2):
            vals = nx.generalized_eig(a + eps * delta * da, e + eps * nu * de)[0]
            j = int(np.argmin(np.abs(vals - z0)))
            if abs(vals[j] - z0) >= 0.5 * gap:
                raise nx.NumericsError(f"eigenvalue {z0!r} could not be tracked at eps = {eps}")
            shifted.append(vals[j])
        slopes.append(abs(shifted[1] - shifted[0]) / (eps2 - eps1))
    return SlopeEstimate(z0, np.array(slopes), (eps1, eps2))


# ---------------------------------------------------------------- serialization


def grid_to_csv(grid: PseudospectraGrid) -> str:
    lines = ["re,im,eps"]
    for r, y in enumerate(grid.im):
        for c, x in enumerate(grid.re):
            lines.append(f"{float(x)!r},{float(y)!r},{float(grid.values[r, c])!r}")
    return "\n".join(lines) + "\n"


def grid_to_json(grid: PseudospectraGrid) -> str:
    doc = {
        "re_min": grid.re_min,
        "re_max": grid.re_max,
        "im_min": grid.im_min,
        "im_max": grid.im_max,
        "nx": grid.nx,
        "ny": grid.ny,
        "nu": grid.nu,
        "delta": grid.delta,
        "values": [float(x) for x in grid.values.ravel()],
    }
    return json.dumps(doc, indent=1) + "\n"


def contours_to_csv(lines: list[tuple[float, np.ndarray]]) -> str:
    out = ["level,segment_id,re,im"]
    for sid, (lev, pts) in enumerate(lines):
        for z in pts:
            out.append(f"{lev!r},{sid},{float(z.real)!r},{float(z.imag)!r}")
    return "\n".join(out) + "\n"
