"""Singular-value decay bounds for Cauchy and Loewner matrices on real intervals.

For nodes ``x`` in ``[a, b]`` and ``y`` in ``[c, d]`` (disjoint intervals) let
``gamma = |(c - a)(d - b) / ((c - b)(d - a))|`` and

    rate = exp(pi^2 / (4 mu(1 / sqrt(gamma)))),

with ``mu`` the Grotzsch ring function. Then ``sigma_{j+k} <= 4 rate^{-2k} sigma_j``
for the Cauchy matrix ``1/(x_i - y_j)``, and ``sigma_{j+2k} <= 4 rate^{-2k} sigma_j``
for a Loewner matrix on the same nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "IntervalPairGeometry",
    "elliptic_k",
    "grotzsch_mu",
    "decay_rate",
    "cauchy_sv_bound",
    "loewner_sv_bound",
    "cond_lower_bound",
    "decay_curve",
    "decay_csv",
]

_AGM_MAX_ITER = 64


def _agm(a: float, b: float) -> float:
    for _ in range(_AGM_MAX_ITER):
        if abs(a - b) <= 1e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def elliptic_k(r: float) -> float:
    """Complete elliptic integral of the first kind ``K(r)`` (modulus ``r``) by the AGM.

    ``K(r) = pi / (2 agm(1, sqrt(1 - r^2)))``.
    """
    r = float(r)
    if not 0.0 <= r < 1.0:
        raise ValueError(f"elliptic_k needs 0 <= r < 1, got {r}")
    return 0.5 * math.pi / _agm(1.0, math.sqrt((1.0 - r) * (1.0 + r)))


def grotzsch_mu(r: float) -> float:
    """Grotzsch ring function ``mu(r) = (pi/2) K(sqrt(1 - r^2)) / K(r)`` for ``0 < r < 1``.

    Evaluated as ``(pi/2) agm(1, sqrt(1 - r^2)) / agm(1, r)``, which avoids
    forming the complementary modulus twice and stays accurate as ``r -> 0``.
    """
    r = float(r)
    if not 0.0 < r < 1.0:
        raise ValueError(f"grotzsch_mu needs 0 < r < 1, got {r}")
    return 0.5 * math.pi * _agm(1.0, math.sqrt((1.0 - r) * (1.0 + r))) / _agm(1.0, r)


@dataclass(frozen=True)
class IntervalPairGeometry:
    a: float
    b: float
    c: float
    d: float
    gamma: float
    mu_value: float

    @classmethod
    def from_intervals(cls, a: float, b: float, c: float, d: float) -> "IntervalPairGeometry":
        a, b, c, d = (float(t) for t in (a, b, c, d))
        if a > b or c > d:
            raise ValueError(f"intervals must satisfy a <= b and c <= d, got [{a}, {b}] and [{c}, {d}]")
        if not (b < c or d < a):
            raise ValueError(f"intervals [{a}, {b}] and [{c}, {d}] overlap; the decay bound needs disjoint intervals")
        gamma = abs((c - a) * (d - b) / ((c - b) * (d - a)))
        if not gamma > 1.0:
            raise ValueError(f"degenerate geometry (cross-ratio {gamma}); both intervals need positive length or separation")
        return cls(a, b, c, d, gamma, grotzsch_mu(1.0 / math.sqrt(gamma)))

    @classmethod
    def from_nodes(cls, x, y) -> "IntervalPairGeometry":
        """``a = min x, b = max x, c = min y, d = max y``; complex nodes are rejected."""
        x = np.asarray(x)
        y = np.asarray(y)
        for name, z in (("x", x), ("y", y)):
            if np.iscomplexobj(z) and np.any(z.imag != 0):
                raise ValueError(f"{name} nodes must be real; the decay bound is stated for real intervals")
        x = np.real(x).astype(float)
        y = np.real(y).astype(float)
        return cls.from_intervals(x.min(), x.max(), y.min(), y.max())

    @property
    def rate(self) -> float:
        return decay_rate(self)


def decay_rate(geom: IntervalPairGeometry) -> float:
    """``exp(pi^2 / (4 mu(1/sqrt(gamma))))``."""
    return math.exp(math.pi**2 / (4.0 * geom.mu_value))


def _check(j: int, kk: int, sigma_j: float) -> None:
    if j < 1 or kk < 0:
        raise ValueError(f"need j >= 1 and k >= 0, got j = {j}, k = {kk}")
    if sigma_j < 0:
        raise ValueError(f"sigma_j must be >= 0, got {sigma_j}")


def cauchy_sv_bound(geom: IntervalPairGeometry, j: int, kk: int, sigma_j: float) -> float:
    """Upper bound ``4 rate^{-2k} sigma_j`` for ``sigma_{j+k}`` of the Cauchy matrix."""
    _check(j, kk, sigma_j)
    return 4.0 * decay_rate(geom) ** (-2 * kk) * sigma_j


def loewner_sv_bound(geom: IntervalPairGeometry, j: int, kk: int, sigma_j: float) -> float:
    """Upper bound ``4 rate^{-2k} sigma_j`` for ``sigma_{j+2k}`` of a Loewner matrix."""
    return cauchy_sv_bound(geom, j, kk, sigma_j)


def cond_lower_bound(geom: IntervalPairGeometry, n: int) -> float:
    """``rate^{2(n-1)} / 4``, a lower bound on the 2-norm condition number of an ``n x n`` Cauchy matrix.

    Follows from the Cauchy bound with ``j = 1`` and ``k = n - 1``.
    """
    if n < 2:
        raise ValueError(f"order must be >= 2, got {n}")
    return decay_rate(geom) ** (2 * (n - 1)) / 4.0


def decay_curve(geom: IntervalPairGeometry, sigma, kind: str = "cauchy") -> np.ndarray:
    """Bound for every index ``i`` (1-based) anchored at ``sigma_1``.

    ``cauchy``: ``4 rate^{-2(i-1)} sigma_1``; ``loewner``: ``4 rate^{-2 floor((i-1)/2)} sigma_1``.
    """
    s = np.asarray(sigma, dtype=float)
    idx = np.arange(s.size)
    if kind == "cauchy":
        steps = idx
    elif kind == "loewner":
        steps = idx // 2
    else:
        raise ValueError(f"kind must be 'cauchy' or 'loewner', got {kind!r}")
    return 4.0 * decay_rate(geom) ** (-2.0 * steps) * s[0]


def decay_csv(sigma, bound=None) -> str:
    """``index,sigma_actual,sigma_bound`` rows; an absent bound leaves the column empty."""
    s = np.asarray(sigma, dtype=float)
    lines = ["index,sigma_actual,sigma_bound"]
    for i, x in enumerate(s):
        b = "" if bound is None else repr(float(bound[i]))
        lines.append(f"{i + 1},{float(x)!r},{b}")
    return "\n".join(lines) + "\n"
