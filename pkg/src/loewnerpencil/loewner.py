"""Loewner quadruples and their structured factors.

Left data are ``(mu_i, l_i, v_i)`` with ``v_i^T = l_i^T H(mu_i)`` and right data
``(lam_j, r_j, w_j)`` with ``w_j = H(lam_j) r_j``. The quadruple is

    W[:, j] = w_j,   V[i, :] = v_i^T,
    L[i, j]  = (v_i^T r_j - l_i^T w_j) / (mu_i - lam_j),
    Ls[i, j] = (mu_i v_i^T r_j - l_i^T w_j lam_j) / (mu_i - lam_j).

Besides the builders, the module provides the Cauchy, generalized-Cauchy and
Vandermonde factors of ``L`` and ``Ls`` for the different system
representations, together with residual reports that check each
factorization and Sylvester identity numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import numerics as nx
from .systems import (
    MimoPoleResidue,
    PolynomialTF,
    SisoPoleResidue,
    StateSpaceSystem,
    SystemModel,
    pole_residue_realization_unit_e,
)

__all__ = [
    "POINT_TOL",
    "TangentialDataSet",
    "HermiteDataSet",
    "LoewnerQuadruple",
    "sample_tangential",
    "sample_hermite",
    "cauchy",
    "cauchy_zero_diagonal",
    "generalized_cauchy_left",
    "generalized_cauchy_right",
    "inverse_cauchy_closed_form",
    "vandermonde",
    "coefficient_hankels",
    "build_loewner",
    "build_hermite_loewner",
    "krylov_projectors",
    "factorization_residuals",
    "sylvester_residuals",
    "mirrored_pole_residuals",
    "same_point_jordan_residuals",
    "recover_transfer",
    "hankel_pencil",
    "hankel_identity_residuals",
    "hankel_singular_values_via_loewner",
    "gramian_hankel_singular_values",
]

# Left/right points closer than this are treated as coincident.
POINT_TOL = 1e-12
RANK_RTOL = 1e-9


def _distinct(x: np.ndarray, name: str) -> None:
    for i in range(x.size):
        for j in range(i + 1, x.size):
            if abs(x[i] - x[j]) < POINT_TOL:
                raise ValueError(f"{name}[{i}] and {name}[{j}] coincide ({x[i]!r})")


def _dirs(d, count: int, width: int, name: str) -> np.ndarray:
    a = np.array(d, dtype=complex)
    if a.ndim == 1 and width == 1:
        a = a.reshape(-1, 1)
    if a.shape != (count, width):
        raise ValueError(f"{name} must have shape ({count}, {width}), got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return a


@dataclass(frozen=True, eq=False)
class TangentialDataSet:
    """Left and right tangential measurements.

    Parameters
    ----------
    mu : (q,) left points.
    left_dirs : (q, p) rows are ``l_i^T``.
    left_vals : (q, m) rows are ``v_i^T``.
    lam : (k,) right points.
    right_dirs : (k, m) rows are ``r_j^T``.
    right_vals : (k, p) rows are ``w_j^T``.

    For SISO data the four direction/value arrays may be given as 1-D vectors.
    """

    mu: np.ndarray
    left_dirs: np.ndarray
    left_vals: np.ndarray
    lam: np.ndarray
    right_dirs: np.ndarray
    right_vals: np.ndarray

    def __post_init__(self):
        mu = nx.as_vector(self.mu, "mu")
        lam = nx.as_vector(self.lam, "lambda")
        ld = np.array(self.left_dirs, dtype=complex)
        rd = np.array(self.right_dirs, dtype=complex)
        p = 1 if ld.ndim == 1 else ld.shape[1]
        m = 1 if rd.ndim == 1 else rd.shape[1]
        q, k = mu.size, lam.size
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "left_dirs", _dirs(ld, q, p, "left_dirs"))
        object.__setattr__(self, "right_dirs", _dirs(rd, k, m, "right_dirs"))
        object.__setattr__(self, "left_vals", _dirs(self.left_vals, q, m, "left_vals"))
        object.__setattr__(self, "right_vals", _dirs(self.right_vals, k, p, "right_vals"))
        _distinct(mu, "mu")
        _distinct(lam, "lambda")
        gap = np.abs(mu[:, None] - lam[None, :])
        if gap.min() < POINT_TOL:
            i, j = np.unravel_index(int(np.argmin(gap)), gap.shape)
            raise ValueError(
                f"mu[{i}] = lambda[{j}] = {mu[i]!r}: left and right points must be distinct "
                "(use HermiteDataSet for coincident points)"
            )

    @property
    def q(self) -> int:
        return self.mu.size

    @property
    def k(self) -> int:
        return self.lam.size

    @property
    def p(self) -> int:
        return self.left_dirs.shape[1]

    @property
    def m(self) -> int:
        return self.right_dirs.shape[1]

    @property
    def is_siso(self) -> bool:
        return self.p == 1 and self.m == 1

    def with_values(self, left_vals, right_vals) -> "TangentialDataSet":
        """Copy with replaced measurements (same points and directions)."""
        return TangentialDataSet(self.mu, self.left_dirs, left_vals, self.lam, self.right_dirs, right_vals)


@dataclass(frozen=True, eq=False)
class HermiteDataSet:
    """SISO samples ``v_i = H(mu_i)`` and ``v_i' = H'(mu_i)`` at coincident left/right points."""

    mu: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray

    def __post_init__(self):
        mu = nx.as_vector(self.mu, "mu")
        v = nx.as_vector(self.values, "values")
        d = nx.as_vector(self.derivatives, "derivatives")
        if not (mu.size == v.size == d.size):
            raise ValueError(f"mu ({mu.size}), values ({v.size}) and derivatives ({d.size}) differ in length")
        _distinct(mu, "mu")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "derivatives", d)

    @property
    def q(self) -> int:
        return self.mu.size

    def with_values(self, values, derivatives) -> "HermiteDataSet":
        return HermiteDataSet(self.mu, values, derivatives)


@dataclass(frozen=True, eq=False)
class LoewnerQuadruple:
    """``(W, L, Ls, V)`` with shapes ``p x k, q x k, q x k, q x m``."""

    w: np.ndarray
    l: np.ndarray  # noqa: E741
    ls: np.ndarray
    v: np.ndarray
    provenance: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        w = nx.as_matrix(self.w, "W")
        l_ = nx.as_matrix(self.l, "L")
        ls = nx.as_matrix(self.ls, "Ls")
        v = np.array(self.v, dtype=complex)
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        v = nx.as_matrix(v, "V")
        q, k = l_.shape
        if ls.shape != (q, k) or w.shape[1] != k or v.shape[0] != q:
            raise ValueError(f"inconsistent quadruple shapes W{w.shape} L{l_.shape} Ls{ls.shape} V{v.shape}")
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "l", l_)
        object.__setattr__(self, "ls", ls)
        object.__setattr__(self, "v", v)

    @property
    def shape(self) -> tuple[int, int]:
        return self.l.shape

    def identical(self, other: "LoewnerQuadruple") -> bool:
        """Entrywise bitwise equality of the four matrices."""
        return all(
            a.shape == b.shape and np.array_equal(a, b)
            for a, b in ((self.w, other.w), (self.l, other.l), (self.ls, other.ls), (self.v, other.v))
        )


# ---------------------------------------------------------------- sampling


def sample_tangential(sys: SystemModel, mu, lam, left_dirs=None, right_dirs=None) -> TangentialDataSet:
    """Evaluate ``sys`` at the given points; directions default to all-ones vectors."""
    mu = nx.as_vector(mu, "mu")
    lam = nx.as_vector(lam, "lambda")
    h0 = sys.transfer(mu[0])
    p, m = h0.shape
    ld = np.ones((mu.size, p), dtype=complex) if left_dirs is None else _dirs(left_dirs, mu.size, p, "left_dirs")
    rd = np.ones((lam.size, m), dtype=complex) if right_dirs is None else _dirs(right_dirs, lam.size, m, "right_dirs")
    v = np.array([ld[i] @ sys.transfer(x) for i, x in enumerate(mu)])
    w = np.array([sys.transfer(x) @ rd[j] for j, x in enumerate(lam)])
    return TangentialDataSet(mu, ld, v, lam, rd, w)


def sample_hermite(sys: SystemModel, mu) -> HermiteDataSet:
    mu = nx.as_vector(mu, "mu")
    h = [sys.transfer(x) for x in mu]
    if h[0].shape != (1, 1):
        raise ValueError("Hermite data are SISO only")
    d = [sys.derivative(x)[0, 0] for x in mu]
    return HermiteDataSet(mu, [x[0, 0] for x in h], d)


# ---------------------------------------------------------------- structured factors


def cauchy(x, y) -> np.ndarray:
    """``C[i, j] = 1 / (x_i - y_j)``."""
    x = nx.as_vector(x, "x")
    y = nx.as_vector(y, "y")
    d = x[:, None] - y[None, :]
    hit = np.abs(d) < POINT_TOL
    if hit.any():
        i, j = np.argwhere(hit)[0]
        raise ValueError(f"Cauchy matrix undefined: x[{i}] = y[{j}] = {x[i]!r}")
    return 1.0 / d


def cauchy_zero_diagonal(x) -> np.ndarray:
    """``C[i, j] = 1/(x_i - x_j)`` off the diagonal and ``0`` on it."""
    x = nx.as_vector(x, "x")
    _distinct(x, "x")
    d = x[:, None] - x[None, :]
    np.fill_diagonal(d, 1.0)
    c = 1.0 / d
    np.fill_diagonal(c, 0.0)
    return c


def generalized_cauchy_left(mu, left_dirs, sys: MimoPoleResidue) -> np.ndarray:
    """``C_L[i, j] = l_i^T c_j / (mu_i - pi_j)``."""
    mu = nx.as_vector(mu, "mu")
    ld = _dirs(left_dirs, mu.size, sys.c.shape[0], "left_dirs")
    return (ld @ sys.c) * cauchy(mu, sys.poles)


def generalized_cauchy_right(lam, right_dirs, sys: MimoPoleResidue) -> np.ndarray:
    """``C_R[i, j] = b_i^T r_j / (lam_j - pi_i)``."""
    lam = nx.as_vector(lam, "lambda")
    rd = _dirs(right_dirs, lam.size, sys.b.shape[0], "right_dirs")
    return (sys.b.T @ rd.T) * cauchy(lam, sys.poles).T


def inverse_cauchy_closed_form(x, y) -> np.ndarray:
    """Explicit inverse of the square Cauchy matrix ``1/(x_i - y_j)``.

    ``inv[i, j] = prod_k (x_j - y_k) prod_k (x_k - y_i)
    / ((x_j - y_i) prod_{k != j} (x_j - x_k) prod_{k != i} (y_k - y_i))``.
    """
    x = nx.as_vector(x, "x")
    y = nx.as_vector(y, "y")
    if x.size != y.size:
        raise ValueError(f"square Cauchy matrix needs equal node counts, got {x.size} and {y.size}")
    _distinct(x, "x")
    _distinct(y, "y")
    c = cauchy(x, y)  # validates x_i != y_j
    n = x.size
    xy = x[:, None] - y[None, :]
    px = np.prod(xy, axis=1)  # prod_k (x_j - y_k)
    py = np.prod(xy, axis=0)  # prod_k (x_k - y_i)
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    dy = y[None, :] - y[:, None]  # dy[i, k] = y_k - y_i
    np.fill_diagonal(dy, 1.0)
    ax = np.prod(dx, axis=1)
    ay = np.prod(dy, axis=1)
    inv = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            inv[i, j] = px[j] * py[i] * c[j, i] / (ax[j] * ay[i])
    return inv


def vandermonde(x, rows: int) -> np.ndarray:
    """``V[i, j] = x_j ** i`` for ``i < rows``."""
    if rows < 1:
        raise ValueError(f"rows must be >= 1, got {rows}")
    x = nx.as_vector(x, "x")
    return x[None, :] ** np.arange(rows)[:, None]


def coefficient_hankels(coefficients) -> tuple[np.ndarray, np.ndarray]:
    """Hankel matrices ``(E_hat, A_hat)`` of polynomial coefficients.

    ``E_hat[a, b] = c[a+b+1]`` and ``A_hat[a, b] = c[a+b]`` (zero past the end),
    so that for ``H(s) = sum_t c_t s^t`` one has ``L = V(mu)^T E_hat V(lam)``
    and ``Ls = V(mu)^T A_hat V(lam)``.
    """
    c = nx.as_vector(coefficients, "coefficients")
    r = c.size
    padded = np.concatenate([c, np.zeros(2 * r, dtype=complex)])
    idx = np.arange(r)[:, None] + np.arange(r)[None, :]
    return padded[idx + 1], padded[idx]


# ---------------------------------------------------------------- builders


def build_loewner(data: TangentialDataSet) -> LoewnerQuadruple:
    mu, lam = data.mu, data.lam
    den = mu[:, None] - lam[None, :]
    vr = data.left_vals @ data.right_dirs.T
    lw = data.left_dirs @ data.right_vals.T
    l_ = (vr - lw) / den
    ls = (mu[:, None] * vr - lw * lam[None, :]) / den
    prov = {"kind": "tangential", "q": data.q, "k": data.k, "p": data.p, "m": data.m}
    return LoewnerQuadruple(w=data.right_vals.T, l=l_, ls=ls, v=data.left_vals, provenance=prov)


def build_hermite_loewner(data: HermiteDataSet) -> LoewnerQuadruple:
    """Square pencil for coincident points; the diagonal carries derivative samples.

    ``L = V C - C V + V'`` and ``Ls = M V C - C V M + M V' + V`` with
    ``C = cauchy_zero_diagonal(mu)`` and diagonal matrices ``M, V, V'``.
    """
    mu, v, vp = data.mu, data.values, data.derivatives
    c = cauchy_zero_diagonal(mu)
    l_ = v[:, None] * c - c * v[None, :] + np.diag(vp)
    ls = (mu * v)[:, None] * c - c * (v * mu)[None, :] + np.diag(mu * vp + v)
    prov = {"kind": "hermite", "q": data.q, "k": data.q, "p": 1, "m": 1}
    return LoewnerQuadruple(w=v.reshape(1, -1), l=l_, ls=ls, v=v.reshape(-1, 1), provenance=prov)


def krylov_projectors(sys: StateSpaceSystem, data: TangentialDataSet) -> tuple[np.ndarray, np.ndarray]:
    """``K_L`` (rows ``l_i^T C Phi(mu_i)``) and ``K_R`` (columns ``Phi(lam_j) B r_j``)."""
    if data.p != sys.n_outputs or data.m != sys.n_inputs:
        raise ValueError(
            f"data directions ({data.p} outputs, {data.m} inputs) do not match system "
            f"({sys.n_outputs} outputs, {sys.n_inputs} inputs)"
        )
    kl = np.array([data.left_dirs[i] @ sys.c @ sys.resolvent(x) for i, x in enumerate(data.mu)])
    kr = np.array([sys.resolvent(x) @ sys.b @ data.right_dirs[j] for j, x in enumerate(data.lam)]).T
    return kl, kr


# ---------------------------------------------------------------- residual reports


def _fro(x) -> float:
    return float(np.linalg.norm(x))


def _check_shapes(quad: LoewnerQuadruple, q: int, k: int) -> None:
    if quad.shape != (q, k):
        raise ValueError(f"quadruple is {quad.shape} but data describe {q} x {k} measurements")


def factorization_residuals(quad: LoewnerQuadruple, sys: SystemModel, data: TangentialDataSet) -> dict[str, float]:
    """Frobenius residuals of the factorizations that apply to ``sys``.

    The key ``"scale"`` holds ``||L||_F`` (or 1 when ``L`` vanishes) for
    relative comparisons. State-space input additionally reports the ranks
    of ``K_L``, ``K_R`` and ``K_L K_R`` and the idempotence residual of
    ``Theta = K_R (K_L K_R)^+ K_L``.
    """
    _check_shapes(quad, data.q, data.k)
    out: dict[str, float] = {"scale": _fro(quad.l) or 1.0}
    if isinstance(sys, StateSpaceSystem):
        kl, kr = krylov_projectors(sys, data)
        out["W - C K_R"] = _fro(quad.w - sys.c @ kr)
        out["L + K_L E K_R"] = _fro(quad.l + kl @ sys.e @ kr)
        out["Ls + K_L A K_R"] = _fro(quad.ls + kl @ sys.a @ kr)
        out["V - K_L B"] = _fro(quad.v - kl @ sys.b)
        prod = kl @ kr
        theta = kr @ nx.pinv(prod) @ kl
        out["rank K_L"] = nx.numerical_rank(kl, RANK_RTOL)
        out["rank K_R"] = nx.numerical_rank(kr, RANK_RTOL)
        out["rank K_L K_R"] = nx.numerical_rank(prod, RANK_RTOL)
        out["Theta^2 - Theta"] = _fro(theta @ theta - theta)
    elif isinstance(sys, SisoPoleResidue):
        if not data.is_siso:
            raise ValueError("SISO pole-residue factorization needs SISO data")
        ld, rd = data.left_dirs[:, 0], data.right_dirs[:, 0]
        cm = ld[:, None] * cauchy(data.mu, sys.poles)
        cl = rd[:, None] * cauchy(data.lam, sys.poles)
        g, pi = sys.residues, sys.poles
        out["L + C_mu G C_lam^T"] = _fro(quad.l + (cm * g) @ cl.T)
        out["Ls + C_mu Pi G C_lam^T"] = _fro(quad.ls + (cm * (pi * g)) @ cl.T)
        out["W - (C_lam g)^T"] = _fro(quad.w - (cauchy(data.lam, pi) @ g)[None, :] * rd[None, :])
        out["V - C_mu g"] = _fro(quad.v[:, 0] - ld * (cauchy(data.mu, pi) @ g))
    elif isinstance(sys, MimoPoleResidue):
        cl = generalized_cauchy_left(data.mu, data.left_dirs, sys)
        cr = generalized_cauchy_right(data.lam, data.right_dirs, sys)
        out["L + C_L C_R"] = _fro(quad.l + cl @ cr)
        out["Ls + C_L Pi C_R"] = _fro(quad.ls + (cl * sys.poles) @ cr)
        out["W - C C_R"] = _fro(quad.w - sys.c @ cr)
        out["V - C_L B"] = _fro(quad.v - cl @ sys.b.T)
    elif isinstance(sys, PolynomialTF):
        if not data.is_siso:
            raise ValueError("polynomial factorization needs SISO data")
        r = sys.degree_bound
        ld, rd = data.left_dirs[:, 0], data.right_dirs[:, 0]
        vm = vandermonde(data.mu, r) * ld[None, :]
        vl = vandermonde(data.lam, r) * rd[None, :]
        e_hat, a_hat = coefficient_hankels(sys.coefficients)
        out["L - V_mu^T E_hat V_lam"] = _fro(quad.l - vm.T @ e_hat @ vl)
        out["Ls - V_mu^T A_hat V_lam"] = _fro(quad.ls - vm.T @ a_hat @ vl)
        out["W - a^T V_lam"] = _fro(quad.w - sys.coefficients[None, :] @ vl)
        out["V - V_mu^T a"] = _fro(quad.v[:, 0] - vm.T @ sys.coefficients)
    else:
        raise TypeError(f"unsupported system model {type(sys).__name__}")
    return out


def sylvester_residuals(sys: SystemModel, data: TangentialDataSet, quad: LoewnerQuadruple | None = None) -> dict[str, float]:
    """Residuals of the Sylvester equations satisfied by the data-side factors.

    Always includes the Loewner pair ``M L - L Lam = V R - L^T W`` and
    ``M Ls - Ls Lam = M V R - L^T W Lam``. State-space systems add the
    projector equations ``M K_L E - K_L A = L^T C`` and
    ``E K_R Lam - A K_R = B R``; pole-residue systems add the Cauchy
    equations ``D_x C - C D_y = (directions) 1 1^T`` in their generalized form.
    """
    quad = build_loewner(data) if quad is None else quad
    _check_shapes(quad, data.q, data.k)
    mu, lam = data.mu, data.lam
    lt, r = data.left_dirs, data.right_dirs.T
    out: dict[str, float] = {}
    out["M L - L Lam - (V R - L^T W)"] = _fro(
        mu[:, None] * quad.l - quad.l * lam[None, :] - (quad.v @ r - lt @ quad.w)
    )
    out["M Ls - Ls Lam - (M V R - L^T W Lam)"] = _fro(
        mu[:, None] * quad.ls - quad.ls * lam[None, :] - (mu[:, None] * (quad.v @ r) - (lt @ quad.w) * lam[None, :])
    )
    if isinstance(sys, StateSpaceSystem):
        kl, kr = krylov_projectors(sys, data)
        out["M K_L E - K_L A - L^T C"] = _fro(mu[:, None] * (kl @ sys.e) - kl @ sys.a - lt @ sys.c)
        out["E K_R Lam - A K_R - B R"] = _fro((sys.e @ kr) * lam[None, :] - sys.a @ kr - sys.b @ r)
    elif isinstance(sys, (SisoPoleResidue, MimoPoleResidue)):
        mp = sys if isinstance(sys, MimoPoleResidue) else MimoPoleResidue(sys.poles, sys.residues[None, :], np.ones((1, sys.order)))
        pi = mp.poles
        cl = generalized_cauchy_left(mu, lt, mp)
        cr = generalized_cauchy_right(lam, data.right_dirs, mp)
        out["M C_L - C_L Pi - L^T C"] = _fro(mu[:, None] * cl - cl * pi[None, :] - lt @ mp.c)
        out["C_R Lam - Pi C_R - B R"] = _fro(cr * lam[None, :] - pi[:, None] * cr - mp.b.T @ r)
        for name, x in (("mu", mu), ("lam", lam)):
            c = cauchy(x, pi)
            out[f"D_{name} C - C D_pi - 1 1^T"] = _fro(x[:, None] * c - c * pi[None, :] - 1.0)
    return out


def mirrored_pole_residuals(pr: SisoPoleResidue) -> dict[str, float]:
    """Checks for coincident left/right points placed at minus the poles.

    With ``mu_i = lam_i = -pi_i`` the pencil built from projector products
    ``L = -K_L E K_R``, ``Ls = -K_L A K_R`` satisfies the degenerate
    Sylvester pair ``L Pi - Pi L = W^T R - R^T W`` and
    ``Ls Pi - Pi Ls = R^T W Pi - Pi W^T R`` with ``R = 1^T`` and
    ``W = [H(-pi_1) ... H(-pi_n)]``. Its diagonal holds ``+H'(-pi_i)`` and
    ``+d(sH)/ds`` at ``-pi_i``, and it coincides with the Hermite builder.
    """
    ss = pole_residue_realization_unit_e(pr)
    pts = -pr.poles
    phis = [ss.resolvent(x) for x in pts]
    kl = np.array([(ss.c @ ph)[0] for ph in phis])
    kr = np.array([(ph @ ss.b)[:, 0] for ph in phis]).T
    l_ = -kl @ ss.e @ kr
    ls = -kl @ ss.a @ kr
    pi = pr.poles
    w = np.array([pr.transfer(x)[0, 0] for x in pts])[None, :]
    r = np.ones((1, pr.order))
    hp = np.array([pr.derivative(x)[0, 0] for x in pts])
    shp = w[0] + pts * hp
    herm = build_hermite_loewner(sample_hermite(pr, pts))
    out = {
        "scale": _fro(l_),
        "L Pi - Pi L - (W^T R - R^T W)": _fro(l_ * pi[None, :] - pi[:, None] * l_ - (w.T @ r - r.T @ w)),
        "Ls Pi - Pi Ls - (R^T W Pi - Pi W^T R)": _fro(
            ls * pi[None, :] - pi[:, None] * ls - ((r.T @ w) * pi[None, :] - pi[:, None] * (w.T @ r))
        ),
        "diag L - H'": float(np.max(np.abs(np.diag(l_) - hp))),
        "diag Ls - (sH)'": float(np.max(np.abs(np.diag(ls) - shp))),
        "L - hermite L": _fro(l_ - herm.l),
        "Ls - hermite Ls": _fro(ls - herm.ls),
    }
    return out


def same_point_jordan_residuals(sys: StateSpaceSystem, point, size: int = 3) -> dict[str, float]:
    """Checks for ``size`` interpolation conditions all placed at one finite point.

    Uses Jordan-structured data ``M = point I - J^T``, ``Lam = point I - J``,
    ``L^T = e_1``, ``R = e_1^T`` (SISO). The projector products relate to the
    Taylor-coefficient Hankel matrices ``Hk[i, j] = H^{(i+j+k)}(point)/(i+j+k)!``
    by ``-K_L E K_R = D H1 D`` and ``-K_L A K_R = point (D H1 D) + D H0 D`` with
    ``D = diag((-1)^i)``. The report also covers the two ``J``-displacement
    identities ``H1 J - J^T H1 = e1 c^T - c e1^T`` with ``c = (h0, ..., h_{size-1})``
    and ``H0 J - J^T H0 = e1 g^T - g e1^T`` with ``g = (0, h0, ..., h_{size-2})``,
    plus the projector Sylvester equations.
    """
    if sys.n_inputs != 1 or sys.n_outputs != 1:
        raise ValueError("same-point Jordan data are implemented for SISO systems only")
    if size < 1:
        raise ValueError("size must be >= 1")
    s = complex(point)
    phi = sys.resolvent(s)
    kl_rows, kr_cols = [], []
    x_row, x_col = sys.c @ phi, phi @ sys.b
    for _ in range(size):
        kl_rows.append(x_row[0])
        kr_cols.append(x_col[:, 0])
        x_row = x_row @ sys.e @ phi
        x_col = phi @ sys.e @ x_col
    kl = np.array(kl_rows)
    kr = np.array(kr_cols).T
    taylor = [t[0, 0] for t in sys.taylor(s, 2 * size)]
    idx = np.arange(size)[:, None] + np.arange(size)[None, :]
    coef = np.array(taylor)
    h1 = coef[idx + 1]
    h0 = coef[idx]
    d = np.diag((-1.0) ** np.arange(size))
    l_disp = h1
    ls_disp = s * h1 + h0
    jr = np.eye(size, k=1)
    e1 = np.zeros((size, 1))
    e1[0, 0] = 1.0
    top = coef[:size].reshape(1, -1)
    shifted = np.concatenate([[0.0], coef[: size - 1]]).reshape(1, -1)
    m_jordan = s * np.eye(size) - jr.T
    lam_jordan = s * np.eye(size) - jr
    return {
        "scale": _fro(h1),
        "-K_L E K_R - D H1 D": _fro(-kl @ sys.e @ kr - d @ h1 @ d),
        "-K_L A K_R - (s D H1 D + D H0 D)": _fro(-kl @ sys.a @ kr - (s * d @ h1 @ d + d @ h0 @ d)),
        "L J - J^T L - (e1 h0^T - h0 e1^T)": _fro(l_disp @ jr - jr.T @ l_disp - (e1 @ top - top.T @ e1.T)),
        "(Ls - sL) J - J^T (Ls - sL) - (e1 g^T - g e1^T)": _fro(
            (ls_disp - s * l_disp) @ jr - jr.T @ (ls_disp - s * l_disp) - (e1 @ shifted - shifted.T @ e1.T)
        ),
        "M K_L E - K_L A - e1 C": _fro(m_jordan @ kl @ sys.e - kl @ sys.a - e1 @ sys.c),
        "E K_R Lam - A K_R - B e1^T": _fro(sys.e @ kr @ lam_jordan - sys.a @ kr - sys.b @ e1.T),
    }


# ---------------------------------------------------------------- recovery and Hankel data


def recover_transfer(quad: LoewnerQuadruple, s, rtol: float = nx.DEFAULT_RTOL) -> np.ndarray:
    """``W (Ls - s L)^+ V``.

    The pseudoinverse is truncated to the normal rank ``r = rank [L, Ls]``.
    Raises :class:`~loewnerpencil.numerics.NumericsError` when the ``r``-th
    singular value of ``Ls - s L`` falls below ``rtol`` times the largest,
    i.e. ``s`` is (numerically) an eigenvalue of the pencil.
    """
    s = complex(s)
    pencil = quad.ls - s * quad.l
    normal = nx.numerical_rank(np.hstack([quad.l, quad.ls]), RANK_RTOL)
    normal = min(normal, nx.numerical_rank(np.vstack([quad.l, quad.ls]), RANK_RTOL))
    if normal == 0:
        raise nx.NumericsError("the Loewner pencil vanishes")
    f = nx.svd(pencil)
    sv = f.singular_values
    if sv[normal - 1] <= rtol * sv[0]:
        raise nx.NumericsError(f"s = {s!r} is an eigenvalue of the Loewner pencil")
    u, v = f.u[:, :normal], f.v[:, :normal]
    return (quad.w @ v) @ ((u.conj().T @ quad.v) / sv[:normal, None])


def hankel_pencil(markov, q: int, k: int) -> LoewnerQuadruple:
    """Hankel quadruple from SISO Markov parameters ``h_1, h_2, ...``.

    ``L[i, j] = h_{i+j+1}`` and ``Ls[i, j] = h_{i+j+2}`` (0-based ``i, j``),
    ``W = [h_1 ... h_k]`` and ``V = [h_1 ... h_q]^T``.
    """
    h = np.array([np.asarray(x, dtype=complex).reshape(-1) for x in markov])
    if h.ndim != 2 or h.shape[1] != 1:
        raise ValueError("hankel_pencil expects scalar (SISO) Markov parameters")
    h = h[:, 0]
    if q < 1 or k < 1:
        raise ValueError("q and k must be positive")
    if h.size < q + k:
        raise ValueError(f"need at least q + k = {q + k} Markov parameters, got {h.size}")
    idx = np.arange(q)[:, None] + np.arange(k)[None, :]
    prov = {"kind": "hankel", "q": q, "k": k, "p": 1, "m": 1}
    return LoewnerQuadruple(w=h[None, :k], l=h[idx], ls=h[idx + 1], v=h[:q, None], provenance=prov)


def hankel_identity_residuals(quad: LoewnerQuadruple) -> dict[str, float]:
    """Displacement identities of the Hankel pair ``(H, sigma H)``.

    ``H J - J^T H = e1 e1^T H J - J^T H e1 e1^T`` and
    ``sigma H J - J^T sigma H = e1 e1^T H - H e1 e1^T``.
    """
    hk, sh = quad.l, quad.ls
    q, k = hk.shape
    jq, jk = np.eye(q, k=1), np.eye(k, k=1)
    eq = np.zeros((q, q))
    eq[0, 0] = 1.0
    ek = np.zeros((k, k))
    ek[0, 0] = 1.0
    return {
        "H J - J^T H": _fro(hk @ jk - jq.T @ hk - (eq @ hk @ jk - jq.T @ hk @ ek)),
        "sH J - J^T sH": _fro(sh @ jk - jq.T @ sh - (eq @ hk - hk @ ek)),
        "H - J^T sH - e1 e1^T H": _fro(hk - jq.T @ sh - eq @ hk),
        "H - sH J - H e1 e1^T": _fro(hk - sh @ jk - hk @ ek),
    }


def _require_stable(pr: SisoPoleResidue) -> None:
    bad = np.flatnonzero(pr.poles.real >= 0)
    if bad.size:
        raise ValueError(f"system must be stable; pole {bad[0]} = {pr.poles[bad[0]]!r} has Re >= 0")


def hankel_singular_values_via_loewner(pr: SisoPoleResidue) -> np.ndarray:
    """Hankel singular values from the Loewner matrix at ``mu = lam = -conj(pi)``.

    Returns ``sqrt(|eig(L^* Gamma)|)`` sorted nonincreasing.
    """
    _require_stable(pr)
    pts = -np.conj(pr.poles)
    quad = build_hermite_loewner(sample_hermite(pr, pts))
    ev = nx.eig_small(quad.l.conj().T * pr.residues[None, :])
    return np.sort(np.sqrt(np.abs(ev)))[::-1]


def gramian_hankel_singular_values(pr: SisoPoleResidue) -> np.ndarray:
    """Hankel singular values from the closed-form Gramians of ``A = Pi, B = 1, C = 1^T Gamma``.

    ``P = C_{-pi, pi*}`` and ``Q = -Gamma^* C_{pi*, -pi} Gamma``.
    """
    _require_stable(pr)
    pi, g = pr.poles, pr.residues
    p_ = cauchy(-pi, np.conj(pi))
    q_ = -(np.conj(g)[:, None] * cauchy(np.conj(pi), -pi) * g[None, :])
    ev = nx.eig_small(p_ @ q_)
    return np.sort(np.sqrt(np.abs(ev)))[::-1]
