"""First-order eigenvalue sensitivities of Loewner pencils.

Two notions are computed for every simple eigenvalue ``pi_i`` of
``(Ls, L)``:

* the unstructured sensitivity ``rho_i``, the worst first-order shift over
  arbitrary perturbations with ``||dL|| <= omega_0`` and ``||dLs|| <= omega_1``;
* the structured sensitivity ``eta_i``, the 2-norm of the first-order shifts
  caused by multiplicative noise ``v_j -> v_j (1 + eps_j)`` on each single
  measurement.

Eigenvectors are normalized through the Cauchy factors of the pencil, so
that ``p_i^T L q_i = -gamma_i`` with ``gamma_i`` the residue at ``pi_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numerics as nx
from .loewner import (
    HermiteDataSet,
    TangentialDataSet,
    build_hermite_loewner,
    build_loewner,
    cauchy,
    cauchy_zero_diagonal,
    generalized_cauchy_left,
    generalized_cauchy_right,
    inverse_cauchy_closed_form,
    sample_tangential,
)
from .systems import MimoPoleResidue, SisoPoleResidue

__all__ = [
    "EigenTriple",
    "UnstructuredReport",
    "StructuredReport",
    "MonteCarloResult",
    "DistanceScan",
    "eigen_triples",
    "eigen_triples_from_pencil",
    "first_order_shift",
    "rho_unstructured",
    "unstructured_report",
    "structured_S",
    "structured_S_closed_form",
    "structured_S_expanded",
    "structured_T",
    "eta_report",
    "structured_report",
    "monte_carlo_poles",
    "distance_scaling",
]

RESIDUE_FLOOR = 1e-14


@dataclass(frozen=True, eq=False)
class EigenTriple:
    """Eigenvalue ``value`` with right/left vectors (``Ls q = value L q``, ``p^T Ls = value p^T L``).

    ``residue`` equals ``-p^T L q``.
    """

    value: complex
    right: np.ndarray
    left: np.ndarray
    residue: complex


@dataclass(frozen=True, eq=False)
class UnstructuredReport:
    poles: np.ndarray
    rho: np.ndarray
    zeta: np.ndarray
    bound_per_pole: np.ndarray
    bound_l2: float
    bound_l1: float
    weights: tuple[float, float]
    cond_left: float = float("nan")
    cond_right: float = float("nan")

    @property
    def rho_l2(self) -> float:
        return float(np.linalg.norm(self.rho))

    @property
    def rho_l1(self) -> float:
        return float(np.sum(self.rho))


@dataclass(frozen=True, eq=False)
class StructuredReport:
    """Structured sensitivities.

    ``blocks`` maps a label (``"mu"``/``"lambda"`` for distinct points,
    ``"value"``/``"derivative"`` for coincident ones) to the entrywise
    modulus ``|S|`` of the sensitivity matrix, with one row per measurement
    and one column per pole. ``eta_abs`` holds the same matrices divided by
    the measurement moduli (NaN where a measurement vanishes).
    """

    poles: np.ndarray
    blocks: dict[str, np.ndarray]
    eta: np.ndarray
    eta_abs: dict[str, np.ndarray]
    sigmas: tuple[float, ...] = ()
    gaussian_std: dict[float, np.ndarray] = field(default_factory=dict)

    def predicted_std(self, sigma: float) -> np.ndarray:
        """Standard deviation of ``pi_i^(1)`` for complex Gaussian noise of std ``sigma``."""
        return sigma * self.eta


# ---------------------------------------------------------------- eigen-triples


def _siso_factors(sys: SisoPoleResidue, data) -> tuple[np.ndarray, np.ndarray]:
    """Cauchy factors ``(C_left, C_right)`` with ``L = -C_left Gamma C_right^T``."""
    if isinstance(data, HermiteDataSet):
        c = cauchy(data.mu, sys.poles)
        return c, c
    if not data.is_siso:
        raise ValueError("SISO pole-residue system needs SISO data")
    cl = data.left_dirs[:, 0][:, None] * cauchy(data.mu, sys.poles)
    cr = data.right_dirs[:, 0][:, None] * cauchy(data.lam, sys.poles)
    return cl, cr


def eigen_triples(sys: SisoPoleResidue | MimoPoleResidue, data) -> list[EigenTriple]:
    """Closed-form eigen-triples of the exact-data pencil.

    SISO: ``q_i = (C_{lam,pi}^T)^+ e_i`` and ``p_i = (C_{mu,pi}^T)^+ e_i`` so that
    ``p_i^T L q_i = -gamma_i``. MIMO: ``q_i = C_R^+ e_i`` and ``p_i = (C_L^T)^+ e_i``
    (residue 1 in this normalization). Requires ``q, k >= n``.
    """
    if isinstance(sys, MimoPoleResidue):
        if isinstance(data, HermiteDataSet):
            raise ValueError("Hermite data are SISO only")
        left = nx.pinv(generalized_cauchy_left(data.mu, data.left_dirs, sys).T)
        right = nx.pinv(generalized_cauchy_right(data.lam, data.right_dirs, sys))
        res = np.ones(sys.order, dtype=complex)
    else:
        cl, cr = _siso_factors(sys, data)
        left = nx.pinv(cl.T)
        right = nx.pinv(cr.T)
        res = sys.residues
    n = sys.order
    if left.shape[0] < n or right.shape[0] < n:
        raise ValueError(f"need at least n = {n} left and right measurements")
    return [EigenTriple(complex(sys.poles[i]), right[:, i], left[:, i], complex(res[i])) for i in range(n)]


def eigen_triples_from_pencil(ls, l) -> list[EigenTriple]:  # noqa: E741
    """Eigen-triples of a square regular pencil via the generalized eigensolver."""
    vals, right, left = nx.generalized_eig(ls, l)
    out = []
    for i, z in enumerate(vals):
        q, p = right[:, i], left[:, i]
        out.append(EigenTriple(complex(z), q, p, complex(-(p @ l @ q))))
    return out


def first_order_shift(triple: EigenTriple, l, dl, dls) -> complex:  # noqa: E741
    """``p^T (dLs - pi dL) q / (p^T L q)``."""
    l = nx.as_matrix(l, "L")  # noqa: E741
    p, q = triple.left, triple.right
    den = p @ l @ q
    if abs(den) <= 1e-14 * nx.norm2(l) * np.linalg.norm(p) * np.linalg.norm(q):
        raise nx.NumericsError(
            f"p^T L q vanishes for eigenvalue {triple.value!r}: eigenpair is defective or ill-normalized"
        )
    num = p @ (np.asarray(dls, dtype=complex) - triple.value * np.asarray(dl, dtype=complex)) @ q
    return complex(num / den)


# ---------------------------------------------------------------- unstructured


def rho_unstructured(
    triples: list[EigenTriple],
    l,  # noqa: E741
    ls,
    weights: tuple[float, float] | None = None,
    left_factor=None,
    right_factor=None,
) -> UnstructuredReport:
    """Unstructured sensitivities and their Cauchy-conditioning bounds.

    ``rho_i = ||p_i|| (omega_1 + |pi_i| omega_0) ||q_i|| / |p_i^T L q_i|`` with
    default weights ``omega_0 = ||L||_2`` and ``omega_1 = ||Ls||_2``. The bounds
    use ``zeta_i = (|pi_i| max|gamma| + max|pi gamma|) / |gamma_i|`` and the
    condition numbers of ``left_factor`` (``C_{mu,pi}``) and ``right_factor``
    (``C_{lam,pi}``); they are NaN when the factors are not supplied.
    """
    l = nx.as_matrix(l, "L")  # noqa: E741
    ls = nx.as_matrix(ls, "Ls")
    if weights is None:
        weights = (nx.norm2(l), nx.norm2(ls))
    w0, w1 = float(weights[0]), float(weights[1])
    pi = np.array([t.value for t in triples])
    g = np.array([t.residue for t in triples])
    small = np.flatnonzero(np.abs(g) < RESIDUE_FLOOR)
    if small.size:
        raise ValueError(f"residue of pole {small[0]} is below {RESIDUE_FLOOR}; rho is undefined")
    rho = np.array(
        [np.linalg.norm(t.left) * (w1 + abs(t.value) * w0) * np.linalg.norm(t.right) / abs(t.left @ l @ t.right) for t in triples]
    )
    zeta = (np.abs(pi) * np.max(np.abs(g)) + np.max(np.abs(pi * g))) / np.abs(g)
    nan = float("nan")
    kl = kr = nan
    b_pole = np.full(rho.shape, nan)
    b2 = b1 = nan
    if left_factor is not None and right_factor is not None:
        cl = nx.as_matrix(left_factor)
        cr = nx.as_matrix(right_factor)
        kl, kr = nx.cond2(cl), nx.cond2(cr)
        b_pole = zeta * kl * kr
        b2 = float(np.linalg.norm(zeta)) * kl * kr
        fl = np.linalg.norm(nx.pinv(cl.T)) ** 2
        fr = np.linalg.norm(nx.pinv(cr.T)) ** 2
        b1 = 0.5 * float(np.max(zeta)) * (nx.norm2(cl) ** 2 * fl + nx.norm2(cr) ** 2 * fr)
    return UnstructuredReport(
        poles=pi,
        rho=rho,
        zeta=zeta,
        bound_per_pole=b_pole,
        bound_l2=b2,
        bound_l1=b1,
        weights=(w0, w1),
        cond_left=kl,
        cond_right=kr,
    )


def unstructured_report(sys: SisoPoleResidue, data, weights=None) -> UnstructuredReport:
    """:func:`rho_unstructured` for exact data of a SISO pole-residue system."""
    quad = build_hermite_loewner(data) if isinstance(data, HermiteDataSet) else build_loewner(data)
    cl, cr = _siso_factors(sys, data)
    return rho_unstructured(eigen_triples(sys, data), quad.l, quad.ls, weights, cl, cr)


# ---------------------------------------------------------------- structured


def _require_siso(data: TangentialDataSet) -> None:
    if not data.is_siso:
        raise ValueError("structured sensitivities are implemented for SISO data")


def structured_S(data: TangentialDataSet, triples: list[EigenTriple]) -> tuple[np.ndarray, np.ndarray]:
    """Sensitivity matrices for multiplicative noise on left and right samples.

    ``S_mu[j, i]`` is the first-order shift of ``pi_i`` per unit relative
    perturbation of ``v_j``:
    ``S_mu e_i = diag(p_i) (pi_i I - M) diag(v) C_{mu,lam} diag(r) q_i / gamma_i``,
    and ``S_lam e_i = diag(q_i) (pi_i I - Lam) diag(w) C_{lam,mu} diag(l) p_i / gamma_i``.
    """
    if isinstance(data, HermiteDataSet):
        raise ValueError("coincident left/right points: use structured_T")
    _require_siso(data)
    mu, lam = data.mu, data.lam
    v, w = data.left_vals[:, 0], data.right_vals[:, 0]
    ld, rd = data.left_dirs[:, 0], data.right_dirs[:, 0]
    c_ml = cauchy(mu, lam) * rd[None, :]
    c_lm = cauchy(lam, mu) * ld[None, :]
    n = len(triples)
    s_mu = np.empty((data.q, n), dtype=complex)
    s_lam = np.empty((data.k, n), dtype=complex)
    for i, t in enumerate(triples):
        p, q, z = t.left, t.right, t.value
        s_mu[:, i] = p * (z - mu) * v * (c_ml @ q) / t.residue
        s_lam[:, i] = q * (z - lam) * w * (c_lm @ p) / t.residue
    return s_mu, s_lam


def structured_S_closed_form(data: TangentialDataSet, sys: SisoPoleResidue) -> tuple[np.ndarray, np.ndarray]:
    """:func:`structured_S` with eigenvectors from the explicit Cauchy inverse (``q = k = n``, unit directions)."""
    _require_siso(data)
    n = sys.order
    if data.q != n or data.k != n:
        raise ValueError(f"closed form needs q = k = n = {n}, got q = {data.q}, k = {data.k}")
    if not (np.all(data.left_dirs == 1) and np.all(data.right_dirs == 1)):
        raise ValueError("closed form assumes unit directions")
    left = inverse_cauchy_closed_form(data.mu, sys.poles).T
    right = inverse_cauchy_closed_form(data.lam, sys.poles).T
    triples = [EigenTriple(complex(sys.poles[i]), right[:, i], left[:, i], complex(sys.residues[i])) for i in range(n)]
    return structured_S(data, triples)


def structured_S_expanded(data: TangentialDataSet, sys: SisoPoleResidue) -> np.ndarray:
    """``S_mu`` written out entrywise in terms of poles and points (``q = k = n``).

    ``S_mu[j, i] = -(v_j / gamma_i) prod_k (mu_j - pi_k)(pi_i - mu_k)(pi_i - lam_k)
    / (prod_{k != j} (mu_j - mu_k) prod_{k != i} (pi_i - pi_k)^2)
    * sum_m prod_{k != i} (pi_k - lam_m) / ((mu_j - lam_m) prod_{k != m} (lam_k - lam_m))``.
    """
    _require_siso(data)
    n = sys.order
    if data.q != n or data.k != n:
        raise ValueError(f"expanded form needs q = k = n = {n}")
    pi, g = sys.poles, sys.residues
    mu, lam, v = data.mu, data.lam, data.left_vals[:, 0]

    def prod_except(x, skip):
        return np.prod(np.delete(x, skip))

    out = np.empty((n, n), dtype=complex)
    for j in range(n):
        for i in range(n):
            pre = np.prod((mu[j] - pi) * (pi[i] - mu) * (pi[i] - lam))
            den = prod_except(mu[j] - mu, j) * prod_except(pi[i] - pi, i) ** 2
            tail = sum(
                prod_except(pi - lam[m], i) / ((mu[j] - lam[m]) * prod_except(lam - lam[m], m)) for m in range(n)
            )
            out[j, i] = -v[j] / g[i] * pre / den * tail
    return out


def structured_T(data: HermiteDataSet, triples: list[EigenTriple]) -> tuple[np.ndarray, np.ndarray]:
    """Sensitivity matrices for coincident points (value and derivative samples).

    ``T e_i = (2 diag(q) (pi_i I - M) diag(v) C q - diag(q) diag(v) q) / gamma_i`` with
    ``C`` the zero-diagonal Cauchy matrix of ``mu``, and
    ``T' e_i = diag(q) (pi_i I - M) diag(v') q / gamma_i``.
    """
    mu, v, vp = data.mu, data.values, data.derivatives
    c = cauchy_zero_diagonal(mu)
    n = len(triples)
    t_val = np.empty((data.q, n), dtype=complex)
    t_der = np.empty((data.q, n), dtype=complex)
    for i, t in enumerate(triples):
        q, z = t.right, t.value
        t_val[:, i] = (2.0 * q * (z - mu) * v * (c @ q) - q * v * q) / t.residue
        t_der[:, i] = q * (z - mu) * vp * q / t.residue
    return t_val, t_der


def eta_report(blocks: dict[str, np.ndarray], measurements: dict[str, np.ndarray], poles, sigmas=()) -> StructuredReport:
    """Collect ``|S|`` blocks into the per-pole structured sensitivity ``eta``.

    ``eta_i = sqrt(sum over both blocks of |S[j, i]|^2)``; the Gaussian
    prediction for noise of std ``sigma`` is ``sigma * eta``.
    """
    mods = {k: np.abs(np.asarray(b)) for k, b in blocks.items()}
    eta = np.sqrt(sum(np.sum(m**2, axis=0) for m in mods.values()))
    eta_abs = {}
    for k, m in mods.items():
        meas = np.abs(np.asarray(measurements[k], dtype=complex)).reshape(-1, 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            eta_abs[k] = np.where(meas > 0, m / np.where(meas > 0, meas, 1.0), np.nan)
    sig = tuple(float(s) for s in sigmas)
    return StructuredReport(
        poles=np.asarray(poles, dtype=complex),
        blocks=mods,
        eta=eta,
        eta_abs=eta_abs,
        sigmas=sig,
        gaussian_std={s: s * eta for s in sig},
    )


def structured_report(sys: SisoPoleResidue, data, sigmas=()) -> StructuredReport:
    """:func:`eta_report` for exact data of a SISO pole-residue system."""
    triples = eigen_triples(sys, data)
    if isinstance(data, HermiteDataSet):
        t_val, t_der = structured_T(data, triples)
        return eta_report(
            {"value": t_val, "derivative": t_der},
            {"value": data.values, "derivative": data.derivatives},
            sys.poles,
            sigmas,
        )
    s_mu, s_lam = structured_S(data, triples)
    return eta_report(
        {"mu": s_mu, "lambda": s_lam},
        {"mu": data.left_vals[:, 0], "lambda": data.right_vals[:, 0]},
        sys.poles,
        sigmas,
    )


# ---------------------------------------------------------------- Monte Carlo


@dataclass(frozen=True, eq=False)
class MonteCarloResult:
    """Pole clouds from noisy rebuilds.

    ``samples[t, i]`` is the pole matched to ``reference[i]`` in trial ``t``
    (NaN for failed trials). ``outliers[t]`` is set when some match distance
    exceeds 10 predicted standard deviations (only if a prediction was given).
    """

    reference: np.ndarray
    samples: np.ndarray
    failed: np.ndarray
    outliers: np.ndarray
    sigma: float
    seed: int

    @property
    def ok(self) -> np.ndarray:
        return ~self.failed

    @property
    def mean(self) -> np.ndarray:
        return np.mean(self.samples[self.ok], axis=0)

    @property
    def std(self) -> np.ndarray:
        """Per-pole sample standard deviation ``sqrt(mean |x - mean|^2)`` (ddof = 1)."""
        s = self.samples[self.ok]
        if s.shape[0] < 2:
            return np.full(self.reference.shape, np.nan)
        return np.sqrt(np.sum(np.abs(s - s.mean(axis=0)) ** 2, axis=0) / (s.shape[0] - 1))


def _complex_noise(rng: np.random.Generator, size: int, sigma: float) -> np.ndarray:
    # Circular complex Gaussian with E|eps|^2 = sigma^2.
    z = rng.standard_normal((2, size))
    return sigma / np.sqrt(2.0) * (z[0] + 1j * z[1])


def monte_carlo_poles(
    data,
    sigma: float,
    trials: int,
    seed: int,
    reference=None,
    predicted_std=None,
) -> MonteCarloResult:
    """Rebuild the pencil from ``trials`` noisy copies of ``data`` and track the poles.

    Noise is multiplicative, ``v_j -> v_j (1 + eps_j)``, on every left and right
    sample (values and derivatives for Hermite data). Trial ``t`` draws from
    the ``t``-th child of ``numpy.random.SeedSequence(seed)``, so results do not
    depend on execution order.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    hermite = isinstance(data, HermiteDataSet)
    build = build_hermite_loewner if hermite else build_loewner
    base = build(data)
    if reference is None:
        reference = nx.generalized_eig(base.ls, base.l)[0]
    reference = np.asarray(reference, dtype=complex)
    n = reference.size
    samples = np.full((trials, n), np.nan + 0j)
    failed = np.zeros(trials, dtype=bool)
    outliers = np.zeros(trials, dtype=bool)
    pred = None if predicted_std is None else np.asarray(predicted_std, dtype=float)
    children = np.random.SeedSequence(seed).spawn(trials)
    for t, child in enumerate(children):
        rng = np.random.default_rng(child)
        try:
            if hermite:
                e1 = _complex_noise(rng, data.q, sigma)
                e2 = _complex_noise(rng, data.q, sigma)
                noisy = data.with_values(data.values * (1 + e1), data.derivatives * (1 + e2))
            else:
                e1 = _complex_noise(rng, data.q, sigma)[:, None]
                e2 = _complex_noise(rng, data.k, sigma)[:, None]
                noisy = data.with_values(data.left_vals * (1 + e1), data.right_vals * (1 + e2))
            quad = build(noisy)
            vals = nx.generalized_eig(quad.ls, quad.l)[0]
            vals = vals[np.isfinite(vals)]
            idx = nx.match_nearest(reference, vals)
        except (nx.NumericsError, ValueError):
            failed[t] = True
            continue
        samples[t] = vals[idx]
        if pred is not None:
            outliers[t] = bool(np.any(np.abs(samples[t] - reference) > 10.0 * pred))
    return MonteCarloResult(reference, samples, failed, outliers, float(sigma), int(seed))


# ---------------------------------------------------------------- distance scaling


@dataclass(frozen=True, eq=False)
class DistanceScan:
    """Sensitivities of a point cluster translated away from the poles.

    ``distance[s]`` is the distance between the centroids of the translated
    interpolation points and of the poles; ``rho[s, i]`` and ``eta[s, i]`` are
    the sensitivities of pole ``i``. Slopes are least-squares fits of
    ``log rho`` and ``log eta`` against ``log distance``.
    """

    shifts: np.ndarray
    distance: np.ndarray
    poles: np.ndarray
    rho: np.ndarray
    eta: np.ndarray
    rho_slope: np.ndarray
    eta_slope: np.ndarray


def distance_scaling(sys: SisoPoleResidue, mu, lam, shifts) -> DistanceScan:
    """Evaluate ``rho`` and ``eta`` with points ``mu + t`` and ``lam + t`` for every shift ``t``."""
    shifts = np.asarray(shifts, dtype=float).ravel()
    if shifts.size < 2:
        raise ValueError("distance scaling needs at least 2 shift values")
    mu = nx.as_vector(mu, "mu")
    lam = nx.as_vector(lam, "lambda")
    centre = np.mean(sys.poles)
    rhos, etas, dist = [], [], []
    for t in shifts:
        data = sample_tangential(sys, mu + t, lam + t)
        rhos.append(unstructured_report(sys, data).rho)
        etas.append(structured_report(sys, data).eta)
        dist.append(abs(np.mean(np.concatenate([mu, lam]) + t) - centre))
    dist_a = np.array(dist)
    if np.any(dist_a <= 0) or np.unique(dist_a).size < 2:
        raise ValueError("shifts must give at least two distinct positive distances")
    rho_a, eta_a = np.array(rhos), np.array(etas)
    x = np.log(dist_a)
    rho_slope = np.polyfit(x, np.log(rho_a), 1)[0]
    eta_slope = np.polyfit(x, np.log(eta_a), 1)[0]
    return DistanceScan(shifts, dist_a, sys.poles.copy(), rho_a, eta_a, rho_slope, eta_slope)

