"""Dense complex linear algebra kernels used throughout the package.

Every routine takes and returns plain numpy arrays (``complex128`` for
matrices). The decompositions themselves are delegated to LAPACK through
numpy/scipy; this module adds input validation, the truncation and
sentinel conventions the rest of the package relies on, and errors that
name what went wrong.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as spla

__all__ = [
    "NumericsError",
    "SvdResult",
    "as_matrix",
    "as_vector",
    "svd",
    "pinv",
    "cond2",
    "sigma_min",
    "norm2",
    "numerical_rank",
    "eig_small",
    "generalized_eig",
    "match_nearest",
]

MAX_SMALL_ORDER = 32
DEFAULT_RTOL = 1e-12
# Condition number of E above which generalized_eig refuses to invert.
E_COND_LIMIT = 1e12
COND_ZERO_SIGMA = 1e-300


class NumericsError(ArithmeticError):
    """A decomposition failed or its input violates a precondition."""


@dataclass(frozen=True)
class SvdResult:
    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.singular_values) @ self.v.conj().T


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex array, rejecting NaN/Inf and empty shapes."""
    a = np.array(m, dtype=complex)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    elif a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return a


def as_vector(x, name: str = "vector") -> np.ndarray:
    a = np.atleast_1d(np.array(x, dtype=complex))
    if a.ndim != 1 or a.size < 1:
        raise ValueError(f"{name} must be a non-empty 1-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return a


def svd(m) -> SvdResult:
    """Thin SVD ``m = U diag(s) V^H`` with ``s`` sorted nonincreasing."""
    a = as_matrix(m)
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericsError(f"SVD did not converge for {a.shape} matrix: {exc}") from exc
    return SvdResult(u=u, singular_values=s, v=vh.conj().T)


def pinv(m, rtol: float = DEFAULT_RTOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse, truncating singular values below ``rtol * sigma_max``."""
    if not 0.0 < rtol < 1.0:
        raise ValueError(f"rtol must lie in (0, 1), got {rtol}")
    res = svd(m)
    s = res.singular_values
    keep = s > rtol * s[0] if s[0] > 0 else np.zeros_like(s, dtype=bool)
    inv_s = np.zeros_like(s)
    inv_s[keep] = 1.0 / s[keep]
    return (res.v * inv_s) @ res.u.conj().T


def norm2(m) -> float:
    """Spectral norm."""
    return float(svd(m).singular_values[0])


def cond2(m) -> float:
    """2-norm condition number ``sigma_max / sigma_min``; ``inf`` for numerically singular input."""
    s = svd(m).singular_values
    if s[0] == 0.0:
        raise NumericsError("condition number of the zero matrix is undefined")
    if s[-1] < COND_ZERO_SIGMA:
        return float("inf")
    return float(s[0] / s[-1])


def sigma_min(m) -> float:
    a = as_matrix(m)
    return float(np.linalg.svd(a, compute_uv=False)[-1])


def numerical_rank(m, rtol: float = 1e-9) -> int:
    s = svd(m).singular_values
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))


def eig_small(m) -> np.ndarray:
    """Eigenvalues of a square matrix of order at most 32 (unordered)."""
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"eig_small needs a square matrix, got {a.shape}")
    if a.shape[0] > MAX_SMALL_ORDER:
        raise ValueError(f"eig_small is limited to order {MAX_SMALL_ORDER}, got {a.shape[0]}")
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NumericsError(f"eigenvalue iteration did not converge: {exc}") from exc


def generalized_eig(a, e):
    """Eigen-triples of the pencil ``a - z e``.

    Returns ``(values, right, left)`` where column ``i`` of ``right`` is ``q``
    with ``a q = z e q`` and column ``i`` of ``left`` is ``p`` with
    ``p^T a = z p^T e`` (plain transpose, not conjugate). Vectors have unit
    2-norm.
    """
    a = as_matrix(a, "a")
    e = as_matrix(e, "e")
    if a.shape != e.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"pencil matrices must be square and equal-sized, got {a.shape} and {e.shape}")
    if cond2(e) >= E_COND_LIMIT:
        raise NumericsError(
            "E is numerically singular (cond >= 1e12); use the pseudoinverse "
            "path (e.g. recover_transfer) instead of an eigendecomposition"
        )
    try:
        w, vl, vr = spla.eig(a, e, left=True, right=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericsError(f"generalized eigenproblem failed: {exc}") from exc
    # scipy's left vectors satisfy vl^H a = w vl^H e; our convention is p^T.
    left = vl.conj()
    right = vr / np.linalg.norm(vr, axis=0)
    left = left / np.linalg.norm(left, axis=0)
    return w, right, left


def match_nearest(reference, candidates) -> np.ndarray:
    """Greedy nearest-distance assignment of ``candidates`` to ``reference``.

    Pairs are taken in order of increasing distance; ties fall to the lower
    reference index. Returns ``idx`` so that ``candidates[idx[i]]`` is matched
    to ``reference[i]``.
    """
    ref = np.atleast_1d(np.asarray(reference, dtype=complex))
    cand = np.atleast_1d(np.asarray(candidates, dtype=complex))
    if cand.size < ref.size:
        raise ValueError(f"need at least {ref.size} candidates, got {cand.size}")
    dist = np.abs(ref[:, None] - cand[None, :])
    order = np.lexsort((np.arange(dist.size) % cand.size, np.arange(dist.size) // cand.size, dist.ravel()))
    idx = np.full(ref.size, -1)
    used_ref = np.zeros(ref.size, dtype=bool)
    used_cand = np.zeros(cand.size, dtype=bool)
    for flat in order:
        i, j = divmod(int(flat), cand.size)
        if used_ref[i] or used_cand[j]:
            continue
        idx[i] = j
        used_ref[i] = used_cand[j] = True
        if used_ref.all():
            break
    return idx
