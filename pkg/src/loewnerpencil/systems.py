"""LTI system models and transfer-function evaluation.

Four representations are supported:

* :class:`StateSpaceSystem` -- descriptor form ``H(s) = C (sE - A)^{-1} B``;
* :class:`SisoPoleResidue` -- ``H(s) = sum_i gamma_i / (s - pi_i)``;
* :class:`MimoPoleResidue` -- ``H(s) = sum_i c_i b_i^T / (s - pi_i)``;
* :class:`PolynomialTF` -- ``H(s) = a_0 + a_1 s + ... + a_{r-1} s^{r-1}``.

All transfer values are returned as ``p x m`` complex arrays, also in the
SISO case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .numerics import as_matrix, as_vector

__all__ = [
    "PoleError",
    "StateSpaceSystem",
    "SisoPoleResidue",
    "MimoPoleResidue",
    "PolynomialTF",
    "SystemModel",
    "transfer_eval",
    "transfer_derivative",
    "transfer_taylor",
    "pole_residue_realization",
    "pole_residue_realization_unit_e",
    "mimo_realization",
    "polynomial_realization",
    "markov_parameters",
    "poles_of",
]

POLE_DISTINCT_TOL = 1e-10
POLE_HIT_TOL = 1e-14


class PoleError(ValueError):
    """Transfer function evaluated at (or numerically on top of) a pole."""


def _check_distinct(poles: np.ndarray) -> None:
    for i in range(poles.size):
        for j in range(i + 1, poles.size):
            if abs(poles[i] - poles[j]) < POLE_DISTINCT_TOL:
                raise ValueError(f"poles {i} and {j} coincide ({poles[i]!r}); poles must be mutually distinct")


@dataclass(frozen=True, eq=False)
class StateSpaceSystem:
    c: np.ndarray
    e: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        c = as_matrix(self.c, "C")
        e = as_matrix(self.e, "E")
        a = as_matrix(self.a, "A")
        b = as_matrix(np.atleast_2d(self.b).reshape(e.shape[0], -1) if np.ndim(self.b) == 1 else self.b, "B")
        n = a.shape[0]
        if a.shape != (n, n) or e.shape != (n, n):
            raise ValueError(f"A and E must be square of equal order, got {a.shape} and {e.shape}")
        if c.shape[1] != n or b.shape[0] != n:
            raise ValueError(f"C {c.shape} / B {b.shape} inconsistent with order {n}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def order(self) -> int:
        return self.a.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.b.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.c.shape[0]

    def resolvent(self, s) -> np.ndarray:
        """``(sE - A)^{-1}``; raises :class:`PoleError` when the pencil is singular at ``s``."""
        m = complex(s) * self.e - self.a
        s_vals = np.linalg.svd(m, compute_uv=False)
        if s_vals[-1] <= POLE_HIT_TOL * max(1.0, s_vals[0]):
            raise PoleError(f"sE - A is singular at s = {complex(s)!r} (s is a generalized eigenvalue)")
        return np.linalg.solve(m, np.eye(self.order, dtype=complex))

    def transfer(self, s) -> np.ndarray:
        return self.c @ self.resolvent(s) @ self.b

    def derivative(self, s) -> np.ndarray:
        phi = self.resolvent(s)
        return -self.c @ phi @ self.e @ phi @ self.b

    def taylor(self, s, count: int) -> list[np.ndarray]:
        """Taylor coefficients ``H^{(k)}(s) / k!`` for ``k = 0..count-1``.

        Uses ``H^{(k)}(s)/k! = (-1)^k C (Phi E)^k Phi B`` with ``Phi = (sE-A)^{-1}``.
        """
        phi = self.resolvent(s)
        x = phi @ self.b
        out = []
        for k in range(count):
            out.append((-1) ** k * (self.c @ x))
            x = phi @ (self.e @ x)
        return out


@dataclass(frozen=True, eq=False)
class SisoPoleResidue:
    poles: np.ndarray
    residues: np.ndarray

    def __post_init__(self):
        poles = as_vector(self.poles, "poles")
        residues = as_vector(self.residues, "residues")
        if poles.shape != residues.shape:
            raise ValueError(f"{poles.size} poles but {residues.size} residues")
        if np.any(residues == 0):
            raise ValueError("all residues must be nonzero")
        _check_distinct(poles)
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "residues", residues)

    @property
    def order(self) -> int:
        return self.poles.size

    def _offsets(self, s) -> np.ndarray:
        d = complex(s) - self.poles
        hit = np.abs(d) < POLE_HIT_TOL * np.maximum(1.0, np.abs(self.poles))
        if hit.any():
            i = int(np.argmax(hit))
            raise PoleError(f"s = {complex(s)!r} coincides with pole {i} ({self.poles[i]!r})")
        return d

    def transfer(self, s) -> np.ndarray:
        return np.array([[np.sum(self.residues / self._offsets(s))]])

    def derivative(self, s) -> np.ndarray:
        return np.array([[-np.sum(self.residues / self._offsets(s) ** 2)]])

    def taylor(self, s, count: int) -> list[np.ndarray]:
        d = self._offsets(s)
        return [np.array([[(-1) ** k * np.sum(self.residues / d ** (k + 1))]]) for k in range(count)]


@dataclass(frozen=True, eq=False)
class MimoPoleResidue:
    """``H(s) = sum_i c_i b_i^T / (s - pi_i)``; ``c`` is ``p x n`` and ``b`` is ``m x n`` (column ``i`` = ``b_i``)."""

    poles: np.ndarray
    c: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        poles = as_vector(self.poles, "poles")
        c = as_matrix(self.c, "c vectors")
        b = as_matrix(self.b, "b vectors")
        n = poles.size
        if c.shape[1] != n or b.shape[1] != n:
            raise ValueError(f"c {c.shape} and b {b.shape} must have one column per pole ({n})")
        if np.any(np.all(c == 0, axis=0)) or np.any(np.all(b == 0, axis=0)):
            raise ValueError("no c_i or b_i may be identically zero")
        _check_distinct(poles)
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "b", b)

    @property
    def order(self) -> int:
        return self.poles.size

    def transfer(self, s) -> np.ndarray:
        d = SisoPoleResidue(self.poles, np.ones_like(self.poles))._offsets(s)
        return (self.c / d) @ self.b.T

    def derivative(self, s) -> np.ndarray:
        d = SisoPoleResidue(self.poles, np.ones_like(self.poles))._offsets(s)
        return -(self.c / d**2) @ self.b.T

    def taylor(self, s, count: int) -> list[np.ndarray]:
        d = SisoPoleResidue(self.poles, np.ones_like(self.poles))._offsets(s)
        return [(-1) ** k * (self.c / d ** (k + 1)) @ self.b.T for k in range(count)]


@dataclass(frozen=True, eq=False)
class PolynomialTF:
    """``coefficients[i] = a_i``, lowest degree first."""

    coefficients: np.ndarray = field()

    def __post_init__(self):
        a = as_vector(self.coefficients, "coefficients")
        if a[-1] == 0:
            raise ValueError("leading coefficient a_{r-1} must be nonzero")
        object.__setattr__(self, "coefficients", a)

    @property
    def degree_bound(self) -> int:
        return self.coefficients.size

    def transfer(self, s) -> np.ndarray:
        return np.array([[np.polynomial.polynomial.polyval(complex(s), self.coefficients)]])

    def derivative(self, s) -> np.ndarray:
        d = np.polynomial.polynomial.polyder(self.coefficients)
        return np.array([[np.polynomial.polynomial.polyval(complex(s), d) if d.size else 0.0]], dtype=complex)

    def taylor(self, s, count: int) -> list[np.ndarray]:
        out = []
        c = self.coefficients.copy()
        for k in range(count):
            val = np.polynomial.polynomial.polyval(complex(s), c) if c.size else 0.0
            out.append(np.array([[val / math.factorial(k)]], dtype=complex))
            c = np.polynomial.polynomial.polyder(c) if c.size > 1 else np.zeros(0, dtype=complex)
        return out


SystemModel = Union[StateSpaceSystem, SisoPoleResidue, MimoPoleResidue, PolynomialTF]


def transfer_eval(sys: SystemModel, s) -> np.ndarray:
    """``H(s)`` as a ``p x m`` array."""
    return sys.transfer(s)


def transfer_derivative(sys: SystemModel, s) -> np.ndarray:
    """``H'(s)`` as a ``p x m`` array."""
    return sys.derivative(s)


def transfer_taylor(sys: SystemModel, s, count: int) -> list[np.ndarray]:
    """Normalized derivatives ``H^{(k)}(s)/k!`` for ``k < count``."""
    return sys.taylor(s, count)


def pole_residue_realization(pr: SisoPoleResidue) -> StateSpaceSystem:
    """Realization ``A = Pi Gamma, E = Gamma, B = Gamma 1, C = 1^T Gamma``."""
    g = np.diag(pr.residues)
    ones = np.ones((pr.order, 1), dtype=complex)
    return StateSpaceSystem(c=ones.T @ g, e=g, a=np.diag(pr.poles) @ g, b=g @ ones)


def pole_residue_realization_unit_e(pr: SisoPoleResidue) -> StateSpaceSystem:
    """Equivalent realization ``A = Pi, E = I, B = 1, C = 1^T Gamma``."""
    n = pr.order
    return StateSpaceSystem(
        c=pr.residues.reshape(1, n),
        e=np.eye(n, dtype=complex),
        a=np.diag(pr.poles),
        b=np.ones((n, 1), dtype=complex),
    )


def mimo_realization(mp: MimoPoleResidue) -> StateSpaceSystem:
    """``A = Pi, E = I, B = [b_1 ... b_n]^T, C = [c_1 ... c_n]``."""
    n = mp.order
    return StateSpaceSystem(c=mp.c, e=np.eye(n, dtype=complex), a=np.diag(mp.poles), b=mp.b.T)


def polynomial_realization(p: PolynomialTF) -> StateSpaceSystem:
    """Descriptor realization of a polynomial transfer function.

    ``E = J_r`` (nilpotent, ones on the superdiagonal), ``A = I_r``,
    ``B = e_r``. With ``C = [a_{r-1} ... a_1 a_0]`` one gets
    ``C (sE - A)^{-1} B = -H(s)`` because ``(sJ - I)^{-1} = -sum_k s^k J^k``;
    the returned ``C`` therefore carries a minus sign so that the
    realization reproduces ``H`` itself.
    """
    r = p.degree_bound
    e = np.eye(r, k=1, dtype=complex)
    b = np.zeros((r, 1), dtype=complex)
    b[-1, 0] = 1.0
    c = -p.coefficients[::-1].reshape(1, r)
    return StateSpaceSystem(c=c, e=e, a=np.eye(r, dtype=complex), b=b)


def markov_parameters(sys: StateSpaceSystem, count: int) -> list[np.ndarray]:
    """``h_i = C A^{i-1} B`` for ``i = 1..count``; requires ``E = I``."""
    if not np.allclose(sys.e, np.eye(sys.order), rtol=0, atol=1e-14):
        raise ValueError("Markov parameters are defined here only for E = I")
    out = []
    x = sys.b
    for _ in range(count):
        out.append(sys.c @ x)
        x = sys.a @ x
    return out


def poles_of(sys: SystemModel) -> np.ndarray:
    if isinstance(sys, (SisoPoleResidue, MimoPoleResidue)):
        return sys.poles.copy()
    if isinstance(sys, PolynomialTF):
        return np.zeros(0, dtype=complex)
    from scipy.linalg import eigvals

    w = eigvals(sys.a, sys.e)
    return w[np.isfinite(w)]
