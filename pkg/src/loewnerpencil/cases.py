"""Reference systems and interpolation-point sets used by the examples and tests.

Each case is a plain function so callers always get fresh arrays.
"""

from __future__ import annotations

import numpy as np

from .systems import SisoPoleResidue, StateSpaceSystem

__all__ = [
    "two_pole_system",
    "two_pole_state_space",
    "two_pole_points",
    "two_pole_shifted_points",
    "TWO_POLE_SETTINGS",
    "ten_pole_system",
    "ten_pole_points",
    "TEN_POLE_SETTINGS",
    "fifth_order_system",
    "fifth_order_points",
    "fifth_order_hermite_points",
]

# Left (mu) and right (lambda) points for the two-pole system.
_TWO_POLE = {
    1: ([1j, -1j], [0.0, 1.0]),
    2: ([2j, -2j], [0.25, 0.75]),
    3: ([4j, -4j], [0.4, 0.6]),
    4: ([10.0, 11.0], [8.0, 9.0]),
}
TWO_POLE_SETTINGS = tuple(_TWO_POLE)
TEN_POLE_SETTINGS = (1, 2)


def two_pole_system() -> SisoPoleResidue:
    """``H(s) = 0.5/(s + 2.1) + 0.5/(s + 0.1)``."""
    return SisoPoleResidue(poles=[-2.1, -0.1], residues=[0.5, 0.5])


def two_pole_state_space() -> StateSpaceSystem:
    """Same transfer function as :func:`two_pole_system` in symmetric state-space form."""
    return StateSpaceSystem(
        c=[[0.0, 1.0]],
        e=np.eye(2),
        a=[[-1.1, 1.0], [1.0, -1.1]],
        b=[[0.0], [1.0]],
    )


def two_pole_points(setting: int) -> tuple[np.ndarray, np.ndarray]:
    """``(mu, lam)`` for one of the four two-pole settings."""
    if setting not in _TWO_POLE:
        raise ValueError(f"unknown two-pole setting {setting}; choose from {TWO_POLE_SETTINGS}")
    mu, lam = _TWO_POLE[setting]
    return np.array(mu, dtype=complex), np.array(lam, dtype=complex)


def two_pole_shifted_points(t: float) -> tuple[np.ndarray, np.ndarray]:
    """``mu = (t+1, t+3)``, ``lam = (t, t+2)``: a point cluster moved away from the poles by ``t``."""
    return np.array([t + 1.0, t + 3.0], dtype=complex), np.array([t, t + 2.0], dtype=complex)


def ten_pole_system() -> SisoPoleResidue:
    """``H(s) = sum_{i=1}^{10} 1/(s + i)``."""
    return SisoPoleResidue(poles=-np.arange(1.0, 11.0), residues=np.ones(10))


def ten_pole_points(setting: int) -> tuple[np.ndarray, np.ndarray]:
    """``(mu, lam)`` for the ten-pole system.

    Setting 1 interleaves the points with the poles; setting 2 puts all right
    points in ``[-5.25, -0.75]`` and all left points in ``[-10.25, -5.75]``.
    """
    if setting == 1:
        lam = -np.arange(10.25, 1.0, -1.0)
        mu = lam + 0.5
    elif setting == 2:
        lam = -np.arange(5.25, 0.5, -0.5)
        mu = -np.arange(10.25, 5.5, -0.5)
    else:
        raise ValueError(f"unknown ten-pole setting {setting}; choose from {TEN_POLE_SETTINGS}")
    return mu.astype(complex), lam.astype(complex)


def fifth_order_system() -> SisoPoleResidue:
    """``H(s) = (s^4 + s^3 - 2s - 1) / ((s+1)(s^2+2s+2)(s^2+s+1))`` in pole-residue form."""
    h = np.sqrt(3.0) / 2.0
    r = np.sqrt(3.0) / 3.0
    poles = [-1.0, -1.0 - 1.0j, -1.0 + 1.0j, -0.5 - h * 1j, -0.5 + h * 1j]
    residues = [1.0, -0.5j, 0.5j, -r * 1j, r * 1j]
    return SisoPoleResidue(poles=poles, residues=residues)


def fifth_order_points() -> tuple[np.ndarray, np.ndarray]:
    """``lam = 2j/9`` for ``j = 1..5`` and ``mu = -lam``."""
    lam = np.arange(2.0, 11.0, 2.0) / 9.0
    return (-lam).astype(complex), lam.astype(complex)


def fifth_order_hermite_points() -> np.ndarray:
    """Coincident left/right points ``2j/9``, ``j = 1..5``."""
    return (np.arange(2.0, 11.0, 2.0) / 9.0).astype(complex)
