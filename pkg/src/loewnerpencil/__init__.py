"""Loewner matrix pencils: construction, factorizations and eigenvalue sensitivities."""

from .numerics import NumericsError
from .systems import (
    MimoPoleResidue,
    PoleError,
    PolynomialTF,
    SisoPoleResidue,
    StateSpaceSystem,
    transfer_derivative,
    transfer_eval,
)

__version__ = "0.1.0"

__all__ = [
    "NumericsError",
    "PoleError",
    "StateSpaceSystem",
    "SisoPoleResidue",
    "MimoPoleResidue",
    "PolynomialTF",
    "transfer_eval",
    "transfer_derivative",
]
