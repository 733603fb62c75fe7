import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from loewnerpencil import cases
from loewnerpencil.systems import (
    MimoPoleResidue,
    PoleError,
    PolynomialTF,
    SisoPoleResidue,
    StateSpaceSystem,
    markov_parameters,
    mimo_realization,
    pole_residue_realization,
    pole_residue_realization_unit_e,
    polynomial_realization,
    poles_of,
    transfer_derivative,
    transfer_eval,
    transfer_taylor,
)


def _random_pr(seed: int, n: int) -> SisoPoleResidue:
    rng = np.random.default_rng(seed)
    poles = -rng.uniform(0.5, 3, n) + 1j * rng.uniform(-2, 2, n)
    return SisoPoleResidue(poles, rng.standard_normal(n) + 1j * rng.standard_normal(n))


def test_two_pole_state_space_equals_pole_residue():
    pr = cases.two_pole_system()
    ss = cases.two_pole_state_space()
    for s in (0.3, 1j, 2 - 1j, 10.0):
        assert transfer_eval(ss, s)[0, 0] == pytest.approx(pr.transfer(s)[0, 0], rel=1e-13)


def test_fifth_order_transfer_matches_rational_form():
    pr = cases.fifth_order_system()
    for s in (0.5, 1j, 2 + 3j):
        num = s**4 + s**3 - 2 * s - 1
        den = (s + 1) * (s**2 + 2 * s + 2) * (s**2 + s + 1)
        assert pr.transfer(s)[0, 0] == pytest.approx(num / den, rel=1e-13)


def test_ten_pole_transfer_against_extended_precision():
    pr = cases.ten_pole_system()
    for s in (0.25, -0.5 + 2j, 7j):
        assert pr.transfer(s)[0, 0] == pytest.approx(oracles.mp_transfer(pr.poles, pr.residues, s), rel=1e-14)


@given(st.integers(0, 10_000), st.integers(1, 6))
def test_realizations_reproduce_pole_residue(seed, n):
    pr = _random_pr(seed, n)
    s = 0.7 + 1.3j
    h = pr.transfer(s)
    for ss in (pole_residue_realization(pr), pole_residue_realization_unit_e(pr)):
        assert np.allclose(ss.transfer(s), h, rtol=1e-10)
    assert np.allclose(np.sort_complex(poles_of(pole_residue_realization(pr))), np.sort_complex(pr.poles), atol=1e-9)


@given(st.integers(0, 10_000))
def test_mimo_realization(seed):
    rng = np.random.default_rng(seed)
    n = 3
    poles = -rng.uniform(0.5, 3, n) + 1j * rng.uniform(-2, 2, n)
    mp = MimoPoleResidue(poles, rng.standard_normal((2, n)) + 0j, rng.standard_normal((3, n)) + 0j)
    s = 0.4 - 0.9j
    direct = sum(np.outer(mp.c[:, i], mp.b[:, i]) / (s - poles[i]) for i in range(n))
    assert np.allclose(mp.transfer(s), direct)
    assert np.allclose(mimo_realization(mp).transfer(s), direct, rtol=1e-10)


def test_polynomial_realization_sign_and_values():
    coeffs = np.array([2.0, -1.0, 0.5, 3.0]) + 0j
    p = PolynomialTF(coeffs)
    ss = polynomial_realization(p)
    for s in (0.0, 1.5, 1j, -2 + 0.5j):
        direct = sum(c * s**k for k, c in enumerate(coeffs))
        assert p.transfer(s)[0, 0] == pytest.approx(direct)
        assert ss.transfer(s)[0, 0] == pytest.approx(direct, rel=1e-12, abs=1e-12)


def test_polynomial_rejects_zero_leading_coefficient():
    with pytest.raises(ValueError):
        PolynomialTF(np.array([1.0, 0.0]))


@pytest.mark.parametrize("make", [lambda: _random_pr(1, 4), lambda: pole_residue_realization(_random_pr(2, 3))])
def test_derivative_against_central_difference(make):
    sys = make()
    s, h = 0.3 + 0.4j, 1e-5
    fd = (transfer_eval(sys, s + h) - transfer_eval(sys, s - h)) / (2 * h)
    assert np.allclose(transfer_derivative(sys, s), fd, rtol=1e-8)


def test_taylor_coefficients_state_space_and_pole_residue_agree():
    pr = _random_pr(5, 4)
    ss = pole_residue_realization(pr)
    s = 0.5 + 0.5j
    a = transfer_taylor(pr, s, 6)
    b = transfer_taylor(ss, s, 6)
    for k in range(6):
        assert np.allclose(a[k], b[k], rtol=1e-9)
        # closed form of H^{(k)}(s)/k! for a pole-residue model
        ref = sum((-1) ** k * g / (s - p) ** (k + 1) for p, g in zip(pr.poles, pr.residues))
        assert a[k][0, 0] == pytest.approx(ref, rel=1e-12)


def test_resolvent_at_pole_raises():
    pr = cases.two_pole_system()
    with pytest.raises(PoleError):
        pr.transfer(-2.1)
    with pytest.raises(PoleError):
        pole_residue_realization(pr).transfer(-0.1)


def test_pole_residue_validation():
    with pytest.raises(ValueError):
        SisoPoleResidue(np.array([-1.0, -1.0]), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        SisoPoleResidue(np.array([-1.0, -2.0]), np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        SisoPoleResidue(np.array([-1.0]), np.array([1.0, 2.0]))


def test_markov_parameters():
    a = np.array([[-1.0, 0.5], [0.0, -2.0]]) + 0j
    b = np.array([[1.0], [1.0]]) + 0j
    c = np.array([[1.0, 2.0]]) + 0j
    ss = StateSpaceSystem(c, np.eye(2), a, b)
    h = markov_parameters(ss, 4)
    for i in range(4):
        assert h[i][0, 0] == pytest.approx((c @ np.linalg.matrix_power(a, i) @ b)[0, 0])
    with pytest.raises(ValueError):
        markov_parameters(StateSpaceSystem(c, 2 * np.eye(2), a, b), 2)


def test_fifth_order_state_space_matches_cases():
    r3 = math.sqrt(3)
    a = np.array(
        [[-1, 0, 0, 0, 0], [0, -1, 1, 0, 0], [0, -1, -1, 0, 0], [0, 0, 0, -0.5, r3 / 2], [0, 0, 0, -r3 / 2, -0.5]], dtype=complex
    )
    b = np.array([[1], [1], [0], [1], [0]], dtype=complex)
    c = np.array([[1, 0, 1, 0, 2 * r3 / 3]], dtype=complex)
    ss = StateSpaceSystem(c, np.eye(5), a, b)
    pr = cases.fifth_order_system()
    for s in (0.1, 2j, 1 - 1j):
        assert ss.transfer(s)[0, 0] == pytest.approx(pr.transfer(s)[0, 0], rel=1e-12)
