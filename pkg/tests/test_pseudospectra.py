import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from loewnerpencil import numerics as nx
from loewnerpencil.pseudospectra import (
    contour_lines,
    contours_to_csv,
    epsilon_at,
    grid_epsilon,
    grid_minima,
    grid_to_csv,
    grid_to_json,
    slope_estimate,
)

seeds = st.integers(0, 2**31 - 1)


def _random_pencil(seed, n=4):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    e = np.eye(n) + 0.1 * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    z = complex(*rng.uniform(-2, 2, 2))
    return rng, a, e, z


@given(seeds)
def test_epsilon_attained_by_rank_one_perturbation(seed):
    _, a, e, z = _random_pencil(seed)
    eps = epsilon_at(a, e, z)
    nu, delta = nx.norm2(e), nx.norm2(a)
    f = nx.svd(z * e - a)
    u, v = f.u[:, -1], f.v[:, -1]
    da = delta * np.outer(u, v.conj())
    de = -nu * np.conj(z) / abs(z) * np.outer(u, v.conj())
    pert = z * (e + eps * de) - (a + eps * da)
    assert nx.sigma_min(pert) <= 1e-10 * nx.norm2(pert)
    assert np.linalg.norm(eps * da, 2) == pytest.approx(eps * delta)
    assert np.linalg.norm(eps * de, 2) == pytest.approx(eps * nu)


@given(seeds)
def test_smaller_perturbations_cannot_reach_z(seed):
    rng, a, e, z = _random_pencil(seed)
    eps = 0.9 * epsilon_at(a, e, z)
    nu, delta = nx.norm2(e), nx.norm2(a)
    for _ in range(5):
        da = rng.standard_normal(a.shape) + 1j * rng.standard_normal(a.shape)
        de = rng.standard_normal(a.shape) + 1j * rng.standard_normal(a.shape)
        da *= delta / nx.norm2(da)
        de *= nu / nx.norm2(de)
        assert nx.sigma_min(z * (e + eps * de) - (a + eps * da)) > 0


def test_epsilon_against_extended_precision():
    _, a, e, z = _random_pencil(4, n=5)
    ref = oracles.min_singular_value_mp(z * e - a) / (nx.norm2(a) + nx.norm2(e) * abs(z))
    assert epsilon_at(a, e, z) == pytest.approx(ref, rel=1e-10)


def test_epsilon_vanishes_at_eigenvalues():
    a = np.diag([-1.0, -2.0 + 1j])
    for z in (-1.0, -2.0 + 1j):
        assert epsilon_at(a, np.eye(2), z) <= 1e-15


def test_weight_validation():
    a = np.eye(2)
    with pytest.raises(ValueError):
        epsilon_at(a, a, 1.0, nu=0.0, delta=0.0)
    with pytest.raises(ValueError):
        epsilon_at(a, a, 1.0, nu=-1.0)
    with pytest.raises(ValueError, match="z = 0"):
        epsilon_at(a, a, 0.0, nu=1.0, delta=0.0)
    with pytest.raises(ValueError, match="square"):
        epsilon_at(np.ones((2, 3)), np.ones((2, 3)), 1.0)


def test_grid_agrees_with_pointwise_level():
    _, a, e, _ = _random_pencil(9, n=3)
    g = grid_epsilon(a, e, (-1, 1, -0.5, 0.5), (5, 4))
    assert g.values.shape == (4, 5)
    assert g.cell == pytest.approx((0.5, 1 / 3))
    for r in range(g.ny):
        for c in range(g.nx):
            assert g.values[r, c] == pytest.approx(epsilon_at(a, e, complex(g.re[c], g.im[r])), rel=1e-12)


def test_grid_argument_checks():
    with pytest.raises(ValueError, match="empty region"):
        grid_epsilon(np.eye(2), np.eye(2), (1, 0, 0, 1))
    with pytest.raises(ValueError, match="2 x 2"):
        grid_epsilon(np.eye(2), np.eye(2), (0, 1, 0, 1), (1, 5))
    with pytest.raises(ValueError, match="z = 0"):
        grid_epsilon(np.eye(2), np.eye(2), (-1, 1, -1, 1), (3, 3), nu=1.0, delta=0.0)


def test_minima_and_contours_of_diagonal_pencil():
    # with nu = 0 and delta = 1 the level is |z - pole| near each pole
    poles = np.array([-1.0 + 0.5j, 0.5 - 0.25j])
    a = np.diag(poles)
    g = grid_epsilon(a, np.eye(2), (-2, 1.5, -1, 1), (71, 41), nu=0.0, delta=1.0)
    minima = grid_minima(g)
    for p in poles:
        assert min(abs(m - p) for m in minima) <= np.hypot(*g.cell)
    lines = contour_lines(g, [0.2])
    assert len(lines) == 2
    for lev, pts in lines:
        dist = np.min(np.abs(pts[:, None] - poles[None, :]), axis=1)
        assert np.allclose(dist, lev, atol=g.cell[0])


def test_serializations():
    g = grid_epsilon(np.diag([-1.0, -2.0]), np.eye(2), (-3, 0, -1, 1), (4, 3))
    rows = grid_to_csv(g).splitlines()
    assert rows[0] == "re,im,eps" and len(rows) == 1 + 12
    x, y, v = (float(t) for t in rows[5].split(","))
    assert v == g.values[1, 0] and (x, y) == (g.re[0], g.im[1])
    doc = json.loads(grid_to_json(g))
    assert np.array_equal(np.array(doc["values"]).reshape(3, 4), g.values)
    csv = contours_to_csv(contour_lines(g, [0.1])).splitlines()
    assert csv[0] == "level,segment_id,re,im" and len(csv) > 1


def test_slope_of_scalar_pencil_reaches_its_bound():
    pole = -0.5 + 2.0j
    a, e = np.array([[pole]]), np.eye(1)
    delta, nu = abs(pole), 1.0
    worst = [(np.eye(1), -np.conj(pole) / abs(pole) * np.eye(1))]
    est = slope_estimate(a, e, pole, directions=worst)
    assert est.xi == pytest.approx(delta + nu * abs(pole), rel=1e-6)
    rnd = slope_estimate(a, e, pole, directions=50, seed=1)
    assert rnd.slopes.shape == (50,) and rnd.xi <= (delta + nu * abs(pole)) * (1 + 1e-6)


def test_slope_is_seeded():
    _, a, e, _ = _random_pencil(2, n=3)
    z = nx.generalized_eig(a, e)[0][0]
    s1 = slope_estimate(a, e, z, directions=10, seed=4)
    s2 = slope_estimate(a, e, z, directions=10, seed=4)
    assert np.array_equal(s1.slopes, s2.slopes)


def test_slope_edge_cases():
    a, e = np.diag([-1.0, -2.0]), np.eye(2)
    assert slope_estimate(a, e, -1.0, directions=0).xi == 0.0
    zero = [(np.zeros((2, 2)), np.zeros((2, 2)))]
    assert slope_estimate(a, e, -1.0, directions=zero).xi == 0.0
    with pytest.raises(ValueError):
        slope_estimate(a, e, -1.0, probe_eps=(2e-8, 1e-8))
