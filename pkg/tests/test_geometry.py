import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphereosc.background import BackgroundModel, FluctuationMode, curvature_exact, radius_at
from sphereosc.geometry import (
    ChartPoint,
    big_lambda,
    embed,
    embed_curvature_derivative,
    embed_spatial_derivatives,
    exact_phi,
    exact_vector_potential,
    first_order_vector_potential,
    geometry_derivatives,
)
from sphereosc.validation import geometry_checks

MODEL = BackgroundModel(5.0, (FluctuationMode(1e-3, 2.0), FluctuationMode(5e-4, 3.3)))


def test_embed_values():
    assert np.allclose(embed(ChartPoint(0.0, 0.0), 0.04), [0, 0, 5], atol=1e-15)
    p = ChartPoint(3.0, 4.0)
    assert big_lambda(p, 0.04) == pytest.approx(math.sqrt(2))
    assert np.allclose(embed(p, 0.04), np.array([3, 4, 5]) / math.sqrt(2), rtol=1e-15)


def test_embed_rejects_flat():
    with pytest.raises(ValueError):
        embed(ChartPoint(1.0, 1.0), 0.0)
    with pytest.raises(ValueError):
        embed(ChartPoint(1.0, 1.0), -0.1)


def test_hemisphere_flag():
    up, down = embed(ChartPoint(1.0, 2.0), 0.04), embed(ChartPoint(1.0, 2.0, -1), 0.04)
    assert np.allclose(up[:2], down[:2]) and up[2] == -down[2]
    with pytest.raises(ValueError):
        ChartPoint(0.0, 0.0, 0)


@settings(max_examples=50, deadline=None)
@given(st.floats(-50, 50), st.floats(-50, 50), st.floats(1e-3, 1.0))
def test_sphere_constraint(x, y, lam):
    r = embed(ChartPoint(x, y), lam)
    assert abs(r @ r * lam - 1) < 1e-12


def test_static_background_derivatives():
    m = BackgroundModel(5.0)
    p = ChartPoint(np.array([0.3, -1.2]), np.array([2.0, 0.1]))
    _, _, rt = geometry_derivatives(p, m, 1.7)
    assert np.all(rt == 0)
    assert np.all(exact_vector_potential(p, m, 1.7) == 0)
    assert np.all(exact_phi(p, m, 1.7) == 0)


def test_tangent_vectors_orthogonal_to_radius(rng):
    x, y = rng.uniform(-3, 3, (2, 40))
    p = ChartPoint(x, y)
    r = embed(p, 0.04)
    rx, ry = embed_spatial_derivatives(p, 0.04)
    assert np.abs((rx * r).sum(0)).max() < 1e-13
    assert np.abs((ry * r).sum(0)).max() < 1e-13


def test_curvature_derivative_fd(rng):
    x, y = rng.uniform(-3, 3, (2, 40))
    p = ChartPoint(x, y)
    lam, h = 0.04, 1e-6
    fd = (embed(p, lam + h) - embed(p, lam - h)) / (2 * h)
    an = embed_curvature_derivative(p, lam)
    assert np.abs(fd - an).max() / np.abs(an).max() < 1e-7


def test_derivatives_fd_second_order_step():
    # plain centered differences with step 1e-6 on the spatial derivatives
    rng = np.random.default_rng(5)
    x, y = rng.uniform(-2, 2, (2, 100))
    t = rng.uniform(0, 5, 100)
    p = ChartPoint(x, y)
    rx, ry, _ = geometry_derivatives(p, MODEL, t)
    lam = curvature_exact(MODEL, t)
    h = 1e-6
    fdx = (embed(ChartPoint(x + h, y), lam) - embed(ChartPoint(x - h, y), lam)) / (2 * h)
    fdy = (embed(ChartPoint(x, y + h), lam) - embed(ChartPoint(x, y - h), lam)) / (2 * h)
    assert (np.linalg.norm(fdx - rx, axis=0) / np.linalg.norm(rx, axis=0)).max() < 1e-7
    assert (np.linalg.norm(fdy - ry, axis=0) / np.linalg.norm(ry, axis=0)).max() < 1e-7


def test_validation_geometry_gate():
    checks = geometry_checks(MODEL, n_points=100, seed=11)
    assert all(c.status == "pass" for c in checks), checks


def test_pole_has_no_vector_potential():
    t = np.linspace(0, 5, 11)
    A = exact_vector_potential(ChartPoint(np.zeros(11), np.zeros(11)), MODEL, t)
    assert np.abs(A).max() < 1e-18


def test_phi_sign_and_hemisphere(rng):
    x, y = rng.uniform(-3, 3, (2, 30))
    t = rng.uniform(0, 5, 30)
    up = exact_phi(ChartPoint(x, y), MODEL, t)
    down = exact_phi(ChartPoint(x, y, -1), MODEL, t)
    assert np.all(up <= 0)
    assert np.allclose(up, down, rtol=1e-14, atol=0)


def _grid():
    g = np.linspace(-3, 3, 9)
    x, y = np.meshgrid(g, g)
    t = np.linspace(0, 3, 7)
    return ChartPoint(x.ravel()[:, None], y.ravel()[:, None]), t[None, :]


def test_vector_potential_first_order_limit():
    p, t = _grid()
    errs = []
    for a in (4e-3, 2e-3, 1e-3):
        m = BackgroundModel(5.0, ((a, 2.0),))
        errs.append(np.abs(exact_vector_potential(p, m, t) - first_order_vector_potential(p, m, t)).max())
    assert errs[0] / errs[1] == pytest.approx(4, rel=0.02)
    assert errs[1] / errs[2] == pytest.approx(4, rel=0.02)


def test_phi_scales_quadratically():
    p, t = _grid()
    vals = [np.abs(exact_phi(p, BackgroundModel(5.0, ((a, 2.0),)), t)).max() for a in (2e-3, 1e-3)]
    assert vals[0] / vals[1] == pytest.approx(4, rel=1e-2)


def test_sphere_constraint_time_dependent(rng):
    x, y = rng.uniform(-3, 3, (2, 100))
    t = rng.uniform(0, 10, 100)
    q = embed(ChartPoint(x, y), curvature_exact(MODEL, t))
    r = radius_at(MODEL, t)
    assert np.abs((q * q).sum(0) / r**2 - 1).max() < 1e-12
