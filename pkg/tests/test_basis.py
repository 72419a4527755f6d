import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from sphereosc.basis import (
    BasisSpec,
    HermiticityError,
    OperatorMatrix,
    PositionQuadrature,
    QuadratureOrderError,
    build_scalar_r2_function,
    build_xy_ops,
    core_dimension,
    enumerate_basis,
    hermite_functions,
    project_to_core,
)


@pytest.mark.parametrize("n_max,dim", [(0, 1), (2, 6), (12, 91), (16, 153)])
def test_core_dimension(n_max, dim):
    assert core_dimension(n_max) == dim
    assert BasisSpec(n_max).dim == dim
    assert enumerate_basis(n_max).dim == dim


def test_basis_ordering():
    idx = enumerate_basis(2)
    assert [idx.state(k) for k in range(6)] == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]
    assert idx.index(0, 0) == 0


@given(st.integers(0, 20))
def test_basis_bijection(n):
    idx = enumerate_basis(n)
    assert all(idx.index(*idx.state(k)) == k for k in range(idx.dim))
    assert np.all(np.diff(idx.quanta) >= 0)


def test_spec_defaults_and_errors():
    s = BasisSpec(8)
    assert s.pad == 4 and s.quad_order == 2 * 12 + 30
    assert s.padded_dim == core_dimension(12)
    with pytest.raises(QuadratureOrderError):
        BasisSpec(8, 4, quad_order=12)
    BasisSpec(8, 4, quad_order=13)
    with pytest.raises(ValueError):
        BasisSpec(-1)


def test_ladder_values():
    spec = BasisSpec(3)
    X, Y, Px, Py = build_xy_ops(spec)
    idx = enumerate_basis(spec.n_padded)
    assert X.entries[idx.index(0, 0), idx.index(1, 0)] == pytest.approx(math.sqrt(0.5), abs=1e-15)
    assert Y.entries[idx.index(0, 0), idx.index(0, 1)] == pytest.approx(math.sqrt(0.5), abs=1e-15)
    assert Px.entries[0, 0] == 0
    # <0|Px|1> = -i sqrt(hbar/2)
    assert Px.entries[idx.index(0, 0), idx.index(1, 0)] == pytest.approx(-1j * math.sqrt(0.5), abs=1e-15)


def test_ladder_hbar_scaling():
    spec = BasisSpec(2)
    X = build_xy_ops(spec, hbar=2.5)[0].entries
    idx = enumerate_basis(spec.n_padded)
    assert X[idx.index(0, 0), idx.index(1, 0)] == pytest.approx(math.sqrt(1.25), abs=1e-15)


@pytest.mark.parametrize("hbar", [1.0, 0.3])
def test_canonical_commutator(hbar):
    spec = BasisSpec(6, 2)
    X, Y, Px, Py = (o.entries for o in build_xy_ops(spec, hbar))
    keep = enumerate_basis(spec.n_padded).quanta <= spec.n_padded - 1
    for a, p in ((X, Px), (Y, Py)):
        c = (a @ p - p @ a)[np.ix_(keep, keep)]
        assert np.abs(c - 1j * hbar * np.eye(keep.sum())).max() < 1e-13
    c = (X @ Py - Py @ X)[np.ix_(keep, keep)]
    assert np.abs(c).max() < 1e-14


def test_hermite_functions_against_scipy():
    xi = np.linspace(-4, 4, 17)
    h = hermite_functions(10, xi)
    for k in range(11):
        ref = special.eval_hermite(k, xi) / math.sqrt(2.0**k * math.factorial(k) * math.sqrt(math.pi))
        assert np.allclose(h[k], ref, rtol=1e-12, atol=1e-12)


def test_quadrature_identity():
    spec = BasisSpec(6)
    one = build_scalar_r2_function(spec, lambda r2: np.ones_like(r2))
    assert np.abs(one.entries - np.eye(spec.padded_dim)).max() < 1e-12


def test_quadrature_polynomial_exactness():
    spec = BasisSpec(6)
    X, Y, _, _ = (o.entries for o in build_xy_ops(spec))
    r2 = build_scalar_r2_function(spec, lambda r2: r2).entries
    keep = enumerate_basis(spec.n_padded).quanta <= spec.n_padded - 1
    ref = X @ X + Y @ Y
    assert np.abs((r2 - ref)[np.ix_(keep, keep)]).max() < 1e-12


def test_quadrature_at_exactness_floor():
    # with the minimal order the quadrature still reproduces X^2 on the core
    spec = BasisSpec(4, 2, quad_order=7)
    X = build_xy_ops(spec)[0].entries
    x2 = PositionQuadrature(spec).function(lambda x, y: x * x)
    d = spec.dim
    assert np.abs((x2 - X @ X)[:d, :d]).max() < 1e-12


def _ground_gaussian(fn):
    # |<x,y|0,0>|^2 = exp(-x^2 - y^2) / pi at hbar = 1
    val, err = integrate.dblquad(
        lambda y, x: fn(x, y) * math.exp(-x * x - y * y) / math.pi,
        -12, 12, -12, 12, epsabs=1e-14, epsrel=1e-13,
    )
    return val


def test_r2_function_against_adaptive_integration():
    spec = BasisSpec(8)
    g = build_scalar_r2_function(spec, lambda r2: (1 + 0.04 * r2) ** -2).entries
    ref = _ground_gaussian(lambda x, y: (1 + 0.04 * (x * x + y * y)) ** -2)
    assert abs(g[0, 0] - ref) < 1e-10


def test_quadrature_parity_blocks():
    spec = BasisSpec(5)
    g = build_scalar_r2_function(spec, lambda r2: np.exp(-0.3 * r2) / (1 + r2)).entries
    idx = enumerate_basis(spec.n_padded)
    px, py = idx.nx % 2, idx.ny % 2
    mixed = (px[:, None] != px[None, :]) | (py[:, None] != py[None, :])
    assert np.abs(g[mixed]).max() < 1e-15


def test_operator_matrix_checks():
    spec = BasisSpec(1)
    a = np.arange(9.0).reshape(3, 3)
    with pytest.raises(HermiticityError):
        OperatorMatrix(a, spec, name="A")
    OperatorMatrix(a, spec, hermitian=False)
    with pytest.raises(ValueError, match="shape"):
        OperatorMatrix(np.eye(4), spec)
    m = OperatorMatrix(a + a.T, spec)
    assert m.hermiticity_error() == 0
    assert np.array_equal(np.asarray(m), m.entries)


def test_project_to_core():
    spec = BasisSpec(3)
    eye = OperatorMatrix(np.eye(spec.padded_dim), spec, padded=True)
    assert np.array_equal(project_to_core(eye).entries, np.eye(spec.dim))
    rng = np.random.default_rng(3)
    a = rng.normal(size=(spec.padded_dim,) * 2) + 1j * rng.normal(size=(spec.padded_dim,) * 2)
    pa = project_to_core(OperatorMatrix(a, spec, hermitian=False, padded=True))
    pah = project_to_core(OperatorMatrix(a.conj().T, spec, hermitian=False, padded=True))
    assert np.array_equal(pah.entries, pa.H)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 0.5), st.floats(0.2, 3.0))
def test_quadrature_operators_are_symmetric(c, hbar):
    spec = BasisSpec(4, 2)
    g = build_scalar_r2_function(spec, lambda r2: 1 / (1 + c * r2) ** 2, hbar).entries
    assert np.array_equal(g, g.T)
    w = np.linalg.eigvalsh(g)
    assert w.min() > -1e-12 and w.max() < 1 + 1e-12
