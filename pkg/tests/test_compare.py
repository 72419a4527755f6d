import numpy as np
import pytest

from sphereosc.background import BackgroundModel
from sphereosc.basis import BasisSpec
from sphereosc.dynamics import compare_first_order_vs_exact, operator_norm_scaling, spectrum_of
from sphereosc.hamiltonian import build_operator_set


def _setup(convention):
    ops = build_operator_set(BasisSpec(4), 0.04, convention=convention, pad_check=False)
    spec = spectrum_of(ops)
    j = next(k for k in range(1, spec.dim) if spec.m_labels[k] == 0)
    return ops, spec, j


def test_zero_amplitude_gives_identical_runs():
    ops, spec, j = _setup("printed")
    m = BackgroundModel(5.0, ((0.0, spec.omega(0, j)),))
    rep = compare_first_order_vs_exact(0, j, m, ops, 5.0, 0.02, spectrum=spec)
    assert np.all(rep.discrepancy < 1e-14)
    assert np.isnan(rep.exponent)


@pytest.mark.parametrize("convention,expected", [("printed", 2.0), ("consistent", 3.0)])
def test_probability_discrepancy_exponent(convention, expected):
    ops, spec, j = _setup(convention)
    m = BackgroundModel(5.0, ((4e-3, spec.omega(0, j)),))
    rep = compare_first_order_vs_exact(0, j, m, ops, 10.0, 0.04, spectrum=spec, n_boot=100)
    assert rep.exponent == pytest.approx(expected, abs=0.15)
    lo, hi = rep.exponent_ci
    assert lo <= rep.exponent <= hi
    assert rep.relative_exponent == pytest.approx(expected - 2, abs=0.15)


def test_operator_norm_scaling():
    ops, spec, j = _setup("consistent")
    m = BackgroundModel(5.0, ((1e-3, 2.0),))
    alphas, norms, p = operator_norm_scaling(ops.basis, m, ops, np.linspace(0.2, 3, 5))
    assert np.allclose(alphas, [4e-3, 2e-3, 1e-3])
    assert p == pytest.approx(2.0, abs=0.1)
