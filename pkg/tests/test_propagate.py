import numpy as np
import pytest

from sphereosc.background import BackgroundModel
from sphereosc.basis import BasisSpec
from sphereosc.dynamics import (
    NormDriftError,
    propagate,
    rk4_refinement_ratio,
    spectrum_of,
    suggest_dt,
    tdpt_probability_full,
)
from sphereosc.hamiltonian import build_operator_set


@pytest.fixture(scope="module")
def small():
    ops = build_operator_set(BasisSpec(4), 0.04, pad_check=False)
    return ops, spectrum_of(ops)


def test_static_populations_and_phases(small):
    ops, spec = small
    psi0 = spec.states[:, 0] * np.sqrt(0.5) + spec.states[:, 3] * np.sqrt(0.5)
    res = propagate(psi0, BackgroundModel(5.0), ops, 10.0, 0.004, spectrum=spec)
    assert np.abs(res.populations - res.populations[0]).max() < 1e-10
    expected = np.exp(-1j * spec.energies[0] * res.times) * np.sqrt(0.5)
    assert np.abs(res.amplitudes[:, 0] - expected).max() < 1e-9


def test_expm_midpoint_static_is_exact(small):
    ops, spec = small
    res = propagate(2, BackgroundModel(5.0), ops, 10.0, 0.05, integrator="expm_midpoint", spectrum=spec)
    assert abs(res.amplitudes[-1, 2] - np.exp(-1j * spec.energies[2] * 10.0)) < 1e-12
    assert res.norm_drift < 1e-13


def test_exact_mode_without_modes_matches_first_order(small):
    ops, spec = small
    m = BackgroundModel(5.0)
    a = propagate(0, m, ops, 5.0, 0.01, "exact", spectrum=spec)
    b = propagate(0, m, ops, 5.0, 0.01, "first_order", spectrum=spec)
    assert np.abs(a.amplitudes - b.amplitudes).max() < 1e-14


def test_resonant_transfer_matches_perturbation_theory(ops8, spec8, model_resonant):
    t_final = 60.0
    res = propagate(0, model_resonant, ops8, t_final, 0.003, spectrum=spec8, record_every=100)
    assert res.valid
    p = res.populations[1:, 5]
    ref = tdpt_probability_full(0, 5, res.times[1:], spec8, ops8, model_resonant)
    sel = ref <= 1e-3
    assert np.abs(p[sel] - ref[sel]).max() / ref[sel].max() < 0.05
    assert np.all(np.abs(p[sel] - ref[sel]) <= 0.05 * ref[sel] + 1e-12)


def test_step_refinement(ops8, spec8, model_resonant):
    ratio = rk4_refinement_ratio(0, model_resonant, ops8, 6.0, 0.02, spectrum=spec8, check_norm=False)
    assert ratio == pytest.approx(16, rel=0.3)
    a = propagate(0, model_resonant, ops8, 6.0, 0.003, spectrum=spec8, record_every=10**9)
    b = propagate(0, model_resonant, ops8, 6.0, 0.0015, spectrum=spec8, record_every=10**9)
    assert np.abs(a.populations[-1] - b.populations[-1]).max() < 1e-8


def test_dt_must_resolve_fastest_frequency(ops8, spec8, model_resonant):
    with pytest.raises(ValueError, match="resolve"):
        propagate(0, model_resonant, ops8, 1.0, 0.5, spectrum=spec8)


def test_norm_drift_error_has_hint(ops8, spec8, model_resonant):
    with pytest.raises(NormDriftError, match="try dt"):
        propagate(0, model_resonant, ops8, 20.0, 0.02, spectrum=spec8, norm_tol=1e-12)


def test_suggest_dt_keeps_norm(ops8, spec8, model_resonant):
    dt = suggest_dt(spec8, model_resonant, 5.0)
    assert propagate(0, model_resonant, ops8, 5.0, dt, spectrum=spec8).valid


def test_vector_initial_state(small):
    ops, spec = small
    v = spec.states[:, 1]
    a = propagate(v, BackgroundModel(5.0, ((1e-3, 1.0),)), ops, 2.0, 0.01, spectrum=spec)
    b = propagate(1, BackgroundModel(5.0, ((1e-3, 1.0),)), ops, 2.0, 0.01, spectrum=spec)
    assert np.abs(a.amplitudes - b.amplitudes).max() < 1e-14
    with pytest.raises(ValueError, match="normalized"):
        propagate(2 * v, BackgroundModel(5.0), ops, 1.0, 0.01, spectrum=spec)


def test_argument_checks(small):
    ops, spec = small
    m = BackgroundModel(5.0)
    with pytest.raises(ValueError):
        propagate(0, m, ops, 1.0, 0.01, mode="magnus")
    with pytest.raises(ValueError):
        propagate(0, m, ops, 1.0, 0.01, integrator="euler")
    with pytest.raises(ValueError):
        propagate(0, BackgroundModel(4.0), ops, 1.0, 0.01)
