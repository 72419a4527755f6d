"""First-order Hamiltonian versus exact minimal coupling, as an amplitude-scaling study."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..background import BackgroundModel
from ..hamiltonian import ExactHamiltonian, HiggsOperatorSet, first_order_array
from .propagate import propagate
from .spectrum import spectrum_of


@dataclass(frozen=True, eq=False)
class DiscrepancyReport:
    """Scaling of ``max_t |P_exact - P_first_order|`` with the amplitude.

    ``exponent`` is the least-squares slope of log-discrepancy against
    log-amplitude; ``exponent_ci`` a 95% bootstrap interval obtained by
    resampling the time grid. ``relative`` divides by ``max_t P_exact``:
    it tends to a constant when the first-order operators are wrong by a
    factor, and falls off linearly in the amplitude when they are right.
    """

    i: int
    j: int
    scales: np.ndarray
    alphas: np.ndarray
    discrepancy: np.ndarray
    relative: np.ndarray
    exponent: float
    exponent_ci: tuple[float, float]
    relative_exponent: float
    times: np.ndarray
    p_exact: list
    p_first: list


def _slope(x, y):
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def compare_first_order_vs_exact(i, j, model: BackgroundModel, ops: HiggsOperatorSet, t_final: float,
                                 dt: float, scales=(1.0, 0.5, 0.25), integrator: str = "expm_midpoint",
                                 n_boot: int = 400, seed: int = 0, spectrum=None) -> DiscrepancyReport:
    """Propagate both Hamiltonians from eigenstate ``i`` for each amplitude scale.

    ``scales`` multiply every mode amplitude of ``model``. With a zero-amplitude
    model both runs are identical and the exponent is reported as ``nan``.
    """
    spectrum = spectrum or spectrum_of(ops)
    disc, rel, pe, pf, alphas = [], [], [], [], []
    times = None
    for s in scales:
        m = model.scaled(s)
        exact = propagate(i, m, ops, t_final, dt, "exact", integrator, spectrum)
        first = propagate(i, m, ops, t_final, dt, "first_order", integrator, spectrum)
        a, b = exact.populations[:, j], first.populations[:, j]
        times = exact.times
        pe.append(a)
        pf.append(b)
        disc.append(np.abs(a - b).max())
        rel.append(np.abs(a - b).max() / max(a.max(), 1e-300))
        alphas.append(m.total_alpha)
    disc, rel, alphas = np.array(disc), np.array(rel), np.array(alphas)
    if np.any(disc <= 0) or np.any(alphas <= 0):
        return DiscrepancyReport(i, j, np.array(scales), alphas, disc, rel, float("nan"),
                                 (float("nan"),) * 2, float("nan"), times, pe, pf)
    exponent = _slope(alphas, disc)
    rng = np.random.default_rng(seed)
    diffs = np.abs(np.array(pe) - np.array(pf))
    boots = []
    for _ in range(n_boot):
        idx = rng.integers(0, len(times), len(times))
        d = diffs[:, idx].max(axis=1)
        if np.all(d > 0):
            boots.append(_slope(alphas, d))
    ci = tuple(float(v) for v in np.percentile(boots, [2.5, 97.5]))
    return DiscrepancyReport(i, j, np.array(scales), alphas, disc, rel, exponent, ci,
                             _slope(alphas, rel), times, pe, pf)


def operator_norm_scaling(basis, model: BackgroundModel, ops: HiggsOperatorSet, times,
                          scales=(4.0, 2.0, 1.0)):
    """Max over ``times`` of the spectral norm ``||H_exact(t) - H_first_order(t)||`` per scale.

    Returns ``(alphas, norms, fitted exponent)``.
    """
    alphas, norms = [], []
    for s in scales:
        m = model.scaled(s)
        ex = ExactHamiltonian(basis, m)
        norms.append(max(np.linalg.norm(ex.array(t) - first_order_array(ops, m, t), 2) for t in times))
        alphas.append(m.total_alpha)
    alphas, norms = np.array(alphas), np.array(norms)
    return alphas, norms, _slope(alphas, norms)
