"""Fixed-step integration of ``i hbar dpsi/dt = H(t) psi`` in the eigenbasis of H0.

The Hamiltonian is shifted by the midpoint of the H0 spectrum before
integrating (this halves the spectral radius seen by RK4); the dropped global
phase is restored on output, so amplitudes are those of the unshifted problem.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..background import BackgroundModel, v0, v0_tilde
from ..hamiltonian import ExactHamiltonian, HiggsOperatorSet, _check_compatible
from .spectrum import SpectrumResult, spectrum_of

log = logging.getLogger(__name__)

INTEGRATORS = ("rk4", "expm_midpoint")
MODES = ("first_order", "exact")


class NormDriftError(RuntimeError):
    """Propagation lost unitarity beyond tolerance."""


@dataclass(frozen=True, eq=False)
class PropagationResult:
    times: np.ndarray
    amplitudes: np.ndarray
    norm_drift: float
    integrator: str
    mode: str
    dt: float
    norm_tol: float = 1e-8

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def valid(self) -> bool:
        return self.norm_drift <= self.norm_tol

    @property
    def final_state(self) -> np.ndarray:
        return self.amplitudes[-1]


def spectral_half_width(spectrum: SpectrumResult) -> float:
    return 0.5 * float(spectrum.energies.max() - spectrum.energies.min())


def fastest_frequency(spectrum: SpectrumResult, model: BackgroundModel) -> float:
    om = max(model.omegas, default=0.0)
    return max(om, spectral_half_width(spectrum) / spectrum.hbar)


def suggest_dt(spectrum: SpectrumResult, model: BackgroundModel, t_final: float,
               integrator: str = "rk4", norm_tol: float = 1e-8) -> float:
    """Step meeting both the 20-steps-per-period rule and, for RK4, the norm budget.

    RK4 loses norm at a rate of about ``z^6/72`` per step, ``z = rho dt / hbar``.
    """
    resolve = 2 * np.pi / (20 * fastest_frequency(spectrum, model))
    if integrator != "rk4":
        return resolve
    rho = spectral_half_width(spectrum) / spectrum.hbar
    if rho == 0:
        return resolve
    budget = (72 * 0.1 * norm_tol / (rho**6 * max(t_final, 1e-300))) ** 0.2
    return min(resolve, budget)


class _EigenHamiltonian:
    def __init__(self, ops, model, spectrum, mode):
        self.hbar = model.hbar
        self.shift = 0.5 * float(spectrum.energies.max() + spectrum.energies.min())
        self.e = spectrum.energies - self.shift
        self.model = model
        self.mode = mode
        self.s = spectrum.states
        if mode == "first_order":
            self.v1 = spectrum.in_eigenbasis(ops.V1)
            self.v1t = spectrum.in_eigenbasis(ops.V1tilde)
        else:
            self.exact = ExactHamiltonian(ops.basis, model)

    def matrix(self, t):
        if self.mode == "first_order":
            h = v0(self.model, t) * self.v1 + v0_tilde(self.model, t) * self.v1t
            h[np.diag_indices_from(h)] += self.e
            return h
        h = self.s.conj().T @ self.exact.array(t) @ self.s
        h[np.diag_indices_from(h)] -= self.shift
        return 0.5 * (h + h.conj().T)

    def apply(self, t, psi):
        if self.mode == "first_order":
            a, b = v0(self.model, t), v0_tilde(self.model, t)
            return self.e * psi + a * (self.v1 @ psi) + b * (self.v1t @ psi)
        return self.matrix(t) @ psi


def _rk4_step(ham, t, psi, dt):
    f = -1j / ham.hbar
    k1 = f * ham.apply(t, psi)
    k2 = f * ham.apply(t + dt / 2, psi + dt / 2 * k1)
    k3 = f * ham.apply(t + dt / 2, psi + dt / 2 * k2)
    k4 = f * ham.apply(t + dt, psi + dt * k3)
    return psi + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _midpoint_step(ham, t, psi, dt):
    w, v = np.linalg.eigh(ham.matrix(t + dt / 2))
    return v @ (np.exp(-1j * w * dt / ham.hbar) * (v.conj().T @ psi))


def propagate(psi0, model: BackgroundModel, ops: HiggsOperatorSet, t_final: float, dt: float,
              mode: str = "first_order", integrator: str = "rk4",
              spectrum: SpectrumResult | None = None, record_every: int = 1,
              norm_tol: float = 1e-8, check_norm: bool = True) -> PropagationResult:
    """Propagate from ``psi0`` to ``t_final``.

    ``psi0`` is either an eigenstate index of H0 or a normalized vector in the
    core Fock basis. ``mode`` picks ``build_H_first_order`` or the exact
    minimal-coupling Hamiltonian; ``integrator`` is ``"rk4"`` or
    ``"expm_midpoint"`` (exponential midpoint rule, second order and exactly
    unitary). The step is shortened slightly so that it divides ``t_final``.
    Amplitudes are returned in the eigenbasis of H0, recorded every
    ``record_every`` steps and at the end.

    Raises :class:`NormDriftError` when the norm drifts by more than ``norm_tol``
    (unless ``check_norm`` is false).
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if integrator not in INTEGRATORS:
        raise ValueError(f"integrator must be one of {INTEGRATORS}")
    if t_final <= 0 or dt <= 0:
        raise ValueError("t_final and dt must be positive")
    _check_compatible(ops, model)
    spectrum = spectrum or spectrum_of(ops)
    limit = 2 * np.pi / (20 * fastest_frequency(spectrum, model))
    if dt > limit * (1 + 1e-12):
        raise ValueError(f"dt={dt} does not resolve the fastest frequency; need dt <= {limit:.4g}")

    if np.ndim(psi0) == 0:
        c = np.zeros(spectrum.dim, dtype=complex)
        c[int(psi0)] = 1.0
    else:
        psi0 = np.asarray(psi0, dtype=complex)
        if abs(np.linalg.norm(psi0) - 1) > 1e-12:
            raise ValueError("psi0 must be normalized")
        c = spectrum.states.conj().T @ psi0

    n_steps = int(np.ceil(t_final / dt - 1e-9))
    h = t_final / n_steps
    ham = _EigenHamiltonian(ops, model, spectrum, mode)
    step = _rk4_step if integrator == "rk4" else _midpoint_step
    times, states = [0.0], [c.copy()]
    drift = 0.0
    for k in range(1, n_steps + 1):
        c = step(ham, (k - 1) * h, c, h)
        drift = max(drift, abs(np.linalg.norm(c) - 1.0))
        if k % record_every == 0 or k == n_steps:
            times.append(k * h)
            states.append(c.copy())
    times = np.array(times)
    amps = np.array(states) * np.exp(-1j * ham.shift * times / model.hbar)[:, None]
    result = PropagationResult(times, amps, drift, integrator, mode, h, norm_tol)
    log.debug("propagate %s/%s: %d steps, dt=%.3g, norm drift %.2e", mode, integrator, n_steps, h, drift)
    if check_norm and not result.valid:
        hint = suggest_dt(spectrum, model, t_final, integrator, norm_tol)
        raise NormDriftError(
            f"norm drift {drift:.2e} exceeds {norm_tol:.0e} with dt={h:.3g}; try dt <= {hint:.3g}"
        )
    return result


def rk4_refinement_ratio(psi0, model, ops, t_final, dt, mode="first_order", spectrum=None,
                         check_norm=True):
    """``|psi_dt - psi_dt/2| / |psi_dt/2 - psi_dt/4|`` at ``t_final`` (about 16 for RK4)."""
    finals = [
        propagate(psi0, model, ops, t_final, dt / f, mode, "rk4", spectrum,
                  record_every=10**9, check_norm=check_norm).final_state
        for f in (1, 2, 4)
    ]
    return float(np.linalg.norm(finals[0] - finals[1]) / np.linalg.norm(finals[1] - finals[2]))
