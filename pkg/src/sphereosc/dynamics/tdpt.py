"""First-order transition amplitudes, probabilities and golden-rule rates.

For an initial eigenstate ``i`` and final ``j != i`` the first-order amplitude is

    c_j(t) = -(i/hbar) (sqrt(lambda0)/2) sum_n [A_n^+ (w_n V1 - i V1t)
                                              + A_n^- (w_n V1 + i V1t)]

with ``V1 = <j|V1|i>``, ``V1t = <j|V1tilde|i>`` and the sinc-shaped mode
amplitudes ``A_n^{+/-}`` of :func:`a_n_pm`. The ``+`` channel peaks at
``E_j = E_i - hbar w_n`` (stimulated emission), the ``-`` channel at
``E_j = E_i + hbar w_n`` (absorption).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..background import BackgroundModel, FluctuationMode

EMISSION, ABSORPTION = "emission", "absorption"
# channel -> sign s in the detuning w_ji + s w_n and in the weight |w V1 - s i V1t|^2
CHANNEL_SIGN = {EMISSION: +1, ABSORPTION: -1}
SERIES_SWITCH = 1e-6


def a_n_pm(t, omega_ji, mode: FluctuationMode, sign: int):
    """``alpha e^{i D t/2} sin(D t/2) / (D/2)`` with ``D = omega_ji + sign*omega``.

    The removable singularity at ``D t -> 0`` is handled by a series, giving
    ``alpha t`` at exact resonance. Broadcasts over ``t`` and ``omega_ji``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    t = np.asarray(t, dtype=float)
    delta = np.asarray(omega_ji, dtype=float) + sign * mode.omega
    x = delta * t
    small = np.abs(x) < SERIES_SWITCH
    safe = np.where(small, 1.0, delta)
    sinc_t = np.where(small, t * (1.0 - x * x / 24.0), np.sin(x / 2) / (safe / 2))
    out = mode.alpha * np.exp(0.5j * x) * sinc_t
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class Channel:
    mode: int
    channel: str
    detuning: float
    weight: float


@dataclass(frozen=True)
class TransitionRecord:
    i: int
    j: int
    omega_ji: float
    V1_ji: complex
    V1t_ji: complex
    channels: tuple[Channel, ...] = field(default=())

    def coupling(self, omega: float, sign: int) -> complex:
        """``omega V1_ji - sign i V1t_ji``."""
        return omega * self.V1_ji - sign * 1j * self.V1t_ji


def transition_record(i: int, j: int, spectrum, ops, model: BackgroundModel) -> TransitionRecord:
    """Matrix elements, frequency and channel weights for ``i -> j``.

    Both perturbation operators commute with Lz, so pairs with different
    ``m_labels`` get exactly zero elements rather than roundoff; the raw
    residual is available through ``spectrum.in_eigenbasis``.
    """
    if spectrum.m_labels[i] != spectrum.m_labels[j]:
        v1 = v1t = 0j
    else:
        v1 = spectrum.element(ops.V1, j, i)
        v1t = spectrum.element(ops.V1tilde, j, i)
    w = spectrum.omega(i, j)
    rec = TransitionRecord(i, j, w, v1, v1t)
    chans = []
    for n, mode in enumerate(model.modes):
        for name, s in CHANNEL_SIGN.items():
            chans.append(Channel(n, name, w + s * mode.omega, abs(rec.coupling(mode.omega, s)) ** 2))
    return TransitionRecord(i, j, w, v1, v1t, tuple(chans))


def _check_pair(i, j):
    if i == j:
        raise ValueError("first-order transition formulas need i != j")


def _prefactor(model: BackgroundModel) -> float:
    return model.lambda0 / (4 * model.hbar**2)


def tdpt_amplitude(i, j, t, spectrum, ops, model: BackgroundModel, record=None):
    """First-order amplitude ``c_j(t)`` including every mode and both channels."""
    _check_pair(i, j)
    rec = record or transition_record(i, j, spectrum, ops, model)
    t = np.asarray(t, dtype=float)
    total = np.zeros(t.shape, dtype=complex)
    for mode in model.modes:
        for s in (+1, -1):
            total = total + a_n_pm(t, rec.omega_ji, mode, s) * rec.coupling(mode.omega, s)
    return -1j / model.hbar * 0.5 * np.sqrt(model.lambda0) * total


def tdpt_probability_full(i, j, t, spectrum, ops, model: BackgroundModel, record=None):
    """``|c_j(t)|^2`` with every interference term retained."""
    p = np.abs(tdpt_amplitude(i, j, t, spectrum, ops, model, record)) ** 2
    return p if np.ndim(p) else float(p)


def tdpt_probability_rw(i, j, t, spectrum, ops, model: BackgroundModel, record=None):
    """Incoherent sum over modes and channels; all cross terms dropped."""
    _check_pair(i, j)
    rec = record or transition_record(i, j, spectrum, ops, model)
    t = np.asarray(t, dtype=float)
    total = np.zeros(t.shape)
    for mode in model.modes:
        for s in (+1, -1):
            total = total + np.abs(a_n_pm(t, rec.omega_ji, mode, s)) ** 2 * abs(rec.coupling(mode.omega, s)) ** 2
    p = _prefactor(model) * total
    return p if p.ndim else float(p)


# ---------------------------------------------------------------- golden rule


def kernel_sinc2(energy, t_probe: float, hbar: float = 1.0):
    """Finite-time kernel ``sin^2(E t / 2 hbar) / (2 pi t hbar (E / 2 hbar)^2)``; unit area in E."""
    d = np.asarray(energy, dtype=float) / hbar
    x = d * t_probe
    small = np.abs(x) < SERIES_SWITCH
    safe = np.where(small, 1.0, d)
    s2 = np.where(small, t_probe**2 * (1 - x * x / 12.0), np.sin(x / 2) ** 2 / (safe / 2) ** 2)
    return s2 / (2 * np.pi * t_probe * hbar)


def kernel_lorentzian(energy, eta: float, hbar: float = 1.0):
    e = np.asarray(energy, dtype=float)
    return (eta / np.pi) / (e * e + eta * eta)


def kernel_gaussian(energy, sigma: float, hbar: float = 1.0):
    e = np.asarray(energy, dtype=float)
    return np.exp(-0.5 * (e / sigma) ** 2) / (np.sqrt(2 * np.pi) * sigma)


KERNELS = {"sinc2": kernel_sinc2, "lorentzian": kernel_lorentzian, "gaussian": kernel_gaussian}


@dataclass(frozen=True)
class RateEntry:
    i: int
    j: int
    mode: int
    channel: str
    detuning: float
    gamma: float


@dataclass(frozen=True)
class RateTable:
    i: int
    j: int
    kernel: str
    kernel_param: float
    entries: tuple[RateEntry, ...]

    @property
    def total(self) -> float:
        return float(sum(e.gamma for e in self.entries))

    def by_channel(self, channel: str) -> float:
        return float(sum(e.gamma for e in self.entries if e.channel == channel))


def golden_rule_rate(i, j, spectrum, ops, model: BackgroundModel, kernel: str = "sinc2",
                     kernel_param: float = 100.0, record=None) -> RateTable:
    """Golden-rule rate ``i -> j`` per mode and channel.

    ``Gamma = (2 pi/hbar)(lambda0/4) sum_n alpha_n^2 [|w_n V1 - i V1t|^2 K(E_j - E_i + hbar w_n)
    + |w_n V1 + i V1t|^2 K(E_j - E_i - hbar w_n)]`` where ``K`` is a unit-area
    stand-in for the delta function: ``"sinc2"`` (parameter ``t_probe``),
    ``"lorentzian"`` (half-width ``eta``) or ``"gaussian"`` (std ``sigma``), in
    energy units. Detunings are reported as angular frequencies.
    """
    _check_pair(i, j)
    if kernel not in KERNELS:
        raise ValueError(f"unknown kernel {kernel!r}; choose from {sorted(KERNELS)}")
    if kernel_param <= 0:
        raise ValueError("kernel_param must be > 0")
    rec = record or transition_record(i, j, spectrum, ops, model)
    kfun = KERNELS[kernel]
    hbar = model.hbar
    pref = 2 * np.pi / hbar * model.lambda0 / 4
    entries = []
    for n, mode in enumerate(model.modes):
        for name, s in CHANNEL_SIGN.items():
            det = rec.omega_ji + s * mode.omega
            gamma = pref * mode.alpha**2 * abs(rec.coupling(mode.omega, s)) ** 2 * float(
                kfun(hbar * det, kernel_param, hbar)
            )
            entries.append(RateEntry(i, j, n, name, det, gamma))
    return RateTable(i, j, kernel, kernel_param, tuple(entries))
