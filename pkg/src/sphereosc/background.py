"""Fluctuating spherical background.

The radius breathes as ``R(t) = R0 + sum_n alpha_n sin(omega_n t)``. Everything
here is a pure function of ``(model, t)``; ``t`` may be a scalar or an array.
Units follow the oscillator convention m = omega_osc = 1 with an explicit hbar.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np


class BackgroundError(ValueError):
    """Invalid background parameters."""


@dataclass(frozen=True)
class FluctuationMode:
    """One sinusoidal radius mode with amplitude ``alpha`` and angular frequency ``omega``."""

    alpha: float
    omega: float

    def __post_init__(self):
        if not np.isfinite(self.omega) or self.omega <= 0:
            raise BackgroundError(f"mode omega must be > 0, got {self.omega}")
        if not np.isfinite(self.alpha) or self.alpha < 0:
            raise BackgroundError(f"mode alpha must be >= 0, got {self.alpha}")


@dataclass(frozen=True)
class BackgroundModel:
    """Sphere of static radius ``R0`` with a finite set of breathing modes.

    The static curvature ``lambda0 = 1/R0**2`` is derived, never configured.
    ``sum(alpha_n)/R0`` must not exceed ``small_amplitude_guard``.
    """

    R0: float
    modes: tuple[FluctuationMode, ...] = ()
    hbar: float = 1.0
    small_amplitude_guard: float = 0.1

    def __post_init__(self):
        if not np.isfinite(self.R0) or self.R0 <= 0:
            raise BackgroundError(f"R0 must be > 0, got {self.R0}")
        if self.hbar <= 0:
            raise BackgroundError(f"hbar must be > 0, got {self.hbar}")
        modes = tuple(
            m if isinstance(m, FluctuationMode) else FluctuationMode(*m) for m in self.modes
        )
        object.__setattr__(self, "modes", modes)
        ratio = self.total_alpha / self.R0
        if ratio > self.small_amplitude_guard:
            raise BackgroundError(
                f"sum(alpha)/R0 = {ratio:.3g} exceeds small_amplitude_guard "
                f"= {self.small_amplitude_guard}"
            )

    @property
    def lambda0(self) -> float:
        return 1.0 / self.R0**2

    @property
    def total_alpha(self) -> float:
        return float(sum(m.alpha for m in self.modes))

    @property
    def alphas(self) -> np.ndarray:
        return np.array([m.alpha for m in self.modes], dtype=float)

    @property
    def omegas(self) -> np.ndarray:
        return np.array([m.omega for m in self.modes], dtype=float)

    def with_modes(self, modes) -> "BackgroundModel":
        return BackgroundModel(self.R0, tuple(modes), self.hbar, self.small_amplitude_guard)

    def scaled(self, factor: float) -> "BackgroundModel":
        """Same frequencies, every amplitude multiplied by ``factor``."""
        return self.with_modes(FluctuationMode(m.alpha * factor, m.omega) for m in self.modes)


def _mode_sum(model: BackgroundModel, t, fn, weight_omega: bool = False):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    for m in model.modes:
        w = m.alpha * m.omega if weight_omega else m.alpha
        out = out + w * fn(m.omega * t)
    return out if out.ndim else float(out)


def radius_at(model: BackgroundModel, t):
    """``R0 + sum alpha_n sin(omega_n t)``."""
    return model.R0 + _mode_sum(model, t, np.sin)


def radius_rate(model: BackgroundModel, t):
    """Time derivative of the radius, ``sum alpha_n omega_n cos(omega_n t)``."""
    return _mode_sum(model, t, np.cos, weight_omega=True)


def curvature_exact(model: BackgroundModel, t):
    return 1.0 / radius_at(model, t) ** 2


def curvature_rate(model: BackgroundModel, t):
    """d/dt of 1/R(t)^2."""
    return -2.0 * radius_rate(model, t) / radius_at(model, t) ** 3


def curvature_first_order(model: BackgroundModel, t):
    """First-order curvature ``lambda0 (1 - 2 sqrt(lambda0) sum alpha_n sin(omega_n t))``.

    The neglected remainder is O(lambda0**2 alpha**2).
    """
    lam0 = model.lambda0
    return lam0 * (1.0 - 2.0 * np.sqrt(lam0) * _mode_sum(model, t, np.sin))


def v0(model: BackgroundModel, t):
    """Signal multiplying V1: ``sqrt(lambda0) sum alpha_n omega_n cos(omega_n t)``."""
    return np.sqrt(model.lambda0) * radius_rate(model, t)


def v0_tilde(model: BackgroundModel, t):
    """Signal multiplying V1tilde: ``sqrt(lambda0) sum alpha_n sin(omega_n t)``."""
    return np.sqrt(model.lambda0) * _mode_sum(model, t, np.sin)


def vector_potential_amplitude(model: BackgroundModel, t):
    """First-order vector potential amplitude f(t); the vector potential is f(t) m(x)."""
    return -v0(model, t)


def check_mode_separation(model: BackgroundModel, t_probe: float) -> list[tuple[int, int]]:
    """Warn about mode pairs closer than 2 pi / t_probe in frequency.

    Close pairs undermine the neglect of interference between channels.
    Returns the offending index pairs.
    """
    close = []
    om = model.omegas
    for a in range(len(om)):
        for b in range(a + 1, len(om)):
            if abs(om[a] - om[b]) < 2 * np.pi / t_probe:
                close.append((a, b))
    if close:
        warnings.warn(
            f"modes {close} are closer than 2*pi/t_probe = {2 * np.pi / t_probe:.3g}; "
            "interference terms between them are not negligible",
            RuntimeWarning,
            stacklevel=2,
        )
    return close
