"""Single-mode frequency scans of the finite-time transition rate."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from ..background import BackgroundModel, FluctuationMode
from .tdpt import tdpt_probability_rw, transition_record


@dataclass(frozen=True)
class Peak:
    center: float
    height: float
    fwhm: float


@dataclass(frozen=True, eq=False)
class ResonanceScan:
    source: int
    omegas: np.ndarray
    rates: dict  # target -> P(t_probe)/t_probe over omegas
    peaks: dict  # target -> list[Peak]
    t_probe: float
    alpha: float

    def peak_area(self, target: int, lo: float, hi: float) -> float:
        """Integral of the scan curve over ``lo <= omega <= hi`` (Simpson)."""
        sel = (self.omegas >= lo) & (self.omegas <= hi)
        return float(simpson(self.rates[target][sel], x=self.omegas[sel]))


def _fwhm(w, y, k):
    half = 0.5 * y[k]
    left = k
    while left > 0 and y[left] > half:
        left -= 1
    right = k
    while right < len(y) - 1 and y[right] > half:
        right += 1
    if y[left] > half or y[right] > half:
        return float("nan")
    xl = w[left] + (half - y[left]) * (w[left + 1] - w[left]) / (y[left + 1] - y[left])
    xr = w[right - 1] + (half - y[right - 1]) * (w[right] - w[right - 1]) / (y[right] - y[right - 1])
    return float(xr - xl)


def find_peaks(omegas, values, t_probe, floor_rel=1e-6):
    """Local maxima that dominate a ``+/- 4 pi / t_probe`` window and clear the noise floor.

    The window removes side lobes next to a peak. Far side lobes can still be
    local maxima when the coupling weight grows with frequency; they are
    recognised by their width: a side lobe spans ``2 pi / t`` between zeros
    (FWHM about ``pi / t``) while the main lobe has FWHM about ``0.886 * 2 pi / t``.
    Maxima with FWHM below ``0.7 * 2 pi / t`` are dropped. Centers are refined by
    a three-point parabola.
    """
    w, y = np.asarray(omegas), np.asarray(values)
    if len(w) < 3:
        return []
    floor = floor_rel * y.max()
    half_window = 4 * np.pi / t_probe
    peaks = []
    for k in range(1, len(w) - 1):
        if not (y[k] >= y[k - 1] and y[k] > y[k + 1] and y[k] > floor):
            continue
        sel = np.abs(w - w[k]) <= half_window
        if y[k] < y[sel].max():
            continue
        d1, d2 = y[k + 1] - y[k - 1], y[k + 1] - 2 * y[k] + y[k - 1]
        shift = -0.5 * d1 / d2 if d2 != 0 else 0.0
        center = w[k] + shift * (w[k + 1] - w[k])
        width = _fwhm(w, y, k)
        if width < 0.7 * 2 * np.pi / t_probe:
            continue
        peaks.append(Peak(float(center), float(y[k]), width))
    return peaks


def scan_resonances(i, targets, omega_grid, t_probe, spectrum, ops, model: BackgroundModel,
                    alpha: float, floor_rel: float = 1e-6) -> ResonanceScan:
    """``P_{i->j}(t_probe)/t_probe`` for a single mode ``(alpha, omega)`` swept over ``omega_grid``.

    ``model`` provides ``R0`` and ``hbar``; its own modes are ignored.
    """
    omegas = np.asarray(omega_grid, dtype=float)
    if omegas.size == 0:
        raise ValueError("empty omega grid")
    if np.any(omegas <= 0):
        raise ValueError("scan frequencies must be positive")
    probe = model.with_modes([FluctuationMode(alpha, float(omegas[0]))])
    rates, peaks = {}, {}
    for j in targets:
        rec = transition_record(i, j, spectrum, ops, probe)
        vals = np.array([
            tdpt_probability_rw(i, j, t_probe, spectrum, ops,
                                probe.with_modes([FluctuationMode(alpha, w)]), record=rec)
            for w in omegas
        ]) / t_probe
        rates[j] = vals
        peaks[j] = find_peaks(omegas, vals, t_probe, floor_rel)
    return ResonanceScan(i, omegas, rates, peaks, t_probe, alpha)


def golden_rule_peak_area(record, omega: float, alpha: float, model: BackgroundModel, sign: int) -> float:
    """Closed-form area ``(pi lambda0 / 2 hbar^2) alpha^2 |omega V1 - sign i V1t|^2`` of a scan peak."""
    return float(np.pi * model.lambda0 / (2 * model.hbar**2) * alpha**2 * abs(record.coupling(omega, sign)) ** 2)
