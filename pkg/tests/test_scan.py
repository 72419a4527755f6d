import numpy as np
import pytest

from sphereosc.dynamics import golden_rule_peak_area, scan_resonances, transition_record
from sphereosc.dynamics.scan import find_peaks


@pytest.fixture(scope="module")
def scan(ops8, spec8, model_resonant):
    grid = np.linspace(0.5, 6.0, 2201)
    targets = [j for j in range(spec8.dim) if j != 0 and spec8.m_labels[j] == 0 and abs(spec8.omega(0, j)) < 6]
    return scan_resonances(0, targets, grid, 100.0, spec8, ops8, model_resonant, 1e-3)


def test_peaks_align_with_gaps(scan, spec8):
    step = scan.omegas[1] - scan.omegas[0]
    for j, peaks in scan.peaks.items():
        assert len(peaks) == 1
        assert abs(peaks[0].center - abs(spec8.omega(0, j))) <= step


def test_peak_width(scan):
    for peaks in scan.peaks.values():
        assert peaks[0].fwhm == pytest.approx(2 * np.pi / scan.t_probe, rel=0.2)


def test_peak_area(scan, ops8, spec8, model_resonant):
    for j, peaks in scan.peaks.items():
        w = abs(spec8.omega(0, j))
        rec = transition_record(0, j, spec8, ops8, model_resonant)
        ref = golden_rule_peak_area(rec, w, 1e-3, model_resonant, -1)
        half = 0.5
        assert scan.peak_area(j, w - half, w + half) == pytest.approx(ref, rel=0.02)


def test_scan_errors(ops8, spec8, model_resonant):
    with pytest.raises(ValueError):
        scan_resonances(0, [5], [], 100.0, spec8, ops8, model_resonant, 1e-3)
    with pytest.raises(ValueError):
        scan_resonances(0, [5], [-1.0, 1.0], 100.0, spec8, ops8, model_resonant, 1e-3)


def test_find_peaks_ignores_side_lobes():
    w = np.linspace(-3, 3, 3001)
    t = 20.0
    y = np.sinc(w * t / (2 * np.pi)) ** 2
    peaks = find_peaks(w, y, t)
    assert len(peaks) == 1 and abs(peaks[0].center) < 1e-3
