"""Resonance scan and golden-rule rates.

Sweeps the drive frequency at fixed probe time, locates the peaks of
P(t)/t and checks the area under the main peak against its closed form.
"""
import numpy as np

from sphereosc.background import BackgroundModel
from sphereosc.basis import BasisSpec
from sphereosc.dynamics import golden_rule_peak_area, golden_rule_rate, scan_resonances, spectrum_of, transition_record
from sphereosc.hamiltonian import build_operator_set

R0, alpha, t_probe = 5.0, 1e-3, 100.0
ops = build_operator_set(BasisSpec(8), 1 / R0**2)
spec = spectrum_of(ops)
targets = [k for k in range(1, spec.dim) if spec.m_labels[k] == 0 and spec.energies[k] < 6]
model = BackgroundModel(R0, ((alpha, 1.0),))

grid = np.linspace(0.5, 6.0, 5501)
scan = scan_resonances(0, targets, grid, t_probe, spec, ops, model, alpha)
for k in targets:
    for peak in scan.peaks[k]:
        print(f"0 -> {k:2d}: gap {spec.omega(0, k):.5f}  peak at {peak.center:.5f}  "
              f"height {peak.height:.3e}  fwhm {peak.fwhm:.4f}")

j = targets[0]
w = spec.omega(0, j)
rec = transition_record(0, j, spec, ops, model)
area = scan.peak_area(j, w - 1.5, w + 1.5)
ref = golden_rule_peak_area(rec, w, alpha, model, -1)
print(f"\npeak area {area:.6e}, closed form {ref:.6e}, ratio {area / ref:.4f}")

on_resonance = model.with_modes(((alpha, w),))
for kernel, param in (("sinc2", t_probe), ("lorentzian", 0.01), ("gaussian", 0.01)):
    rates = golden_rule_rate(0, j, spec, ops, on_resonance, kernel, param)
    print(f"{kernel:>10}: Gamma = {rates.total:.4e}")
