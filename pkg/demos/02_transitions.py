"""First-order transition probabilities under a single radius mode.

Drives the oscillator at the gap between the ground state and the lowest
m = 0 excitation, then compares the perturbative probability with a direct
propagation of the first-order Hamiltonian.
"""
import numpy as np

from sphereosc.background import BackgroundModel
from sphereosc.basis import BasisSpec
from sphereosc.dynamics import (
    propagate,
    spectrum_of,
    tdpt_probability_full,
    tdpt_probability_rw,
    transition_record,
)
from sphereosc.hamiltonian import build_operator_set

R0 = 5.0
ops = build_operator_set(BasisSpec(8), 1 / R0**2)
spec = spectrum_of(ops)
j = next(k for k in range(1, spec.dim) if spec.m_labels[k] == 0)
w = spec.omega(0, j)
model = BackgroundModel(R0, ((1e-3, w),))

rec = transition_record(0, j, spec, ops, model)
print(f"target state {j}, gap {w:.6f}, <j|V1|0> = {rec.V1_ji:.4e}, <j|V1tilde|0> = {rec.V1t_ji:.4e}")

res = propagate(0, model, ops, 60.0, 0.003, spectrum=spec, record_every=2000)
full = tdpt_probability_full(0, j, res.times, spec, ops, model)
rw = tdpt_probability_rw(0, j, res.times, spec, ops, model)
print(f"{'t':>6} {'propagated':>12} {'tdpt':>12} {'rotating':>12}")
for t, p, f, r in zip(res.times, res.populations[:, j], full, rw):
    print(f"{t:6.1f} {p:12.4e} {f:12.4e} {r:12.4e}")
print(f"norm drift {res.norm_drift:.1e}")
