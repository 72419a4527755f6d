"""How faithful is the first-order Hamiltonian?

Compares the exact minimal-coupling Hamiltonian with its first-order
expansion, for both expansion conventions, by fitting the amplitude
scaling of the operator difference and of the population discrepancy.
"""
import numpy as np

from sphereosc.background import BackgroundModel
from sphereosc.basis import BasisSpec
from sphereosc.dynamics import compare_first_order_vs_exact, operator_norm_scaling, spectrum_of
from sphereosc.hamiltonian import build_operator_set

R0 = 5.0
for convention in ("printed", "consistent"):
    ops = build_operator_set(BasisSpec(4), 1 / R0**2, convention=convention)
    spec = spectrum_of(ops)
    j = next(k for k in range(1, spec.dim) if spec.m_labels[k] == 0)
    model = BackgroundModel(R0, ((4e-3, spec.omega(0, j)),))
    times = np.linspace(0.1, 3.0, 8)
    alphas, norms, p = operator_norm_scaling(ops.basis, model, ops, times, scales=(1.0, 0.5, 0.25))
    rep = compare_first_order_vs_exact(0, j, model, ops, 10.0, 0.04, spectrum=spec)
    print(f"{convention}:")
    print(f"  ||H_exact - H_first|| ~ alpha^{p:.2f}  ({', '.join(f'{n:.2e}' for n in norms)})")
    print(f"  max |dP| ~ alpha^{rep.exponent:.2f}  CI [{rep.exponent_ci[0]:.2f}, {rep.exponent_ci[1]:.2f}]")
    print(f"  relative discrepancy ~ alpha^{rep.relative_exponent:.2f}")
