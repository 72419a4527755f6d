"""Higgs oscillator levels on a static sphere.

Builds the Fock-basis Hamiltonian for a few curvatures, diagonalizes it
together with L_z and compares the lowest levels with the closed form
E_N = lam (N + 1)(kappa + N/2), kappa(kappa - 1) = 1/lam^2.
"""
import numpy as np

from sphereosc.basis import BasisSpec
from sphereosc.dynamics import spectrum_of
from sphereosc.hamiltonian import build_operator_set


def closed_form(lam, n_levels):
    if lam == 0:
        return np.arange(1, n_levels + 1, dtype=float)
    kappa = 0.5 + np.sqrt(0.25 + 1 / lam**2)
    return np.array([lam * (n + 1) * (kappa + n / 2) for n in range(n_levels)])


for lam in (0.0, 0.04, 0.1):
    ops = build_operator_set(BasisSpec(16), lam, pad_check=False)
    spec = spectrum_of(ops)
    print(f"lambda = {lam}")
    print(f"  cluster sizes {spec.cluster_sizes[:5]}")
    start = 0
    for N in range(5):
        # level N holds N + 1 states with m = -N, -N + 2, ..., N
        block = spec.energies[start:start + N + 1]
        ms = sorted(int(m) for m in spec.m_labels[start:start + N + 1])
        ref = closed_form(lam, N + 1)[N]
        print(f"  N = {N}: E = {block.mean():.10f}  closed form {ref:.10f}  "
              f"spread {block.max() - block.min():.1e}  m = {ms}")
        start += N + 1
    print()

# With curvature switched on the higher levels split by more than the
# default clustering tolerance: the truncated Fock basis converges only
# algebraically in n_max.
