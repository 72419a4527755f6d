"""Reference computations that share no code with the package."""
import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq


def higgs_levels(lam, n_levels, hbar=1.0):
    """Closed-form ``E_N = lam (N+1)(kappa + N/2)``, ``kappa(kappa-1) = 1/lam^2``, each N+1 fold."""
    k = 0.5 + math.sqrt(0.25 + 1 / lam**2)
    return np.concatenate([np.full(n + 1, hbar * lam * (n + 1) * (k + n / 2)) for n in range(n_levels)])


def _radial_rhs(lam, eps):
    # m = 0 sector of H0 with the flat measure:
    # -(1/2)[(1+lam r^2)^2 f'' + (1/r + 6 lam r + 5 lam^2 r^3) f' + (3 lam + 15/4 lam^2 r^2) f] + r^2 f/2 = eps f
    def rhs(r, u):
        f, g = u
        a = (1 + lam * r * r) ** 2
        b = 1 / r + 6 * lam * r + 5 * lam**2 * r**3
        c = 3 * lam + 3.75 * lam**2 * r * r - r * r + 2 * eps
        return [g, -(b * g + c * f) / a]
    return rhs


def _wronskian(eps, lam, r0=1e-4, rm=2.0, rmax=300.0):
    kw = dict(method="DOP853", rtol=1e-13, atol=1e-300)
    a = -(2 * eps + 3 * lam) / 4
    out = solve_ivp(_radial_rhs(lam, eps), (r0, rm), [1 + a * r0**2, 2 * a * r0], **kw).y[:, -1]
    s = -2 - math.sqrt(0.25 + 1 / lam**2)  # decaying power law at large r
    inn = solve_ivp(_radial_rhs(lam, eps), (rmax, rm), [rmax**s, s * rmax ** (s - 1)], **kw).y[:, -1]
    return (out[0] * inn[1] - out[1] * inn[0]) / abs(out[0] * inn[0])


def shooting_ground_energy(lam, bracket=(0.9, 1.3)):
    """Lowest m = 0 eigenvalue by two-sided shooting with a Wronskian match."""
    return brentq(_wronskian, *bracket, args=(lam,), xtol=1e-14)


def kron_ladder(n_axis):
    """Per-axis Fock cutoff ``n_axis``; returns X, Y, Px, Py and an index helper."""
    a = np.diag(np.sqrt(np.arange(1, n_axis + 1)), 1)
    one = np.eye(n_axis + 1)
    ax, ay = np.kron(a, one), np.kron(one, a)
    s = math.sqrt(0.5)
    X, Y = s * (ax + ax.T), s * (ay + ay.T)
    Px, Py = 1j * s * (ax.T - ax), 1j * s * (ay.T - ay)
    return X + 0j, Y + 0j, Px, Py, lambda nx, ny: nx * (n_axis + 1) + ny
