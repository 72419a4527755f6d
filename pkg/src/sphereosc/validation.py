"""Invariant suite run by ``sphereosc validate``.

Every check reports a measured residual against a tolerance. Rows marked
``info`` are diagnostics without a pass/fail verdict.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .background import BackgroundModel, curvature_exact, radius_at
from .basis import BasisSpec, relative_hermiticity_error
from .dynamics import (
    golden_rule_rate,
    operator_norm_scaling,
    propagate,
    spectrum_diagnostics,
    spectrum_of,
    suggest_dt,
    tdpt_probability_rw,
    transition_record,
)
from .geometry import ChartPoint, embed, geometry_derivatives
from .hamiltonian import ExactHamiltonian, HiggsOperatorSet, build_operator_set

log = logging.getLogger(__name__)

PASS, FAIL, INFO = "pass", "fail", "info"


@dataclass(frozen=True)
class Check:
    module: str
    name: str
    residual: float
    tolerance: float
    status: str

    @property
    def ok(self) -> bool:
        return self.status != FAIL


def _check(module, name, residual, tol) -> Check:
    residual = float(residual)
    status = PASS if np.isfinite(residual) and residual <= tol else FAIL
    return Check(module, name, residual, float(tol), status)


def _probe_times(model: BackgroundModel, n: int, seed: int = 0) -> np.ndarray:
    span = 2 * np.pi / min(model.omegas, default=1.0)
    return np.sort(np.random.default_rng(seed).uniform(0, span, n))


def hermiticity_checks(ops: HiggsOperatorSet, model: BackgroundModel, n_times: int = 5, tol: float = 1e-12):
    out = [_check("hamiltonian", f"hermiticity {k}", relative_hermiticity_error(getattr(ops, k).entries), tol)
           for k in ("H0", "Pi2", "L2", "V1", "V1tilde")]
    exact = ExactHamiltonian(ops.basis, model)
    worst = max(relative_hermiticity_error(exact.array(t)) for t in _probe_times(model, n_times))
    out.append(_check("hamiltonian", f"hermiticity H_exact ({n_times} times)", worst, tol))
    return out


def commutator_checks(ops: HiggsOperatorSet, tol: float = 1e-10):
    return [_check("hamiltonian", f"commutator {k}", v, tol) for k, v in ops.commutator_norms().items()]


def pad_checks(ops: HiggsOperatorSet, tol: float = 1e-10):
    conv = ops.assembly_report.get("pad_convergence")
    if conv is None:
        return []
    return [_check("basis", "pad convergence (max over operators)", max(conv.values()), tol)]


def spectrum_checks(ops, spec, tol: float = 1e-10):
    d = spectrum_diagnostics(spec, ops.H0, ops.Lz)
    return [_check("dynamics", f"spectrum {k}", v, tol) for k, v in d.items()]


def selection_rule_checks(ops, spec, tol: float = 1e-10):
    forbidden = (spec.m_labels[:, None] != spec.m_labels[None, :]) | (
        spec.parities[:, None] != spec.parities[None, :])
    out = []
    for name in ("V1", "V1tilde"):
        a = np.abs(spec.in_eigenbasis(getattr(ops, name)))
        out.append(_check("dynamics", f"selection rules {name}", a[forbidden].max(initial=0.0) / max(a.max(), 1e-300), tol))
    return out


def flat_limit_checks(basis: BasisSpec, hbar: float, n_levels: int = 10, tol: float = 1e-10):
    ops = build_operator_set(basis, 0.0, hbar, pad_check=False)
    e = spectrum_of(ops).energies
    n = min(n_levels, len(e))
    expected = hbar * np.concatenate([np.full(k + 1, k + 1.0) for k in range(n)])[:n]
    return [_check("hamiltonian", f"flat-limit spectrum (lowest {n})", np.abs(e[:n] - expected).max(), tol)]


def geometry_checks(model: BackgroundModel, n_points: int = 100, seed: int = 0,
                    fd_tol: float = 1e-7, sphere_tol: float = 1e-12):
    """Analytic chart derivatives against fourth-order centered finite differences.

    Errors are relative to the analytic vector norm, floored at 1e-3 of the
    grid maximum so that zeros of ``dR/dt`` do not divide by ~0.
    """
    rng = np.random.default_rng(seed)
    x, y = rng.uniform(-2, 2, (2, n_points))
    span = 2 * np.pi / min(model.omegas, default=1.0)
    t = rng.uniform(0, span, n_points)
    p = ChartPoint(x, y)
    rx, ry, rt = geometry_derivatives(p, model, t)

    def emb(xx, yy, tt):
        return embed(ChartPoint(xx, yy), curvature_exact(model, tt))

    def fd(f, h):
        # fourth-order centered stencil
        return (8 * (f(h) - f(-h)) - (f(2 * h) - f(-2 * h))) / (12 * h)

    fds = {
        "r_x": (rx, fd(lambda d: emb(x + d, y, t), 1e-3)),
        "r_y": (ry, fd(lambda d: emb(x, y + d, t), 1e-3)),
        "r_t": (rt, fd(lambda d: emb(x, y, t + d), 3e-3)),
    }
    out = []
    for name, (an, fd) in fds.items():
        norm = np.linalg.norm(an, axis=0)
        if norm.max() == 0:
            rel = np.abs(fd).max()
        else:
            rel = (np.linalg.norm(an - fd, axis=0) / np.maximum(norm, 1e-3 * norm.max())).max()
        out.append(_check("geometry", f"finite-difference {name}", rel, fd_tol))
    q = emb(x, y, t)
    r = radius_at(model, t)
    out.append(_check("geometry", "sphere constraint |r|^2 = R^2", (np.abs((q * q).sum(0) - r * r) / (r * r)).max(), sphere_tol))
    return out


def _allowed_pair(spec, i=0):
    for j in range(spec.dim):
        if j != i and spec.m_labels[j] == spec.m_labels[i] and abs(spec.omega(i, j)) > 1e-8:
            return j
    return None


def detailed_balance_checks(ops, spec, model, kernel="sinc2", kernel_param=100.0, tol=1e-12):
    """``Gamma(i->j, emission) = Gamma(j->i, absorption)`` for a symmetric kernel."""
    if not model.modes:
        return []
    worst = 0.0
    for i in range(min(spec.dim, 6)):
        j = _allowed_pair(spec, i)
        if j is None:
            continue
        fwd = golden_rule_rate(i, j, spec, ops, model, kernel, kernel_param).entries
        bwd = golden_rule_rate(j, i, spec, ops, model, kernel, kernel_param).entries
        fmap = {(e.mode, e.channel): e.gamma for e in fwd}
        for e in bwd:
            other = fmap[(e.mode, "emission" if e.channel == "absorption" else "absorption")]
            scale = max(abs(other), abs(e.gamma), 1e-300)
            worst = max(worst, abs(other - e.gamma) / scale)
    return [_check("dynamics", "detailed balance of golden-rule rates", worst, tol)]


def sinc_kernel_checks(ops, spec, model, t_probe=100.0, tol=1e-12):
    """The sinc^2 golden rule equals the incoherent first-order probability over time."""
    if not model.modes:
        return []
    j = _allowed_pair(spec)
    if j is None:
        return []
    rec = transition_record(0, j, spec, ops, model)
    gamma = golden_rule_rate(0, j, spec, ops, model, "sinc2", t_probe, record=rec).total
    p = tdpt_probability_rw(0, j, t_probe, spec, ops, model, record=rec)
    return [_check("dynamics", "sinc^2 rate equals P_rw/t", abs(gamma - p / t_probe) / max(abs(gamma), 1e-300), tol)]


def norm_checks(ops, spec, model, t_final, dt, integrator="rk4", mode="first_order", tol=1e-8):
    res = propagate(0, model, ops, t_final, dt, mode, integrator, spec, record_every=10**9, check_norm=False)
    return [_check("dynamics", f"norm drift ({mode}, {integrator})", res.norm_drift, tol)]


def alpha_scaling_info(ops, model, n_times=5):
    if not model.modes:
        return []
    times = _probe_times(model, n_times)
    _, _, p = operator_norm_scaling(ops.basis, model, ops, times)
    return [Check("hamiltonian", f"first-order error exponent p ({ops.convention})", float(p), float("nan"), INFO)]


def run_validation(model: BackgroundModel, basis: BasisSpec, convention: str = "printed",
                   t_final: float = 20.0, dt: float | None = None, integrator: str = "rk4",
                   mode: str = "first_order", kernel: str = "sinc2", kernel_param: float = 100.0) -> list[Check]:
    """Run the full invariant suite for one configuration."""
    ops = build_operator_set(basis, model.lambda0, model.hbar, convention)
    spec = spectrum_of(ops)
    dt = dt or suggest_dt(spec, model, t_final, integrator)
    checks = []
    checks += hermiticity_checks(ops, model)
    checks += commutator_checks(ops)
    checks += pad_checks(ops)
    checks += spectrum_checks(ops, spec)
    checks += selection_rule_checks(ops, spec)
    checks += flat_limit_checks(basis, model.hbar)
    checks += geometry_checks(model)
    checks += detailed_balance_checks(ops, spec, model, kernel, kernel_param)
    checks += sinc_kernel_checks(ops, spec, model)
    checks += norm_checks(ops, spec, model, t_final, dt, integrator, mode)
    checks += alpha_scaling_info(ops, model)
    for c in checks:
        log.info("%-5s %-10s %-45s %.3e (tol %.1e)", c.status, c.module, c.name, c.residual, c.tolerance)
    return checks
