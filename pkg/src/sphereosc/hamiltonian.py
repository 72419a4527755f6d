"""Matrix assembly of the curved-space oscillator and its fluctuation operators.

Notation used in the code: ``D = x.p``, ``Dd = p.x`` and
``Q_i = x_i (x.p) + (p.x) x_i`` (the symmetric cubic piece of the Higgs momentum
``pi = p + (lam/2) Q``). Position-only factors are evaluated as one function by
quadrature; any product containing momenta is formed on the padded basis and
projected afterwards.

Two conventions are offered for the first-order fluctuation operators:

``"printed"``
    The operators exactly as they are usually written for this model,
    Hermitian-symmetrized where the written operator ordering is not Hermitian.
``"consistent"``
    The operators obtained by expanding the exact minimal-coupling Hamiltonian
    to first order in the amplitudes. They differ from ``"printed"`` in the
    coefficients (see :func:`build_V1`), and only these make
    ``H_exact - H_first_order`` second order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .background import BackgroundModel, curvature_exact, v0, v0_tilde
from .basis import (
    BasisSpec,
    HermiticityError,
    OperatorMatrix,
    PositionQuadrature,
    cartesian_arrays,
    enumerate_basis,
    relative_hermiticity_error,
)
from .geometry import ChartPoint, exact_phi, exact_vector_potential

CONVENTIONS = ("printed", "consistent")


def _sym(a, b):
    return a @ b + b @ a


class _Assembly:
    """Padded-basis building blocks for one ``(basis, hbar)`` pair."""

    def __init__(self, spec: BasisSpec, hbar: float):
        self.spec = spec
        self.hbar = hbar
        c = cartesian_arrays(spec, hbar)
        self.xs, self.ps = c.xs, c.ps
        X, Y = c.xs
        Px, Py = c.ps
        self.quad = PositionQuadrature(spec, hbar)
        self.D = X @ Px + Y @ Py
        self.Dd = Px @ X + Py @ Y
        self.Q = tuple(x @ self.D + self.Dd @ x for x in c.xs)
        self.Lz = X @ Py - Y @ Px
        self.R2 = X @ X + Y @ Y
        self.P2 = Px @ Px + Py @ Py
        self.PQ = sum(_sym(p, q) for p, q in zip(c.ps, self.Q))
        self.Q2 = sum(q @ q for q in self.Q)
        # L^2 = (1/2) L_ij L_ij with L_ij = x_i p_j - x_j p_i
        Lij = [[x @ p - xj @ pi for xj, p in zip(c.xs, c.ps)] for x, pi in zip(c.xs, c.ps)]
        self.L2 = 0.5 * sum(Lij[i][j] @ Lij[i][j] for i in range(2) for j in range(2))

    def pi(self, lam):
        return tuple(p + 0.5 * lam * q for p, q in zip(self.ps, self.Q))

    def pi2(self, lam):
        return self.P2 + 0.5 * lam * self.PQ + 0.25 * lam**2 * self.Q2

    def h0(self, lam):
        return 0.5 * (self.pi2(lam) + lam * self.L2) + 0.5 * self.R2


@lru_cache(maxsize=16)
def _assembly(spec: BasisSpec, hbar: float) -> _Assembly:
    return _Assembly(spec, float(hbar))


def _core(a: np.ndarray, spec: BasisSpec, name: str, hermitian: bool = True) -> OperatorMatrix:
    d = spec.dim
    return OperatorMatrix(a[:d, :d].copy(), spec, hermitian=hermitian, name=name)


def _check_group(a: np.ndarray, spec: BasisSpec, name: str, tol: float = 1e-12) -> float:
    d = spec.dim
    err = relative_hermiticity_error(a[:d, :d])
    if err > tol:
        raise HermiticityError(f"term group {name!r} is not Hermitian (relative error {err:.3e})")
    return err


def build_Lz(basis: BasisSpec, hbar: float = 1.0) -> OperatorMatrix:
    return _core(_assembly(basis, hbar).Lz, basis, "Lz")


def build_L2(basis: BasisSpec, hbar: float = 1.0) -> OperatorMatrix:
    """Squared angular momentum ``(1/2) L_ij L_ij``, which in two dimensions is ``Lz^2``."""
    return _core(_assembly(basis, hbar).L2, basis, "L2")


def build_pi(basis: BasisSpec, lam: float, hbar: float = 1.0):
    """Symmetrized Higgs momentum ``p + (lam/2)[x(x.p) + (p.x)x]`` as ``(Pi_x, Pi_y)``."""
    if lam < 0:
        raise ValueError("lam must be >= 0")
    pix, piy = _assembly(basis, hbar).pi(lam)
    return _core(pix, basis, "Pi_x"), _core(piy, basis, "Pi_y")


def build_Pi2(basis: BasisSpec, lam: float, hbar: float = 1.0) -> OperatorMatrix:
    return _core(_assembly(basis, hbar).pi2(lam), basis, "Pi2")


def build_H0(basis: BasisSpec, lam: float, hbar: float = 1.0) -> OperatorMatrix:
    """Curved-space oscillator ``(1/2)(pi^2 + lam L^2) + (1/2)(x^2 + y^2)``."""
    if lam < 0:
        raise ValueError("lam must be >= 0")
    return _core(_assembly(basis, hbar).h0(lam), basis, "H0")


def _m_profile(lambda0):
    return lambda r2: (1.0 + lambda0 * r2) ** -2


def _m_padded(asm: _Assembly, lambda0: float):
    g = _m_profile(lambda0)
    qd = asm.quad
    r2 = qd.x**2 + qd.y**2
    return tuple(qd.matrix(c * g(r2)) for c in (qd.x, qd.y))


def build_m(basis: BasisSpec, lambda0: float, hbar: float = 1.0):
    """Components of ``m = x / (1 + lambda0 r^2)^2``.

    ``m`` is a pure position function, so no ordering question arises; it is
    evaluated directly by quadrature.
    """
    if lambda0 < 0:
        raise ValueError("lambda0 must be >= 0")
    mx, my = _m_padded(_assembly(basis, hbar), lambda0)
    return _core(mx, basis, "Mx"), _core(my, basis, "My")


def _v1_groups(asm: _Assembly, lambda0: float, convention: str) -> dict[str, np.ndarray]:
    qd = asm.quad
    x, y = qd.x, qd.y
    r2 = x * x + y * y
    g = _m_profile(lambda0)(r2)
    M = _m_padded(asm, lambda0)
    # x(x.m) + (m.x)x = 2 x r^2 g, a position function
    Qm = tuple(qd.matrix(2 * c * r2 * g) for c in (x, y))
    # x m_y - y m_x vanishes identically because m is parallel to x
    Lm = qd.matrix(x * (y * g) - y * (x * g))
    P, Q, lam = asm.ps, asm.Q, lambda0

    cross = sum(p @ qm + m @ q for p, qm, m, q in zip(P, Qm, M, Q))
    cross_h = 0.5 * (cross + cross.conj().T)
    groups = {
        "p.m + m.p": sum(_sym(p, m) for p, m in zip(P, M)),
        "curvature cross terms": cross_h,
        "angular cross terms": _sym(asm.Lz, Lm),
        "quartic terms": sum(_sym(q, qm) for q, qm in zip(Q, Qm)),
    }
    if convention == "printed":
        coef = {"p.m + m.p": 1.0, "curvature cross terms": lam / 2,
                "angular cross terms": lam, "quartic terms": lam**2 / 2}
    else:
        coef = {"p.m + m.p": 0.5, "curvature cross terms": lam / 2,
                "angular cross terms": lam / 2, "quartic terms": lam**2 / 8}
    groups = {k: coef[k] * v for k, v in groups.items()}
    groups["_cross_antihermitian"] = 0.5 * (cross - cross.conj().T)
    return groups


def _v1t_groups(asm: _Assembly, lambda0: float, convention: str) -> dict[str, np.ndarray]:
    scale = 1.0 if convention == "printed" else lambda0
    return {
        "L2 + p.Q/2 + Q.p/2": -scale * (asm.L2 + 0.5 * asm.PQ),
        "Q^2": -scale * 0.5 * lambda0 * asm.Q2,
    }


def _check_convention(convention):
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def _v1_padded(asm, lambda0, convention, report=None):
    groups = _v1_groups(asm, lambda0, convention)
    anti = groups.pop("_cross_antihermitian")
    for name, a in groups.items():
        _check_group(a, asm.spec, f"V1: {name}")
    if report is not None:
        d = asm.spec.dim
        report["V1 written-order antihermitian part"] = float(
            np.abs(lambda0 / 2 * anti[:d, :d]).max()
        )
    return sum(groups.values())


def build_V1(basis: BasisSpec, lambda0: float, hbar: float = 1.0, convention: str = "printed") -> OperatorMatrix:
    """Operator paired with ``v0(t)`` in the first-order Hamiltonian.

    Four term groups, each checked for hermiticity on its own:

    * ``p.m + m.p``
    * ``(lam/2){p.[x(x.m) + (m.x)x] + m.[x(x.p) + (p.x)x]}``, replaced by its
      Hermitian part because the written ordering is not Hermitian
    * ``lam [L (x m_y - y m_x) + (x m_y - y m_x) L]`` (identically zero)
    * ``(lam^2/2){Q.Q_m + Q_m.Q}``

    With ``convention="consistent"`` the coefficients become ``1/2``,
    ``lam/2``, ``lam/2`` and ``lam^2/8``, which is ``(1/2){pi, Pi_m}``
    with ``Pi_m = m + (lam/2) Q_m``. At ``lambda0 = 0`` the printed form
    reduces to ``{X, Px} + {Y, Py}``.
    """
    _check_convention(convention)
    asm = _assembly(basis, hbar)
    return _core(_v1_padded(asm, lambda0, convention), basis, "V1")


def build_V1_tilde(basis: BasisSpec, lambda0: float, hbar: float = 1.0, convention: str = "printed") -> OperatorMatrix:
    """Operator paired with ``v0_tilde(t)``.

    Printed form ``-{L^2 + (1/2) p.Q + (1/2) Q.p} - (lam/2) Q.Q``. The squared
    bracket is read with the Hermitian ordering ``Q`` used everywhere else. The
    consistent convention carries an extra factor ``lambda0``: this operator is
    ``-2 lambda0 dH0/dlam``.
    """
    _check_convention(convention)
    asm = _assembly(basis, hbar)
    groups = _v1t_groups(asm, lambda0, convention)
    for name, a in groups.items():
        _check_group(a, basis, f"V1tilde: {name}")
    return _core(sum(groups.values()), basis, "V1tilde")


@dataclass(frozen=True, eq=False)
class HiggsOperatorSet:
    """Every static operator needed downstream, on the core basis."""

    lambda0: float
    basis: BasisSpec
    hbar: float
    convention: str
    H0: OperatorMatrix
    Pi2: OperatorMatrix
    L2: OperatorMatrix
    Lz: OperatorMatrix
    Mx: OperatorMatrix
    My: OperatorMatrix
    V1: OperatorMatrix
    V1tilde: OperatorMatrix
    assembly_report: dict = field(default_factory=dict)

    def commutator_norms(self) -> dict[str, float]:
        """Relative Frobenius norms of ``[A, Lz]`` and ``[H0, L2]``."""
        out = {}
        lz = self.Lz.entries
        for name in ("H0", "V1", "V1tilde"):
            a = getattr(self, name).entries
            out[f"[{name},Lz]"] = float(np.linalg.norm(a @ lz - lz @ a) / max(np.linalg.norm(a), 1e-300))
        h, l2 = self.H0.entries, self.L2.entries
        out["[H0,L2]"] = float(np.linalg.norm(h @ l2 - l2 @ h) / np.linalg.norm(h))
        return out


def _core_arrays(basis, lambda0, hbar, convention, report):
    asm = _assembly(basis, hbar)
    mx, my = _m_padded(asm, lambda0)
    groups = _v1t_groups(asm, lambda0, convention)
    return {
        "H0": asm.h0(lambda0),
        "Pi2": asm.pi2(lambda0),
        "L2": asm.L2,
        "Lz": asm.Lz,
        "Mx": mx,
        "My": my,
        "V1": _v1_padded(asm, lambda0, convention, report),
        "V1tilde": sum(groups.values()),
    }


def pad_convergence(basis: BasisSpec, lambda0: float, hbar: float = 1.0,
                    convention: str = "printed", pad2: int | None = None) -> dict[str, float]:
    """Largest relative change of each operator when the padding is raised.

    Compared on core states with total quanta <= n_max - 2.
    """
    pad2 = 2 * basis.pad if pad2 is None else pad2
    other = basis.with_pad(pad2)
    a = _core_arrays(basis, lambda0, hbar, convention, None)
    b = _core_arrays(other, lambda0, hbar, convention, None)
    keep = enumerate_basis(basis).quanta <= basis.n_max - 2
    out = {}
    for k in a:
        d = basis.dim
        x, y = a[k][:d, :d][np.ix_(keep, keep)], b[k][:d, :d][np.ix_(keep, keep)]
        scale = max(np.abs(x).max(), 1e-300)
        out[k] = float(np.abs(x - y).max() / scale) if keep.any() else 0.0
    return out


def build_operator_set(basis: BasisSpec, lambda0: float, hbar: float = 1.0,
                       convention: str = "printed", pad_check: bool = True) -> HiggsOperatorSet:
    """Assemble :class:`HiggsOperatorSet`; ``pad_check`` adds a padding-refinement report."""
    _check_convention(convention)
    if lambda0 < 0:
        raise ValueError("lambda0 must be >= 0")
    report: dict = {}
    arrays = _core_arrays(basis, lambda0, hbar, convention, report)
    for gname, a in _v1t_groups(_assembly(basis, hbar), lambda0, convention).items():
        _check_group(a, basis, f"V1tilde: {gname}")
    mats = {k: _core(v, basis, k) for k, v in arrays.items()}
    if pad_check:
        report["pad_convergence"] = pad_convergence(basis, lambda0, hbar, convention)
        report["pad_convergence_pads"] = (basis.pad, 2 * basis.pad)
    ops = HiggsOperatorSet(lambda0, basis, float(hbar), convention, assembly_report=report, **mats)
    report["commutators"] = ops.commutator_norms()
    return ops


def operator_set_for(model: BackgroundModel, basis: BasisSpec, **kw) -> HiggsOperatorSet:
    return build_operator_set(basis, model.lambda0, model.hbar, **kw)


def _check_compatible(ops: HiggsOperatorSet, model: BackgroundModel):
    if not np.isclose(ops.lambda0, model.lambda0, rtol=1e-14, atol=0):
        raise ValueError(f"operator set built for lambda0={ops.lambda0}, model has {model.lambda0}")
    if ops.hbar != model.hbar:
        raise ValueError("operator set and model disagree on hbar")


def first_order_array(ops: HiggsOperatorSet, model: BackgroundModel, t: float) -> np.ndarray:
    return ops.H0.entries + v0(model, t) * ops.V1.entries + v0_tilde(model, t) * ops.V1tilde.entries


def build_H_first_order(ops: HiggsOperatorSet, model: BackgroundModel, t: float) -> OperatorMatrix:
    """``H0 + v0(t) V1 + v0_tilde(t) V1tilde``."""
    _check_compatible(ops, model)
    return OperatorMatrix(first_order_array(ops, model, t), ops.basis, name="H_first_order")


class ExactHamiltonian:
    """Minimal-coupling Hamiltonian ``H0(x, p - A(t); lam(t)) + phi(t)``.

    ``lam(t) = 1/R(t)^2`` exactly and ``A``, ``phi`` come from the exact chart
    geometry. With ``Pi_A = A + (lam/2)[x(x.A) + (A.x)x]`` (a position function)
    the kinetic part expands as ``pi^2 - {pi, Pi_A} + Pi_A^2``; the last term is a
    single quadrature so no truncated product of two position functions enters.
    Calling the object with a time returns the core matrix.
    """

    def __init__(self, basis: BasisSpec, model: BackgroundModel):
        self.basis = basis
        self.model = model
        self._asm = _assembly(basis, model.hbar)
        qd = self._asm.quad
        self._point = ChartPoint(qd.x, qd.y)

    def padded(self, t: float) -> np.ndarray:
        asm, qd, model = self._asm, self._asm.quad, self.model
        lam = float(curvature_exact(model, t))
        h = asm.h0(lam)
        if not model.modes:
            return h
        x, y = qd.x, qd.y
        A = exact_vector_potential(self._point, model, t)
        xa = x * A[0] + y * A[1]
        pia = (A[0] + lam * x * xa, A[1] + lam * y * xa)
        pia_m = tuple(qd.matrix(v) for v in pia)
        la = x * A[1] - y * A[0]
        la_m = qd.matrix(la)
        h = h - 0.5 * sum(_sym(p, m) for p, m in zip(asm.ps, pia_m))
        h = h - 0.25 * lam * sum(_sym(q, m) for q, m in zip(asm.Q, pia_m))
        h = h + 0.5 * qd.matrix(pia[0] ** 2 + pia[1] ** 2)
        h = h + 0.5 * lam * (qd.matrix(la * la) - _sym(asm.Lz, la_m))
        h = h + qd.matrix(exact_phi(self._point, model, t))
        return h

    def array(self, t: float) -> np.ndarray:
        d = self.basis.dim
        return self.padded(t)[:d, :d].copy()

    def __call__(self, t: float) -> OperatorMatrix:
        return OperatorMatrix(self.array(t), self.basis, name="H_exact")


def build_H_exact(basis: BasisSpec, model: BackgroundModel, t: float, hbar: float | None = None) -> OperatorMatrix:
    if hbar is not None and hbar != model.hbar:
        raise ValueError("hbar must match model.hbar")
    return ExactHamiltonian(basis, model)(t)
