"""Total-quanta truncated 2D oscillator basis and operator assembly primitives.

Operators are built on a *padded* basis (``nx + ny <= n_max + pad``), multiplied
there, and only then restricted to the core (``nx + ny <= n_max``). Because the
basis is ordered by total quanta, the core is the leading ``D x D`` block.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class HermiticityError(ArithmeticError):
    """An operator flagged Hermitian failed its hermiticity check."""


class QuadratureOrderError(ValueError):
    """Quadrature order below the polynomial exactness floor."""


def core_dimension(n_max: int) -> int:
    return (n_max + 1) * (n_max + 2) // 2


@dataclass(frozen=True)
class BasisSpec:
    """Truncation parameters: core cutoff, padding quanta and Gauss-Hermite order.

    The default quadrature order ``2 (n_max + pad) + 30`` integrates products of
    padded basis functions with smooth weights well past the polynomial floor
    ``n_max + pad + 1``. Lower orders visibly break rotational symmetry: the
    curvature profile ``(1 + lam r^2)^-2`` has poles at ``r = +/- i/sqrt(lam)``
    and Gauss-Hermite convergence slows as ``lam`` grows. The default keeps
    ``[V1, Lz]`` near roundoff for ``lam <= 0.2``; larger curvatures need a
    larger explicit ``quad_order``.
    """

    n_max: int
    pad: int = 4
    quad_order: int | None = None

    def __post_init__(self):
        if self.n_max < 0 or self.pad < 0:
            raise ValueError("n_max and pad must be non-negative")
        if self.quad_order is None:
            object.__setattr__(self, "quad_order", 2 * self.n_padded + 30)
        if self.quad_order < self.n_padded + 1:
            raise QuadratureOrderError(
                f"quad_order={self.quad_order} below exactness floor n_max+pad+1="
                f"{self.n_padded + 1}"
            )

    @property
    def n_padded(self) -> int:
        return self.n_max + self.pad

    @property
    def dim(self) -> int:
        return core_dimension(self.n_max)

    @property
    def padded_dim(self) -> int:
        return core_dimension(self.n_padded)

    def with_pad(self, pad: int, quad_order: int | None = None) -> "BasisSpec":
        return BasisSpec(self.n_max, pad, quad_order)

    def with_n_max(self, n_max: int) -> "BasisSpec":
        return BasisSpec(n_max, self.pad)


@dataclass(frozen=True)
class BasisIndex:
    """Bijection ``(nx, ny) <-> index`` ordered by total quanta, then by ``nx``."""

    n_max: int
    nx: np.ndarray = field(repr=False)
    ny: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.nx)

    @property
    def quanta(self) -> np.ndarray:
        return self.nx + self.ny

    @cached_property
    def _lookup(self) -> dict:
        return {(int(a), int(b)): k for k, (a, b) in enumerate(zip(self.nx, self.ny))}

    def index(self, nx: int, ny: int) -> int:
        return self._lookup[(nx, ny)]

    def state(self, k: int) -> tuple[int, int]:
        return int(self.nx[k]), int(self.ny[k])


def enumerate_basis(spec_or_nmax) -> BasisIndex:
    """Core basis of a :class:`BasisSpec` (or of a bare integer cutoff)."""
    n_max = spec_or_nmax.n_max if isinstance(spec_or_nmax, BasisSpec) else int(spec_or_nmax)
    pairs = [(nx, n - nx) for n in range(n_max + 1) for nx in range(n + 1)]
    nx, ny = np.array(pairs, dtype=int).reshape(-1, 2).T
    return BasisIndex(n_max, nx, ny)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense complex matrix over a truncated basis.

    When ``hermitian`` is set the constructor enforces
    ``max|A - A^H| <= herm_tol * max|A|`` and raises :class:`HermiticityError`
    otherwise.
    """

    entries: np.ndarray = field(repr=False)
    basis: BasisSpec
    hermitian: bool = True
    herm_tol: float = 1e-12
    padded: bool = False
    name: str = ""

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", a)
        expected = self.basis.padded_dim if self.padded else self.basis.dim
        if a.shape != (expected, expected):
            raise ValueError(f"{self.name or 'operator'}: shape {a.shape} != {(expected, expected)}")
        if self.hermitian:
            err = self.hermiticity_error()
            if err > self.herm_tol:
                raise HermiticityError(
                    f"{self.name or 'operator'}: relative hermiticity violation {err:.3e} "
                    f"> {self.herm_tol:.1e}"
                )

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def hermiticity_error(self) -> float:
        """``max|A - A^H| / max|A|`` (0 for the zero matrix)."""
        return relative_hermiticity_error(self.entries)

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    @property
    def H(self) -> np.ndarray:
        return self.entries.conj().T


def relative_hermiticity_error(a: np.ndarray) -> float:
    scale = np.abs(a).max()
    if scale == 0:
        return 0.0
    return float(np.abs(a - a.conj().T).max() / scale)


def ladder_matrices(n_total: int) -> tuple[np.ndarray, np.ndarray]:
    """Annihilators ``a_x, a_y`` on the total-quanta basis with cutoff ``n_total``."""
    idx = enumerate_basis(n_total)
    dim = idx.dim
    ax = np.zeros((dim, dim))
    ay = np.zeros((dim, dim))
    for k in range(dim):
        nx, ny = idx.state(k)
        if nx > 0:
            ax[idx.index(nx - 1, ny), k] = np.sqrt(nx)
        if ny > 0:
            ay[idx.index(nx, ny - 1), k] = np.sqrt(ny)
    return ax, ay


@dataclass(frozen=True)
class CartesianOps:
    """Position and momentum matrices on the padded basis (plain arrays)."""

    X: np.ndarray
    Y: np.ndarray
    Px: np.ndarray
    Py: np.ndarray

    @property
    def xs(self):
        return (self.X, self.Y)

    @property
    def ps(self):
        return (self.Px, self.Py)


def cartesian_arrays(spec: BasisSpec, hbar: float = 1.0) -> CartesianOps:
    ax, ay = ladder_matrices(spec.n_padded)
    s = np.sqrt(hbar / 2)
    return CartesianOps(
        X=s * (ax + ax.T) + 0j,
        Y=s * (ay + ay.T) + 0j,
        Px=1j * s * (ax.T - ax),
        Py=1j * s * (ay.T - ay),
    )


def build_xy_ops(spec: BasisSpec, hbar: float = 1.0):
    """``(X, Y, Px, Py)`` as padded :class:`OperatorMatrix` objects.

    ``X = sqrt(hbar/2)(a + a^+)`` and ``Px = i sqrt(hbar/2)(a^+ - a)``, same for y.
    """
    ops = cartesian_arrays(spec, hbar)
    return tuple(
        OperatorMatrix(m, spec, padded=True, name=n)
        for m, n in zip((ops.X, ops.Y, ops.Px, ops.Py), ("X", "Y", "Px", "Py"))
    )


def hermite_functions(n: int, xi: np.ndarray) -> np.ndarray:
    """Normalized Hermite polynomials ``H_k(xi)/sqrt(2^k k! sqrt(pi))`` for k <= n.

    Returned shape ``(n + 1, len(xi))``; the Gaussian factor is left to the
    quadrature weight.
    """
    xi = np.asarray(xi, dtype=float)
    h = np.zeros((n + 1,) + xi.shape)
    h[0] = np.pi**-0.25
    if n >= 1:
        h[1] = np.sqrt(2.0) * xi * h[0]
    for k in range(1, n):
        h[k + 1] = np.sqrt(2.0 / (k + 1)) * xi * h[k] - np.sqrt(k / (k + 1)) * h[k - 1]
    return h


class PositionQuadrature:
    """Tensor-product Gauss-Hermite rule for ``<a| F(x, y) |b>`` on the padded basis.

    ``F`` is any vectorized real or complex function of the physical coordinates;
    nodes are scaled by ``sqrt(hbar)`` so the oscillator weight is absorbed exactly.
    """

    def __init__(self, spec: BasisSpec, hbar: float = 1.0):
        self.spec = spec
        self.hbar = hbar
        xi, w = np.polynomial.hermite.hermgauss(spec.quad_order)
        h = hermite_functions(spec.n_padded, xi) * np.sqrt(w)
        idx = enumerate_basis(spec.n_padded)
        # phi[a, k, l] = h_nx(a)(xi_k) h_ny(a)(xi_l) sqrt(w_k w_l)
        self._phi = (h[idx.nx][:, :, None] * h[idx.ny][:, None, :]).reshape(idx.dim, -1)
        gx, gy = np.meshgrid(xi, xi, indexing="ij")
        self.x = np.sqrt(hbar) * gx.ravel()
        self.y = np.sqrt(hbar) * gy.ravel()

    def matrix(self, values: np.ndarray) -> np.ndarray:
        """Padded matrix of the multiplication operator with node values ``values``."""
        values = np.asarray(values)
        m = (self._phi * values) @ self._phi.T
        return 0.5 * (m + m.T)

    def function(self, fn) -> np.ndarray:
        return self.matrix(fn(self.x, self.y))


def build_position_function(spec: BasisSpec, fn, hbar: float = 1.0, name: str = "") -> OperatorMatrix:
    """Padded matrix of a real function ``fn(x, y)`` by tensor Gauss-Hermite quadrature."""
    return OperatorMatrix(PositionQuadrature(spec, hbar).function(fn), spec, padded=True, name=name)


def build_scalar_r2_function(spec: BasisSpec, g, hbar: float = 1.0, name: str = "") -> OperatorMatrix:
    """Padded matrix of ``g(x**2 + y**2)``; real symmetric by construction."""
    return build_position_function(spec, lambda x, y: g(x * x + y * y), hbar, name=name)


def project_to_core(a, spec: BasisSpec | None = None, name: str | None = None) -> OperatorMatrix:
    """Restrict a padded operator to the core block.

    Accepts an :class:`OperatorMatrix` (``spec`` taken from it) or a raw array
    plus ``spec``. Hermiticity is inherited from the input flag.
    """
    if isinstance(a, OperatorMatrix):
        spec, entries, herm = a.basis, a.entries, a.hermitian
        name = a.name if name is None else name
        tol = a.herm_tol
    else:
        entries, herm, tol = np.asarray(a), True, 1e-12
    d = spec.dim
    return OperatorMatrix(entries[:d, :d].copy(), spec, hermitian=herm, herm_tol=tol, name=name or "")
