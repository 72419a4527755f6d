"""Gnomonic chart of a sphere whose radius depends on time.

A tangent-plane point ``(x, y)`` maps to
``r = (x/Lam, y/Lam, s/(sqrt(lam) Lam))`` with ``Lam = sqrt(1 + lam (x^2 + y^2))``
and hemisphere sign ``s``. The time dependence enters only through the curvature
``lam(t) = 1/R(t)^2``, taken exactly (no expansion in the amplitudes).

All functions broadcast over array-valued ``x``, ``y`` and ``t``; vectors are
returned stacked on the leading axis.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .background import (
    BackgroundModel,
    curvature_exact,
    curvature_rate,
    vector_potential_amplitude,
)


@dataclass(frozen=True)
class ChartPoint:
    x: float | np.ndarray
    y: float | np.ndarray
    hemisphere: int = 1

    def __post_init__(self):
        if self.hemisphere not in (1, -1):
            raise ValueError("hemisphere must be +1 or -1")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.y))):
            raise ValueError("chart coordinates must be finite")

    @property
    def r2(self):
        return np.asarray(self.x) ** 2 + np.asarray(self.y) ** 2


def big_lambda(p: ChartPoint, lam):
    return np.sqrt(1.0 + lam * p.r2)


def embed(p: ChartPoint, lam) -> np.ndarray:
    """Embedding ``(q1, q2, q0)`` of a chart point on the sphere of curvature ``lam``."""
    if np.any(np.asarray(lam) <= 0):
        raise ValueError("embed requires lam > 0")
    L = big_lambda(p, lam)
    return np.stack(np.broadcast_arrays(p.x / L, p.y / L, p.hemisphere / (np.sqrt(lam) * L)))


def embed_spatial_derivatives(p: ChartPoint, lam) -> tuple[np.ndarray, np.ndarray]:
    """``d r/dx`` and ``d r/dy`` at fixed curvature."""
    x, y = np.asarray(p.x, dtype=float), np.asarray(p.y, dtype=float)
    L3 = big_lambda(p, lam) ** 3
    sq = np.sqrt(lam)
    rx = np.stack(np.broadcast_arrays((1 + lam * y * y) / L3, -lam * x * y / L3, -p.hemisphere * sq * x / L3))
    ry = np.stack(np.broadcast_arrays(-lam * x * y / L3, (1 + lam * x * x) / L3, -p.hemisphere * sq * y / L3))
    return rx, ry


def embed_curvature_derivative(p: ChartPoint, lam) -> np.ndarray:
    """``d r/d lam`` at fixed chart coordinates."""
    x, y = np.asarray(p.x, dtype=float), np.asarray(p.y, dtype=float)
    r2 = p.r2
    L3 = big_lambda(p, lam) ** 3
    return np.stack(
        np.broadcast_arrays(
            -x * r2 / (2 * L3),
            -y * r2 / (2 * L3),
            -p.hemisphere * (1 + 2 * lam * r2) / (2 * lam**1.5 * L3),
        )
    )


def geometry_derivatives(p: ChartPoint, model: BackgroundModel, t):
    """``(r_x, r_y, r_t)`` with the exact curvature ``1/R(t)^2``."""
    lam = curvature_exact(model, t)
    rx, ry = embed_spatial_derivatives(p, lam)
    rt = curvature_rate(model, t) * embed_curvature_derivative(p, lam)
    return rx, ry, rt


def exact_vector_potential(p: ChartPoint, model: BackgroundModel, t) -> np.ndarray:
    """``A = (r_t . r_x, r_t . r_y)``, stacked as shape ``(2, ...)``."""
    rx, ry, rt = geometry_derivatives(p, model, t)
    return np.stack([np.sum(rt * rx, axis=0), np.sum(rt * ry, axis=0)])


def exact_phi(p: ChartPoint, model: BackgroundModel, t):
    """Scalar term ``phi = -(r_t . r_t)``; non-positive and O(alpha^2)."""
    _, _, rt = geometry_derivatives(p, model, t)
    return -np.sum(rt * rt, axis=0)


def m_field(p: ChartPoint, lambda0: float) -> np.ndarray:
    """``m(x) = x / (1 + lambda0 r^2)^2``, the spatial profile of the first-order potential."""
    g = (1.0 + lambda0 * p.r2) ** -2
    return np.stack(np.broadcast_arrays(p.x * g, p.y * g))


def first_order_vector_potential(p: ChartPoint, model: BackgroundModel, t) -> np.ndarray:
    """``f(t) m(x)`` with ``f = -sqrt(lambda0) sum alpha_n omega_n cos(omega_n t)``."""
    return vector_potential_amplitude(model, t) * m_field(p, model.lambda0)
