"""Spectrum of H0 with angular-momentum labels and degeneracy clusters."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..basis import OperatorMatrix


class SimultaneousDiagonalizationError(ArithmeticError):
    """H0 and Lz could not be diagonalized together (broken rotational symmetry)."""


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    energies: np.ndarray
    states: np.ndarray
    m_labels: np.ndarray
    clusters: tuple[np.ndarray, ...]
    cluster_tol: float
    hbar: float = 1.0

    @property
    def dim(self) -> int:
        return len(self.energies)

    @property
    def parities(self) -> np.ndarray:
        """Parity under (x, y) -> (-x, -y); equals (-1)^m for these states."""
        return np.where(self.m_labels % 2 == 0, 1, -1)

    @property
    def cluster_ids(self) -> np.ndarray:
        ids = np.empty(self.dim, dtype=int)
        for k, members in enumerate(self.clusters):
            ids[members] = k
        return ids

    @property
    def cluster_sizes(self) -> list[int]:
        return [len(c) for c in self.clusters]

    def omega(self, i: int, j: int) -> float:
        """Transition frequency ``(E_j - E_i)/hbar``."""
        return float((self.energies[j] - self.energies[i]) / self.hbar)

    def in_eigenbasis(self, a) -> np.ndarray:
        """``S^H A S`` so that element ``[j, i]`` is ``<j|A|i>``."""
        a = a.entries if isinstance(a, OperatorMatrix) else np.asarray(a)
        return self.states.conj().T @ a @ self.states

    def element(self, a, j: int, i: int) -> complex:
        a = a.entries if isinstance(a, OperatorMatrix) else np.asarray(a)
        return complex(self.states[:, j].conj() @ a @ self.states[:, i])


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = np.argmax(np.abs(v))
    return v * (abs(v[k]) / v[k])


def diagonalize(H0, Lz, hbar: float = 1.0, cluster_tol: float | None = None,
                commutator_tol: float = 1e-10) -> SpectrumResult:
    """Joint eigenbasis of ``H0`` and ``Lz``.

    ``Lz`` has exact integer spectrum on the total-quanta basis, so ``H0`` is
    diagonalized inside each ``Lz`` eigenspace; states in an energy cluster are
    then automatically ``Lz`` eigenstates. Ordering is by energy, and by ``m``
    inside a cluster. Each eigenvector's largest component is made real positive.

    ``cluster_tol`` defaults to ``1e-8`` times the spectral range.
    """
    h = H0.entries if isinstance(H0, OperatorMatrix) else np.asarray(H0)
    lz = Lz.entries if isinstance(Lz, OperatorMatrix) else np.asarray(Lz)
    comm = np.linalg.norm(h @ lz - lz @ h)
    scale = max(np.linalg.norm(h) * np.linalg.norm(lz), 1e-300)
    if comm > commutator_tol * scale:
        raise SimultaneousDiagonalizationError(
            f"[H0, Lz] relative norm {comm / scale:.2e} exceeds {commutator_tol:.0e}"
        )
    wl, ul = np.linalg.eigh(lz)
    m_raw = wl / hbar
    m_int = np.rint(m_raw).astype(int)
    if np.abs(m_raw - m_int).max() > 1e-8:
        raise SimultaneousDiagonalizationError("Lz spectrum is not integer-valued")

    energies, vectors, labels = [], [], []
    for m in np.unique(m_int):
        u = ul[:, m_int == m]
        hm = u.conj().T @ h @ u
        e, w = np.linalg.eigh(0.5 * (hm + hm.conj().T))
        energies.append(e)
        vectors.append(u @ w)
        labels.append(np.full(len(e), m))
    energies = np.concatenate(energies)
    vectors = np.concatenate(vectors, axis=1)
    labels = np.concatenate(labels)

    if cluster_tol is None:
        cluster_tol = 1e-8 * max(energies.max() - energies.min(), np.abs(energies).max(), 1e-300)
    order = np.argsort(energies, kind="stable")
    clusters, start = [], 0
    for k in range(1, len(order) + 1):
        if k == len(order) or energies[order[k]] - energies[order[k - 1]] > cluster_tol:
            members = order[start:k]
            # inside a cluster: by m, then energy for a deterministic tie-break
            members = members[np.lexsort((energies[members], labels[members]))]
            clusters.append(members)
            start = k
    order = np.concatenate(clusters)
    states = np.stack([_fix_phase(vectors[:, k]) for k in order], axis=1)
    bounds = np.cumsum([0] + [len(c) for c in clusters])
    return SpectrumResult(
        energies=energies[order],
        states=states,
        m_labels=labels[order],
        clusters=tuple(np.arange(bounds[k], bounds[k + 1]) for k in range(len(clusters))),
        cluster_tol=float(cluster_tol),
        hbar=hbar,
    )


def spectrum_of(ops, cluster_tol: float | None = None) -> SpectrumResult:
    """Spectrum of ``ops.H0`` labelled by ``ops.Lz``."""
    return diagonalize(ops.H0, ops.Lz, ops.hbar, cluster_tol)


def spectrum_diagnostics(spec: SpectrumResult, H0, Lz) -> dict[str, float]:
    """Orthonormality, eigen-residual and m-label residuals of a spectrum."""
    h = H0.entries if isinstance(H0, OperatorMatrix) else np.asarray(H0)
    lz = Lz.entries if isinstance(Lz, OperatorMatrix) else np.asarray(Lz)
    s = spec.states
    ortho = np.abs(s.conj().T @ s - np.eye(spec.dim)).max()
    resid = np.linalg.norm(h @ s - s * spec.energies, axis=0).max() / np.linalg.norm(h, 2)
    lz_res = np.linalg.norm(lz @ s - s * (spec.m_labels * spec.hbar), axis=0).max()
    return {"orthonormality": float(ortho), "residual": float(resid), "m_label_residual": float(lz_res)}


def cluster_spreads(spec: SpectrumResult) -> list[float]:
    """Relative energy spread ``(max - min)/|mean|`` of each cluster."""
    out = []
    for c in spec.clusters:
        e = spec.energies[c]
        out.append(float((e.max() - e.min()) / abs(e.mean())) if len(c) > 1 else 0.0)
    return out


def group_levels(energies: np.ndarray, rel_tol: float) -> list[np.ndarray]:
    """Group sorted energies into levels whose consecutive gaps are below ``rel_tol * |E|``."""
    energies = np.asarray(energies)
    groups, start = [], 0
    for k in range(1, len(energies) + 1):
        if k == len(energies) or energies[k] - energies[k - 1] > rel_tol * abs(energies[k]):
            groups.append(np.arange(start, k))
            start = k
    return groups
