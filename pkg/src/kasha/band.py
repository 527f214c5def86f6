"""Collective single-excitation states of the aggregate (the exciton band)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coupling import CouplingMatrices


@dataclass(frozen=True, eq=False)
class ExcitonBand:
    """Collective states: shifts Omega_q, radiative rates gamma_q and coefficient vectors.

    Column ``i`` of ``mode_vectors`` is the site amplitude vector of state ``i``.
    ``labels`` carry the integer k of q = 2 pi k / (N d) for the analytic
    (ring) band and the energy rank for the exact (open chain) band, whose
    states are ordered by shift, highest first.
    """

    q_values: np.ndarray
    shifts: np.ndarray
    decays: np.ndarray
    mode_vectors: np.ndarray
    symmetric_index: int
    labels: np.ndarray
    kind: str

    @property
    def N(self) -> int:
        return self.shifts.size

    @property
    def symmetric_shift(self) -> float:
        return float(self.shifts[self.symmetric_index])

    @property
    def symmetric_decay(self) -> float:
        return float(self.decays[self.symmetric_index])

    @property
    def symmetric_vector(self) -> np.ndarray:
        return self.mode_vectors[:, self.symmetric_index]

    @property
    def dark_indices(self) -> np.ndarray:
        idx = np.arange(self.N)
        return idx[idx != self.symmetric_index]

    @property
    def bandwidth(self) -> float:
        return float(self.shifts.max() - self.shifts.min())


def k_grid(N: int) -> np.ndarray:
    """Integer mode labels: -N/2..N/2-1 for even N, -(N-1)/2..(N-1)/2 for odd N."""
    if N < 2:
        raise ValueError("N must be >= 2")
    return np.arange(-(N // 2), N - N // 2)


def q_grid(N: int, d: float = 1.0) -> np.ndarray:
    return 2 * np.pi * k_grid(N) / (N * d)


def plane_waves(N: int, d: float = 1.0) -> np.ndarray:
    """N x N matrix whose column for q holds exp(i q j d) / sqrt(N), j = 1..N."""
    j = np.arange(1, N + 1)
    return np.exp(1j * np.outer(j * d, q_grid(N, d))) / np.sqrt(N)


def band_analytic(omega_nn: float, N: int, d: float = 1.0, gamma0: float = 1.0) -> ExcitonBand:
    """Ring band in the nearest-neighbour and Dicke approximations.

    Omega_q = 2 Omega cos(q d); the q = 0 state radiates at N gamma0 and every
    other state is taken to be exactly dark.
    """
    k = k_grid(N)
    q = q_grid(N, d)
    shifts = 2 * omega_nn * np.cos(q * d)
    sym = int(np.flatnonzero(k == 0)[0])
    decays = np.zeros(N)
    decays[sym] = N * gamma0
    return ExcitonBand(
        q_values=q,
        shifts=shifts,
        decays=decays,
        mode_vectors=plane_waves(N, d),
        symmetric_index=sym,
        labels=k,
        kind="analytic",
    )


def _as_couplings(couplings) -> CouplingMatrices:
    if isinstance(couplings, CouplingMatrices):
        return couplings
    omega = np.asarray(couplings, dtype=float)
    return CouplingMatrices(omega, np.eye(omega.shape[0]))


def band_exact(couplings: CouplingMatrices, d: float = 1.0) -> ExcitonBand:
    """Diagonalise the full coupling matrix; states sorted by shift, highest first.

    Decay rates are the diagonal of gamma in the eigenbasis. Eigenvectors are
    real with the sign fixed by a non-negative component sum. ``q_values``
    holds the standing-wave label pi i / ((N + 1) d) of an open chain.
    """
    c = _as_couplings(couplings)
    w, v = np.linalg.eigh(c.omega)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    signs = np.where(v.sum(axis=0) < 0, -1.0, 1.0)
    v = v * signs
    decays = np.einsum("ji,jk,ki->i", v, c.gamma, v)
    N = c.N
    idx = np.arange(N)
    return ExcitonBand(
        q_values=np.pi * idx / ((N + 1) * d),
        shifts=w,
        decays=decays,
        mode_vectors=v.astype(complex),
        symmetric_index=0,
        labels=idx,
        kind="exact",
    )


def full_band_shifts(couplings: CouplingMatrices, periodic: bool = True, d: float = 1.0) -> np.ndarray:
    """Cosine-sum band on the analytic q grid, including all neighbours.

    ``periodic`` treats the coupling matrix as a ring and returns its exact
    eigenvalues sum_r Omega_1r cos(q r d). Otherwise the first row of a uniform
    open chain is used as the one-sided coupling profile of an infinite chain,
    Omega_q = 2 sum_j Omega_1j cos(q (j - 1) d).
    """
    c = _as_couplings(couplings)
    om = c.omega
    N = c.N
    row = om[0]
    tol = 1e-10 * max(np.max(np.abs(om)), 1e-300)
    j, k = np.indices((N, N))
    if periodic:
        expected = row[(k - j) % N]
        if np.max(np.abs(om - expected)) > tol:
            raise ValueError("periodic band requires a circulant (translation invariant) coupling matrix")
    else:
        expected = row[np.abs(k - j)]
        if np.max(np.abs(om - expected)) > tol:
            raise ValueError("full_band_shifts requires a uniform chain (Toeplitz coupling matrix)")
    q = q_grid(N, d)
    r = np.arange(1, N)
    phases = np.cos(np.outer(q, r) * d)
    if periodic:
        return phases @ row[1:]
    return 2.0 * phases @ row[1:]
