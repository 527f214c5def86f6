"""Collective-state populations and exponential fits of decay curves."""

from __future__ import annotations

import numpy as np
from scipy.stats import linregress

from .basis import SingleExcitationBasis

FIT_WINDOW = (0.05, 0.9)
MIN_FIT_POINTS = 5


def _basis_for(dim: int, N: int) -> SingleExcitationBasis:
    rest = dim - N
    if rest < 0 or rest % (N * N):
        raise ValueError(f"dimension {dim} is not N + N^2 n for N = {N}")
    return SingleExcitationBasis(N, rest // (N * N))


def project_to_band(state, band, basis: SingleExcitationBasis | None = None) -> np.ndarray:
    """Populations of the collective states of ``band``, traced over vibrations.

    ``state`` may be a state vector or a density matrix on the single-excitation
    basis. The result is not renormalised: it sums to the electronic norm.
    """
    state = np.asarray(state)
    V = band.mode_vectors
    N = V.shape[0]
    dim = state.shape[0]
    if basis is None:
        basis = _basis_for(dim, N)
    elif basis.N != N or basis.dim != dim:
        raise ValueError(f"state of dimension {dim} does not match the basis (N={basis.N}, dim={basis.dim})")
    if state.ndim == 1:
        amps = V.conj().T @ basis.electronic_matrix(state)
        return np.sum(amps.real**2 + amps.imag**2, axis=1)
    if state.ndim == 2 and state.shape == (dim, dim):
        idx = basis.sector_indices()
        blocks = state[idx[:, :, None], idx[:, None, :]]
        return np.einsum("jq,sjk,kq->q", V.conj(), blocks, V).real
    raise ValueError(f"expected a vector or square matrix, got shape {state.shape}")


def fit_exponential(times, series, window=FIT_WINDOW) -> tuple[float, float]:
    """Least-squares fit of log(series) against time inside ``window``.

    The window is the first decay segment: from the start up to the first
    point below ``lo`` (or the global minimum if the series never gets there),
    keeping points with ``lo <= series <= hi``. Revivals of a finite system
    after its minimum are therefore ignored.

    Returns ``(rate, r_squared)`` for series ~ exp(-rate t).
    """
    t = np.asarray(times, dtype=float)
    p = np.asarray(series, dtype=float)
    if t.shape != p.shape or t.ndim != 1:
        raise ValueError("times and series must be 1-d arrays of the same shape")
    lo, hi = window
    below = np.flatnonzero(p < lo)
    stop = below[0] if below.size else int(np.argmin(p)) + 1
    mask = (p >= lo) & (p <= hi) & (np.arange(p.size) < stop)
    if np.count_nonzero(mask) < MIN_FIT_POINTS:
        raise ValueError(
            f"only {np.count_nonzero(mask)} points inside the fit window [{lo}, {hi}]; need {MIN_FIT_POINTS}"
        )
    res = linregress(t[mask], np.log(p[mask]))
    return float(-res.slope), float(res.rvalue**2)
