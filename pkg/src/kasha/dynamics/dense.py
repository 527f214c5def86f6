"""Density-matrix reference propagation for small bases."""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp

from ..band import band_exact
from ..rates import PopulationTrajectory
from .analysis import project_to_band
from .hamiltonian import EffectiveHamiltonian, symmetric_state

MAX_DENSE_DIM = 5000
DENSE_RTOL = 1e-10
DENSE_ATOL = 1e-13


class PropagationError(FloatingPointError):
    """Non-finite values appeared during propagation."""


def evolve_dense(h_eff: EffectiveHamiltonian, rho0=None, t_grid=None, band=None) -> PopulationTrajectory:
    """Propagate d rho/dt = -i (H_eff rho - rho H_eff^+) + sum_k O_k rho O_k^+.

    The recycling sum runs over channels that stay inside the basis
    (vibrational loss). Terminal channels only drain the trace, so
    ``emitted`` = tr rho0 - tr rho. ``rho0`` may be a state vector, a density
    matrix or ``None`` for the bright state with the vibrations in vacuum.
    """
    if t_grid is None:
        raise ValueError("t_grid is required")
    dim = h_eff.dim
    if dim > MAX_DENSE_DIM:
        raise ValueError(f"dense propagation is limited to dimension {MAX_DENSE_DIM}, got {dim}")
    if band is None:
        band = band_exact(h_eff.couplings)
    if rho0 is None:
        rho0 = symmetric_state(h_eff, band)
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.ndim == 1:
        rho0 = np.outer(rho0, rho0.conj())
    if rho0.shape != (dim, dim):
        raise ValueError(f"rho0 must have shape ({dim}, {dim})")
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or np.any(np.diff(t) < 0):
        raise ValueError("t_grid must be a non-decreasing 1-d array")

    H = h_eff.matrix
    recycle = [ch.operator for ch in h_eff.channels if not ch.terminal]

    def rhs(time, y):
        rho = y.reshape(dim, dim)
        h_rho = H @ rho
        out = -1j * (h_rho - h_rho.conj().T)
        for op in recycle:
            out += op @ (op @ rho).conj().T
        if not np.all(np.isfinite(out)):
            raise PropagationError(f"non-finite density-matrix derivative at t = {time:.6g}")
        return out.ravel()

    sol = solve_ivp(rhs, (t[0], t[-1]), rho0.ravel(), method="DOP853", t_eval=t, rtol=DENSE_RTOL, atol=DENSE_ATOL)
    if not sol.success:
        raise PropagationError(f"dense propagation failed near t = {sol.t[-1]:.6g}: {sol.message}")

    pops = np.empty((t.size, band.N))
    trace = np.empty(t.size)
    for i in range(t.size):
        rho = sol.y[:, i].reshape(dim, dim)
        pops[i] = project_to_band(rho, band, h_eff.basis)
        trace[i] = np.trace(rho).real
    return PopulationTrajectory(
        times=t,
        p=pops,
        emitted=np.trace(rho0).real - trace,
        labels=band.labels,
        symmetric_index=band.symmetric_index,
        meta={"method": "dense", "trace": trace},
    )
