"""Vibrationally mediated transfer between collective states and the Kasha rate.

Transfer from collective state a to b through vibrational mode m is a
Lorentzian in the detuning shift_a - shift_b - nu_m::

    kappa_{a->b} = c s nu^2 (Gamma + gamma_a) / N / ((Gamma + gamma_a)^2 + 4 detuning^2)

with c = 2 in the ``"standard"`` convention. The ``"golden-rule"`` convention
(c = 4) is the weak-coupling limit of the single-excitation dynamics built in
:mod:`kasha.dynamics`, which the standard convention underestimates by a factor 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .band import ExcitonBand

CONVENTIONS = {"standard": 2.0, "golden-rule": 4.0}

# Tolerances of the adaptive cross-check of the matrix-exponential propagation.
ODE_RTOL = 1e-8
ODE_ATOL = 1e-12


def _prefactor(convention: str) -> float:
    try:
        return CONVENTIONS[convention]
    except KeyError:
        raise ValueError(f"unknown rate convention {convention!r}; use one of {sorted(CONVENTIONS)}") from None


def pairwise_rate(mode, shift_a, shift_b, gamma_a, N: int, convention: str = "standard"):
    """Transfer rate a -> b mediated by ``mode``; broadcasts over ``shift_b``."""
    if N < 2:
        raise ValueError("N must be >= 2")
    width = mode.gamma_vib + gamma_a
    detuning = np.asarray(shift_a) - np.asarray(shift_b) - mode.nu
    rate = _prefactor(convention) * mode.s * mode.nu**2 * width / N / (width**2 + 4 * detuning**2)
    return rate if np.ndim(rate) else float(rate)


def symmetric_decay_rate(band: ExcitonBand, symmetric_decay: str = "dicke") -> float:
    """gamma_S entering the Lorentzian width: N gamma0 ("dicke") or the band value ("band")."""
    if symmetric_decay == "dicke":
        return float(np.sum(band.decays))
    if symmetric_decay == "band":
        return band.symmetric_decay
    raise ValueError(f"symmetric_decay must be 'dicke' or 'band', got {symmetric_decay!r}")


def kasha_contributions(band: ExcitonBand, modes, convention: str = "standard", symmetric_decay: str = "dicke") -> np.ndarray:
    """Per-mode totals sum_q kappa^(m)_{S->q}, shape (n_modes,)."""
    gamma_s = symmetric_decay_rate(band, symmetric_decay)
    dark = band.shifts[band.dark_indices]
    return np.array(
        [np.sum(pairwise_rate(m, band.symmetric_shift, dark, gamma_s, band.N, convention)) for m in modes],
        dtype=float,
    )


def total_kasha_rate(band: ExcitonBand, modes, convention: str = "standard", symmetric_decay: str = "dicke") -> float:
    """kappa_S: double sum of pairwise rates from the symmetric state over modes and dark states."""
    modes = list(modes)
    if not modes:
        return 0.0
    return float(np.sum(kasha_contributions(band, modes, convention, symmetric_decay)))


def kasha_rate_closed_form(modes, omega_nn: float, gamma_s: float = 0.0) -> float:
    """Constant-density estimate sum_m Gamma_m s_m nu_m^2 / (2 Omega (Gamma_m + gamma_S))."""
    if not omega_nn > 0:
        raise ValueError("omega_nn must be positive")
    return float(sum(m.gamma_vib * m.s * m.nu**2 / (2 * omega_nn * (m.gamma_vib + gamma_s)) for m in modes))


def scaling_law(s_mean: float, omega_nn: float, n_max: int) -> float:
    """kappa_S = (4 s Omega / 3) (n_max + 1)(2 n_max + 1) / n_max.

    This is the closed-form sum for modes equally spaced up to 4 Omega with a
    common Huang-Rhys factor when gamma_S << Gamma_m; the ratio Gamma_m / nu_m
    cancels, so the law holds for any quality factor.
    """
    if int(n_max) != n_max or n_max < 1:
        raise ValueError(f"scaling law needs n_max >= 1, got {n_max}")
    if s_mean < 0:
        raise ValueError("s_mean must be >= 0")
    if not omega_nn > 0:
        raise ValueError("omega_nn must be positive")
    return 4.0 * s_mean * omega_nn / 3.0 * (n_max + 1) * (2 * n_max + 1) / n_max


@dataclass(frozen=True, eq=False)
class RateModel:
    """Incoherent transfer network between the states of ``band``.

    ``transfer[a, b]`` is the rate a -> b, ``radiative[a]`` the photon loss rate
    of state a.
    """

    band: ExcitonBand
    transfer: np.ndarray
    radiative: np.ndarray
    convention: str = "standard"

    @property
    def generator(self) -> np.ndarray:
        """L with dp/dt = L p: L[b, a] = kappa_{a->b}, columns summing to -radiative[a]."""
        L = self.transfer.T.copy()
        np.fill_diagonal(L, 0.0)
        L[np.diag_indices_from(L)] = -self.radiative - L.sum(axis=0)
        return L

    @property
    def symmetric_loss(self) -> float:
        """kappa_S: total transfer out of the symmetric state."""
        return float(np.sum(self.transfer[self.band.symmetric_index]))


def build_rate_model(
    band: ExcitonBand,
    modes,
    convention: str = "standard",
    symmetric_decay: str = "dicke",
    dephasing: bool = False,
) -> RateModel:
    """Pairwise rates between all ordered pairs of collective states.

    Every source state a uses its own shift and radiative width; the symmetric
    state's width follows ``symmetric_decay``. With ``dephasing`` the
    population exchange caused by the -sqrt(s_m) n_j part of the vibrational
    collapse operators is added: sum_m Gamma_m s_m sum_j |v_a(j)|^2 |v_b(j)|^2.
    """
    N = band.N
    widths = band.decays.astype(float).copy()
    widths[band.symmetric_index] = symmetric_decay_rate(band, symmetric_decay)
    transfer = np.zeros((N, N))
    for m in modes:
        for a in range(N):
            transfer[a] += pairwise_rate(m, band.shifts[a], band.shifts, widths[a], N, convention)
    if dephasing:
        w = np.abs(band.mode_vectors) ** 2
        transfer += sum(m.gamma_vib * m.s for m in modes) * (w.T @ w)
    np.fill_diagonal(transfer, 0.0)
    return RateModel(band=band, transfer=transfer, radiative=widths, convention=convention)


@dataclass(frozen=True, eq=False)
class PopulationTrajectory:
    """Populations ``p[t, state]`` on ``times`` and cumulative photon loss ``emitted[t]``."""

    times: np.ndarray
    p: np.ndarray
    emitted: np.ndarray
    labels: np.ndarray
    symmetric_index: int
    meta: dict = field(default_factory=dict)

    @property
    def p_symmetric(self) -> np.ndarray:
        return self.p[:, self.symmetric_index]

    @property
    def total(self) -> np.ndarray:
        return self.p.sum(axis=1)


def _augmented(L: np.ndarray, radiative: np.ndarray) -> np.ndarray:
    N = L.shape[0]
    A = np.zeros((N + 1, N + 1))
    A[:N, :N] = L
    A[N, :N] = radiative
    return A


def integrate_rate_equations(model: RateModel, p0, t_grid, crosscheck: bool = True) -> PopulationTrajectory:
    """Solve dp/dt = L p on ``t_grid`` by exact matrix-exponential steps.

    Radiative loss is accumulated in an absorbing sink so that populations plus
    emitted probability are conserved. With ``crosscheck`` the same system is
    re-solved with an adaptive integrator and the largest absolute deviation is
    stored in ``meta["crosscheck_error"]``.
    """
    L = model.generator
    if not np.all(np.isfinite(L)):
        raise ValueError("rate generator has non-finite entries")
    p0 = np.asarray(p0, dtype=float)
    if p0.shape != (model.band.N,):
        raise ValueError(f"p0 must have shape ({model.band.N},)")
    if np.any(p0 < 0) or p0.sum() > 1 + 1e-12:
        raise ValueError("initial populations must be non-negative and sum to at most 1")
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 1 or np.any(np.diff(t) < 0):
        raise ValueError("t_grid must be a non-decreasing 1-d array")

    A = _augmented(L, model.radiative)
    x = np.concatenate([p0, [0.0]])
    out = np.empty((t.size, x.size))
    out[0] = x
    cache: dict[float, np.ndarray] = {}
    for i in range(1, t.size):
        dt = t[i] - t[i - 1]
        prop = cache.get(dt)
        if prop is None:
            prop = cache[dt] = expm(A * dt)
        x = prop @ x
        out[i] = x

    meta = {}
    if crosscheck and t.size > 1:
        sol = solve_ivp(
            lambda _t, y: A @ y,
            (t[0], t[-1]),
            np.concatenate([p0, [0.0]]),
            method="Radau",
            t_eval=t,
            rtol=ODE_RTOL,
            atol=ODE_ATOL,
            jac=A,
        )
        if not sol.success:
            raise RuntimeError(f"adaptive cross-check failed: {sol.message}")
        meta["crosscheck_error"] = float(np.max(np.abs(sol.y.T - out)))

    return PopulationTrajectory(
        times=t,
        p=out[:, :-1],
        emitted=out[:, -1],
        labels=model.band.labels,
        symmetric_index=model.band.symmetric_index,
        meta=meta,
    )
