"""Static frequency disorder and its effect on the bright-state decay."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .band import ExcitonBand, plane_waves
from .dynamics.analysis import fit_exponential
from .dynamics.hamiltonian import EffectiveHamiltonian, symmetric_state
from .dynamics.mcwf import mcwf_run

DISTRIBUTIONS = ("uniform", "normal")


@dataclass(frozen=True)
class DisorderSpec:
    """Per-monomer static shifts: uniform on [-width, width] or normal with std ``width``."""

    width: float
    distribution: str = "uniform"
    n_realizations: int = 1
    seed: int = 0

    def __post_init__(self):
        if not (np.isfinite(self.width) and self.width >= 0):
            raise ValueError(f"disorder width must be >= 0, got {self.width}")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"distribution must be one of {DISTRIBUTIONS}, got {self.distribution!r}")
        if int(self.n_realizations) != self.n_realizations or self.n_realizations < 1:
            raise ValueError("n_realizations must be a positive integer")


def _stream(spec: DisorderSpec, realization: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(spec.seed, spawn_key=(realization,)))


def sample_disorder(spec: DisorderSpec, N: int, realization: int = 0) -> np.ndarray:
    """Shifts delta_j for one realization; fixed by (seed, realization)."""
    if spec.width == 0:
        return np.zeros(N)
    rng = _stream(spec, realization)
    if spec.distribution == "uniform":
        return rng.uniform(-spec.width, spec.width, size=N)
    return rng.normal(0.0, spec.width, size=N)


def collective_disorder(deltas, d: float = 1.0) -> np.ndarray:
    """delta_q = N^-1/2 sum_j exp(i q j d) delta_j on the ring q grid."""
    deltas = np.asarray(deltas, dtype=float)
    if deltas.ndim != 1 or deltas.size < 2:
        raise ValueError("need a 1-d array of at least two shifts")
    return plane_waves(deltas.size, d).T @ deltas


def default_disorder_specs(omega_nn: float, n_realizations: int = 30, seed: int = 0, distribution: str = "uniform"):
    """Widths 0, Omega and 2 Omega."""
    return [
        DisorderSpec(width=f * abs(omega_nn), distribution=distribution, n_realizations=n_realizations, seed=seed)
        for f in (0.0, 1.0, 2.0)
    ]


@dataclass(frozen=True, eq=False)
class DisorderResult:
    """Realization-averaged p_S(t) and its fitted decay rate for one width."""

    spec: DisorderSpec
    times: np.ndarray
    p_symmetric: np.ndarray
    p_symmetric_stderr: np.ndarray
    rate: float
    rate_stderr: float
    r_squared: float
    realization_rates: np.ndarray = field(repr=False)


def _jackknife(curves: np.ndarray, times: np.ndarray) -> float:
    """Leave-one-realization-out standard error of the fitted rate."""
    R = curves.shape[0]
    if R < 2:
        return float("nan")
    total = curves.sum(axis=0)
    rates = np.array([fit_exponential(times, (total - curves[i]) / (R - 1))[0] for i in range(R)])
    return float(np.sqrt((R - 1) / R * np.sum((rates - rates.mean()) ** 2)))


def disordered_decay_experiment(
    specs,
    h_eff: EffectiveHamiltonian,
    band: ExcitonBand,
    t_grid,
    n_traj: int,
    seed: int = 0,
    workers: int = 1,
) -> list[DisorderResult]:
    """Quantum-jump ensembles of the bright-state decay for each disorder width.

    Every realization adds its shifts to the electronic energies of ``h_eff``
    and runs ``n_traj`` trajectories started in the bright state of the clean
    ``band``. p_S(t) is averaged over realizations and trajectories before the
    fit; the rate uncertainty is a jackknife over realizations.
    """
    t = np.asarray(t_grid, dtype=float)
    psi0 = symmetric_state(h_eff, band)
    N = band.N
    results = []
    for w_index, spec in enumerate(specs):
        curves = np.empty((spec.n_realizations, t.size))
        variances = np.empty((spec.n_realizations, t.size))
        for i in range(spec.n_realizations):
            h = h_eff.with_detunings(sample_disorder(spec, N, i))
            traj_seed = np.random.SeedSequence(seed, spawn_key=(w_index, i)).generate_state(1)[0]
            ens = mcwf_run(h, psi0, t, n_traj, int(traj_seed), band=band, workers=workers)
            curves[i] = ens.p_symmetric
            variances[i] = ens.p_symmetric_stderr**2
        mean = curves.mean(axis=0)
        R = spec.n_realizations
        if R > 1:
            stderr = curves.std(axis=0, ddof=1) / np.sqrt(R)
        else:
            stderr = np.sqrt(variances[0])
        rate, r2 = fit_exponential(t, mean)
        per_real = np.array([_safe_rate(t, c) for c in curves])
        results.append(
            DisorderResult(
                spec=spec,
                times=t,
                p_symmetric=mean,
                p_symmetric_stderr=stderr,
                rate=rate,
                rate_stderr=_jackknife(curves, t),
                r_squared=r2,
                realization_rates=per_real,
            )
        )
    return results


def _safe_rate(t, curve) -> float:
    try:
        return fit_exponential(t, curve)[0]
    except ValueError:
        return float("nan")
