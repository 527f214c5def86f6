"""Quantum-jump (Monte-Carlo wave-function) ensembles with waiting-time sampling.

Each trajectory draws a threshold r ~ U(0, 1) and evolves under H_eff until the
squared norm falls to r. The jump instant is located by root finding on the
stored Taylor polynomial of the step, the channel is drawn with weight
||L_k psi||^2, and r is redrawn. Terminal (radiative) channels end the
trajectory: the excitation has been emitted.

Trajectory i uses the random stream ``SeedSequence(seed, spawn_key=(i,))`` and
results are stored by index before averaging, so an ensemble is bit-identical
for any number of workers.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.optimize import brentq

from ..band import band_exact
from .analysis import project_to_band
from .hamiltonian import EffectiveHamiltonian, symmetric_state
from .propagate import horner, norm2, operator_bound, taylor_terms

NORM_TOL = 1e-10
MONOTONE_TOL = 1e-12
JUMP_XTOL = 1e-12  # in units of the step; the step is far shorter than any jump time scale
DEGENERATE_WEIGHT = 1e-300


class JumpError(FloatingPointError):
    """A jump was detected but every channel had zero weight."""


@dataclass(frozen=True, eq=False)
class EnsembleResult:
    """Trajectory averages on ``times``.

    ``populations[t, q]`` and ``stderr`` refer to the collective states of the
    band used for projection; ``emitted`` is the fraction of trajectories that
    have emitted a photon by each time.
    """

    times: np.ndarray
    populations: np.ndarray
    stderr: np.ndarray
    emitted: np.ndarray
    emitted_stderr: np.ndarray
    labels: np.ndarray
    symmetric_index: int
    n_traj: int
    radiative_jumps: int
    vibrational_jumps: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def p_symmetric(self) -> np.ndarray:
        return self.populations[:, self.symmetric_index]

    @property
    def p_symmetric_stderr(self) -> np.ndarray:
        return self.stderr[:, self.symmetric_index]

    @property
    def survival(self) -> np.ndarray:
        return self.populations.sum(axis=1)

    def to_csv(self, path, time_unit: str = "1/gamma0") -> None:
        """Write time, mean populations per state label, their standard errors and emission."""
        labels = [int(k) for k in self.labels]
        header = [f"time [{time_unit}]"]
        header += [f"p_k={k}" for k in labels]
        header += [f"se_k={k}" for k in labels]
        header += ["emitted", "se_emitted"]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for i, t in enumerate(self.times):
                row = [t, *self.populations[i], *self.stderr[i], self.emitted[i], self.emitted_stderr[i]]
                writer.writerow([repr(float(v)) for v in row])


@dataclass
class _TrajectoryOutput:
    populations: np.ndarray
    emitted: np.ndarray
    counts: np.ndarray
    max_norm_ratio: float
    norms: np.ndarray | None


class _TrajectoryEngine:
    """Immutable per-ensemble data shared by every trajectory."""

    def __init__(self, h_eff, channels, psi0, t_grid, band, seed, record_norms):
        self.generator = (-1j * h_eff.matrix).tocsr()
        bound = operator_bound(h_eff.matrix)
        self.step = 1.0 / bound if bound > 0 else np.inf
        self.basis = h_eff.basis
        self.band = band
        self.psi0 = psi0
        self.times = t_grid
        self.seed = seed
        self.record_norms = record_norms
        self.ops = [ch.operator.tocsr() for ch in channels]
        self.terminal = np.array([ch.terminal for ch in channels], dtype=bool)
        if self.ops:
            self.stacked = sp.vstack(self.ops, format="csr")
            self.offsets = np.cumsum([0] + [op.shape[0] for op in self.ops[:-1]])
        else:
            self.stacked = None
            self.offsets = np.zeros(0, dtype=int)

    def _apply(self, v):
        return self.generator @ v

    def _weights(self, psi):
        y = self.stacked @ psi
        return np.add.reduceat(y.real**2 + y.imag**2, self.offsets)

    def _project(self, psi, nrm2):
        return project_to_band(psi, self.band, self.basis) / nrm2

    def run(self, index: int) -> _TrajectoryOutput:
        rng = np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(index,)))
        times = self.times
        n_out = times.size
        pops = np.zeros((n_out, self.band.N))
        emitted = np.zeros(n_out)
        counts = np.zeros(len(self.ops), dtype=np.int64)
        norms = [] if self.record_norms else None
        worst = 0.0

        psi = self.psi0.copy()
        t = times[0]
        t_end = times[-1]
        k = 0
        while k < n_out and times[k] <= t:
            pops[k] = self._project(psi, 1.0)
            k += 1
        r = rng.random()

        while k < n_out:
            h = min(self.step, t_end - t)
            clipped = h == t_end - t
            terms = taylor_terms(self._apply, psi, h)
            n0 = norm2(psi)
            end = horner(terms, 1.0)
            n1 = norm2(end)
            ratio = n1 / n0 - 1.0
            worst = max(worst, ratio)
            if ratio > MONOTONE_TOL:
                raise FloatingPointError(
                    f"norm increased by {ratio:.3e} (relative) in a step at t = {t:.6g}; H_eff is not dissipative"
                )
            if norms is not None:
                norms.append(n1)

            if n1 > r:
                t_new = t_end if clipped else t + h
                while k < n_out and times[k] <= t_new:
                    theta = min((times[k] - t) / h, 1.0)
                    v = horner(terms, theta)
                    pops[k] = self._project(v, norm2(v))
                    k += 1
                psi, t = end, t_new
                continue

            theta_j = brentq(lambda th, p=terms, r=r: norm2(horner(p, th)) - r, 0.0, 1.0, xtol=JUMP_XTOL)
            t_jump = t + theta_j * h
            while k < n_out and times[k] < t_jump:
                v = horner(terms, (times[k] - t) / h)
                pops[k] = self._project(v, norm2(v))
                k += 1
            psi_j = horner(terms, theta_j)
            t = t_jump
            if self.stacked is None:
                raise JumpError(f"jump detected at t = {t:.6g} but no jump channels were supplied")
            w = self._weights(psi_j)
            total = float(np.sum(w))
            if not total > DEGENERATE_WEIGHT:
                raise JumpError(f"all channel weights vanish at the jump at t = {t:.6g} (norm^2 = {r:.3e})")
            c = int(np.searchsorted(np.cumsum(w), rng.random() * total, side="right"))
            c = min(c, len(w) - 1)
            counts[c] += 1
            if self.terminal[c]:
                emitted[k:] = 1.0
                break
            psi = self.ops[c] @ psi_j
            psi = psi / np.sqrt(norm2(psi))
            r = rng.random()

        return _TrajectoryOutput(
            populations=pops,
            emitted=emitted,
            counts=counts,
            max_norm_ratio=worst,
            norms=None if norms is None else np.asarray(norms),
        )

    def run_many(self, indices) -> list:
        return [self.run(i) for i in indices]


_WORKER_ENGINE: _TrajectoryEngine | None = None


def _init_worker(engine):
    global _WORKER_ENGINE
    _WORKER_ENGINE = engine


def _worker_chunk(indices):
    return _WORKER_ENGINE.run_many(indices)


def mcwf_run(
    h_eff: EffectiveHamiltonian,
    psi0=None,
    t_grid=None,
    n_traj: int = 1,
    seed: int = 0,
    *,
    channels=None,
    band=None,
    workers: int = 1,
    record_norms: bool = False,
) -> EnsembleResult:
    """Average ``n_traj`` quantum-jump trajectories started from ``psi0``.

    ``channels`` defaults to the channels assembled into ``h_eff``; ``psi0``
    defaults to the bright state of ``band`` (the exact band of the couplings
    when not given) with the vibrations in vacuum.
    """
    if t_grid is None:
        raise ValueError("t_grid is required")
    if int(n_traj) != n_traj or n_traj < 1:
        raise ValueError("n_traj must be a positive integer")
    n_traj = int(n_traj)
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if band is None:
        band = band_exact(h_eff.couplings)
    if psi0 is None:
        psi0 = symmetric_state(h_eff, band)
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (h_eff.dim,):
        raise ValueError(f"psi0 must have shape ({h_eff.dim},)")
    if abs(norm2(psi0) - 1.0) > NORM_TOL:
        raise ValueError(f"psi0 is not normalised (norm^2 = {norm2(psi0):.12g})")
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 1 or np.any(np.diff(t) < 0):
        raise ValueError("t_grid must be a non-decreasing 1-d array")
    if channels is None:
        channels = h_eff.channels
    channels = tuple(channels)

    engine = _TrajectoryEngine(h_eff, channels, psi0, t, band, int(seed), record_norms)
    indices = np.arange(n_traj)
    if workers == 1 or n_traj == 1:
        outputs = engine.run_many(indices)
    else:
        n_chunks = min(n_traj, 4 * workers)
        chunks = np.array_split(indices, n_chunks)
        outputs = []
        with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(engine,)) as pool:
            for part in pool.map(_worker_chunk, chunks):
                outputs.extend(part)

    pops = np.stack([o.populations for o in outputs])
    emitted = np.stack([o.emitted for o in outputs])
    counts = np.stack([o.counts for o in outputs]).sum(axis=0)
    denom = np.sqrt(n_traj)
    ddof = 1 if n_traj > 1 else 0
    mean_p = pops.mean(axis=0)
    se_p = pops.std(axis=0, ddof=ddof) / denom
    mean_e = emitted.mean(axis=0)
    se_e = emitted.std(axis=0, ddof=ddof) / denom

    vib = np.zeros(len(h_eff.modes), dtype=np.int64)
    radiative = 0
    for ch, cnt in zip(channels, counts):
        if ch.terminal:
            radiative += int(cnt)
        elif ch.mode is not None:
            vib[ch.mode] += int(cnt)

    meta = {
        "method": "mcwf",
        "seed": int(seed),
        "step": engine.step,
        "max_norm_increase": float(max(o.max_norm_ratio for o in outputs)),
    }
    if record_norms:
        meta["norms"] = [o.norms for o in outputs]
    return EnsembleResult(
        times=t,
        populations=mean_p,
        stderr=se_p,
        emitted=mean_e,
        emitted_stderr=se_e,
        labels=band.labels,
        symmetric_index=band.symmetric_index,
        n_traj=n_traj,
        radiative_jumps=radiative,
        vibrational_jumps=vib,
        meta=meta,
    )
