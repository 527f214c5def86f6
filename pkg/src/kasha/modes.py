"""Intramolecular vibrational modes and standard spectra used by the experiments."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np


class UnderdampingWarning(UserWarning):
    """Raised for vibrational modes whose quality factor nu/gamma_vib is below 10."""


@dataclass(frozen=True)
class VibrationalMode:
    """One harmonic vibration of a monomer.

    nu is the angular frequency, gamma_vib the energy relaxation rate and s the
    Huang-Rhys factor. All rates share the unit of the surrounding model
    (monomer radiative rate gamma0 = 1 inside the library).
    """

    nu: float
    gamma_vib: float
    s: float

    def __post_init__(self):
        if not (np.isfinite(self.nu) and self.nu > 0):
            raise ValueError(f"mode frequency must be positive, got nu={self.nu}")
        if not (np.isfinite(self.gamma_vib) and self.gamma_vib > 0):
            raise ValueError(f"mode relaxation rate must be positive, got gamma_vib={self.gamma_vib}")
        if not (np.isfinite(self.s) and self.s >= 0):
            raise ValueError(f"Huang-Rhys factor must be >= 0, got s={self.s}")
        if self.nu / self.gamma_vib < 10:
            kind = "overdamped" if self.gamma_vib >= self.nu else "weakly underdamped"
            warnings.warn(
                f"{kind} mode: nu/gamma_vib = {self.nu / self.gamma_vib:.3g} < 10",
                UnderdampingWarning,
                stacklevel=3,
            )

    @property
    def quality(self) -> float:
        return self.nu / self.gamma_vib

    def scaled(self, *, gamma_factor: float = 1.0) -> VibrationalMode:
        return VibrationalMode(self.nu, self.gamma_vib * gamma_factor, self.s)


def equidistant_modes(n_max: int, omega_nn: float, s: float, quality: float = 10.0) -> list[VibrationalMode]:
    """Modes at nu_m = m * 4 * omega_nn / n_max, m = 1..n_max, with gamma_vib = nu / quality."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    nus = 4.0 * omega_nn * np.arange(1, n_max + 1) / n_max
    return [VibrationalMode(float(nu), float(nu / quality), float(s)) for nu in nus]


def random_modes(
    n_max: int,
    omega_nn: float,
    rng: np.random.Generator,
    s_max: float = 0.2,
    quality: float = 10.0,
) -> list[VibrationalMode]:
    """Frequencies uniform in (0, 4 omega_nn], Huang-Rhys factors uniform in [0, s_max].

    Frequencies are drawn from the half-open interval so that every mode has
    nu > 0; the list is sorted by frequency.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    nus = 4.0 * omega_nn * (1.0 - rng.random(n_max))
    ss = s_max * rng.random(n_max)
    order = np.argsort(nus)
    return [VibrationalMode(float(nus[i]), float(nus[i] / quality), float(ss[i])) for i in order]


def stokes_shift(modes) -> float:
    """Vibronic renormalisation sum_m s_m nu_m of the electronic transition."""
    return float(sum(m.s * m.nu for m in modes))
