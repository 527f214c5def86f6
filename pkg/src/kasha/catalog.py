"""Bundled dye parameters and the closed-form Kasha timescale estimate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .config import Config, ConfigError
from .rates import scaling_law
from .units import LENGTH_SCALE, RATE_SCALE, TIME_SCALE, rate_to_time

# Modes count when s >= S_THRESHOLD and 0 < nu <= BAND_FACTOR * Omega.
S_THRESHOLD = 0.01
BAND_FACTOR = 4.0

BUNDLED = ("cresyl_violet", "rhodamine_800", "bchl_a")


@dataclass(frozen=True)
class DyeRecord:
    """Monomer and aggregate parameters of one dye.

    Frequencies and rates are angular, in THz (``gamma0`` in MHz); ``d`` and
    ``lambda0`` in nm. ``vib_spectrum`` holds (nu, s, Gamma) triples sorted by nu.
    """

    name: str
    d: float
    dipole_debye: float
    gamma0: float
    omega_nn: float
    vib_spectrum: tuple
    lambda0: float
    quoted_timescale: float | None = None

    def __post_init__(self):
        for key in ("d", "dipole_debye", "gamma0", "omega_nn", "lambda0"):
            value = getattr(self, key)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{self.name}: {key} must be positive, got {value}")
        spectrum = tuple(tuple(float(x) for x in row) for row in self.vib_spectrum)
        for nu, s, gamma in spectrum:
            if not (nu > 0 and s >= 0 and gamma > 0):
                raise ValueError(f"{self.name}: invalid mode (nu={nu}, s={s}, Gamma={gamma})")
        nus = [row[0] for row in spectrum]
        if nus != sorted(nus):
            raise ValueError(f"{self.name}: vib_spectrum must be sorted by frequency")
        object.__setattr__(self, "vib_spectrum", spectrum)

    @property
    def k0d(self) -> float:
        return 2 * math.pi * self.d / self.lambda0


class RelevantModes(NamedTuple):
    n_max: int
    s_mean: float

    @property
    def has_channel(self) -> bool:
        return self.n_max > 0


def count_relevant_modes(record: DyeRecord) -> RelevantModes:
    """Modes with s >= 0.01 inside the band (0, 4 Omega] and their mean Huang-Rhys factor.

    With no such mode the result is (0, 0.0): the dye has no Kasha channel.
    """
    top = BAND_FACTOR * record.omega_nn
    chosen = [s for nu, s, _ in record.vib_spectrum if s >= S_THRESHOLD and 0 < nu <= top]
    if not chosen:
        return RelevantModes(0, 0.0)
    return RelevantModes(len(chosen), float(sum(chosen) / len(chosen)))


def estimate_timescale(record: DyeRecord) -> float:
    """1 / kappa_S in fs from the closed-form scaling law; ``inf`` without a Kasha channel."""
    n_max, s_mean = count_relevant_modes(record)
    if n_max == 0:
        return math.inf
    kappa_thz = scaling_law(s_mean, record.omega_nn, n_max)
    return rate_to_time(kappa_thz, "THz", "fs")


def _expect(cfg: Config, section: str, key: str, unit_table: dict, convert) -> float:
    value, unit = cfg.get_quantity(section, key, None)
    if unit not in unit_table:
        raise ConfigError(f"[{section}] {key}: unit must be one of {list(unit_table)}, got {unit!r}")
    return convert(value, unit)


def parse_dye(text: str, source: str = "<dye>") -> DyeRecord:
    """Read a dye record from INI text (sections ``[dye]`` and ``[spectrum]``)."""
    cfg = Config.from_string(text, source)
    name = cfg.get_str("dye", "name")
    d = _expect(cfg, "dye", "d", LENGTH_SCALE, lambda v, u: v * (LENGTH_SCALE[u] / LENGTH_SCALE["nm"]))
    lam = _expect(cfg, "dye", "lambda0", LENGTH_SCALE, lambda v, u: v * (LENGTH_SCALE[u] / LENGTH_SCALE["nm"]))
    dipole, unit = cfg.get_quantity("dye", "dipole")
    if unit != "D":
        raise ConfigError(f"[dye] dipole: unit must be 'D' (debye), got {unit!r}")
    gamma0 = _expect(cfg, "dye", "gamma0", RATE_SCALE, lambda v, u: v * (RATE_SCALE[u] / RATE_SCALE["MHz"]))
    omega = _expect(cfg, "dye", "omega_nn", RATE_SCALE, lambda v, u: v * (RATE_SCALE[u] / RATE_SCALE["THz"]))
    quoted = None
    if cfg.has("dye", "quoted_timescale"):
        quoted = _expect(cfg, "dye", "quoted_timescale", TIME_SCALE, lambda v, u: v * (TIME_SCALE[u] / TIME_SCALE["fs"]))
    unit = cfg.get_str("spectrum", "unit", "THz", choices=list(RATE_SCALE))
    scale = RATE_SCALE[unit] / RATE_SCALE["THz"]
    rows = []
    for lineno, line in enumerate(cfg.get_str("spectrum", "modes").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ConfigError(f"{source}: [spectrum] modes line {lineno}: expected 'nu s Gamma', got {line.strip()!r}")
        try:
            nu, s, gamma = (float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"{source}: [spectrum] modes line {lineno}: non-numeric entry") from None
        rows.append((nu * scale, s, gamma * scale))
    cfg.check_unused()
    try:
        return DyeRecord(
            name=name,
            d=d,
            dipole_debye=dipole,
            gamma0=gamma0,
            omega_nn=omega,
            vib_spectrum=tuple(rows),
            lambda0=lam,
            quoted_timescale=quoted,
        )
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_dye(name_or_path) -> DyeRecord:
    """A bundled record by key (e.g. ``"cresyl_violet"``) or a record file path."""
    if str(name_or_path) in BUNDLED:
        text = resources.files("kasha").joinpath("data", f"{name_or_path}.ini").read_text()
        return parse_dye(text, source=f"{name_or_path}.ini")
    path = Path(name_or_path)
    if not path.exists():
        raise ConfigError(f"unknown dye {name_or_path!r}; bundled records are {list(BUNDLED)}")
    return parse_dye(path.read_text(), source=str(path))


def bundled_dyes() -> list[DyeRecord]:
    return [load_dye(key) for key in BUNDLED]


__all__ = [
    "BUNDLED",
    "DyeRecord",
    "RelevantModes",
    "bundled_dyes",
    "count_relevant_modes",
    "estimate_timescale",
    "load_dye",
    "parse_dye",
]
