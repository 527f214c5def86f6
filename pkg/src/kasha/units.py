"""Unit handling. Internally every rate is in units of the monomer rate gamma0.

Frequencies quoted in Hz-type units are angular rates: 1 THz means 1e12 rad/s,
so a rate kappa given in THz corresponds to a time 1 / (kappa * 1e12) seconds.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

RATE_SCALE = {"1/s": 1.0, "Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9, "THz": 1e12}
TIME_SCALE = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9, "ps": 1e-12, "fs": 1e-15}
LENGTH_SCALE = {"m": 1.0, "um": 1e-6, "nm": 1e-9}

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S+)?\s*$")


class UnitError(ValueError):
    """Unknown or inconsistent unit."""


def parse_quantity(text: str) -> tuple[float, str | None]:
    """Split ``"23 THz"`` into ``(23.0, "THz")``; a bare number has unit ``None``."""
    m = _QUANTITY.match(str(text))
    if not m:
        raise UnitError(f"cannot parse quantity {text!r}")
    return float(m.group(1)), m.group(2)


@dataclass(frozen=True)
class Units:
    """Conversions for one model: gamma0 in 1/s (optional) and Omega in gamma0 units (optional).

    Rate units: any of :data:`RATE_SCALE`, ``gamma0`` or ``Omega``. Time units:
    any of :data:`TIME_SCALE`, ``1/gamma0`` or ``1/Omega``.
    """

    gamma0_per_s: float | None = None
    omega_nn: float | None = None

    def _need_gamma0(self, unit):
        if self.gamma0_per_s is None:
            raise UnitError(f"unit {unit!r} needs a physical gamma0")

    def _need_omega(self, unit):
        if self.omega_nn is None:
            raise UnitError(f"unit {unit!r} needs the coupling Omega")

    def rate(self, value: float, unit: str | None) -> float:
        """Rate in gamma0 units."""
        if unit in (None, "gamma0"):
            return float(value)
        if unit == "Omega":
            self._need_omega(unit)
            return float(value) * self.omega_nn
        if unit in RATE_SCALE:
            self._need_gamma0(unit)
            return float(value) * RATE_SCALE[unit] / self.gamma0_per_s
        raise UnitError(f"unknown rate unit {unit!r}; expected one of {[*RATE_SCALE, 'gamma0', 'Omega']}")

    def rate_out(self, value: float, unit: str) -> float:
        """Inverse of :meth:`rate`."""
        return float(value) / self.rate(1.0, unit)

    def time(self, value: float, unit: str | None) -> float:
        """Time in units of 1/gamma0."""
        if unit in (None, "1/gamma0"):
            return float(value)
        if unit == "1/Omega":
            self._need_omega(unit)
            return float(value) / self.omega_nn
        if unit in TIME_SCALE:
            self._need_gamma0(unit)
            return float(value) * TIME_SCALE[unit] * self.gamma0_per_s
        raise UnitError(f"unknown time unit {unit!r}; expected one of {[*TIME_SCALE, '1/gamma0', '1/Omega']}")

    def time_out(self, value: float, unit: str) -> float:
        return float(value) / self.time(1.0, unit)


def length(value: float, unit: str | None) -> float:
    """Length in metres."""
    if unit is None:
        raise UnitError("length needs a unit")
    try:
        return float(value) * LENGTH_SCALE[unit]
    except KeyError:
        raise UnitError(f"unknown length unit {unit!r}; expected one of {list(LENGTH_SCALE)}") from None


def rate_to_time(rate: float, rate_unit: str, time_unit: str) -> float:
    """1/rate for a physical angular rate, e.g. a rate in THz to a time in fs."""
    try:
        return 1.0 / (rate * RATE_SCALE[rate_unit]) / TIME_SCALE[time_unit]
    except KeyError as exc:
        raise UnitError(f"unknown unit {exc.args[0]!r}") from None
