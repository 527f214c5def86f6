"""Sectioned key = value run configuration with unit suffixes.

Every value read through :class:`Config` is recorded together with the defaults
that were filled in, so :meth:`Config.resolved_text` yields a complete,
re-runnable configuration. Keys that no experiment reads are reported as
errors instead of being silently ignored.
"""

from __future__ import annotations

import configparser
from pathlib import Path

from .units import UnitError, Units, parse_quantity

PROVENANCE_SECTION = "provenance"


class ConfigError(ValueError):
    """Malformed configuration; the message names the offending field."""


class Config:
    def __init__(self, parser: configparser.ConfigParser | None = None, source: str | None = None):
        self._parser = parser if parser is not None else _new_parser()
        self.source = source
        self._resolved: dict[str, dict[str, str]] = {}

    @classmethod
    def from_string(cls, text: str, source: str = "<string>") -> Config:
        parser = _new_parser()
        try:
            parser.read_string(text, source=source)
        except configparser.Error as exc:
            raise ConfigError(f"{source}: {exc}") from None
        return cls(parser, source)

    @classmethod
    def from_file(cls, path) -> Config:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        return cls.from_string(text, source=str(path))

    def is_empty(self) -> bool:
        return not any(self._parser.items(s) for s in self._parser.sections() if s != PROVENANCE_SECTION)

    def set(self, section: str, key: str, value) -> None:
        """Override a value (command-line flags)."""
        if not self._parser.has_section(section):
            self._parser.add_section(section)
        self._parser.set(section, key, str(value))

    def has(self, section: str, key: str) -> bool:
        return self._parser.has_option(section, key)

    def _raw(self, section: str, key: str, default) -> str:
        if self._parser.has_option(section, key):
            value = self._parser.get(section, key).strip()
        elif default is None:
            raise ConfigError(f"[{section}] {key}: required value missing")
        else:
            value = str(default)
        self._resolved.setdefault(section, {})[key] = value
        return value

    def _fail(self, section, key, value, why) -> ConfigError:
        return ConfigError(f"[{section}] {key} = {value!r}: {why}")

    def get_str(self, section: str, key: str, default=None, choices=None) -> str:
        value = self._raw(section, key, default)
        if choices is not None and value not in choices:
            raise self._fail(section, key, value, f"expected one of {list(choices)}")
        return value

    def get_int(self, section: str, key: str, default=None, minimum: int | None = None) -> int:
        value = self._raw(section, key, default)
        try:
            out = int(value)
        except ValueError:
            raise self._fail(section, key, value, "expected an integer") from None
        if minimum is not None and out < minimum:
            raise self._fail(section, key, value, f"must be >= {minimum}")
        return out

    def get_float(self, section: str, key: str, default=None, minimum: float | None = None) -> float:
        value = self._raw(section, key, default)
        try:
            out = float(value)
        except ValueError:
            raise self._fail(section, key, value, "expected a number") from None
        if minimum is not None and out < minimum:
            raise self._fail(section, key, value, f"must be >= {minimum}")
        return out

    def get_bool(self, section: str, key: str, default=None) -> bool:
        value = self._raw(section, key, default)
        lowered = value.lower()
        if lowered in ("1", "yes", "true", "on"):
            return True
        if lowered in ("0", "no", "false", "off"):
            return False
        raise self._fail(section, key, value, "expected a boolean")

    def get_int_list(self, section: str, key: str, default=None) -> list[int]:
        """Comma separated integers; ``a..b`` expands to an inclusive range."""
        value = self._raw(section, key, default)
        out = []
        try:
            for part in value.split(","):
                part = part.strip()
                if ".." in part:
                    a, b = part.split("..")
                    out.extend(range(int(a), int(b) + 1))
                elif part:
                    out.append(int(part))
        except ValueError:
            raise self._fail(section, key, value, "expected integers or ranges like 2..16") from None
        if not out:
            raise self._fail(section, key, value, "empty list")
        return out

    def get_quantity(self, section: str, key: str, default=None, allowed=None) -> tuple[float, str | None]:
        value = self._raw(section, key, default)
        try:
            number, unit = parse_quantity(value)
        except UnitError as exc:
            raise self._fail(section, key, value, str(exc)) from None
        if allowed is not None and unit not in allowed:
            raise self._fail(section, key, value, f"unit must be one of {list(allowed)}")
        return number, unit

    def get_quantity_list(self, section: str, key: str, default=None) -> list[tuple[float, str | None]]:
        value = self._raw(section, key, default)
        out = []
        for part in value.split(","):
            try:
                out.append(parse_quantity(part))
            except UnitError as exc:
                raise self._fail(section, key, value, str(exc)) from None
        return out

    def get_rate(self, section: str, key: str, units: Units, default=None) -> float:
        number, unit = self.get_quantity(section, key, default)
        try:
            return units.rate(number, unit)
        except UnitError as exc:
            raise self._fail(section, key, self._resolved[section][key], str(exc)) from None

    def get_time(self, section: str, key: str, units: Units, default=None) -> float:
        number, unit = self.get_quantity(section, key, default)
        try:
            return units.time(number, unit)
        except UnitError as exc:
            raise self._fail(section, key, self._resolved[section][key], str(exc)) from None

    def unused(self) -> list[tuple[str, str]]:
        out = []
        for section in self._parser.sections():
            if section == PROVENANCE_SECTION:
                continue
            for key in self._parser.options(section):
                if key not in self._resolved.get(section, {}):
                    out.append((section, key))
        return out

    def check_unused(self) -> None:
        extra = self.unused()
        if extra:
            names = ", ".join(f"[{s}] {k}" for s, k in extra)
            raise ConfigError(f"unknown configuration keys: {names}")

    def resolved_text(self, provenance: dict | None = None) -> str:
        """Every value read so far (defaults included), plus an optional provenance section."""
        parser = _new_parser()
        for section, values in self._resolved.items():
            parser.add_section(section)
            for key, value in values.items():
                parser.set(section, key, value)
        if provenance:
            parser.add_section(PROVENANCE_SECTION)
            for key, value in provenance.items():
                parser.set(PROVENANCE_SECTION, key, str(value))
        lines = []
        for section in parser.sections():
            lines.append(f"[{section}]")
            lines += [f"{k} = {v}" for k, v in parser.items(section)]
            lines.append("")
        return "\n".join(lines)


def _new_parser() -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    return parser
