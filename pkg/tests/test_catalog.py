import math

import pytest

from kasha.catalog import (
    BUNDLED,
    DyeRecord,
    bundled_dyes,
    count_relevant_modes,
    estimate_timescale,
    load_dye,
    parse_dye,
)
from kasha.config import ConfigError
from kasha.rates import scaling_law


def _record(omega=1.0, spectrum=((0.5, 0.02, 0.05),)):
    return DyeRecord("test", 1.0, 1.0, 100.0, omega, spectrum, 600.0)


@pytest.mark.parametrize(
    "key, n_max, s_mean",
    [("cresyl_violet", 12, 0.09), ("rhodamine_800", 16, 0.067), ("bchl_a", 25, 0.07)],
)
def test_bundled_mode_statistics(key, n_max, s_mean):
    rel = count_relevant_modes(load_dye(key))
    assert rel.n_max == n_max
    assert rel.s_mean == pytest.approx(s_mean, abs=5e-4)
    assert rel.has_channel


def test_bundled_timescales():
    cv, rh, bchl = (estimate_timescale(load_dye(k)) for k in BUNDLED)
    assert cv == pytest.approx(13, rel=0.10)
    assert bchl == pytest.approx(34, rel=0.05)
    assert 25 <= rh <= 45
    assert rh == pytest.approx(40, rel=0.05)
    assert abs(rh - load_dye("rhodamine_800").quoted_timescale) > 5


def test_timescale_is_the_inverse_scaling_law():
    rec = load_dye("cresyl_violet")
    n_max, s = count_relevant_modes(rec)
    kappa_per_s = scaling_law(s, rec.omega_nn * 1e12, n_max)
    assert estimate_timescale(rec) == pytest.approx(1e15 / kappa_per_s, rel=1e-12)


def test_modes_outside_the_band_or_too_weak_are_ignored():
    rec = _record(spectrum=((0.5, 0.02, 0.05), (3.0, 0.005, 0.3), (5.0, 0.3, 0.5)))
    assert count_relevant_modes(rec) == (1, 0.02)


def test_dye_without_a_channel():
    rec = _record(spectrum=((5.0, 0.3, 0.5), (6.0, 0.2, 0.6)))
    assert count_relevant_modes(rec) == (0, 0.0)
    assert not count_relevant_modes(rec).has_channel
    assert math.isinf(estimate_timescale(rec))


def test_band_edge_is_inclusive():
    assert count_relevant_modes(_record(spectrum=((4.0, 0.01, 0.4),))).n_max == 1


@pytest.mark.parametrize(
    "kwargs",
    [{"omega": -1.0}, {"spectrum": ((2.0, 0.1, 0.2), (1.0, 0.1, 0.1))}, {"spectrum": ((1.0, -0.1, 0.1),)}],
)
def test_invalid_records(kwargs):
    with pytest.raises(ValueError):
        _record(**kwargs)


def test_k0d_from_spacing_and_wavelength():
    assert load_dye("cresyl_violet").k0d == pytest.approx(2 * math.pi * 2 / 590)


def test_bundled_records_load():
    names = [r.name for r in bundled_dyes()]
    assert names == ["Cresyl Violet", "Rhodamine 800", "BChl a"]


DYE = """
[dye]
name = X
d = 0.002 um
dipole = 2 D
gamma0 = 0.4 GHz
omega_nn = 10000 GHz
lambda0 = 600 nm
[spectrum]
unit = GHz
modes =
    5000 0.05 500
    9000 0.02 900
"""


def test_parse_converts_units():
    rec = parse_dye(DYE)
    assert rec.d == pytest.approx(2.0)
    assert rec.gamma0 == pytest.approx(400.0)
    assert rec.omega_nn == pytest.approx(10.0)
    assert rec.vib_spectrum == ((5.0, 0.05, 0.5), (9.0, 0.02, 0.9))
    assert rec.quoted_timescale is None


@pytest.mark.parametrize(
    "old, new, match",
    [
        ("d = 0.002 um", "d = 2 THz", r"\[dye\] d"),
        ("dipole = 2 D", "dipole = 2 Cm", "debye"),
        ("9000 0.02 900", "9000 0.02", "line 2"),
        ("9000 0.02 900", "9000 0.02 abc", "non-numeric"),
        ("lambda0 = 600 nm", "lambda0 = 600 nm\ncolour = red", "unknown configuration keys"),
        ("omega_nn = 10000 GHz", "omega_nn = -1 GHz", "omega_nn must be positive"),
    ],
)
def test_parse_errors_name_the_field(old, new, match):
    with pytest.raises(ConfigError, match=match):
        parse_dye(DYE.replace(old, new))


def test_unknown_dye(tmp_path):
    with pytest.raises(ConfigError, match="bundled records"):
        load_dye("rhodamine_6g")
    path = tmp_path / "x.ini"
    path.write_text(DYE)
    assert load_dye(path).name == "X"
