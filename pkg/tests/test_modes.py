import warnings

import numpy as np
import pytest

from kasha.modes import (
    UnderdampingWarning,
    VibrationalMode,
    equidistant_modes,
    random_modes,
    stokes_shift,
)


def test_equidistant_spectrum_spans_band():
    modes = equidistant_modes(4, 2.0, 0.1)
    assert [m.nu for m in modes] == pytest.approx([2.0, 4.0, 6.0, 8.0])
    assert all(m.quality == pytest.approx(10.0) for m in modes)
    assert stokes_shift(modes) == pytest.approx(0.1 * 20.0)


def test_random_spectrum_ranges_and_determinism():
    a = random_modes(50, 1.0, np.random.default_rng(3))
    b = random_modes(50, 1.0, np.random.default_rng(3))
    assert a == b
    nus = np.array([m.nu for m in a])
    ss = np.array([m.s for m in a])
    assert np.all((nus > 0) & (nus <= 4.0)) and np.all(np.diff(nus) >= 0)
    assert np.all((ss >= 0) & (ss <= 0.2))


@pytest.mark.parametrize("args", [(0.0, 1.0, 0.1), (1.0, 0.0, 0.1), (1.0, 0.1, -0.1), (np.nan, 0.1, 0.1)])
def test_invalid_modes(args):
    with pytest.raises(ValueError):
        VibrationalMode(*args)


def test_low_quality_modes_warn_but_are_allowed():
    with pytest.warns(UnderdampingWarning):
        m = VibrationalMode(1.0, 2.0, 0.1)
    assert m.quality == 0.5
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        VibrationalMode(1.0, 0.1, 0.1)


def test_scaled_mode_keeps_frequency(quiet_modes):
    m = VibrationalMode(3.0, 0.3, 0.05).scaled(gamma_factor=100)
    assert (m.nu, m.gamma_vib, m.s) == (3.0, pytest.approx(30.0), 0.05)


def test_n_max_must_be_positive():
    with pytest.raises(ValueError):
        equidistant_modes(0, 1.0, 0.1)
    with pytest.raises(ValueError):
        random_modes(0, 1.0, np.random.default_rng(0))
