import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kasha.coupling import (
    AggregateSpec,
    CouplingMatrices,
    circulant_couplings,
    coupling_matrices,
    green_tensor,
    nearest_neighbor_couplings,
    pair_couplings,
)


def _reference_perpendicular(x):
    """Omega and gamma (gamma0 = 1) for perpendicular dipoles, in 50-digit arithmetic."""
    mp.mp.dps = 50
    x = mp.mpf(x)
    omega = -mp.mpf(3) / (4 * x**3) * (mp.cos(x) * (x**2 - 1) - x * mp.sin(x))
    gamma = mp.mpf(3) / (2 * x**3) * (mp.sin(x) * (x**2 - 1) + x * mp.cos(x))
    return float(omega), float(gamma)


def _reference_parallel(x):
    """Dipoles along the separation: only the combined isotropic and dyadic terms survive."""
    mp.mp.dps = 50
    x = mp.mpf(x)
    z = mp.exp(1j * x) * (2 - 2j * x) / x**3
    return float(-0.75 * mp.re(z)), float(1.5 * mp.im(z))


@pytest.mark.parametrize("x", [1e-4, 3e-3, 0.0126, 0.05, 0.0999, 0.1001, 0.3, 0.9, 2.5, 7.0])
def test_perpendicular_pair_matches_high_precision_oracle(x):
    omega, gamma = pair_couplings([1.0, 0.0, 0.0], x)
    ref_o, ref_g = _reference_perpendicular(x)
    assert omega == pytest.approx(ref_o, rel=1e-12)
    assert gamma == pytest.approx(ref_g, rel=1e-11)


@pytest.mark.parametrize("x", [1e-3, 0.0126, 0.08, 0.2, 1.7])
def test_parallel_pair_matches_high_precision_oracle(x):
    omega, gamma = pair_couplings([0.0, 0.0, 1.0], x)
    ref_o, ref_g = _reference_parallel(x)
    assert omega == pytest.approx(ref_o, rel=1e-12)
    assert gamma == pytest.approx(ref_g, rel=1e-11)


def test_calibration_value_at_standard_spacing():
    # Published nearest-neighbour coupling for k0 d = 0.0126 is 3.759e5 gamma0.
    c = coupling_matrices(AggregateSpec.chain(2, 0.0126))
    assert c.omega_nn == pytest.approx(3.759e5, rel=5e-3)
    assert c.omega_nn > 0


def test_green_tensor_projection_agrees_with_pair_couplings():
    k0 = 0.37
    r = np.array([0.4, -1.1, 0.7])
    mu = np.array([0.0, 0.6, 0.8])
    G = green_tensor(r, k0)
    omega, gamma = pair_couplings(r, k0, mu)
    assert omega == pytest.approx(-3 * np.pi / k0 * (mu @ G.real @ mu), rel=1e-12)
    assert gamma == pytest.approx(6 * np.pi / k0 * (mu @ G.imag @ mu), rel=1e-12)


def test_green_tensor_is_symmetric_and_rejects_zero():
    G = green_tensor([0.3, 0.2, -0.5], 1.3)
    assert np.allclose(G, G.T, rtol=0, atol=1e-15 * np.abs(G).max())
    with pytest.raises(ValueError):
        green_tensor([0.0, 0.0, 0.0], 1.0)


def test_near_field_series_is_continuous_at_switch():
    below = pair_couplings([1.0, 0, 0], 0.1 - 1e-12)[1]
    above = pair_couplings([1.0, 0, 0], 0.1 + 1e-12)[1]
    assert below == pytest.approx(above, rel=1e-9)


def test_self_decay_and_dicke_limit():
    c = coupling_matrices(AggregateSpec.chain(5, 1e-4))
    assert np.allclose(np.diag(c.gamma), 1.0)
    assert np.allclose(c.gamma, 1.0, atol=1e-6)
    assert np.all(np.diag(c.omega) == 0)


def test_matrices_are_read_only():
    c = coupling_matrices(AggregateSpec.chain(4))
    with pytest.raises(ValueError):
        c.omega[0, 1] = 1.0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"N": 0},
        {"N": 3, "d": -1.0},
        {"N": 3, "k0": 2.0},
        {"N": 3, "dipole_orientation": (1.0, 1.0, 0.0)},
        {"N": 2, "positions": np.zeros((2, 3))},
        {"N": 2, "positions": np.zeros((3, 3))},
    ],
)
def test_invalid_specs_are_rejected(kwargs):
    with pytest.raises(ValueError):
        AggregateSpec(**kwargs)


def test_asymmetric_matrix_rejected():
    with pytest.raises(ValueError):
        CouplingMatrices(np.array([[0.0, 1.0], [2.0, 0.0]]), np.eye(2))


def test_ring_helpers():
    c = nearest_neighbor_couplings(5, 2.0, periodic=True)
    assert c.omega[0, 4] == 2.0 and c.omega[0, 2] == 0.0
    with pytest.raises(ValueError):
        circulant_couplings([0.0, 1.0, 2.0, 3.0])
    open_chain = nearest_neighbor_couplings(4, 1.5, periodic=False)
    assert open_chain.omega[0, 3] == 0.0 and open_chain.omega[1, 2] == 1.5


@settings(max_examples=40, deadline=None)
@given(
    N=st.integers(2, 12),
    k0d=st.floats(1e-3, 0.9),
    theta=st.floats(0, np.pi),
    jitter=st.lists(st.floats(-0.3, 0.3), min_size=12, max_size=12),
)
def test_gamma_is_positive_semidefinite_and_matrices_symmetric(N, k0d, theta, jitter):
    pos = np.zeros((N, 3))
    pos[:, 0] = np.arange(1, N + 1) + np.array(jitter[:N])
    spec = AggregateSpec(N=N, k0=k0d, dipole_orientation=(np.sin(theta), 0.0, np.cos(theta)), positions=pos)
    c = coupling_matrices(spec)
    assert np.array_equal(c.omega, c.omega.T)
    lam = np.linalg.eigvalsh(c.gamma)
    assert lam.min() > -1e-9 * N
    assert lam.sum() == pytest.approx(N, rel=1e-12)


def test_near_field_inverse_cube_scaling():
    r = np.geomspace(0.005, 0.05, 9)
    scaled = np.array([pair_couplings([1.0, 0, 0], x)[0] * x**3 for x in r])
    assert np.ptp(scaled) / np.abs(scaled).mean() < 5e-3


def test_green_tensor_parity_over_random_displacements(rng):
    for _ in range(100):
        r = rng.normal(size=3)
        k0 = rng.uniform(0.05, 3.0)
        G = green_tensor(r, k0)
        assert np.allclose(G, G.T, rtol=1e-13, atol=0)
        assert np.array_equal(G, green_tensor(-r, k0))


def test_side_by_side_dimer_coupling_is_positive():
    assert coupling_matrices(AggregateSpec.chain(2, 0.0126)).omega[0, 1] > 0
