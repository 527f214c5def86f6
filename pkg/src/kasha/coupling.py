"""Free-space dipole-dipole couplings of a chain of identical two-level monomers.

The coherent exchange Omega_jj' and the collective decay matrix gamma_jj' both
follow from the electromagnetic Green's tensor evaluated at the monomer
separations::

    Omega_jj' = -(3 pi / k0) gamma0  mu . Re G(r_jj') . mu
    gamma_jj' =  (6 pi / k0) gamma0  mu . Im G(r_jj') . mu

With this normalisation Im G(r -> 0) = k0 / (6 pi) gives gamma_jj = gamma0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .modes import VibrationalMode

# Series of Im[e^{ix}(x^2 + ix - 1)] / x^3 and Im[e^{ix}(-x^2 - 3ix + 3)] / x^3
# about x = 0; the closed forms cancel catastrophically in the near field.
_IM_ISO = (2 / 3, -2 / 15, 1 / 140, -1 / 5670, 1 / 399168, -1 / 43243200)
_IM_DYAD = (0.0, 1 / 15, -1 / 210, 1 / 7560, -1 / 498960, 1 / 51891840)
_SERIES_CUTOFF = 0.1


@dataclass(frozen=True, eq=False)
class AggregateSpec:
    """Geometry, optical parameters and vibrational modes of an aggregate.

    Lengths (d, positions) and the wavevector k0 only enter through k0 * r.
    Frequencies and rates are in a common unit; the library uses gamma0 = 1.
    Without explicit positions the monomers sit at j * d along x with dipoles
    along z, the side-by-side (H) arrangement.
    """

    N: int
    d: float = 1.0
    k0: float = 0.0126
    omega0: float = 0.0
    gamma0: float = 1.0
    dipole_orientation: tuple = (0.0, 0.0, 1.0)
    positions: np.ndarray | None = None
    modes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got N={self.N}")
        if not self.d > 0:
            raise ValueError(f"lattice spacing must be positive, got d={self.d}")
        if not self.k0 > 0:
            raise ValueError(f"wavevector must be positive, got k0={self.k0}")
        if not self.k0 * self.d < 1:
            raise ValueError(f"model assumes subwavelength spacing, got k0*d={self.k0 * self.d:.4g} >= 1")
        if not self.gamma0 > 0:
            raise ValueError(f"gamma0 must be positive, got {self.gamma0}")

        mu = np.asarray(self.dipole_orientation, dtype=float)
        if mu.shape != (3,) or abs(np.linalg.norm(mu) - 1.0) > 1e-12:
            raise ValueError("dipole_orientation must be a unit 3-vector")
        object.__setattr__(self, "dipole_orientation", tuple(mu))

        if self.positions is None:
            pos = np.zeros((self.N, 3))
            pos[:, 0] = self.d * np.arange(1, self.N + 1)
        else:
            pos = np.array(self.positions, dtype=float)
            if pos.shape != (self.N, 3):
                raise ValueError(f"positions must have shape ({self.N}, 3), got {pos.shape}")
        sep = np.linalg.norm(pos[:, None, :] - pos[None, :, :], axis=-1)
        np.fill_diagonal(sep, np.inf)
        if np.min(sep) <= 0:
            raise ValueError("monomer positions must be pairwise distinct")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

        modes = tuple(self.modes)
        if not all(isinstance(m, VibrationalMode) for m in modes):
            raise TypeError("modes must be VibrationalMode instances")
        object.__setattr__(self, "modes", modes)

    @classmethod
    def chain(cls, N: int, k0d: float = 0.0126, modes=(), gamma0: float = 1.0, omega0: float = 0.0):
        """Equidistant H-aggregate with unit spacing and k0 = k0d."""
        return cls(N=N, d=1.0, k0=k0d, omega0=omega0, gamma0=gamma0, modes=tuple(modes))

    def with_modes(self, modes) -> AggregateSpec:
        return AggregateSpec(
            N=self.N,
            d=self.d,
            k0=self.k0,
            omega0=self.omega0,
            gamma0=self.gamma0,
            dipole_orientation=self.dipole_orientation,
            positions=self.positions,
            modes=tuple(modes),
        )

    @property
    def k0d(self) -> float:
        return self.k0 * self.d


@dataclass(frozen=True, eq=False)
class CouplingMatrices:
    """Coherent shifts ``omega`` (zero diagonal) and dissipative couplings ``gamma``."""

    omega: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        omega = np.array(self.omega, dtype=float)
        gamma = np.array(self.gamma, dtype=float)
        if omega.ndim != 2 or omega.shape[0] != omega.shape[1] or gamma.shape != omega.shape:
            raise ValueError("coupling matrices must be square and of equal shape")
        for name, m in (("omega", omega), ("gamma", gamma)):
            scale = max(np.max(np.abs(m)), 1e-300)
            if np.max(np.abs(m - m.T)) > 1e-12 * scale:
                raise ValueError(f"{name} matrix is not symmetric")
        omega.setflags(write=False)
        gamma.setflags(write=False)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "gamma", gamma)

    @property
    def N(self) -> int:
        return self.omega.shape[0]

    @property
    def omega_nn(self) -> float:
        """Nearest-neighbour coupling Omega_12."""
        return float(self.omega[0, 1])

    @property
    def gamma0(self) -> float:
        return float(self.gamma[0, 0])


def green_tensor(r, k0: float) -> np.ndarray:
    """Free-space Green's tensor G(r, omega_0) for displacement ``r``."""
    r = np.asarray(r, dtype=float)
    dist = float(np.linalg.norm(r))
    if dist == 0.0:
        raise ValueError("Green's tensor is singular at zero displacement")
    if not k0 > 0:
        raise ValueError("k0 must be positive")
    x = k0 * dist
    dyad = np.outer(r, r) / dist**2
    pref = np.exp(1j * x) / (4 * np.pi * k0**2 * dist**3)
    return pref * ((x**2 + 1j * x - 1) * np.eye(3) + (-(x**2) - 3j * x + 3) * dyad)


def _projected_green(x: np.ndarray, cos2: np.ndarray):
    """Return (Re, Im) of mu.G.mu in units of k0 / (4 pi), as arrays over pairs.

    ``x`` holds k0 r and ``cos2`` the squared cosine between dipole and separation.
    """
    phase = np.exp(1j * x)
    iso = phase * (x**2 + 1j * x - 1) / x**3
    dyad = phase * (-(x**2) - 3j * x + 3) / x**3
    re = iso.real + cos2 * dyad.real
    im = iso.imag + cos2 * dyad.imag
    small = x < _SERIES_CUTOFF
    if np.any(small):
        xs2 = x[small] ** 2
        im_iso = np.polynomial.polynomial.polyval(xs2, _IM_ISO)
        im_dyad = np.polynomial.polynomial.polyval(xs2, _IM_DYAD)
        im[small] = im_iso + cos2[small] * im_dyad
    return re, im


def pair_couplings(r, k0: float, orientation=(0.0, 0.0, 1.0), gamma0: float = 1.0):
    """(Omega, gamma) between two parallel dipoles separated by ``r``."""
    r = np.atleast_2d(np.asarray(r, dtype=float))
    dist = np.linalg.norm(r, axis=-1)
    if np.any(dist == 0):
        raise ValueError("coincident monomers")
    mu = np.asarray(orientation, dtype=float)
    cos2 = (r @ mu / dist) ** 2
    re, im = _projected_green(k0 * dist, cos2)
    # -(3 pi / k0) * k0 / (4 pi) = -3/4 ; (6 pi / k0) * k0 / (4 pi) = 3/2
    omega = -0.75 * gamma0 * re
    gamma = 1.5 * gamma0 * im
    return omega.squeeze(), gamma.squeeze()


def coupling_matrices(spec: AggregateSpec) -> CouplingMatrices:
    """Omega_jj' and gamma_jj' for every monomer pair of ``spec``."""
    pos = spec.positions
    N = spec.N
    iu, ju = np.triu_indices(N, k=1)
    disp = pos[ju] - pos[iu]
    omega_pairs, gamma_pairs = pair_couplings(disp, spec.k0, spec.dipole_orientation, spec.gamma0)
    omega = np.zeros((N, N))
    gamma = np.eye(N) * spec.gamma0
    omega[iu, ju] = omega[ju, iu] = omega_pairs
    gamma[iu, ju] = gamma[ju, iu] = gamma_pairs
    return CouplingMatrices(omega, gamma)


def circulant_couplings(first_row, gamma0: float = 1.0) -> CouplingMatrices:
    """Ring couplings whose row j is ``first_row`` rolled by j.

    The dissipative matrix is taken in the Dicke limit (all entries gamma0),
    appropriate for a ring much smaller than the wavelength.
    """
    row = np.asarray(first_row, dtype=float)
    N = row.size
    if N < 2 or row[0] != 0:
        raise ValueError("first_row must have length >= 2 and a zero self-coupling")
    if not np.allclose(row[1:], row[1:][::-1], rtol=1e-12, atol=0):
        raise ValueError("ring couplings must be symmetric in distance")
    omega = np.array([np.roll(row, j) for j in range(N)])
    return CouplingMatrices(omega, np.full((N, N), float(gamma0)))


def nearest_neighbor_couplings(N: int, omega_nn: float, periodic: bool = True, gamma0: float = 1.0) -> CouplingMatrices:
    """Nearest-neighbour-only couplings on a ring (``periodic``) or open chain."""
    if N < 2:
        raise ValueError("N must be >= 2")
    if periodic:
        row = np.zeros(N)
        row[1] += omega_nn
        row[-1] += omega_nn if N > 2 else 0.0
        return circulant_couplings(row, gamma0)
    omega = omega_nn * (np.eye(N, k=1) + np.eye(N, k=-1))
    return CouplingMatrices(omega, np.full((N, N), float(gamma0)))
