"""Non-Hermitian effective Hamiltonian and quantum-jump channels.

Per monomer the Holstein Hamiltonian reads

    h_j = w0_bar n_j + sum_m nu_m (b_jm^+ b_jm - sqrt(s_m) n_j (b_jm^+ + b_jm)),

with n_j = sigma_j^+ sigma_j and the Stokes-shifted transition
w0_bar = w0 + sum_m s_m nu_m. Dipole exchange adds sum Omega_jj' sigma_j^+ sigma_j'.
Photon loss follows the collective matrix gamma_jj', diagonalised into
independent channels; vibrational loss of mode m at monomer j uses the
collapse operator O_jm = b_jm - sqrt(s_m) n_j at rate Gamma_m. The effective
Hamiltonian is H - (i/2) sum_k L_k^+ L_k over all channels, built from the same
sparse channel operators that the jump engines apply.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..coupling import AggregateSpec, CouplingMatrices, coupling_matrices
from ..modes import stokes_shift
from .basis import SingleExcitationBasis

DEFAULT_MEMORY_CAP = 1 << 30  # bytes


class SizingError(MemoryError):
    """The requested basis would exceed the configured memory cap."""


@dataclass(frozen=True, eq=False)
class JumpChannel:
    """A collapse operator (rate folded in). Terminal channels leave the basis."""

    operator: sp.csr_matrix
    kind: str
    mode: int | None = None
    site: int | None = None
    terminal: bool = False


@dataclass(frozen=True, eq=False)
class EffectiveHamiltonian:
    matrix: sp.csr_matrix
    hamiltonian: sp.csr_matrix
    basis: SingleExcitationBasis
    channels: tuple
    couplings: CouplingMatrices
    modes: tuple
    detunings: np.ndarray
    onsite: float
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.basis.dim

    def with_detunings(self, detunings) -> EffectiveHamiltonian:
        """Copy with per-monomer static shifts replacing the current ones."""
        new = np.asarray(detunings, dtype=float)
        if new.shape != (self.basis.N,):
            raise ValueError(f"detunings must have shape ({self.basis.N},)")
        diff = new - self.detunings
        diag = _electronic_diagonal(self.basis, diff)
        shift = sp.diags(diag, format="csr")
        return EffectiveHamiltonian(
            matrix=(self.matrix + shift).tocsr(),
            hamiltonian=(self.hamiltonian + shift).tocsr(),
            basis=self.basis,
            channels=self.channels,
            couplings=self.couplings,
            modes=self.modes,
            detunings=new,
            onsite=self.onsite,
            meta=dict(self.meta),
        )

    def with_energy_offset(self, offset: float) -> EffectiveHamiltonian:
        """Copy with every diagonal energy shifted by ``offset`` (a change of frame)."""
        shift = sp.identity(self.dim, dtype=complex, format="csr") * offset
        return EffectiveHamiltonian(
            matrix=(self.matrix + shift).tocsr(),
            hamiltonian=(self.hamiltonian + shift).tocsr(),
            basis=self.basis,
            channels=self.channels,
            couplings=self.couplings,
            modes=self.modes,
            detunings=self.detunings,
            onsite=self.onsite + offset,
            meta=dict(self.meta),
        )


def _electronic_diagonal(basis: SingleExcitationBasis, per_site) -> np.ndarray:
    per_site = np.asarray(per_site, dtype=float)
    return np.concatenate([per_site, np.repeat(per_site, basis.N * basis.n_modes)])


def estimate_memory(N: int, n_modes: int) -> int:
    """Rough byte count of the sparse operators assembled for (N, n_modes)."""
    dim = N + N * N * n_modes
    nnz_h = dim * (N + 2)
    nnz_channels = N * n_modes * (N + 1 + N * n_modes) + N * dim
    # csr: 16 B complex value + 4 B column index per entry, assembled twice
    return int(2 * 20 * (2 * nnz_h + nnz_channels))


def radiative_channels(basis: SingleExcitationBasis, gamma: np.ndarray, rel_cutoff: float = 1e-12) -> list:
    """Eigen-channels of gamma; each maps |j; vib> to the ground manifold |G; vib>.

    The ground manifold has 1 + N n states: index 0 is the vibrational vacuum,
    1 + j' n + m one quantum in mode m of monomer j'.
    """
    N = basis.N
    lam, vec = np.linalg.eigh(np.asarray(gamma, dtype=float))
    keep = lam > rel_cutoff * max(lam.max(), 0.0)
    sectors = basis.sector_indices()  # (S, N)
    S = basis.n_sectors
    rows = np.repeat(np.arange(S), N)
    cols = sectors.ravel()
    out = []
    for k in np.flatnonzero(keep)[::-1]:
        vals = np.tile(np.sqrt(lam[k]) * vec[:, k], S).astype(complex)
        op = sp.csr_matrix((vals, (rows, cols)), shape=(S, basis.dim))
        out.append(JumpChannel(operator=op, kind="radiative", terminal=True))
    return out


def vibrational_channels(basis: SingleExcitationBasis, modes) -> list:
    """sqrt(Gamma_m) (b_{j'm} - sqrt(s_m) n_{j'}) for every monomer j' and mode m."""
    N, n = basis.N, basis.n_modes
    out = []
    for jp in range(N):
        for m, mode in enumerate(modes):
            rows, cols, vals = [], [], []
            # b_{j'm}: |j; (j', m)> -> |j; vac>
            for j in range(N):
                rows.append(basis.vacuum(j))
                cols.append(basis.phonon(j, jp, m))
                vals.append(1.0)
            # -sqrt(s) n_{j'} on every state with the excitation on j'
            root_s = np.sqrt(mode.s)
            if root_s > 0:
                rows.append(basis.vacuum(jp))
                cols.append(basis.vacuum(jp))
                vals.append(-root_s)
                for k in range(N):
                    for m2 in range(n):
                        idx = basis.phonon(jp, k, m2)
                        rows.append(idx)
                        cols.append(idx)
                        vals.append(-root_s)
            op = sp.csr_matrix(
                (np.sqrt(mode.gamma_vib) * np.asarray(vals, dtype=complex), (rows, cols)),
                shape=(basis.dim, basis.dim),
            )
            out.append(JumpChannel(operator=op, kind="vibrational", mode=m, site=jp))
    return out


def build_effective_hamiltonian(
    spec: AggregateSpec,
    couplings: CouplingMatrices | None = None,
    *,
    detunings=None,
    frame: float | None = None,
    include_radiative: bool = True,
    include_vibrational_loss: bool = True,
    memory_cap: int = DEFAULT_MEMORY_CAP,
) -> EffectiveHamiltonian:
    """Assemble H_eff on the single-excitation basis of ``spec``.

    Energies are measured from ``frame``, which defaults to the Stokes-shifted
    transition frequency, so the electronic on-site energy is
    omega0 + sum_m s_m nu_m - frame (zero by default) plus ``detunings``.
    """
    modes = tuple(spec.modes)
    N, n = spec.N, len(modes)
    need = estimate_memory(N, n)
    if need > memory_cap:
        raise SizingError(
            f"single-excitation basis for N={N}, n={n} (dimension {N + N * N * n}) needs about "
            f"{need / 2**20:.0f} MiB, above the cap of {memory_cap / 2**20:.0f} MiB"
        )
    if couplings is None:
        couplings = coupling_matrices(spec)
    if couplings.N != N:
        raise ValueError("couplings do not match the aggregate size")
    basis = SingleExcitationBasis(N, n)
    delta = np.zeros(N) if detunings is None else np.asarray(detunings, dtype=float)
    if delta.shape != (N,):
        raise ValueError(f"detunings must have shape ({N},)")

    w0_bar = spec.omega0 + stokes_shift(modes)
    onsite = w0_bar - (w0_bar if frame is None else frame)

    # electronic part acts identically in every vibrational sector
    electronic = sp.csr_matrix(couplings.omega + np.diag(onsite + delta))
    blocks = [electronic]
    if n:
        blocks.append(sp.kron(electronic, sp.identity(N * n), format="csr"))
    H = sp.block_diag(blocks, format="csr").astype(complex)

    if n:
        nu = np.array([m.nu for m in modes])
        vib_energy = np.concatenate([np.zeros(N), np.tile(nu, N * N)])
        rows, cols, vals = [], [], []
        for j in range(N):
            for m, mode in enumerate(modes):
                g = -np.sqrt(mode.s) * mode.nu
                if g != 0:
                    a, b = basis.vacuum(j), basis.phonon(j, j, m)
                    rows += [a, b]
                    cols += [b, a]
                    vals += [g, g]
        vibronic = sp.csr_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim), dtype=complex)
        H = (H + sp.diags(vib_energy.astype(complex)) + vibronic).tocsr()

    channels = []
    if include_radiative:
        channels += radiative_channels(basis, couplings.gamma)
    if include_vibrational_loss and n:
        channels += vibrational_channels(basis, modes)

    loss = sp.csr_matrix((basis.dim, basis.dim), dtype=complex)
    for ch in channels:
        loss = loss + (ch.operator.conj().T @ ch.operator)
    H_eff = (H - 0.5j * loss).tocsr()
    H_eff.sum_duplicates()
    H_eff.eliminate_zeros()
    H.eliminate_zeros()

    return EffectiveHamiltonian(
        matrix=H_eff,
        hamiltonian=H,
        basis=basis,
        channels=tuple(channels),
        couplings=couplings,
        modes=modes,
        detunings=delta,
        onsite=float(onsite),
        meta={"omega0_bar": float(w0_bar), "frame": float(w0_bar if frame is None else frame)},
    )


def symmetric_state(h_eff: EffectiveHamiltonian, band) -> np.ndarray:
    """Bright collective state of ``band`` with the vibrations in their vacuum."""
    psi = np.zeros(h_eff.dim, dtype=complex)
    psi[: h_eff.basis.N] = band.symmetric_vector
    return psi
