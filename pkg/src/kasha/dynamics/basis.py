"""Index bookkeeping for the single-excitation electron-vibration space."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SingleExcitationBasis:
    """States |j; vac> and |j; (j', m)>.

    The vacuum block comes first (index j), followed by (j, j', m) in
    lexicographic order: index = N + (j N + j') n + m. Reshaping the
    vibrationally excited block to (N, N n) therefore puts the electronic
    index on the rows.
    """

    N: int
    n_modes: int

    def __post_init__(self):
        if self.N < 1 or self.n_modes < 0:
            raise ValueError("basis needs N >= 1 and n_modes >= 0")

    @property
    def dim(self) -> int:
        return self.N + self.N * self.N * self.n_modes

    @property
    def n_sectors(self) -> int:
        """Vibrational configurations: the vacuum plus one quantum in any (j', m)."""
        return 1 + self.N * self.n_modes

    def vacuum(self, j: int) -> int:
        if not 0 <= j < self.N:
            raise IndexError(f"site {j} outside 0..{self.N - 1}")
        return j

    def phonon(self, j: int, jp: int, m: int) -> int:
        if not (0 <= j < self.N and 0 <= jp < self.N and 0 <= m < self.n_modes):
            raise IndexError(f"({j}, {jp}, {m}) outside the basis")
        return self.N + (j * self.N + jp) * self.n_modes + m

    def label(self, index: int):
        """Inverse of :meth:`vacuum` / :meth:`phonon`."""
        if not 0 <= index < self.dim:
            raise IndexError(f"index {index} outside 0..{self.dim - 1}")
        if index < self.N:
            return ("vac", index)
        rest = index - self.N
        j, r = divmod(rest, self.N * self.n_modes)
        jp, m = divmod(r, self.n_modes)
        return ("vib", j, jp, m)

    def electronic_matrix(self, psi: np.ndarray) -> np.ndarray:
        """View a state vector as (N, n_sectors): column 0 vacuum, column 1 + j' n + m."""
        psi = np.asarray(psi)
        if psi.shape != (self.dim,):
            raise ValueError(f"state has shape {psi.shape}, basis dimension is {self.dim}")
        return np.concatenate([psi[: self.N, None], psi[self.N :].reshape(self.N, -1)], axis=1)

    def sector_indices(self) -> np.ndarray:
        """(n_sectors, N) array: basis indices of electronic site j within each sector."""
        j = np.arange(self.N)
        rows = [j]
        stride = self.N * self.n_modes
        for s in range(self.N * self.n_modes):
            rows.append(self.N + j * stride + s)
        return np.array(rows)
