"""Single-excitation vibronic dynamics: effective Hamiltonian, dense reference and quantum jumps."""

from .analysis import fit_exponential, project_to_band
from .basis import SingleExcitationBasis
from .dense import PropagationError, evolve_dense
from .hamiltonian import (
    EffectiveHamiltonian,
    JumpChannel,
    SizingError,
    build_effective_hamiltonian,
    symmetric_state,
)
from .mcwf import EnsembleResult, JumpError, mcwf_run

__all__ = [
    "EffectiveHamiltonian",
    "EnsembleResult",
    "JumpChannel",
    "JumpError",
    "PropagationError",
    "SingleExcitationBasis",
    "SizingError",
    "build_effective_hamiltonian",
    "evolve_dense",
    "fit_exponential",
    "mcwf_run",
    "project_to_band",
    "symmetric_state",
]
