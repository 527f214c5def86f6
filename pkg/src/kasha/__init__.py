"""Exciton bands, vibrationally mediated Kasha relaxation and single-excitation dynamics of H-aggregates."""

__version__ = "0.1.0"

from .band import ExcitonBand, band_analytic, band_exact, full_band_shifts
from .catalog import DyeRecord, count_relevant_modes, estimate_timescale, load_dye
from .coupling import AggregateSpec, CouplingMatrices, coupling_matrices, green_tensor
from .disorder import (
    DisorderSpec,
    collective_disorder,
    disordered_decay_experiment,
    sample_disorder,
)
from .dynamics import (
    EffectiveHamiltonian,
    EnsembleResult,
    SingleExcitationBasis,
    build_effective_hamiltonian,
    evolve_dense,
    fit_exponential,
    mcwf_run,
    project_to_band,
)
from .modes import VibrationalMode, equidistant_modes, random_modes
from .rates import (
    PopulationTrajectory,
    RateModel,
    build_rate_model,
    integrate_rate_equations,
    kasha_rate_closed_form,
    pairwise_rate,
    scaling_law,
    total_kasha_rate,
)

__all__ = [
    "AggregateSpec",
    "CouplingMatrices",
    "DisorderSpec",
    "DyeRecord",
    "EffectiveHamiltonian",
    "EnsembleResult",
    "ExcitonBand",
    "PopulationTrajectory",
    "RateModel",
    "SingleExcitationBasis",
    "VibrationalMode",
    "band_analytic",
    "band_exact",
    "build_effective_hamiltonian",
    "build_rate_model",
    "collective_disorder",
    "count_relevant_modes",
    "coupling_matrices",
    "disordered_decay_experiment",
    "equidistant_modes",
    "estimate_timescale",
    "evolve_dense",
    "fit_exponential",
    "full_band_shifts",
    "green_tensor",
    "integrate_rate_equations",
    "kasha_rate_closed_form",
    "load_dye",
    "mcwf_run",
    "pairwise_rate",
    "project_to_band",
    "random_modes",
    "sample_disorder",
    "scaling_law",
    "total_kasha_rate",
]
