"""Steady states, optical bistability and weak-probe spectra of a Kerr
optomechanical cavity coupled to a two-level emitter.

All frequencies are expressed in units of the mechanical frequency.
"""

from .params import (
    SystemParams,
    PhysicalParams,
    EffectiveParams,
    ValidationReport,
    validate,
    effective_params,
    chi_from_physical,
    kappa_from_medium,
)
from .steady import (
    SteadyStateBranch,
    RootSet,
    steady_roots,
    turning_points,
    knee_drives,
    bistability_predicate,
    discriminant_bracket,
)
from .probe import (
    LinearFactors,
    ProbeResponse,
    Spectrum,
    SpectralFeatures,
    linear_factors,
    probe_amplitude,
    transmission,
    spectrum,
    eit_model_response,
    extract_features,
    make_grid,
)
from .sweeps import (
    SweepTrace,
    BistabilityMap,
    sweep_detuning,
    sweep_parameter,
    sweep_drive,
    bistability_map,
)
from .dynamics import time_domain_oracle, branch_initial_state

__version__ = "0.1.0"

__all__ = [
    "SystemParams", "PhysicalParams", "EffectiveParams", "ValidationReport",
    "validate", "effective_params", "chi_from_physical", "kappa_from_medium",
    "SteadyStateBranch", "RootSet", "steady_roots", "turning_points",
    "knee_drives", "bistability_predicate", "discriminant_bracket",
    "LinearFactors", "ProbeResponse", "Spectrum", "SpectralFeatures",
    "linear_factors", "probe_amplitude", "transmission", "spectrum",
    "eit_model_response", "extract_features", "make_grid",
    "SweepTrace", "BistabilityMap", "sweep_detuning", "sweep_parameter",
    "sweep_drive", "bistability_map",
    "time_domain_oracle", "branch_initial_state",
]
