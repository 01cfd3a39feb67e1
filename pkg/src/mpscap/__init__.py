"""Quantum capacity of dephasing memory channels with MPS environments.

Three mutually checking routes to the same quantity:

* exact pruned enumeration of the environment's diagonal distribution and
  its entropy rate (:mod:`mpscap.diag_process`),
* closed-form spectra and capacity formulas for the AKLT and Majumdar-Ghosh
  chains (:mod:`mpscap.closed_form`),
* explicit finite-n channel construction with its complementary output
  (:mod:`mpscap.channel_sim`).
"""

from .channel_sim import (
    CapacityEstimate,
    DensityMatrix,
    KrausChannel,
    ResourceLimitError,
    TwoPathCheck,
    apply_channel,
    capacity_estimate,
    closed_form_capacity,
    complementary_output,
    controlled_phase_unitary,
    density_matrix_from_dict,
    density_matrix_to_dict,
    dephasing_channel,
    load_density_matrix,
    maximally_mixed,
    phase_gate,
    pure_state,
    save_density_matrix,
    von_neumann_entropy,
)
from .closed_form import (
    MultiplicityTable,
    SpectrumFamily,
    aklt_capacity,
    aklt_spectrum,
    expand_families,
    family_entropy,
    family_mass,
    group_families,
    h2,
    mg_capacity,
    mg_live_string_count,
    mg_multiplicity_closed_form,
    mg_multiplicity_recurrence,
    mg_multiplicity_seed,
    mg_spectrum,
)
from .diag_process import (
    DiagDistribution,
    EntropyRecord,
    EntropyTrace,
    Spectrum,
    active_kernel,
    compare_distributions,
    enumerate_distribution,
    entropy_trace,
    marginal,
    multiset_gap,
    probability_multiset,
    shannon_entropy,
    spectrum_of,
    string_probability,
)
from .mps_core import (
    AKLT_GROUND_THETA,
    MG_GROUND_G,
    ConvergenceError,
    MPSModel,
    ValidationReport,
    aklt_model,
    load_model,
    mg_model,
    model_from_dict,
    model_to_dict,
    solve_invariant_state,
    validate_model,
)

__version__ = "0.1.0"

__all__ = [
    "AKLT_GROUND_THETA",
    "CapacityEstimate",
    "ConvergenceError",
    "DensityMatrix",
    "DiagDistribution",
    "EntropyRecord",
    "EntropyTrace",
    "KrausChannel",
    "MG_GROUND_G",
    "MPSModel",
    "MultiplicityTable",
    "ResourceLimitError",
    "Spectrum",
    "SpectrumFamily",
    "TwoPathCheck",
    "ValidationReport",
    "active_kernel",
    "aklt_capacity",
    "aklt_model",
    "aklt_spectrum",
    "apply_channel",
    "capacity_estimate",
    "closed_form_capacity",
    "compare_distributions",
    "complementary_output",
    "controlled_phase_unitary",
    "density_matrix_from_dict",
    "density_matrix_to_dict",
    "dephasing_channel",
    "enumerate_distribution",
    "entropy_trace",
    "expand_families",
    "family_entropy",
    "family_mass",
    "group_families",
    "h2",
    "load_density_matrix",
    "load_model",
    "marginal",
    "maximally_mixed",
    "mg_capacity",
    "mg_live_string_count",
    "mg_model",
    "mg_multiplicity_closed_form",
    "mg_multiplicity_recurrence",
    "mg_multiplicity_seed",
    "mg_spectrum",
    "model_from_dict",
    "model_to_dict",
    "multiset_gap",
    "phase_gate",
    "probability_multiset",
    "pure_state",
    "save_density_matrix",
    "shannon_entropy",
    "solve_invariant_state",
    "spectrum_of",
    "string_probability",
    "validate_model",
    "von_neumann_entropy",
]
