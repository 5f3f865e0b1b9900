"""Random quantum circuits from fixed X-basis measurements on weighted graph states."""

from .statevec import (
    NumericalError,
    StateVector,
    apply_controlled_phase,
    apply_single_qubit,
    basis_state,
    fidelity,
    measure_x_basis,
    plus_state,
    reduced_spectrum,
    zero_state,
)
from .scheme import (
    DEFAULT_PHI,
    GeneralizedStep,
    SchemeConfig,
    apply_g_operator,
    apply_m_operator,
    column_step,
    generalized_m,
    mbqc_column_oracle,
    run_circuit,
    sample_outcome,
    trajectory_streams,
    unitarity_defect,
)
from .entanglement import (
    EntanglementHistogram,
    build_histogram,
    distribution_distance,
    haar_sample,
    page_average,
    stabilizer_entropy_pmf,
    vn_entropy_bits,
)
from .experiments import (
    ExperimentSpec,
    burnin_mean_entropy,
    convergence_time,
    emit_csv,
    entropy_histogram_experiment,
    phi_scan,
)

__version__ = "0.1.0"

__all__ = [
    "NumericalError",
    "StateVector",
    "apply_controlled_phase",
    "apply_single_qubit",
    "basis_state",
    "fidelity",
    "measure_x_basis",
    "plus_state",
    "reduced_spectrum",
    "zero_state",
    "DEFAULT_PHI",
    "GeneralizedStep",
    "SchemeConfig",
    "apply_g_operator",
    "apply_m_operator",
    "column_step",
    "generalized_m",
    "mbqc_column_oracle",
    "run_circuit",
    "sample_outcome",
    "trajectory_streams",
    "unitarity_defect",
    "EntanglementHistogram",
    "build_histogram",
    "distribution_distance",
    "haar_sample",
    "page_average",
    "stabilizer_entropy_pmf",
    "vn_entropy_bits",
    "ExperimentSpec",
    "burnin_mean_entropy",
    "convergence_time",
    "emit_csv",
    "entropy_histogram_experiment",
    "phi_scan",
]
