"""Pulse synthesis toolkit for a 4-level double-quantum-dot hybrid qubit.

The package builds the device model at a reference detuning, synthesizes
electric detuning pulses implementing qutrit gates through a monotonically
convergent iterative scheme, and composes the synthesized pulses to run
the single-query permutation-parity algorithm.
"""

__version__ = "0.1.0"

from .analysis import (
    SpectrumTable,
    fidelity,
    infidelity,
    leakage,
    occupations,
    power_spectrum,
)
from .config import GATE_NAMES, RunConfig, load_config, parse_config_text
from .errors import (
    ConfigError,
    ContractViolationError,
    DegeneracyError,
    DimensionMismatchError,
    DivergenceError,
    DqdPulseError,
    InvalidParameterError,
    PulseFormatError,
)
from .hybrid_model import (
    DIPOLE_DIAGONAL,
    HybridParams,
    ModelBasis,
    build_hamiltonian,
    build_model_basis,
    eigendecompose,
    energy_spectrum_sweep,
)
from .io import (
    export_pulse,
    import_pulse,
    write_convergence_log,
    write_infidelity_summary,
    write_spectrum,
    write_spectrum_sweep,
    write_trajectory,
)
from .propagation import (
    ControlField,
    TimeGrid,
    Trajectory,
    propagate_forward,
    propagate_target_backward,
    step_propagator,
)
from .qpa import (
    Parity,
    QpaOutcome,
    QutritUnitary,
    embed_gate_as_state_pairs,
    expected_outcome,
    ideal_qpa_outcome,
    parity,
    permutation_matrix,
    qft_matrix,
    run_qpa,
)
from .runner import GateRecord, RunManifest, gate_unitary, run_experiment
from .tbqcp import (
    OptimizationResult,
    OptimizerConfig,
    StatePairSet,
    convergence_check,
    field_correction,
    optimize_gate,
    tbqcp_sweep,
)
from .units import HBAR_UEV_NS, PLANCK_UEV_PER_GHZ, convert_units

__all__ = [
    "__version__",
    "HBAR_UEV_NS", "PLANCK_UEV_PER_GHZ", "convert_units",
    "DqdPulseError", "InvalidParameterError", "ContractViolationError",
    "DegeneracyError", "DimensionMismatchError", "DivergenceError",
    "ConfigError", "PulseFormatError",
    "HybridParams", "ModelBasis", "DIPOLE_DIAGONAL", "build_hamiltonian",
    "eigendecompose", "build_model_basis", "energy_spectrum_sweep",
    "TimeGrid", "ControlField", "Trajectory", "step_propagator",
    "propagate_forward", "propagate_target_backward",
    "StatePairSet", "OptimizerConfig", "OptimizationResult",
    "field_correction", "tbqcp_sweep", "optimize_gate", "convergence_check",
    "Parity", "QutritUnitary", "QpaOutcome", "qft_matrix",
    "permutation_matrix", "parity", "embed_gate_as_state_pairs",
    "expected_outcome", "ideal_qpa_outcome", "run_qpa",
    "SpectrumTable", "fidelity", "infidelity", "occupations", "leakage",
    "power_spectrum",
    "export_pulse", "import_pulse", "write_convergence_log", "write_spectrum",
    "write_trajectory", "write_spectrum_sweep", "write_infidelity_summary",
    "GATE_NAMES", "RunConfig", "load_config", "parse_config_text",
    "GateRecord", "RunManifest", "gate_unitary", "run_experiment",
]
