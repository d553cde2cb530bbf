"""ermkit: reflection-mode analysis of hanger-coupled microwave resonators.

The package models a resonator side-coupled to a feedline through a
three-port tee, recovers the effective reflection mode from two-port
scattering sweeps (delay matching, eigenmode recombination, phase
normalization), quantifies junction asymmetry, and fits the standard
lineshape families with analytic Jacobians and honest confidence
intervals. A synthetic-measurement generator and a CLI round out the
pipeline.
"""

__version__ = "0.1.0"

from .circlefit import fit_circle_taubin
from .exceptions import (
    ColumnCountMismatchError,
    DegenerateJunctionError,
    ErmkitError,
    InsufficientSpanError,
    MalformedOptionLineError,
    NoBracketError,
    NonMonotonicFrequencyError,
    NotSymmetricError,
    PhaseUnwrapAmbiguityError,
    ResidualTooLargeError,
    SingularJacobianError,
    SingularLoopError,
    TouchstoneError,
)
from .extraction import (
    ErmExtraction,
    ErmExtractor,
    ResonanceDip,
    extract_erm,
    find_resonance_dips,
    match_port_delay,
    remove_common_delay,
)
from .fitting import (
    MODEL_NAMES,
    FitConfig,
    FitResult,
    LineshapeFitter,
    PowerFitEntry,
    fit_lineshape,
    fit_power_sweep,
    initial_guess,
    predict_model,
)
from .lineshapes import (
    CouplingBeta,
    ErmEquivalentCircuit,
    HangerParams,
    LossyErmParams,
    ResonatorParams,
    erm_response,
    erm_via_admittance,
    hanger_s21,
    lossy_erm_response,
    mobius_map,
    rlc_reflection,
)
from .network import (
    FrequencySweep,
    ReferencePlaneShift,
    check_passivity,
    check_reciprocity,
    check_unitarity,
    eigenmodes_symmetric2,
    reduce_network,
    shift_reference_planes,
)
from .perturbation import (
    GELL_MANN,
    NONRECIPROCAL_INDICES,
    RECIPROCAL_INDICES,
    JunctionAsymmetry,
    PerturbationGenerator,
    classify_reciprocity,
    extract_mu,
    gell_mann,
    perturb_exact,
    perturb_first_order,
    reduced_splitting,
)
from .reports import (
    emit_plot_data,
    fit_report,
    read_trace_csv,
    to_db,
    write_fit_report,
    write_trace_csv,
)
from .synth import (
    Scenario,
    bare_arm_params,
    default_cpw_scenario,
    generate,
    scenario_from_ini,
    scenario_to_ini,
)
from .tee import (
    MODE_BASIS,
    TeeEigenphases,
    TeeJunction,
    eigenphases_from_tee,
    erm_identity_check,
    tee_from_eigenphases,
    verify_covering_symmetry,
)
from .touchstone import parse_touchstone, read_touchstone, write_touchstone

__all__ = [
    "__version__",
    # exceptions
    "ErmkitError",
    "SingularLoopError",
    "NotSymmetricError",
    "DegenerateJunctionError",
    "PhaseUnwrapAmbiguityError",
    "NoBracketError",
    "ResidualTooLargeError",
    "InsufficientSpanError",
    "SingularJacobianError",
    "TouchstoneError",
    "MalformedOptionLineError",
    "NonMonotonicFrequencyError",
    "ColumnCountMismatchError",
    # networks
    "FrequencySweep",
    "ReferencePlaneShift",
    "reduce_network",
    "shift_reference_planes",
    "eigenmodes_symmetric2",
    "check_passivity",
    "check_reciprocity",
    "check_unitarity",
    # lineshapes
    "ResonatorParams",
    "CouplingBeta",
    "ErmEquivalentCircuit",
    "HangerParams",
    "LossyErmParams",
    "rlc_reflection",
    "mobius_map",
    "erm_response",
    "erm_via_admittance",
    "hanger_s21",
    "lossy_erm_response",
    # tee
    "TeeEigenphases",
    "TeeJunction",
    "MODE_BASIS",
    "tee_from_eigenphases",
    "eigenphases_from_tee",
    "verify_covering_symmetry",
    "erm_identity_check",
    # perturbation
    "GELL_MANN",
    "RECIPROCAL_INDICES",
    "NONRECIPROCAL_INDICES",
    "gell_mann",
    "PerturbationGenerator",
    "perturb_exact",
    "perturb_first_order",
    "classify_reciprocity",
    "reduced_splitting",
    "JunctionAsymmetry",
    "extract_mu",
    # circle fit
    "fit_circle_taubin",
    # extraction
    "ErmExtraction",
    "ErmExtractor",
    "ResonanceDip",
    "remove_common_delay",
    "match_port_delay",
    "extract_erm",
    "find_resonance_dips",
    # fitting
    "MODEL_NAMES",
    "FitConfig",
    "FitResult",
    "fit_lineshape",
    "initial_guess",
    "predict_model",
    "fit_power_sweep",
    "PowerFitEntry",
    "LineshapeFitter",
    # synthesis
    "Scenario",
    "generate",
    "default_cpw_scenario",
    "bare_arm_params",
    "scenario_to_ini",
    "scenario_from_ini",
    # I/O
    "read_touchstone",
    "write_touchstone",
    "parse_touchstone",
    "fit_report",
    "write_fit_report",
    "emit_plot_data",
    "to_db",
    "read_trace_csv",
    "write_trace_csv",
]
