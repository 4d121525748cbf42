"""Steady-state model of an entanglement-based microwave magnetometer.

The package covers the chain from device parameters to a verdict about
bipartite entanglement of the two microwave cavity outputs:

``device``      physical parameters and derived coupling rates,
``dynamics``    classical fixed point, drift/diffusion, Lyapunov solve,
``gaussian``    covariance utilities and the two entanglement tests,
``magnetics``   Hall-voltage to varactor map and RF disturbance model,
``compass``     ring array of sensor pairs and direction estimation,
``calibration`` drive-amplitude presets,
``config``      JSON run configuration,
``sweep``       one-variable parameter sweeps with CSV output.
"""

from .calibration import (
    Calibration,
    apply_calibration,
    default_calibration,
    load_calibration,
    search_calibration,
    write_calibration,
)
from .compass import (
    DirectionEstimate,
    SensorArray,
    estimate_direction,
    project_field,
)
from .config import (
    CompassSpec,
    RfSpec,
    RunConfig,
    SweepSpec,
    detuned_params,
    parse_config,
    resolved_params,
    serialize_config,
)
from .device import (
    CouplingSet,
    PhysicalParams,
    derive_couplings,
    microwave_frequency,
    optical_frequencies,
    thermal_occupation,
)
from .dynamics import (
    FixedPoint,
    SteadyState,
    assemble_diffusion,
    assemble_drift,
    closed_form_fixed_point,
    entanglement_from_capacitances,
    mc_entanglement,
    solve_fixed_point,
    stability_check,
    steady_covariance,
    steady_state,
)
from .errors import (
    ArrayInconsistencyError,
    ConfigError,
    FixedPointError,
    LyapunovResidualError,
    ResonanceError,
    SensorModelError,
    StabilityError,
    SymmetryError,
    UnphysicalCovarianceError,
)
from .gaussian import (
    BlockDecomposition,
    CovarianceMatrix,
    SphResult,
    extract_blocks,
    min_ppt_symplectic_eigenvalue,
    ppt_oracle,
    random_two_mode_covariance,
    sph_lambda,
    symplectic_eigenvalues,
    symplectic_form,
    thermal_covariance,
    two_mode_squeezed_covariance,
    uncertainty_check,
    vacuum_covariance,
)
from .magnetics import (
    FieldCoefficients,
    RfVerdict,
    VaractorModel,
    hall_to_varactor,
    rf_disturbance_verdict,
    rf_modified_coefficient,
    varactor_rf_capacitance,
)
from .sweep import SweepRow, run_sweep, write_csv

__version__ = "0.1.0"

__all__ = [
    "ArrayInconsistencyError",
    "BlockDecomposition",
    "Calibration",
    "CompassSpec",
    "ConfigError",
    "CouplingSet",
    "CovarianceMatrix",
    "DirectionEstimate",
    "FieldCoefficients",
    "FixedPoint",
    "FixedPointError",
    "LyapunovResidualError",
    "PhysicalParams",
    "ResonanceError",
    "RfSpec",
    "RfVerdict",
    "RunConfig",
    "SensorArray",
    "SensorModelError",
    "SphResult",
    "StabilityError",
    "SteadyState",
    "SweepRow",
    "SweepSpec",
    "SymmetryError",
    "UnphysicalCovarianceError",
    "VaractorModel",
    "apply_calibration",
    "assemble_diffusion",
    "assemble_drift",
    "closed_form_fixed_point",
    "default_calibration",
    "derive_couplings",
    "detuned_params",
    "entanglement_from_capacitances",
    "estimate_direction",
    "extract_blocks",
    "hall_to_varactor",
    "load_calibration",
    "mc_entanglement",
    "microwave_frequency",
    "min_ppt_symplectic_eigenvalue",
    "optical_frequencies",
    "parse_config",
    "ppt_oracle",
    "project_field",
    "random_two_mode_covariance",
    "resolved_params",
    "rf_disturbance_verdict",
    "rf_modified_coefficient",
    "run_sweep",
    "search_calibration",
    "serialize_config",
    "solve_fixed_point",
    "sph_lambda",
    "stability_check",
    "steady_covariance",
    "steady_state",
    "symplectic_eigenvalues",
    "symplectic_form",
    "thermal_covariance",
    "thermal_occupation",
    "two_mode_squeezed_covariance",
    "uncertainty_check",
    "vacuum_covariance",
    "varactor_rf_capacitance",
    "write_calibration",
    "write_csv",
]
