"""Live noise fingerprinting for small quantum simulators.

Measure a reference suite of prepared states against a bank of Pauli
observables, difference the result against exact noiseless values, and
treat the deviation matrix as a fingerprint of the platform's noise stack:
compare fingerprints across backends against the shot-noise floor, classify
the dominant channel, and estimate its strength.
"""

from .analysis import (
    AnalysisConfig,
    DEFAULT_CONFIG,
    FeatureVector,
    NoiseDiagnosis,
    calibrate,
    classify,
    diagnose,
    estimate_parameter,
    extract_features,
    load_config,
    save_config,
)
from .backends import (
    BUILTIN_PROFILES,
    BackendSpec,
    ChannelConfig,
    VariantProfile,
    bridge_backend,
    builtin_backend,
    noisy_prepared_state,
)
from .bridge import BridgeClient
from .channels import KrausChannel, apply_channel, make_channel, verify_cptp
from .conformance import ConformanceReport, run_conformance
from .costs import CostReport, cost_report, fingerprint_cost, scaling_series, tomography_cost
from .errors import (
    BackendError,
    InvalidInputError,
    NumericalIntegrityError,
    ShadowprintError,
)
from .estimation import (
    ExpectationEstimate,
    ShotPlan,
    derive_cell_seed,
    exact_expectation,
    sample_expectation,
)
from .fileio import read_fingerprint, write_comparison_report, write_fingerprint
from .fingerprint import (
    FingerprintMatrix,
    FingerprintMetadata,
    build_fingerprint,
    frobenius_distance,
    noise_floor,
    pair_noise_floor,
)
from .heatmap import HeatmapSpec, render_heatmap_svg, write_heatmap
from .qlinalg import DensityMatrix, pauli_string_matrix, pure_state_density
from .suite import PrepCircuit, ReferenceSuite, default_suite, load_suite, save_suite

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "BackendError",
    "BackendSpec",
    "BridgeClient",
    "BUILTIN_PROFILES",
    "ChannelConfig",
    "ConformanceReport",
    "CostReport",
    "DEFAULT_CONFIG",
    "DensityMatrix",
    "ExpectationEstimate",
    "FeatureVector",
    "FingerprintMatrix",
    "FingerprintMetadata",
    "HeatmapSpec",
    "InvalidInputError",
    "KrausChannel",
    "NoiseDiagnosis",
    "NumericalIntegrityError",
    "PrepCircuit",
    "ReferenceSuite",
    "ShadowprintError",
    "ShotPlan",
    "VariantProfile",
    "apply_channel",
    "bridge_backend",
    "build_fingerprint",
    "builtin_backend",
    "calibrate",
    "classify",
    "cost_report",
    "default_suite",
    "derive_cell_seed",
    "diagnose",
    "estimate_parameter",
    "exact_expectation",
    "extract_features",
    "fingerprint_cost",
    "frobenius_distance",
    "load_config",
    "load_suite",
    "make_channel",
    "noise_floor",
    "noisy_prepared_state",
    "pair_noise_floor",
    "pauli_string_matrix",
    "pure_state_density",
    "read_fingerprint",
    "render_heatmap_svg",
    "run_conformance",
    "sample_expectation",
    "save_config",
    "save_suite",
    "scaling_series",
    "tomography_cost",
    "verify_cptp",
    "write_comparison_report",
    "write_fingerprint",
    "write_heatmap",
]
