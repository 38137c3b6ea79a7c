"""Fingerprint features, channel classification, parameter estimation.

Six summary features are extracted from a deviation matrix F (k x n):

    mean_dev          mean of all entries
    std_dev           population standard deviation of all entries
    frobenius_norm    sqrt(sum F^2)
    sparsity          fraction of entries with |F| < 1e-3
    max_abs_dev       max |F|
    variance_pattern  population variance of the n per-column
                      population variances

Classification walks a fixed rule order and stops at the first match:

    sparsity > 0.12          -> phase_damping
    |mean_dev| > 0.13        -> amplitude_damping
    otherwise                -> depolarizing

Thresholds and the estimation constants below are configuration values.
The defaults were tuned on shot-limited fingerprints at the stock
parameter grid (depolarizing 0.05, amplitude damping 0.10, phase damping
0.08) and do not transfer to exact-mode fingerprints, where every
ideally-zero cell of a Pauli channel is exactly zero and sparsity is
structurally high for every channel.  ``calibrate`` refits the
configuration from exact sweeps of the built-in backends; its output is
returned to the caller and never replaces the defaults implicitly.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .backends import BUILTIN_PROFILES, ChannelConfig, builtin_backend
from .errors import InvalidInputError
from .fingerprint import FingerprintMatrix, build_fingerprint
from .suite import ReferenceSuite, default_suite

SPARSITY_EPS = 1e-3

CHANNEL_LABELS = ("depolarizing", "amplitude_damping", "phase_damping")

STOCK_PARAMETER_GRID = {
    "depolarizing": 0.05,
    "amplitude_damping": 0.10,
    "phase_damping": 0.08,
}


@dataclass(frozen=True)
class FeatureVector:
    mean_dev: float
    std_dev: float
    frobenius_norm: float
    sparsity: float
    max_abs_dev: float
    variance_pattern: float


@dataclass(frozen=True)
class AnalysisConfig:
    """Classification thresholds and estimation scale constants."""

    sparsity_threshold: float = 0.12
    mean_threshold: float = 0.13
    depolarizing_scale: float = 2.14
    amplitude_scale: float = 1.44
    phase_scale: float = 0.094
    variance_pattern_scale: float = 0.001
    provenance: str = "stock defaults (shot-limited fingerprints, stock parameter grid)"


DEFAULT_CONFIG = AnalysisConfig()


@dataclass(frozen=True)
class NoiseDiagnosis:
    label: str
    estimated_parameter: float
    features: FeatureVector
    config: AnalysisConfig


def features_from_matrix(deviations: np.ndarray) -> FeatureVector:
    f = np.asarray(deviations, dtype=float)
    if f.ndim != 2 or f.size == 0:
        raise InvalidInputError("feature extraction needs a non-empty 2-D matrix")
    column_variances = np.var(f, axis=0)
    return FeatureVector(
        mean_dev=float(np.mean(f)),
        std_dev=float(np.std(f)),
        frobenius_norm=float(np.linalg.norm(f)),
        sparsity=float(np.mean(np.abs(f) < SPARSITY_EPS)),
        max_abs_dev=float(np.max(np.abs(f))),
        variance_pattern=float(np.var(column_variances)),
    )


def extract_features(fingerprint: FingerprintMatrix) -> FeatureVector:
    return features_from_matrix(fingerprint.deviations)


def classify(features: FeatureVector, config: AnalysisConfig = DEFAULT_CONFIG) -> str:
    """First matching rule wins; the order is part of the contract."""
    if features.sparsity > config.sparsity_threshold:
        return "phase_damping"
    if abs(features.mean_dev) > config.mean_threshold:
        return "amplitude_damping"
    return "depolarizing"


def estimate_parameter(
    label: str, features: FeatureVector, config: AnalysisConfig = DEFAULT_CONFIG
) -> float:
    """Invert the per-channel feature response; clamped to [0, 1]."""
    if label == "depolarizing":
        raw = abs(features.mean_dev) / config.depolarizing_scale
    elif label == "amplitude_damping":
        raw = 0.5 * (
            abs(features.mean_dev) / config.amplitude_scale
            + features.variance_pattern / config.variance_pattern_scale
        )
    elif label == "phase_damping":
        raw = (1.0 - features.sparsity) * config.phase_scale
    else:
        raise InvalidInputError(f"no estimator for label {label!r}")
    return min(1.0, max(0.0, raw))


def diagnose(
    fingerprint: FingerprintMatrix, config: AnalysisConfig = DEFAULT_CONFIG
) -> NoiseDiagnosis:
    features = extract_features(fingerprint)
    label = classify(features, config)
    return NoiseDiagnosis(label, estimate_parameter(label, features, config), features, config)


# -- calibration -------------------------------------------------------


def _exact_sweep(suite: ReferenceSuite) -> dict:
    """Exact fingerprints of every builtin variant at the stock grid."""
    runs: dict = {}
    for variant in BUILTIN_PROFILES:
        for channel, parameter in STOCK_PARAMETER_GRID.items():
            backend = builtin_backend(variant, ChannelConfig(channel, parameter))
            fp = build_fingerprint(backend, suite, "exact", 0)
            runs[(variant, channel)] = extract_features(fp)
    return runs


def calibrate(suite: ReferenceSuite | None = None) -> AnalysisConfig:
    """Refit thresholds and scale constants from exact-mode sweeps.

    The sparsity threshold is placed midway between the largest
    non-dephasing sparsity and the smallest dephasing sparsity seen across
    both builtin variants.  Scale constants invert the feature responses
    on variant-A (the literal platform).  The mean threshold is refit the
    same way only when the amplitude and depolarizing responses separate
    cleanly; otherwise the stock value is kept.
    """
    suite = suite or default_suite()
    runs = _exact_sweep(suite)

    phase_sparsities = [fv.sparsity for (_, ch), fv in runs.items() if ch == "phase_damping"]
    other_sparsities = [fv.sparsity for (_, ch), fv in runs.items() if ch != "phase_damping"]
    lo, hi = max(other_sparsities), min(phase_sparsities)
    if lo >= hi:
        raise InvalidInputError(
            "calibration failed: dephasing sparsity does not separate "
            f"(max other {lo:.4f} >= min phase {hi:.4f})"
        )
    sparsity_threshold = 0.5 * (lo + hi)

    amp_means = [abs(fv.mean_dev) for (_, ch), fv in runs.items() if ch == "amplitude_damping"]
    dep_means = [abs(fv.mean_dev) for (_, ch), fv in runs.items() if ch == "depolarizing"]
    if min(amp_means) > 2.0 * max(dep_means):
        mean_threshold = 0.5 * (max(dep_means) + min(amp_means))
    else:
        mean_threshold = DEFAULT_CONFIG.mean_threshold

    ref = {ch: runs[("variant-A", ch)] for ch in CHANNEL_LABELS}
    p = STOCK_PARAMETER_GRID["depolarizing"]
    gamma = STOCK_PARAMETER_GRID["amplitude_damping"]
    lam = STOCK_PARAMETER_GRID["phase_damping"]

    depolarizing_scale = abs(ref["depolarizing"].mean_dev) / p
    amp = ref["amplitude_damping"]
    amp_denominator = 2.0 * gamma - amp.variance_pattern / DEFAULT_CONFIG.variance_pattern_scale
    amplitude_scale = (
        abs(amp.mean_dev) / amp_denominator
        if amp_denominator > 0.0
        else DEFAULT_CONFIG.amplitude_scale
    )
    phase_scale = lam / (1.0 - ref["phase_damping"].sparsity)

    return AnalysisConfig(
        sparsity_threshold=sparsity_threshold,
        mean_threshold=mean_threshold,
        depolarizing_scale=depolarizing_scale,
        amplitude_scale=amplitude_scale,
        phase_scale=phase_scale,
        variance_pattern_scale=DEFAULT_CONFIG.variance_pattern_scale,
        provenance=(
            "calibrated from exact-mode sweeps of builtin variants at the "
            "stock parameter grid"
        ),
    )


def save_config(config: AnalysisConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(asdict(config), fh, indent=2)
        fh.write("\n")


def load_config(path: str) -> AnalysisConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read analysis config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"analysis config {path} is not valid JSON: {exc}") from exc
    known = {f for f in AnalysisConfig.__dataclass_fields__}
    unknown = set(doc) - known
    if unknown:
        raise InvalidInputError(f"analysis config has unknown fields: {sorted(unknown)}")
    try:
        return AnalysisConfig(**doc)
    except TypeError as exc:
        raise InvalidInputError(f"analysis config {path} is malformed: {exc}") from exc
