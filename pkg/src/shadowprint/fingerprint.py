"""Deviation fingerprints and the Frobenius comparison between them.

A fingerprint is the k x n matrix F of observed-minus-ideal expectation
values over a reference suite: row i is a prepared state, column j an
observable.  The ideal side is always the exact noiseless expectation; the
observed side comes from a backend, either with a finite shot budget or in
exact mode (the infinite-shot limit, useful for deterministic analysis).

Two fingerprints on the same suite are compared by Frobenius distance and
judged against ``noise_floor``, the expected distance between two ideal
shot-limited runs that differ only in seed: each cell contributes at most
1/shots of variance per side, so

    noise_floor(num_entries, shots) = sqrt(num_entries * 2 / shots).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .backends import BackendSpec, noisy_prepared_state
from .bridge import BridgeClient, SEED_WIRE_MASK
from .errors import InvalidInputError
from .estimation import (
    ShotPlan,
    derive_cell_seed,
    exact_expectation,
    sample_expectation,
)
from .suite import ReferenceSuite, prepare_state

FORMAT_VERSION = "fingerprint_v1"

EXACT_SHOTS = "exact"
DEVIATION_CONSISTENCY_TOL = 1e-12


@dataclass(frozen=True)
class FingerprintMetadata:
    backend_id: str
    channel_name: str
    channel_parameter: float
    shots: object  # positive int, or the string "exact"
    master_seed: int
    suite_version: str
    backend_info: dict = field(default_factory=dict)
    created_at: str | None = None
    total_wall_time_ms: float | None = None


@dataclass(frozen=True)
class FingerprintMatrix:
    """ideal / observed / deviations stacked with their provenance."""

    suite: ReferenceSuite
    ideal: np.ndarray
    observed: np.ndarray
    deviations: np.ndarray
    metadata: FingerprintMetadata

    def __post_init__(self):
        shape = (self.suite.num_states, self.suite.num_observables)
        for name in ("ideal", "observed", "deviations"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != shape:
                raise InvalidInputError(
                    f"{name} matrix has shape {arr.shape}, suite implies {shape}"
                )
            if not np.all(np.isfinite(arr)):
                raise InvalidInputError(f"{name} matrix has non-finite entries")
            object.__setattr__(self, name, arr)
        if np.max(np.abs(self.deviations)) > 2.0 + 1e-9:
            raise InvalidInputError("deviations exceed the physical bound of 2")
        if np.max(np.abs(self.observed - self.ideal - self.deviations)) > DEVIATION_CONSISTENCY_TOL:
            raise InvalidInputError("deviations are not observed - ideal")

    @property
    def num_entries(self) -> int:
        return self.deviations.size

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.deviations))

    def with_metadata(self, **changes) -> "FingerprintMatrix":
        return FingerprintMatrix(
            self.suite,
            self.ideal,
            self.observed,
            self.deviations,
            replace(self.metadata, **changes),
        )


def ideal_matrix(suite: ReferenceSuite) -> np.ndarray:
    out = np.zeros((suite.num_states, suite.num_observables))
    for i, circuit in enumerate(suite.states):
        rho = prepare_state(circuit)
        for j, label in enumerate(suite.observables):
            out[i, j] = exact_expectation(rho, label)
    return out


def _observed_builtin(backend, suite, shots, master_seed) -> np.ndarray:
    out = np.zeros((suite.num_states, suite.num_observables))
    for i, circuit in enumerate(suite.states):
        rho = noisy_prepared_state(circuit, backend.profile, backend.channel)
        for j, label in enumerate(suite.observables):
            if shots == EXACT_SHOTS:
                out[i, j] = exact_expectation(rho, label)
            else:
                plan = ShotPlan(shots, master_seed)
                seed = derive_cell_seed(master_seed, i, j)
                out[i, j] = sample_expectation(rho, label, plan, seed).value
    return out


def _observed_bridge(backend, suite, shots, master_seed) -> tuple[np.ndarray, dict, float]:
    if shots == EXACT_SHOTS:
        raise InvalidInputError(
            "bridge backends are shot-based; exact mode needs a builtin backend"
        )
    noise = None
    if backend.channel.name != "identity":
        noise = {
            "channel": backend.channel.name,
            "parameter": backend.channel.parameter,
            "qubits": list(range(suite.num_qubits)),
        }
    out = np.zeros((suite.num_states, suite.num_observables))
    wall_ms = 0.0
    with BridgeClient(backend.bridge_command) as client:
        for i, circuit in enumerate(suite.states):
            for j, label in enumerate(suite.observables):
                seed = derive_cell_seed(master_seed, i, j) & SEED_WIRE_MASK
                reply = client.run_cell(circuit.gates, noise, label, shots, seed)
                out[i, j] = reply["expectation"]
                wall_ms += reply["wall_time_ms"]
        info = dict(client.info)
    return out, info, wall_ms


def build_fingerprint(
    backend: BackendSpec,
    suite: ReferenceSuite,
    shots,
    master_seed: int,
) -> FingerprintMatrix:
    """Measure every suite cell on ``backend`` and difference against ideal.

    ``shots`` is a positive integer or the string "exact".  Sampling uses
    one independent seeded stream per cell, so the result is a pure
    function of (backend, suite, shots, master_seed).
    """
    if shots != EXACT_SHOTS and (not isinstance(shots, int) or shots < 1):
        raise InvalidInputError(f"shots must be a positive integer or 'exact', got {shots!r}")
    ideal = ideal_matrix(suite)
    backend_info: dict = {}
    wall_ms = None
    if backend.kind == "builtin":
        observed = _observed_builtin(backend, suite, shots, master_seed)
        profile = backend.profile
        backend_info = {
            "variant": profile.name,
            "depolarizing_variant": profile.depolarizing_variant,
            "application_policy": profile.application_policy,
            "parameter_gain": profile.parameter_gain,
            "effective_parameter": profile.effective_parameter(backend.channel.parameter),
        }
    else:
        observed, backend_info, wall_ms = _observed_bridge(backend, suite, shots, master_seed)
    meta = FingerprintMetadata(
        backend_id=backend.backend_id,
        channel_name=backend.channel.name,
        channel_parameter=backend.channel.parameter,
        shots=shots,
        master_seed=master_seed,
        suite_version=suite.version,
        backend_info=backend_info,
        total_wall_time_ms=wall_ms,
    )
    return FingerprintMatrix(suite, ideal, observed, observed - ideal, meta)


def frobenius_distance(a: FingerprintMatrix, b: FingerprintMatrix) -> float:
    """sqrt of the summed squared per-cell deviation differences."""
    if a.deviations.shape != b.deviations.shape or not a.suite.same_layout(b.suite):
        raise InvalidInputError(
            "fingerprints are not comparable: suite version or layout differs"
        )
    return float(np.linalg.norm(a.deviations - b.deviations))


def noise_floor(num_entries: int, shots: int) -> float:
    """Expected seed-to-seed Frobenius distance at a given shot budget."""
    if not isinstance(num_entries, int) or num_entries < 1:
        raise InvalidInputError("num_entries must be a positive integer")
    if not isinstance(shots, int) or shots < 1:
        raise InvalidInputError("shots must be a positive integer")
    return math.sqrt(num_entries * 2.0 / shots)


def pair_noise_floor(num_entries: int, shots_a, shots_b) -> float:
    """Noise floor for a pair with possibly unequal budgets.

    Each shot-limited side contributes 1/shots of variance per cell; an
    exact side contributes nothing.  Reduces to ``noise_floor`` when both
    budgets are equal integers, and to 0.0 for an exact-vs-exact pair
    (where any nonzero distance is systematic by definition).
    """
    if not isinstance(num_entries, int) or num_entries < 1:
        raise InvalidInputError("num_entries must be a positive integer")
    inverse_sum = 0.0
    for shots in (shots_a, shots_b):
        if shots == EXACT_SHOTS:
            continue
        if not isinstance(shots, int) or shots < 1:
            raise InvalidInputError(
                f"shots must be a positive integer or 'exact', got {shots!r}"
            )
        inverse_sum += 1.0 / shots
    return math.sqrt(num_entries * inverse_sum)
