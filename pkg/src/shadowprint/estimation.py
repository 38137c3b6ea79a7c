"""Expectation estimation: exact traces and seeded finite-shot sampling.

Sampling path, in order:

1. rotate the state into the observable's eigenbasis (X via h, Y via sdg
   then h, Z and I need nothing),
2. read the rotated diagonal as outcome probabilities over bitstrings,
3. draw ``shots`` bitstrings with a counter-based generator (Philox) keyed
   by the cell seed, and average the observable's eigenvalues
   ``prod_(q: label[q] != I) (-1)^{bit_q}``.

Seeding is per cell: ``derive_cell_seed`` mixes (master_seed, i, j) through
SplitMix64 so the estimate for one cell never depends on evaluation order
or on how many other cells were sampled.  Tiny negative diagonal entries
(rounding debris, >= -1e-10) are clamped to zero and the vector is
renormalized; anything more negative is treated as a corrupted state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NumericalIntegrityError
from .qlinalg import (
    DensityMatrix,
    conjugate_transpose,
    embed_single_qubit,
    pauli_string_matrix,
    qubit_bit,
    single_qubit_gate,
    validate_pauli_label,
)

EXPECTATION_IMAG_TOL = 1e-10
PROBABILITY_CLAMP_TOL = -1e-10

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ShotPlan:
    """Per-cell shot count plus the run's master seed."""

    shots: int
    master_seed: int

    def __post_init__(self):
        if not isinstance(self.shots, int) or self.shots < 1:
            raise InvalidInputError(f"shots must be a positive integer, got {self.shots!r}")
        if not isinstance(self.master_seed, int) or self.master_seed < 0:
            raise InvalidInputError(f"master_seed must be a non-negative integer")


@dataclass(frozen=True)
class ExpectationEstimate:
    value: float
    shots_used: int
    standard_error: float


def exact_expectation(rho: DensityMatrix, label: str) -> float:
    """Re tr(rho P); the imaginary part must vanish to 1e-10."""
    validate_pauli_label(label, rho.num_qubits)
    tr = complex(np.trace(rho.matrix @ pauli_string_matrix(label)))
    if abs(tr.imag) > EXPECTATION_IMAG_TOL:
        raise NumericalIntegrityError(
            f"expectation of {label} has imaginary part {tr.imag:.3e}"
        )
    return float(tr.real)


def eigenbasis_rotation(label: str) -> list:
    """Gate list mapping each letter's eigenbasis onto the Z basis.

    Returned in application order: ``Y`` needs sdg then h, ``X`` just h,
    ``Z`` and ``I`` nothing.
    """
    validate_pauli_label(label)
    gates = []
    for q, symbol in enumerate(label):
        if symbol == "X":
            gates.append(("h", q))
        elif symbol == "Y":
            gates.append(("sdg", q))
            gates.append(("h", q))
    return gates


def rotation_matrix(label: str) -> np.ndarray:
    """Full-system unitary R with R P R^dag diagonal (entries +-1)."""
    n = len(validate_pauli_label(label))
    r = np.eye(2**n, dtype=complex)
    for name, qubit in eigenbasis_rotation(label):
        r = embed_single_qubit(single_qubit_gate(name), qubit, n) @ r
    return r


def _splitmix64(z: int) -> int:
    z &= _MASK64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


def derive_cell_seed(master_seed: int, state_index: int, observable_index: int) -> int:
    """64-bit cell seed; distinct cells get distinct seeds.

    mix(mix(master) XOR mix(i * 2^32 + j)) with mix = the SplitMix64
    finalizer, which is a bijection on 64-bit words, so for a fixed master
    seed no two (i, j) pairs collide.
    """
    if state_index < 0 or observable_index < 0:
        raise InvalidInputError("cell indices must be non-negative")
    if observable_index >= 1 << 32:
        raise InvalidInputError("observable index out of range")
    cell_word = ((state_index << 32) | observable_index) & _MASK64
    return _splitmix64(_splitmix64(master_seed & _MASK64) ^ _splitmix64(cell_word))


def _uniform_unit_doubles(seed: int, count: int) -> np.ndarray:
    """Doubles in [0, 1) from raw Philox words: (word >> 11) * 2^-53.

    Raw counter output is used directly (rather than a Generator
    distribution method) so the stream is stable across library versions.
    """
    raw = np.random.Philox(key=seed & _MASK64).random_raw(count)
    return (raw >> np.uint64(11)) * (1.0 / (1 << 53))


def measurement_signs(label: str) -> np.ndarray:
    """Eigenvalue of each rotated-basis bitstring, +-1 per basis index."""
    n = len(label)
    active = [q for q, s in enumerate(label) if s != "I"]
    signs = np.ones(2**n)
    for b in range(2**n):
        parity = sum(qubit_bit(b, q, n) for q in active) & 1
        if parity:
            signs[b] = -1.0
    return signs


def rotated_probabilities(rho: DensityMatrix, label: str) -> np.ndarray:
    """Diagonal of R rho R^dag, clamped and renormalized."""
    r = rotation_matrix(label)
    rotated = r @ rho.matrix @ conjugate_transpose(r)
    probs = np.real(np.diag(rotated)).copy()
    low = float(probs.min())
    if low < PROBABILITY_CLAMP_TOL:
        raise NumericalIntegrityError(
            f"rotated diagonal has probability {low:.3e} below clamp tolerance"
        )
    probs[probs < 0.0] = 0.0
    total = float(probs.sum())
    if total <= 0.0:
        raise NumericalIntegrityError("rotated diagonal sums to zero")
    return probs / total


def sample_expectation(
    rho: DensityMatrix, label: str, plan: ShotPlan, cell_seed: int
) -> ExpectationEstimate:
    """Finite-shot estimate of <P> on ``rho`` under the fixed convention."""
    validate_pauli_label(label, rho.num_qubits)
    if set(label) == {"I"}:
        raise InvalidInputError("the all-identity observable has no measurement basis")
    probs = rotated_probabilities(rho, label)
    signs = measurement_signs(label)
    edges = np.cumsum(probs)
    u = _uniform_unit_doubles(cell_seed, plan.shots)
    outcomes = np.searchsorted(edges, u, side="right")
    np.clip(outcomes, 0, len(probs) - 1, out=outcomes)
    value = float(signs[outcomes].mean())
    spread = max(0.0, 1.0 - value * value)
    return ExpectationEstimate(
        value=value,
        shots_used=plan.shots,
        standard_error=float(np.sqrt(spread / plan.shots)),
    )
