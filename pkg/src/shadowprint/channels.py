"""Single-qubit Kraus channels and their application to density matrices.

Depolarizing noise ships in two conventions because simulators in the wild
genuinely disagree on what "depolarizing(p)" means:

``identity_mix``
    rho -> (1 - p) rho + p I/2, i.e. Kraus weights
    {1 - 3p/4 on I, p/4 on each of X, Y, Z}.  On |0><0| this leaves
    <Z> = 1 - p.

``pauli_mix``
    rho -> (1 - p) rho + (p/3)(X rho X + Y rho Y + Z rho Z).  On |0><0|
    this leaves <Z> = 1 - 4p/3.

The two agree only at p = 0; the gap of p/3 in <Z> is one of the
cross-variant effects the fingerprinting pipeline is designed to surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .qlinalg import (
    DensityMatrix,
    as_complex_matrix,
    conjugate_transpose,
    embed_single_qubit,
    pauli_matrix,
)

CHANNEL_NAMES = ("depolarizing", "amplitude_damping", "phase_damping", "identity")
DEPOLARIZING_VARIANTS = ("identity_mix", "pauli_mix")

CPTP_TOL = 1e-12


@dataclass(frozen=True)
class KrausChannel:
    """A named single-qubit channel given by its Kraus operators.

    ``variant`` records the convention used to build a depolarizing
    channel; for the other channels it is the string ``"standard"``.
    Completeness (sum K^dag K = I) is the constructors' responsibility and
    is checked explicitly by :func:`verify_cptp`, which must stay usable on
    hand-built, possibly broken, operator sets.
    """

    name: str
    parameter: float
    kraus_ops: tuple = field(repr=False)
    variant: str = "standard"

    def __post_init__(self):
        ops = tuple(as_complex_matrix(k) for k in self.kraus_ops)
        if not ops:
            raise InvalidInputError("a channel needs at least one Kraus operator")
        for k in ops:
            if k.shape != (2, 2):
                raise InvalidInputError(f"Kraus operators must be 2x2, got {k.shape}")
        object.__setattr__(self, "kraus_ops", ops)


def _check_parameter(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value) or not 0.0 <= value <= 1.0:
        raise InvalidInputError(f"{name} parameter must lie in [0, 1], got {value!r}")
    return value


def make_identity() -> KrausChannel:
    return KrausChannel("identity", 0.0, (pauli_matrix("I"),))


def make_depolarizing(p: float, variant: str = "identity_mix") -> KrausChannel:
    p = _check_parameter(p, "depolarizing")
    if variant == "identity_mix":
        weights = (1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p)
    elif variant == "pauli_mix":
        weights = (1.0 - p, p / 3.0, p / 3.0, p / 3.0)
    else:
        raise InvalidInputError(
            f"unknown depolarizing variant {variant!r}; expected one of {DEPOLARIZING_VARIANTS}"
        )
    ops = tuple(
        math.sqrt(w) * pauli_matrix(s) for w, s in zip(weights, "IXYZ") if w > 0.0
    )
    return KrausChannel("depolarizing", p, ops, variant)


def make_amplitude_damping(gamma: float) -> KrausChannel:
    """Relaxation toward |0>: K0 = [[1,0],[0,sqrt(1-g)]], K1 = [[0,sqrt(g)],[0,0]]."""
    gamma = _check_parameter(gamma, "amplitude_damping")
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=complex)
    k1 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return KrausChannel("amplitude_damping", gamma, (k0, k1))


def make_phase_damping(lam: float) -> KrausChannel:
    """Pure dephasing: K0 = [[1,0],[0,sqrt(1-l)]], K1 = [[0,0],[0,sqrt(l)]].

    Computational basis states are exact fixed points; off-diagonal
    coherences shrink by sqrt(1 - l).
    """
    lam = _check_parameter(lam, "phase_damping")
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - lam)]], dtype=complex)
    k1 = np.array([[0.0, 0.0], [0.0, math.sqrt(lam)]], dtype=complex)
    return KrausChannel("phase_damping", lam, (k0, k1))


def make_channel(name: str, parameter: float, depolarizing_variant: str = "identity_mix") -> KrausChannel:
    """Uniform constructor used by backends and the CLI."""
    if name == "identity":
        if parameter != 0.0:
            raise InvalidInputError("the identity channel takes no parameter; pass 0")
        return make_identity()
    if name == "depolarizing":
        return make_depolarizing(parameter, depolarizing_variant)
    if name == "amplitude_damping":
        return make_amplitude_damping(parameter)
    if name == "phase_damping":
        return make_phase_damping(parameter)
    raise InvalidInputError(f"unknown channel {name!r}; expected one of {CHANNEL_NAMES}")


def verify_cptp(channel: KrausChannel) -> tuple[bool, float]:
    """Check the completeness relation; returns (ok, residual).

    The residual is ``max|sum_k K^dag K - I|``; ok means residual <= 1e-12.
    """
    acc = np.zeros((2, 2), dtype=complex)
    for k in channel.kraus_ops:
        acc += conjugate_transpose(k) @ k
    residual = float(np.max(np.abs(acc - np.eye(2))))
    return residual <= CPTP_TOL, residual


def apply_channel(rho: DensityMatrix, channel: KrausChannel, qubit: int) -> DensityMatrix:
    """Apply a single-qubit channel to one qubit of a density matrix."""
    if not 0 <= qubit < rho.num_qubits:
        raise InvalidInputError(
            f"qubit {qubit} out of range for {rho.num_qubits}-qubit state"
        )
    out = np.zeros_like(rho.matrix)
    for k in channel.kraus_ops:
        full = embed_single_qubit(k, qubit, rho.num_qubits)
        out += full @ rho.matrix @ conjugate_transpose(full)
    return DensityMatrix(rho.num_qubits, out)
