"""Expectation backends: the two built-in simulator variants and bridges.

The built-in backends run the same dense simulator but differ on purpose,
standing in for independent platforms whose noise stacks disagree about
what an identically-labelled configuration means:

``builtin:variant-A``
    the literal platform: ``pauli_mix`` depolarizing convention, noise
    applied once per qubit after the full preparation circuit
    (``per_state``), parameters taken at face value.

``builtin:variant-B``
    the divergent platform: ``identity_mix`` convention, noise applied
    after every gate to each qubit that gate touches (``per_gate``), and a
    parameter gain that maps the nominal strength onto a much larger
    effective one (clamped to 1).  The gain is the knob that controls how
    far apart the two platforms sit; the default is sized so the stock
    depolarizing comparison lands well above the statistical noise floor
    while a zero-noise run stays exactly clean.

Both variants are pure functions of (profile, channel, seed): a circuit
with no gates picks up no per-gate noise, which is itself a faithful
platform behaviour (gate-attached error models do exactly this).
"""

from __future__ import annotations

import math
import shlex
from dataclasses import dataclass

from .channels import CHANNEL_NAMES, KrausChannel, apply_channel, make_channel
from .errors import InvalidInputError
from .qlinalg import DensityMatrix, gate_matrix, ground_state
from .suite import PrepCircuit, prepare_state

APPLICATION_POLICIES = ("per_state", "per_gate")


@dataclass(frozen=True)
class VariantProfile:
    """How a built-in platform realizes an abstract channel request."""

    name: str
    depolarizing_variant: str  # identity_mix | pauli_mix
    application_policy: str  # per_state | per_gate
    parameter_gain: float = 1.0

    def __post_init__(self):
        if self.application_policy not in APPLICATION_POLICIES:
            raise InvalidInputError(
                f"unknown application policy {self.application_policy!r}"
            )
        if self.parameter_gain < 0.0:
            raise InvalidInputError("parameter_gain must be non-negative")

    def effective_parameter(self, nominal: float) -> float:
        return min(1.0, nominal * self.parameter_gain)


BUILTIN_PROFILES = {
    "variant-A": VariantProfile("variant-A", "pauli_mix", "per_state", 1.0),
    "variant-B": VariantProfile("variant-B", "identity_mix", "per_gate", 12.0),
}


@dataclass(frozen=True)
class ChannelConfig:
    """Abstract noise request: a channel name and its nominal parameter."""

    name: str
    parameter: float = 0.0

    def __post_init__(self):
        if self.name not in CHANNEL_NAMES:
            raise InvalidInputError(
                f"unknown channel {self.name!r}; expected one of {CHANNEL_NAMES}"
            )
        if not math.isfinite(self.parameter) or not 0.0 <= self.parameter <= 1.0:
            raise InvalidInputError(
                f"channel parameter must lie in [0, 1], got {self.parameter!r}"
            )


@dataclass(frozen=True)
class BackendSpec:
    """Where observed expectations come from.

    ``kind`` is "builtin" (profile set, bridge_command empty) or "bridge"
    (the opposite).  ``backend_id`` is the user-facing name recorded in
    fingerprint metadata, e.g. ``builtin:variant-A`` or ``bridge:node x.js``.
    """

    kind: str
    channel: ChannelConfig
    profile: VariantProfile | None = None
    bridge_command: tuple = ()
    backend_id: str = ""

    def __post_init__(self):
        if self.kind == "builtin":
            if self.profile is None:
                raise InvalidInputError("builtin backend needs a variant profile")
        elif self.kind == "bridge":
            if not self.bridge_command:
                raise InvalidInputError("bridge backend needs a command line")
        else:
            raise InvalidInputError(f"unknown backend kind {self.kind!r}")
        if not self.backend_id:
            ident = (
                f"builtin:{self.profile.name}"
                if self.kind == "builtin"
                else f"bridge:{' '.join(self.bridge_command)}"
            )
            object.__setattr__(self, "backend_id", ident)


def builtin_backend(variant: str, channel: ChannelConfig) -> BackendSpec:
    try:
        profile = BUILTIN_PROFILES[variant]
    except KeyError:
        raise InvalidInputError(
            f"unknown builtin variant {variant!r}; expected one of "
            f"{tuple(BUILTIN_PROFILES)}"
        ) from None
    return BackendSpec("builtin", channel, profile=profile)


def bridge_backend(command_line: str, channel: ChannelConfig) -> BackendSpec:
    command = tuple(shlex.split(command_line))
    if not command:
        raise InvalidInputError("bridge command line is empty")
    return BackendSpec("bridge", channel, bridge_command=command)


def realize_channel(profile: VariantProfile, config: ChannelConfig) -> KrausChannel:
    """Instantiate the abstract request under the profile's conventions."""
    return make_channel(
        config.name,
        profile.effective_parameter(config.parameter),
        profile.depolarizing_variant,
    )


def noisy_prepared_state(
    circuit: PrepCircuit, profile: VariantProfile, config: ChannelConfig
) -> DensityMatrix:
    """Prepare one reference state under the profile's noise placement."""
    channel = realize_channel(profile, config)
    if channel.name == "identity":
        # Identity Kraus application is a no-op; skip it so noiseless runs
        # stay bit-exact regardless of policy.
        return prepare_state(circuit)
    if profile.application_policy == "per_state":
        rho = prepare_state(circuit)
        for q in range(rho.num_qubits):
            rho = apply_channel(rho, channel, q)
        return rho
    rho = ground_state(circuit.num_qubits)
    for gate in circuit.gates:
        u = gate_matrix(gate[0], gate[1:], circuit.num_qubits)
        rho = DensityMatrix(circuit.num_qubits, u @ rho.matrix @ u.conj().T)
        for q in sorted(set(gate[1:])):
            rho = apply_channel(rho, channel, q)
    return rho
