"""The reference suite: which states get prepared and what gets measured.

The stock suite (``suite_v1``) fixes 9 two-qubit preparation circuits and
all 15 non-identity two-qubit Pauli observables, in a stable order, so that
fingerprints taken on different backends line up cell for cell:

states
    |00>, |01>, |10>, |11>, |+0>, |0+>, |++>, |i0>  (|i> = S.H|0>),
    and the Bell state prepared by {h 0; cx 0 1}.
observables
    XI, YI, ZI, IX, IY, IZ, XX, XY, XZ, YX, YY, YZ, ZX, ZY, ZZ.

Suites can also be loaded from JSON files of the shape::

    {"version": "...",
     "states": [{"id": "bell", "gates": [["h", 0], ["cx", 0, 1]]}, ...],
     "observables": ["XI", ...]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError
from .qlinalg import (
    GATE_VOCABULARY,
    DensityMatrix,
    gate_matrix,
    pure_state_density,
    validate_pauli_label,
)

SUITE_VERSION = "suite_v1"

DEFAULT_OBSERVABLES = (
    "XI", "YI", "ZI",
    "IX", "IY", "IZ",
    "XX", "XY", "XZ",
    "YX", "YY", "YZ",
    "ZX", "ZY", "ZZ",
)

Gate = tuple  # ("h", 0) or ("cx", 0, 1)


@dataclass(frozen=True)
class PrepCircuit:
    """A short gate list preparing one reference state from |00...0>."""

    state_id: str
    gates: tuple = ()
    num_qubits: int = 2

    def __post_init__(self):
        if not self.state_id:
            raise InvalidInputError("state_id must be non-empty")
        gates = []
        for g in self.gates:
            g = tuple(g)
            if not g or g[0] not in GATE_VOCABULARY:
                raise InvalidInputError(f"unknown gate in circuit {self.state_id!r}: {g!r}")
            name, qubits = g[0], g[1:]
            expected = 2 if name == "cx" else 1
            if len(qubits) != expected:
                raise InvalidInputError(
                    f"gate {name!r} takes {expected} qubit(s), got {qubits!r}"
                )
            for q in qubits:
                if not isinstance(q, int) or not 0 <= q < self.num_qubits:
                    raise InvalidInputError(
                        f"qubit index {q!r} out of range in circuit {self.state_id!r}"
                    )
            gates.append((name, *qubits))
        object.__setattr__(self, "gates", tuple(gates))


def prepare_state(circuit: PrepCircuit) -> DensityMatrix:
    """Run the circuit on |0...0> and return the pure density matrix."""
    dim = 2**circuit.num_qubits
    psi = np.zeros(dim, dtype=complex)
    psi[0] = 1.0
    for gate in circuit.gates:
        u = gate_matrix(gate[0], gate[1:], circuit.num_qubits)
        psi = u @ psi
    return pure_state_density(psi, circuit.num_qubits)


@dataclass(frozen=True)
class ReferenceSuite:
    version: str
    states: tuple = field(default=())
    observables: tuple = field(default=())

    def __post_init__(self):
        if not self.version:
            raise InvalidInputError("suite version must be non-empty")
        states = tuple(self.states)
        if not states:
            raise InvalidInputError("suite needs at least one state")
        ids = [c.state_id for c in states]
        if len(set(ids)) != len(ids):
            raise InvalidInputError("duplicate state ids in suite")
        num_qubits = {c.num_qubits for c in states}
        if len(num_qubits) != 1:
            raise InvalidInputError("all suite states must use the same qubit count")
        n = num_qubits.pop()
        observables = tuple(self.observables)
        if not observables:
            raise InvalidInputError("suite needs at least one observable")
        for label in observables:
            validate_pauli_label(label, n)
            if set(label) == {"I"}:
                raise InvalidInputError("the all-identity observable is not measurable")
        if len(set(observables)) != len(observables):
            raise InvalidInputError("duplicate observables in suite")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "observables", observables)

    @property
    def num_qubits(self) -> int:
        return self.states[0].num_qubits

    @property
    def num_states(self) -> int:
        return len(self.states)

    @property
    def num_observables(self) -> int:
        return len(self.observables)

    def state_ids(self) -> tuple:
        return tuple(c.state_id for c in self.states)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "states": [
                {"id": c.state_id, "gates": [list(g) for g in c.gates]}
                for c in self.states
            ],
            "observables": list(self.observables),
        }

    def same_layout(self, other: "ReferenceSuite") -> bool:
        return (
            self.version == other.version
            and self.state_ids() == other.state_ids()
            and self.observables == other.observables
        )


def default_states() -> tuple:
    return (
        PrepCircuit("00", ()),
        PrepCircuit("01", (("x", 1),)),
        PrepCircuit("10", (("x", 0),)),
        PrepCircuit("11", (("x", 0), ("x", 1))),
        PrepCircuit("plus0", (("h", 0),)),
        PrepCircuit("0plus", (("h", 1),)),
        PrepCircuit("plusplus", (("h", 0), ("h", 1))),
        PrepCircuit("i0", (("h", 0), ("s", 0))),
        PrepCircuit("bell_phi_plus", (("h", 0), ("cx", 0, 1))),
    )


def default_suite() -> ReferenceSuite:
    return ReferenceSuite(SUITE_VERSION, default_states(), DEFAULT_OBSERVABLES)


def suite_from_dict(doc: dict) -> ReferenceSuite:
    if not isinstance(doc, dict):
        raise InvalidInputError("suite document must be a JSON object")
    version = doc.get("version", SUITE_VERSION)
    raw_states = doc.get("states")
    raw_observables = doc.get("observables")
    if not isinstance(raw_states, list) or not isinstance(raw_observables, list):
        raise InvalidInputError("suite document needs 'states' and 'observables' lists")
    states = []
    for entry in raw_states:
        if not isinstance(entry, dict) or "id" not in entry:
            raise InvalidInputError(f"malformed state entry: {entry!r}")
        gates = entry.get("gates", [])
        if not isinstance(gates, list):
            raise InvalidInputError(f"malformed gate list for state {entry.get('id')!r}")
        states.append(PrepCircuit(str(entry["id"]), tuple(tuple(g) for g in gates)))
    return ReferenceSuite(str(version), tuple(states), tuple(str(o) for o in raw_observables))


def load_suite(path: str) -> ReferenceSuite:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read suite file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"suite file {path} is not valid JSON: {exc}") from exc
    return suite_from_dict(doc)


def save_suite(suite: ReferenceSuite, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(suite.to_dict(), fh, indent=2)
        fh.write("\n")
