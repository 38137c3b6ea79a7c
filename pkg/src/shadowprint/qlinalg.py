"""Dense complex linear algebra for small multi-qubit systems.

Matrices are plain ``numpy.ndarray`` values with ``complex128`` entries in
row-major layout.  One ordering convention is used everywhere in this
package and on the wire:

* character 0 of a label names qubit 0, which is the leftmost (most
  significant) tensor factor;
* a computational basis index therefore reads qubit 0 from its most
  significant bit: for two qubits ``|10>`` is index 2.

So ``pauli_string_matrix("ZI")`` is ``kron(Z, I)`` and the statevector of
``|+0>`` has amplitudes ``(1/sqrt(2), 0, 1/sqrt(2), 0)``.

Everything here is sized for the fingerprinting protocol: systems larger
than ``MAX_QUBITS`` qubits are rejected up front.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

MAX_QUBITS = 3

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = -1e-10

PAULI_SYMBOLS = "IXYZ"

_PAULI = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_SQRT_HALF = 1.0 / np.sqrt(2.0)

_SINGLE_QUBIT_GATES = {
    "h": np.array([[_SQRT_HALF, _SQRT_HALF], [_SQRT_HALF, -_SQRT_HALF]], dtype=complex),
    "x": _PAULI["X"].copy(),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
}

GATE_VOCABULARY = ("h", "x", "s", "sdg", "cx")


def as_complex_matrix(values) -> np.ndarray:
    """Coerce to a square complex128 array, rejecting non-finite entries."""
    m = np.asarray(values, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise InvalidInputError("matrix contains non-finite entries")
    return m


def conjugate_transpose(a: np.ndarray) -> np.ndarray:
    return np.conjugate(a).T


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the qubit-0-leftmost convention."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def pauli_matrix(symbol: str) -> np.ndarray:
    try:
        return _PAULI[symbol].copy()
    except KeyError:
        raise InvalidInputError(f"unknown Pauli symbol {symbol!r}") from None


def validate_pauli_label(label: str, num_qubits: int | None = None) -> str:
    """Check a Pauli string label such as ``"XZ"``; returns it unchanged."""
    if not isinstance(label, str) or len(label) == 0:
        raise InvalidInputError("Pauli label must be a non-empty string")
    if any(c not in PAULI_SYMBOLS for c in label):
        raise InvalidInputError(f"Pauli label {label!r} has symbols outside I/X/Y/Z")
    if num_qubits is not None and len(label) != num_qubits:
        raise InvalidInputError(
            f"Pauli label {label!r} is for {len(label)} qubits, expected {num_qubits}"
        )
    if len(label) > MAX_QUBITS:
        raise InvalidInputError(f"at most {MAX_QUBITS} qubits supported, got {len(label)}")
    return label


def pauli_string_matrix(label: str) -> np.ndarray:
    """Tensor product of single-qubit Paulis, label character 0 leftmost."""
    validate_pauli_label(label)
    m = pauli_matrix(label[0])
    for symbol in label[1:]:
        m = np.kron(m, pauli_matrix(symbol))
    return m


def qubit_bit(basis_index: int, qubit: int, num_qubits: int) -> int:
    """Bit of ``qubit`` in a basis index; qubit 0 is the most significant."""
    return (basis_index >> (num_qubits - 1 - qubit)) & 1


def _check_qubit_count(num_qubits: int) -> int:
    if not isinstance(num_qubits, int) or num_qubits < 1 or num_qubits > MAX_QUBITS:
        raise InvalidInputError(
            f"num_qubits must be an integer in [1, {MAX_QUBITS}], got {num_qubits!r}"
        )
    return num_qubits


def single_qubit_gate(name: str) -> np.ndarray:
    try:
        return _SINGLE_QUBIT_GATES[name].copy()
    except KeyError:
        raise InvalidInputError(f"unknown single-qubit gate {name!r}") from None


def embed_single_qubit(gate: np.ndarray, qubit: int, num_qubits: int) -> np.ndarray:
    """Lift a 2x2 operator onto ``qubit`` of an ``num_qubits`` system."""
    _check_qubit_count(num_qubits)
    if not 0 <= qubit < num_qubits:
        raise InvalidInputError(f"qubit {qubit} out of range for {num_qubits} qubits")
    g = as_complex_matrix(gate)
    if g.shape != (2, 2):
        raise InvalidInputError(f"expected a 2x2 operator, got shape {g.shape}")
    m = np.array([[1.0 + 0.0j]])
    for q in range(num_qubits):
        m = np.kron(m, g if q == qubit else _PAULI["I"])
    return m


def controlled_not_matrix(control: int, target: int, num_qubits: int) -> np.ndarray:
    """Full CNOT as a permutation of basis indices (qubit 0 = MSB)."""
    _check_qubit_count(num_qubits)
    if control == target:
        raise InvalidInputError("cx control and target must differ")
    for q in (control, target):
        if not 0 <= q < num_qubits:
            raise InvalidInputError(f"qubit {q} out of range for {num_qubits} qubits")
    dim = 2**num_qubits
    m = np.zeros((dim, dim), dtype=complex)
    target_mask = 1 << (num_qubits - 1 - target)
    for b in range(dim):
        out = b ^ target_mask if qubit_bit(b, control, num_qubits) else b
        m[out, b] = 1.0
    return m


def gate_matrix(name: str, qubits: tuple[int, ...], num_qubits: int) -> np.ndarray:
    """Full-system unitary for one named gate from the fixed vocabulary."""
    if name == "cx":
        if len(qubits) != 2:
            raise InvalidInputError(f"cx takes 2 qubits, got {qubits!r}")
        return controlled_not_matrix(qubits[0], qubits[1], num_qubits)
    if len(qubits) != 1:
        raise InvalidInputError(f"gate {name!r} takes 1 qubit, got {qubits!r}")
    return embed_single_qubit(single_qubit_gate(name), qubits[0], num_qubits)


@dataclass(frozen=True)
class DensityMatrix:
    """A validated density operator on ``num_qubits`` qubits.

    Construction checks shape, Hermiticity and unit trace to tight
    tolerances.  Positivity is not checked here (an eigendecomposition per
    operation would be wasteful); ``min_eigenvalue`` exists so callers and
    tests can assert it where it matters.
    """

    num_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        _check_qubit_count(self.num_qubits)
        m = as_complex_matrix(self.matrix)
        dim = 2**self.num_qubits
        if m.shape != (dim, dim):
            raise InvalidInputError(
                f"density matrix for {self.num_qubits} qubits must be {dim}x{dim}, got {m.shape}"
            )
        if np.max(np.abs(m - conjugate_transpose(m))) > HERMITIAN_TOL:
            raise InvalidInputError("density matrix is not Hermitian within tolerance")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL or abs(np.trace(m).imag) > TRACE_TOL:
            raise InvalidInputError("density matrix trace differs from 1 beyond tolerance")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return 2**self.num_qubits

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


def pure_state_density(statevector: np.ndarray, num_qubits: int) -> DensityMatrix:
    """Outer product |psi><psi| of a normalized statevector."""
    psi = np.asarray(statevector, dtype=complex).reshape(-1)
    if psi.shape[0] != 2**num_qubits:
        raise InvalidInputError(
            f"statevector length {psi.shape[0]} does not match {num_qubits} qubits"
        )
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > 1e-12:
        raise InvalidInputError(f"statevector norm {norm} differs from 1 beyond tolerance")
    return DensityMatrix(num_qubits, np.outer(psi, np.conjugate(psi)))


def ground_state(num_qubits: int) -> DensityMatrix:
    """|0...0><0...0|."""
    _check_qubit_count(num_qubits)
    dim = 2**num_qubits
    m = np.zeros((dim, dim), dtype=complex)
    m[0, 0] = 1.0
    return DensityMatrix(num_qubits, m)
