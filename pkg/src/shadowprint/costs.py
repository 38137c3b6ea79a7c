"""Measurement-budget models for the fingerprinting protocol vs tomography.

Full process tomography over n qubits needs 16^n configurations at a fixed
shot budget each.  The fingerprint suite grows as (5n - 1) states times
(12n - 9) observables, which reproduces the stock 9 x 15 suite at n = 2.
Counts are plain Python integers, so 16^n stays exact at any n this CLI
accepts.

Two bundled reference figures accompany the n = 8 row: an externally
reported shadow-style budget of 864,000 measurements and the matching
tomography budget of 2.1e12.  They are printed next to the model values so
the model's ratio can be compared against the reported one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidInputError

MAX_SCALING_QUBITS = 16

REFERENCE_QUBITS = 8
REFERENCE_SHOTS = 500
REFERENCE_SHADOW_MEASUREMENTS = 864_000
REFERENCE_TOMOGRAPHY_MEASUREMENTS = 2.1e12


def _check_args(num_qubits: int, shots: int) -> None:
    if not isinstance(num_qubits, int) or num_qubits < 1:
        raise InvalidInputError("num_qubits must be a positive integer")
    if num_qubits > MAX_SCALING_QUBITS:
        raise InvalidInputError(f"num_qubits capped at {MAX_SCALING_QUBITS} for the cost model")
    if not isinstance(shots, int) or shots < 1:
        raise InvalidInputError("shots must be a positive integer")


def tomography_cost(num_qubits: int, shots: int) -> int:
    """16^n configurations, ``shots`` each."""
    _check_args(num_qubits, shots)
    return 16**num_qubits * shots


def suite_dimensions(num_qubits: int) -> tuple[int, int]:
    """(states, observables) the suite family has at a given width."""
    return 5 * num_qubits - 1, 12 * num_qubits - 9


def fingerprint_cost(num_qubits: int, shots: int) -> int:
    """(5n - 1)(12n - 9) cells, ``shots`` each; 67,500 at n=2, shots=500."""
    _check_args(num_qubits, shots)
    states, observables = suite_dimensions(num_qubits)
    return states * observables * shots


@dataclass(frozen=True)
class CostReport:
    num_qubits: int
    shots: int
    fingerprint_measurements: int
    tomography_measurements: int

    @property
    def ratio(self) -> float:
        return self.tomography_measurements / self.fingerprint_measurements


def cost_report(num_qubits: int, shots: int) -> CostReport:
    return CostReport(
        num_qubits,
        shots,
        fingerprint_cost(num_qubits, shots),
        tomography_cost(num_qubits, shots),
    )


def scaling_series(max_qubits: int, shots: int) -> list:
    _check_args(max_qubits, shots)
    return [cost_report(n, shots) for n in range(1, max_qubits + 1)]


def reference_ratio(report: CostReport) -> float | None:
    """Model tomography cost against the bundled reference shadow budget.

    Only defined on the row the reference figures describe (n=8, 500
    shots); None elsewhere.
    """
    if report.num_qubits == REFERENCE_QUBITS and report.shots == REFERENCE_SHOTS:
        return report.tomography_measurements / REFERENCE_SHADOW_MEASUREMENTS
    return None
