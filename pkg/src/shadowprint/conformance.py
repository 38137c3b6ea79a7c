"""Conformance checks for bridge adapters.

Runs a fixed battery against an adapter command line: handshake shape,
every gate in the vocabulary, every channel name, agreement of noiseless
expectations with the builtin exact values, structured error responses for
unknown gates/channels, survival of a malformed request line, and a clean
shutdown.  Every request runs under the client timeout, so a hung adapter
fails the battery rather than the harness.

The noiseless-agreement tolerance is statistical: a sampled mean of +-1
eigenvalues at ``shots`` draws sits within 5/sqrt(shots) of the exact
value except with negligible probability.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .bridge import BridgeClient
from .errors import BackendError
from .estimation import derive_cell_seed, exact_expectation
from .qlinalg import GATE_VOCABULARY
from .suite import ReferenceSuite, default_suite, prepare_state

CHANNEL_BATTERY = (
    ("depolarizing", 0.05),
    ("amplitude_damping", 0.10),
    ("phase_damping", 0.08),
    ("identity", 0.0),
)

GATE_BATTERY = {
    "h": (("h", 0),),
    "x": (("x", 0),),
    "s": (("h", 0), ("s", 0)),
    "sdg": (("h", 0), ("sdg", 0)),
    "cx": (("h", 0), ("cx", 0, 1)),
}


@dataclass
class ConformanceReport:
    adapter: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    def record(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append((name, ok, detail))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)


def _expect_error(client: BridgeClient, payload: dict, name: str, report: ConformanceReport) -> None:
    try:
        client.run_cell(**payload)
    except BackendError as exc:
        if "adapter error" in str(exc):
            report.record(name, True, "structured error response")
        else:
            report.record(name, False, f"transport failure instead of error response: {exc}")
    else:
        report.record(name, False, "request was accepted but should have been rejected")


def run_conformance(
    command,
    suite: ReferenceSuite | None = None,
    shots: int = 500,
    seed: int = 0,
    timeout_s: float = 15.0,
) -> ConformanceReport:
    suite = suite or default_suite()
    report = ConformanceReport()
    tolerance = 5.0 / math.sqrt(shots)

    try:
        client = BridgeClient(command, timeout_s=timeout_s)
        client.start()
    except BackendError as exc:
        report.record("handshake", False, str(exc))
        return report

    with client:
        report.adapter = dict(client.info)
        caps = client.info.get("capabilities")
        caps_ok = isinstance(caps, dict) and isinstance(caps.get("gates"), list)
        missing_gates = []
        missing_channels = []
        if caps_ok:
            missing_gates = [g for g in GATE_VOCABULARY if g not in caps["gates"]]
            declared_channels = caps.get("channels", [])
            missing_channels = [
                ch for ch, _ in CHANNEL_BATTERY if ch not in declared_channels
            ]
        detail = ""
        if missing_gates:
            detail += f"gates not declared: {missing_gates} "
        if missing_channels:
            detail += f"channels not declared: {missing_channels}"
        report.record(
            "handshake",
            caps_ok and not missing_gates and not missing_channels,
            detail or f"{client.info.get('name')} {client.info.get('version')}",
        )

        for gate, circuit in GATE_BATTERY.items():
            try:
                reply = client.run_cell(circuit, None, "ZZ", shots, seed)
                report.record(f"gate:{gate}", True, f"<ZZ> = {reply['expectation']:+.4f}")
            except BackendError as exc:
                report.record(f"gate:{gate}", False, str(exc))

        bell = (("h", 0), ("cx", 0, 1))
        for channel, parameter in CHANNEL_BATTERY:
            noise = {"channel": channel, "parameter": parameter, "qubits": [0, 1]}
            try:
                reply = client.run_cell(bell, noise, "ZZ", shots, seed)
                report.record(
                    f"channel:{channel}", True, f"<ZZ> = {reply['expectation']:+.4f}"
                )
            except BackendError as exc:
                report.record(f"channel:{channel}", False, str(exc))

        # Noiseless agreement across the full suite grid.
        worst = 0.0
        worst_cell = ""
        failures = 0
        start = time.monotonic()
        try:
            for i, circuit in enumerate(suite.states):
                rho = prepare_state(circuit)
                for j, label in enumerate(suite.observables):
                    cell_seed = derive_cell_seed(seed, i, j)
                    reply = client.run_cell(circuit.gates, None, label, shots, cell_seed)
                    gap = abs(reply["expectation"] - exact_expectation(rho, label))
                    if gap > worst:
                        worst, worst_cell = gap, f"{circuit.state_id}/{label}"
                    if gap > tolerance:
                        failures += 1
            elapsed = time.monotonic() - start
            report.record(
                "noiseless-agreement",
                failures == 0,
                f"worst |delta| = {worst:.4f} at {worst_cell} "
                f"(tolerance {tolerance:.4f}, {elapsed:.1f}s)",
            )
        except BackendError as exc:
            report.record("noiseless-agreement", False, str(exc))

        _expect_error(
            client,
            dict(circuit=(("bogus", 0),), noise=None, observable="ZZ", shots=shots, seed=seed),
            "error:unknown-gate",
            report,
        )
        _expect_error(
            client,
            dict(
                circuit=bell,
                noise={"channel": "thermal", "parameter": 0.1, "qubits": [0, 1]},
                observable="ZZ",
                shots=shots,
                seed=seed,
            ),
            "error:unknown-channel",
            report,
        )

        # A malformed line must not kill the adapter.
        try:
            client.send_raw("this is not json")
            reply = client.run_cell(bell, None, "ZZ", shots, seed)
            report.record("malformed-line-survival", True, f"<ZZ> = {reply['expectation']:+.4f}")
        except BackendError as exc:
            report.record("malformed-line-survival", False, str(exc))

        exited_clean = client.shutdown_and_wait()
        report.record("shutdown", exited_clean, "exit status 0" if exited_clean else "nonzero or forced exit")
    return report


def format_report(report: ConformanceReport) -> str:
    lines = []
    if report.adapter:
        lines.append(
            f"adapter: {report.adapter.get('name')} {report.adapter.get('version')}"
        )
    for name, ok, detail in report.checks:
        status = "PASS" if ok else "FAIL"
        lines.append(f"{status:4s} {name:26s} {detail}".rstrip())
    lines.append("conformance: " + ("PASS" if report.passed else "FAIL"))
    return "\n".join(lines)
