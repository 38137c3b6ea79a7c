"""Client side of the simulator bridge protocol.

The bridge speaks newline-delimited UTF-8 JSON over a child process's
stdin/stdout.  One request, one response, strictly in order:

    {"id": 1, "op": "hello"}
    {"id": 1, "name": "...", "version": "...", "capabilities": {...}}

    {"id": 2, "op": "run", "circuit": [["h", 0], ["cx", 0, 1]],
     "noise": {"channel": "depolarizing", "parameter": 0.05, "qubits": [0, 1]},
     "observable": "XX", "shots": 500, "seed": 12345}
    {"id": 2, "expectation": 0.984, "shots_used": 500, "wall_time_ms": 0.4}

    {"id": 3, "op": "shutdown"}
    {"id": 3, "ok": true}        (then the adapter exits 0)

Failures come back as {"id": ..., "error": {"code": ..., "message": ...}}.
Seeds are sent as plain JSON integers and therefore capped at 2^53 - 1 so
adapters in double-precision languages see them exactly.  Anything else --
a dead process, a timeout, unparseable output, an id mismatch -- raises
``BackendError``; the adapter's stderr tail is attached for diagnosis.
"""

from __future__ import annotations

import json
import queue
import subprocess
import threading
import time
from collections import deque

from .errors import BackendError, InvalidInputError

DEFAULT_TIMEOUT_S = 30.0
SEED_WIRE_MASK = (1 << 53) - 1

PROTOCOL_OPS = ("hello", "run", "shutdown")


class BridgeClient:
    """Drives one adapter child process; use as a context manager."""

    def __init__(self, command, timeout_s: float = DEFAULT_TIMEOUT_S):
        self.command = tuple(command)
        if not self.command:
            raise InvalidInputError("bridge command is empty")
        self.timeout_s = float(timeout_s)
        self.info: dict = {}
        self._proc = None
        self._lines: queue.Queue = queue.Queue()
        self._stderr_tail: deque = deque(maxlen=40)
        self._next_id = 0

    # -- lifecycle -----------------------------------------------------

    def start(self) -> dict:
        """Spawn the adapter and perform the hello handshake."""
        try:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise BackendError(f"cannot start bridge adapter {self.command}: {exc}") from exc
        threading.Thread(target=self._pump_stdout, daemon=True).start()
        threading.Thread(target=self._pump_stderr, daemon=True).start()
        try:
            reply = self._request({"op": "hello"})
            for key in ("name", "version", "capabilities"):
                if key not in reply:
                    raise BackendError(f"hello response is missing {key!r}: {reply}")
        except BackendError:
            self.shutdown()
            raise
        self.info = {
            "name": reply["name"],
            "version": reply["version"],
            "capabilities": reply["capabilities"],
        }
        return self.info

    def shutdown(self) -> None:
        self.shutdown_and_wait()

    def shutdown_and_wait(self) -> bool:
        """Ask the adapter to exit; True if it obliged with status 0."""
        if self._proc is None:
            return True
        proc, self._proc = self._proc, None
        forced = False
        try:
            if proc.poll() is None:
                try:
                    self._send(proc, {"id": self._take_id(), "op": "shutdown"})
                except BackendError:
                    forced = True
                try:
                    proc.wait(timeout=5.0)
                except subprocess.TimeoutExpired:
                    forced = True
                    proc.kill()
                    proc.wait(timeout=5.0)
        finally:
            for stream in (proc.stdin, proc.stdout, proc.stderr):
                if stream is not None:
                    stream.close()
        return not forced and proc.returncode == 0

    def __enter__(self) -> "BridgeClient":
        self.start()
        return self

    def __exit__(self, *exc_info) -> None:
        self.shutdown()

    # -- protocol ------------------------------------------------------

    def run_cell(self, circuit, noise, observable: str, shots: int, seed: int) -> dict:
        """One run request; returns {expectation, shots_used, wall_time_ms}."""
        if not isinstance(shots, int) or shots < 1:
            raise InvalidInputError("bridge runs need a positive integer shot count")
        payload = {
            "op": "run",
            "circuit": [list(g) for g in circuit],
            "noise": noise,
            "observable": observable,
            "shots": shots,
            "seed": int(seed) & SEED_WIRE_MASK,
        }
        reply = self._request(payload)
        if "expectation" not in reply:
            raise BackendError(f"run response has no expectation: {reply}")
        value = reply["expectation"]
        if not isinstance(value, (int, float)) or not -1.0 <= float(value) <= 1.0:
            raise BackendError(f"bridge expectation {value!r} outside [-1, 1]")
        return {
            "expectation": float(value),
            "shots_used": int(reply.get("shots_used", shots)),
            "wall_time_ms": float(reply.get("wall_time_ms", 0.0)),
        }

    def send_raw(self, line: str) -> None:
        """Write a raw line to the adapter, bypassing JSON encoding.

        Exists for conformance testing (adapters must survive garbage
        input); not part of the normal request path.
        """
        proc = self._proc
        if proc is None:
            raise BackendError("bridge adapter is not running")
        try:
            proc.stdin.write(line.rstrip("\n") + "\n")
            proc.stdin.flush()
        except (OSError, ValueError) as exc:
            raise BackendError(self._death_note(f"write failed: {exc}")) from exc

    # -- internals -----------------------------------------------------

    def _take_id(self) -> int:
        self._next_id += 1
        return self._next_id

    def _pump_stdout(self) -> None:
        proc = self._proc
        try:
            for line in proc.stdout:
                self._lines.put(line)
        except ValueError:
            pass  # stream closed during shutdown
        self._lines.put(None)

    def _pump_stderr(self) -> None:
        proc = self._proc
        try:
            for line in proc.stderr:
                self._stderr_tail.append(line.rstrip("\n"))
        except ValueError:
            pass

    def _send(self, proc, message: dict) -> None:
        try:
            proc.stdin.write(json.dumps(message) + "\n")
            proc.stdin.flush()
        except (OSError, ValueError) as exc:
            raise BackendError(self._death_note(f"write failed: {exc}")) from exc

    def _request(self, payload: dict) -> dict:
        proc = self._proc
        if proc is None:
            raise BackendError("bridge adapter is not running")
        request_id = self._take_id()
        self._send(proc, {"id": request_id, **payload})
        deadline = time.monotonic() + self.timeout_s
        while True:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                self._abort(proc)
                raise BackendError(
                    self._death_note(f"no response within {self.timeout_s:.1f}s")
                )
            try:
                line = self._lines.get(timeout=min(remaining, 0.25))
            except queue.Empty:
                continue
            if line is None:
                raise BackendError(self._death_note("adapter closed its output stream"))
            line = line.strip()
            if not line:
                continue
            try:
                reply = json.loads(line)
            except json.JSONDecodeError as exc:
                raise BackendError(
                    self._death_note(f"unparseable response line {line[:200]!r}")
                ) from exc
            if not isinstance(reply, dict):
                raise BackendError(self._death_note(f"non-object response: {line[:200]!r}"))
            if reply.get("id") != request_id:
                raise BackendError(
                    self._death_note(
                        f"response id {reply.get('id')!r} does not match request {request_id}"
                    )
                )
            if "error" in reply:
                raise BackendError(f"adapter error for request {request_id}: {reply['error']}")
            return reply

    def _abort(self, proc) -> None:
        if proc.poll() is None:
            proc.kill()

    def _death_note(self, reason: str) -> str:
        proc = self._proc
        code = proc.poll() if proc is not None else None
        note = f"bridge adapter {self.command[0]}: {reason}"
        if code is not None:
            note += f" (exit status {code})"
        if self._stderr_tail:
            note += "; stderr tail: " + " | ".join(list(self._stderr_tail)[-5:])
        return note
