"""Fingerprint and report files: canonical JSON with stable bytes.

Files are plain JSON, but they are written by a small canonical emitter
rather than ``json.dump``: keys keep construction order, there is no
platform-dependent whitespace, and every real is rendered with ``%.17g``
(17 significant digits round-trip a double exactly).  Writing a document,
reading it back and writing it again yields identical bytes, which is what
lets fingerprint files serve as regression artifacts.

Matrices are stored as flat row-major arrays next to their dimensions.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import InvalidInputError
from .fingerprint import (
    FORMAT_VERSION,
    FingerprintMatrix,
    FingerprintMetadata,
)
from .suite import suite_from_dict


def format_real(value: float) -> str:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInputError("cannot serialize a non-finite real")
    return format(value, ".17g")


def dumps_canonical(obj, indent: int = 0) -> str:
    """Deterministic JSON: insertion-ordered keys, %.17g reals.

    Lists of plain numbers stay on one line; other containers get
    two-space indentation so the files stay readable in a pager.
    """
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if obj is True or obj is False:
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_real(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [
            f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {dumps_canonical(v, indent + 1)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(parts) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            return "[]"
        if all(isinstance(x, (int, float, np.integer, np.floating)) and not isinstance(x, bool) for x in items):
            return "[" + ", ".join(dumps_canonical(x) for x in items) + "]"
        parts = [f"{inner}{dumps_canonical(x, indent + 1)}" for x in items]
        return "[\n" + ",\n".join(parts) + f"\n{pad}]"
    raise InvalidInputError(f"cannot serialize value of type {type(obj).__name__}")


def write_canonical(doc: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_canonical(doc))
        fh.write("\n")


def _flat(matrix: np.ndarray) -> list:
    return [float(x) for x in np.asarray(matrix, dtype=float).reshape(-1)]


def fingerprint_to_dict(fp: FingerprintMatrix) -> dict:
    meta = fp.metadata
    return {
        "format_version": FORMAT_VERSION,
        "metadata": {
            "backend_id": meta.backend_id,
            "backend_info": meta.backend_info,
            "channel": {"name": meta.channel_name, "parameter": meta.channel_parameter},
            "shots": meta.shots,
            "master_seed": meta.master_seed,
            "suite_version": meta.suite_version,
            "created_at": meta.created_at,
        },
        "suite": fp.suite.to_dict(),
        "num_states": fp.suite.num_states,
        "num_observables": fp.suite.num_observables,
        "ideal": _flat(fp.ideal),
        "observed": _flat(fp.observed),
        "deviations": _flat(fp.deviations),
    }


def write_fingerprint(fp: FingerprintMatrix, path: str) -> None:
    write_canonical(fingerprint_to_dict(fp), path)


def _require(doc: dict, key: str, context: str):
    if key not in doc:
        raise InvalidInputError(f"{context} is missing {key!r}")
    return doc[key]


def fingerprint_from_dict(doc: dict) -> FingerprintMatrix:
    if not isinstance(doc, dict):
        raise InvalidInputError("fingerprint document must be a JSON object")
    version = _require(doc, "format_version", "fingerprint file")
    if version != FORMAT_VERSION:
        raise InvalidInputError(
            f"unsupported fingerprint format {version!r}, expected {FORMAT_VERSION!r}"
        )
    suite = suite_from_dict(_require(doc, "suite", "fingerprint file"))
    k = int(_require(doc, "num_states", "fingerprint file"))
    n = int(_require(doc, "num_observables", "fingerprint file"))
    if (k, n) != (suite.num_states, suite.num_observables):
        raise InvalidInputError("fingerprint dimensions disagree with the embedded suite")
    matrices = {}
    for name in ("ideal", "observed", "deviations"):
        flat = _require(doc, name, "fingerprint file")
        if not isinstance(flat, list) or len(flat) != k * n:
            raise InvalidInputError(f"{name} array must hold {k * n} reals")
        matrices[name] = np.array(flat, dtype=float).reshape(k, n)
    raw_meta = _require(doc, "metadata", "fingerprint file")
    channel = _require(raw_meta, "channel", "fingerprint metadata")
    shots = _require(raw_meta, "shots", "fingerprint metadata")
    if shots != "exact" and (not isinstance(shots, int) or shots < 1):
        raise InvalidInputError(f"metadata shots must be a positive integer or 'exact', got {shots!r}")
    meta = FingerprintMetadata(
        backend_id=str(_require(raw_meta, "backend_id", "fingerprint metadata")),
        channel_name=str(_require(channel, "name", "channel metadata")),
        channel_parameter=float(channel.get("parameter", 0.0)),
        shots=shots,
        master_seed=int(_require(raw_meta, "master_seed", "fingerprint metadata")),
        suite_version=str(_require(raw_meta, "suite_version", "fingerprint metadata")),
        backend_info=dict(raw_meta.get("backend_info", {})),
        created_at=raw_meta.get("created_at"),
    )
    if meta.suite_version != suite.version:
        raise InvalidInputError("metadata suite_version disagrees with the embedded suite")
    return FingerprintMatrix(
        suite, matrices["ideal"], matrices["observed"], matrices["deviations"], meta
    )


def read_fingerprint(path: str) -> FingerprintMatrix:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read fingerprint file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"fingerprint file {path} is not valid JSON: {exc}") from exc
    return fingerprint_from_dict(doc)


def comparison_report_dict(
    a: FingerprintMatrix,
    b: FingerprintMatrix,
    distance: float,
    floor: float,
    ratio: float | None,
    systematic: bool,
) -> dict:
    delta = a.deviations - b.deviations
    return {
        "format_version": "comparison_v1",
        "fingerprint_a": {"backend_id": a.metadata.backend_id, "shots": a.metadata.shots},
        "fingerprint_b": {"backend_id": b.metadata.backend_id, "shots": b.metadata.shots},
        "suite_version": a.suite.version,
        "num_entries": a.num_entries,
        "frobenius_distance": float(distance),
        "noise_floor": float(floor),
        "ratio": None if ratio is None else float(ratio),
        "systematic": systematic,
        "delta": _flat(delta),
    }


def write_comparison_report(doc: dict, path: str) -> None:
    write_canonical(doc, path)
