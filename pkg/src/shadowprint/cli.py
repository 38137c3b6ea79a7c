"""Command-line interface.

Subcommands map one-to-one onto the library layers: ``fingerprint`` builds
and writes a deviation matrix, ``compare`` judges two of them against the
shot-noise floor, ``classify``/``estimate`` run the feature rules,
``calibrate`` refits the rule constants from exact builtin sweeps,
``scaling`` prints the measurement-cost model (optionally with a rendered
figure), ``suite`` inspects reference suites, and ``conformance`` drives
the adapter battery.

Exit codes: 0 success, 1 invalid input or usage, 2 backend failure,
3 numerical integrity violation.  ``SHADOWPRINT_SEED`` supplies the master
seed when ``--seed`` is absent; the flag wins when both are given.
"""

from __future__ import annotations

import argparse
import os
import sys
from datetime import datetime, timezone

from . import analysis, conformance, costs
from .backends import BUILTIN_PROFILES, ChannelConfig, bridge_backend, builtin_backend
from .channels import CHANNEL_NAMES
from .errors import BackendError, InvalidInputError, NumericalIntegrityError
from .fingerprint import (
    EXACT_SHOTS,
    build_fingerprint,
    frobenius_distance,
    noise_floor,
    pair_noise_floor,
)
from .fileio import (
    comparison_report_dict,
    read_fingerprint,
    write_comparison_report,
    write_fingerprint,
)
from .heatmap import HeatmapSpec, write_heatmap
from .suite import default_suite, load_suite, save_suite

SEED_ENV_VAR = "SHADOWPRINT_SEED"


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; our contract reserves 2 for backends."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _resolve_seed(flag_value) -> int:
    if flag_value is not None:
        text = str(flag_value)
    else:
        text = os.environ.get(SEED_ENV_VAR, "0")
    try:
        seed = int(text)
    except ValueError:
        raise InvalidInputError(f"seed must be an integer, got {text!r}") from None
    if seed < 0:
        raise InvalidInputError("seed must be non-negative")
    return seed


def _parse_shots(text: str):
    if text == EXACT_SHOTS:
        return EXACT_SHOTS
    try:
        shots = int(text)
    except ValueError:
        raise InvalidInputError(
            f"shots must be a positive integer or 'exact', got {text!r}"
        ) from None
    if shots < 1:
        raise InvalidInputError("shots must be at least 1")
    return shots


def _parse_backend(text: str, channel: ChannelConfig):
    kind, sep, rest = text.partition(":")
    if not sep or not rest:
        raise InvalidInputError(
            f"backend {text!r} is not of the form builtin:<variant> or bridge:<command>"
        )
    if kind == "builtin":
        return builtin_backend(rest, channel)
    if kind == "bridge":
        return bridge_backend(rest, channel)
    raise InvalidInputError(f"unknown backend kind {kind!r} in {text!r}")


def _load_suite_arg(path: str | None):
    return load_suite(path) if path else default_suite()


def _deviation_heatmap(fp, path: str, title: str) -> None:
    spec = HeatmapSpec(
        matrix=fp.deviations,
        row_labels=[c.state_id for c in fp.suite.states],
        col_labels=list(fp.suite.observables),
        title=title,
    )
    write_heatmap(spec, path)


def _print_features(features) -> None:
    print("features:")
    for name in (
        "mean_dev",
        "std_dev",
        "frobenius_norm",
        "sparsity",
        "max_abs_dev",
        "variance_pattern",
    ):
        print(f"  {name:18s} {getattr(features, name):+.6g}")


def _analysis_config(path: str | None) -> analysis.AnalysisConfig:
    return analysis.load_config(path) if path else analysis.DEFAULT_CONFIG


# -- subcommands ---------------------------------------------------------


def cmd_fingerprint(args) -> int:
    seed = _resolve_seed(args.seed)
    shots = _parse_shots(args.shots)
    suite = _load_suite_arg(args.suite)
    channel = ChannelConfig(args.channel, args.parameter)
    backend = _parse_backend(args.backend, channel)
    fp = build_fingerprint(backend, suite, shots, seed)
    if args.stamp:
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        fp = fp.with_metadata(created_at=stamp)

    print(f"backend:     {fp.metadata.backend_id}")
    print(f"channel:     {channel.name} (parameter {channel.parameter:g})")
    print(f"shots:       {shots}    seed: {seed}")
    print(
        f"suite:       {suite.version} "
        f"({suite.num_states} states x {suite.num_observables} observables)"
    )
    print(f"frobenius:   {fp.frobenius_norm():.6f}")
    if isinstance(shots, int):
        print(f"noise floor: {noise_floor(fp.num_entries, shots):.6f} (equal-budget pair)")
    wall = fp.metadata.total_wall_time_ms
    if wall is not None and wall > 0:
        cells = fp.num_entries
        print(f"bridge wall time: {wall:.1f} ms ({1000.0 * cells / wall:.1f} cells/s)")

    write_fingerprint(fp, args.out)
    print(f"wrote {args.out}")
    if args.heatmap:
        title = f"{fp.metadata.backend_id} {channel.name}({channel.parameter:g}) deviations"
        _deviation_heatmap(fp, args.heatmap, title)
        print(f"wrote {args.heatmap}")
    return 0


def cmd_compare(args) -> int:
    a = read_fingerprint(args.fingerprint_a)
    b = read_fingerprint(args.fingerprint_b)
    distance = frobenius_distance(a, b)
    floor = pair_noise_floor(a.num_entries, a.metadata.shots, b.metadata.shots)
    if floor > 0.0:
        ratio = distance / floor
        systematic = ratio > 3.0
    else:
        # Exact-vs-exact: no shot noise, so any distance is systematic.
        ratio = None
        systematic = distance > 0.0

    print(f"a: {a.metadata.backend_id} shots={a.metadata.shots}")
    print(f"b: {b.metadata.backend_id} shots={b.metadata.shots}")
    print(f"frobenius_distance: {distance:.6f}")
    print(f"noise_floor:        {floor:.6f}")
    print(f"ratio:              {'n/a' if ratio is None else f'{ratio:.3f}'}")
    print(f"systematic:         {'yes' if systematic else 'no'}")

    if args.out:
        doc = comparison_report_dict(a, b, distance, floor, ratio, systematic)
        write_comparison_report(doc, args.out)
        print(f"wrote {args.out}")
    if args.heatmap:
        delta = a.deviations - b.deviations
        spec = HeatmapSpec(
            matrix=delta,
            row_labels=[c.state_id for c in a.suite.states],
            col_labels=list(a.suite.observables),
            title=f"{a.metadata.backend_id} minus {b.metadata.backend_id}",
        )
        write_heatmap(spec, args.heatmap)
        print(f"wrote {args.heatmap}")
    return 0


def cmd_classify(args) -> int:
    fp = read_fingerprint(args.fingerprint)
    config = _analysis_config(args.constants)
    diagnosis = analysis.diagnose(fp, config)
    print(f"label: {diagnosis.label}")
    print(f"estimated_parameter: {diagnosis.estimated_parameter:.6g}")
    print(f"constants: {config.provenance}")
    _print_features(diagnosis.features)
    return 0


def cmd_estimate(args) -> int:
    fp = read_fingerprint(args.fingerprint)
    config = _analysis_config(args.constants)
    diagnosis = analysis.diagnose(fp, config)
    print(f"label: {diagnosis.label}")
    print(f"estimated_parameter: {diagnosis.estimated_parameter:.6g}")
    print(f"constants: {config.provenance}")
    return 0


def cmd_calibrate(args) -> int:
    suite = _load_suite_arg(args.suite)
    config = analysis.calibrate(suite)
    for name in (
        "sparsity_threshold",
        "mean_threshold",
        "depolarizing_scale",
        "amplitude_scale",
        "phase_scale",
        "variance_pattern_scale",
    ):
        print(f"{name:24s} {getattr(config, name):.6g}")
    print(f"provenance: {config.provenance}")
    if args.out:
        analysis.save_config(config, args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_scaling(args) -> int:
    reports = costs.scaling_series(args.max_qubits, args.shots)
    header = (
        "num_qubits",
        "fingerprint_measurements",
        "tomography_measurements",
        "ratio",
        "reference_ratio",
    )
    rows = []
    for report in reports:
        ref = costs.reference_ratio(report)
        rows.append(
            (
                str(report.num_qubits),
                str(report.fingerprint_measurements),
                str(report.tomography_measurements),
                f"{report.ratio:.2f}",
                "" if ref is None else f"{ref:.2f}",
            )
        )
    if args.format == "csv":
        print(",".join(header))
        for row in rows:
            print(",".join(row))
    else:
        widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
        print("  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip())
        for row in rows:
            print("  ".join(cell.rjust(widths[i]) for i, cell in enumerate(row)).rstrip())
    if any(costs.reference_ratio(r) is not None for r in reports):
        print(
            f"# reference: n={costs.REFERENCE_QUBITS} @ {costs.REFERENCE_SHOTS} shots, "
            f"reported budgets {costs.REFERENCE_SHADOW_MEASUREMENTS:,} vs "
            f"{costs.REFERENCE_TOMOGRAPHY_MEASUREMENTS:.3g}",
            file=sys.stderr,
        )
    if args.plot:
        from .plots import render_scaling_plot

        render_scaling_plot(reports, args.shots, args.plot)
        print(f"wrote {args.plot}", file=sys.stderr)
    return 0


def cmd_suite(args) -> int:
    suite = _load_suite_arg(args.file)
    print(f"version: {suite.version}")
    print(f"qubits: {suite.num_qubits}")
    print(f"states ({suite.num_states}):")
    for circuit in suite.states:
        gates = "; ".join(" ".join(str(x) for x in g) for g in circuit.gates) or "(none)"
        print(f"  {circuit.state_id:14s} {gates}")
    print(f"observables ({suite.num_observables}): {' '.join(suite.observables)}")
    if args.save:
        save_suite(suite, args.save)
        print(f"wrote {args.save}")
    return 0


def cmd_conformance(args) -> int:
    seed = _resolve_seed(args.seed)
    channel = ChannelConfig("identity", 0.0)
    backend = _parse_backend(args.backend, channel)
    if backend.kind != "bridge":
        raise InvalidInputError("conformance runs against bridge backends only")
    suite = _load_suite_arg(args.suite)
    report = conformance.run_conformance(
        backend.bridge_command,
        suite=suite,
        shots=args.shots,
        seed=seed,
        timeout_s=args.timeout,
    )
    print(conformance.format_report(report))
    if not report.passed:
        raise BackendError("adapter failed conformance")
    return 0


# -- wiring ---------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="shadowprint", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add_seed(p):
        p.add_argument(
            "--seed",
            default=None,
            help=f"master seed (default: ${SEED_ENV_VAR} or 0)",
        )

    p = sub.add_parser("fingerprint", help="measure a deviation matrix and write it")
    p.add_argument(
        "--backend",
        required=True,
        help=f"builtin:<{'|'.join(BUILTIN_PROFILES)}> or bridge:<command line>",
    )
    p.add_argument("--channel", default="identity", choices=CHANNEL_NAMES)
    p.add_argument("--parameter", type=float, default=0.0, help="channel strength")
    p.add_argument("--shots", default="500", help="per-cell shot count, or 'exact'")
    add_seed(p)
    p.add_argument("--suite", help="reference suite JSON (default: built-in suite_v1)")
    p.add_argument("--out", required=True, help="fingerprint JSON output path")
    p.add_argument("--heatmap", help="also render the deviation heatmap SVG here")
    p.add_argument(
        "--stamp",
        action="store_true",
        help="record the wall-clock time in created_at (off by default so "
        "identical runs produce identical bytes)",
    )
    p.set_defaults(func=cmd_fingerprint)

    p = sub.add_parser("compare", help="Frobenius distance of two fingerprints vs the noise floor")
    p.add_argument("fingerprint_a")
    p.add_argument("fingerprint_b")
    p.add_argument("--out", help="comparison report JSON output path")
    p.add_argument("--heatmap", help="render the deviation-difference heatmap SVG here")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("classify", help="name the noise channel behind a fingerprint")
    p.add_argument("fingerprint")
    p.add_argument("--constants", help="analysis constants JSON (default: stock)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("estimate", help="estimate the channel parameter behind a fingerprint")
    p.add_argument("fingerprint")
    p.add_argument("--constants", help="analysis constants JSON (default: stock)")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("calibrate", help="refit analysis constants from exact builtin sweeps")
    p.add_argument("--suite", help="reference suite JSON (default: built-in suite_v1)")
    p.add_argument("--out", help="write the fitted constants JSON here")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("scaling", help="measurement-cost model vs full tomography")
    p.add_argument("--max-qubits", type=int, default=8)
    p.add_argument("--shots", type=int, default=500)
    p.add_argument("--format", choices=("csv", "table"), default="csv")
    p.add_argument("--plot", help="render the cost curves to this image file")
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("suite", help="print or re-serialize a reference suite")
    p.add_argument("--file", help="suite JSON to load and validate (default: built-in)")
    p.add_argument("--save", help="write the suite back out here")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("conformance", help="run the adapter conformance battery")
    p.add_argument("--backend", required=True, help="bridge:<command line>")
    p.add_argument("--shots", type=int, default=500)
    add_seed(p)
    p.add_argument("--suite", help="reference suite JSON (default: built-in suite_v1)")
    p.add_argument("--timeout", type=float, default=15.0, help="per-request timeout (s)")
    p.set_defaults(func=cmd_conformance)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return 2
    except NumericalIntegrityError as exc:
        print(f"numerical integrity error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
