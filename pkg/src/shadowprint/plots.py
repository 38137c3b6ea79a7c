"""Matplotlib figure output for the scaling report.

Kept apart from the SVG heatmaps on purpose: heatmaps are regression
artifacts and must be byte-stable, while this figure is a human-facing
report rendered through matplotlib's Agg backend.
"""

from __future__ import annotations

from .costs import (
    REFERENCE_QUBITS,
    REFERENCE_SHADOW_MEASUREMENTS,
    REFERENCE_TOMOGRAPHY_MEASUREMENTS,
    REFERENCE_SHOTS,
)


def render_scaling_plot(reports, shots: int, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    qubits = [r.num_qubits for r in reports]
    shadow = [r.fingerprint_measurements for r in reports]
    tomography = [r.tomography_measurements for r in reports]

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.semilogy(qubits, tomography, "o-", color="#b2182b", label="full tomography")
    ax.semilogy(qubits, shadow, "s-", color="#2166ac", label="fingerprint suite")
    if shots == REFERENCE_SHOTS and max(qubits) >= REFERENCE_QUBITS:
        ax.scatter(
            [REFERENCE_QUBITS, REFERENCE_QUBITS],
            [REFERENCE_SHADOW_MEASUREMENTS, REFERENCE_TOMOGRAPHY_MEASUREMENTS],
            marker="x",
            s=70,
            color="#333333",
            zorder=5,
            label="reference figures (n=8)",
        )
    ax.set_xlabel("qubits")
    ax.set_ylabel(f"total measurements ({shots} shots per configuration)")
    ax.set_title("Measurement budget scaling")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
