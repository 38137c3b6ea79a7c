"""Deterministic SVG heatmaps for fingerprint and difference matrices.

The renderer is deliberately hand-rolled: every cell is one ``<rect>``,
labels are plain ``<text>`` elements, and all numbers are formatted with
fixed precision, so rendering the same matrix twice produces identical
bytes on any machine.

Color scale: diverging and symmetric about zero with three stops,
``#2166ac`` (blue) at -vmax, ``#ffffff`` (white) at zero and ``#b2182b``
(red) at +vmax, interpolated linearly per RGB component.  ``vmax`` is
max(|matrix|) rounded up to one significant digit; an all-zero matrix
renders every cell white with a zero-width scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .errors import InvalidInputError

NEGATIVE_STOP = (0x21, 0x66, 0xAC)
NEUTRAL_STOP = (0xFF, 0xFF, 0xFF)
POSITIVE_STOP = (0xB2, 0x18, 0x2B)

CELL_W = 34
CELL_H = 22
LEFT_MARGIN = 96
TOP_MARGIN = 46
LEGEND_H = 54
FONT = "ui-monospace, Menlo, Consolas, monospace"


@dataclass(frozen=True)
class HeatmapSpec:
    matrix: np.ndarray
    row_labels: tuple
    col_labels: tuple
    title: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.size == 0:
            raise InvalidInputError("heatmap needs a non-empty 2-D matrix")
        if not np.all(np.isfinite(m)):
            raise InvalidInputError("heatmap matrix has non-finite entries")
        if len(self.row_labels) != m.shape[0] or len(self.col_labels) != m.shape[1]:
            raise InvalidInputError("heatmap labels do not match the matrix shape")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "row_labels", tuple(str(r) for r in self.row_labels))
        object.__setattr__(self, "col_labels", tuple(str(c) for c in self.col_labels))


def ceil_to_one_significant(x: float) -> float:
    """0.137 -> 0.2, 0.62 -> 0.7, 1.0 -> 1.0; 0 stays 0."""
    if x < 0:
        raise InvalidInputError("scale endpoint must come from a magnitude")
    if x == 0.0:
        return 0.0
    exponent = math.floor(math.log10(x))
    mantissa = x / 10.0**exponent
    # Tolerate representation error so exact one-digit values do not bump up.
    return math.ceil(mantissa - 1e-9) * 10.0**exponent


def _blend(t: float, a: tuple, b: tuple) -> str:
    rgb = tuple(round(a[i] + (b[i] - a[i]) * t) for i in range(3))
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def diverging_color(value: float, vmax: float) -> str:
    """Linear two-sided interpolation between the three documented stops."""
    if vmax == 0.0:
        return _blend(0.0, NEUTRAL_STOP, NEUTRAL_STOP)
    t = max(-1.0, min(1.0, value / vmax))
    if t < 0.0:
        return _blend(-t, NEUTRAL_STOP, NEGATIVE_STOP)
    return _blend(t, NEUTRAL_STOP, POSITIVE_STOP)


def _fmt(x: float) -> str:
    return format(float(x), ".6g")


def render_heatmap_svg(spec: HeatmapSpec) -> str:
    m = spec.matrix
    rows, cols = m.shape
    vmax = ceil_to_one_significant(float(np.max(np.abs(m))))
    width = LEFT_MARGIN + cols * CELL_W + 24
    height = TOP_MARGIN + rows * CELL_H + LEGEND_H + 24

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    )
    out.append(
        "<defs><linearGradient id=\"scale\" x1=\"0\" y1=\"0\" x2=\"1\" y2=\"0\">"
        f'<stop offset="0" stop-color="{_blend(1.0, NEUTRAL_STOP, NEGATIVE_STOP)}"/>'
        f'<stop offset="0.5" stop-color="{_blend(0.0, NEUTRAL_STOP, NEUTRAL_STOP)}"/>'
        f'<stop offset="1" stop-color="{_blend(1.0, NEUTRAL_STOP, POSITIVE_STOP)}"/>'
        "</linearGradient></defs>"
    )
    out.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>')
    if spec.title:
        out.append(
            f'<text x="{LEFT_MARGIN}" y="18" font-family="{FONT}" font-size="13" '
            f'fill="#222222">{escape(spec.title)}</text>'
        )
    for j, label in enumerate(spec.col_labels):
        x = LEFT_MARGIN + j * CELL_W + CELL_W // 2
        out.append(
            f'<text x="{x}" y="{TOP_MARGIN - 8}" font-family="{FONT}" font-size="11" '
            f'fill="#222222" text-anchor="middle" class="col-label">{escape(label)}</text>'
        )
    for i, label in enumerate(spec.row_labels):
        y = TOP_MARGIN + i * CELL_H + CELL_H // 2 + 4
        out.append(
            f'<text x="{LEFT_MARGIN - 8}" y="{y}" font-family="{FONT}" font-size="11" '
            f'fill="#222222" text-anchor="end" class="row-label">{escape(label)}</text>'
        )
    for i in range(rows):
        for j in range(cols):
            x = LEFT_MARGIN + j * CELL_W
            y = TOP_MARGIN + i * CELL_H
            color = diverging_color(float(m[i, j]), vmax)
            out.append(
                f'<rect x="{x}" y="{y}" width="{CELL_W}" height="{CELL_H}" '
                f'fill="{color}" stroke="#d0d0d0" stroke-width="0.5" class="cell"/>'
            )
    # Scale legend: gradient bar with the symmetric endpoints spelled out.
    ly = TOP_MARGIN + rows * CELL_H + 22
    bar_w = min(cols * CELL_W, 280)
    out.append(
        f'<rect x="{LEFT_MARGIN}" y="{ly}" width="{bar_w}" height="12" '
        f'fill="url(#scale)" stroke="#888888" stroke-width="0.5" class="legend-bar"/>'
    )
    out.append(
        f'<text x="{LEFT_MARGIN}" y="{ly + 26}" font-family="{FONT}" font-size="11" '
        f'fill="#222222" text-anchor="middle">{_fmt(-vmax)}</text>'
    )
    out.append(
        f'<text x="{LEFT_MARGIN + bar_w // 2}" y="{ly + 26}" font-family="{FONT}" '
        f'font-size="11" fill="#222222" text-anchor="middle">0</text>'
    )
    out.append(
        f'<text x="{LEFT_MARGIN + bar_w}" y="{ly + 26}" font-family="{FONT}" '
        f'font-size="11" fill="#222222" text-anchor="middle">{_fmt(vmax)}</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_heatmap(spec: HeatmapSpec, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_heatmap_svg(spec))
