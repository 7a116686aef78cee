"""Deterministic standalone SVG scatter plots.

Figure conventions: marker shape encodes the gold homonym group (cycling
circle, cross, triangle, square in order of first appearance), fill color
encodes the cluster label from a fixed 8-color palette, and noise points
(label -1) render hollow gray. Output bytes depend only on the input spec.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .errors import EmptyInput, IoError, LengthMismatch

SHAPES = ("circle", "cross", "triangle", "square")
PALETTE = (
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#bcbd22",
)
NOISE_COLOR = "#999999"
MARKER_SIZE = 4.5


@dataclass(frozen=True)
class PlotSpec:
    coords: tuple[tuple[float, float], ...]
    gold_groups: tuple[int, ...]
    labels: tuple[int, ...]
    title: str
    width: int = 640
    height: int = 480
    meta: dict[str, str] = field(default_factory=dict)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick(v: float) -> str:
    return f"{v:.4g}"


def _marker(shape: str, x: float, y: float, color: str, hollow: bool) -> str:
    s = MARKER_SIZE
    stroke = NOISE_COLOR if hollow else "#333333"
    fill = "none" if hollow else color
    if shape == "circle":
        return (
            f'<circle class="pt" cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(s)}" '
            f'fill="{fill}" stroke="{stroke}" stroke-width="1"/>'
        )
    if shape == "cross":
        line_color = NOISE_COLOR if hollow else color
        return (
            f'<path class="pt" d="M {_fmt(x - s)} {_fmt(y - s)} L {_fmt(x + s)} {_fmt(y + s)} '
            f'M {_fmt(x - s)} {_fmt(y + s)} L {_fmt(x + s)} {_fmt(y - s)}" '
            f'stroke="{line_color}" stroke-width="2" fill="none"/>'
        )
    if shape == "triangle":
        points = (
            f"{_fmt(x)},{_fmt(y - s - 1)} {_fmt(x - s)},{_fmt(y + s)} {_fmt(x + s)},{_fmt(y + s)}"
        )
        return (
            f'<polygon class="pt" points="{points}" '
            f'fill="{fill}" stroke="{stroke}" stroke-width="1"/>'
        )
    if shape == "square":
        return (
            f'<rect class="pt" x="{_fmt(x - s)}" y="{_fmt(y - s)}" width="{_fmt(2 * s)}" '
            f'height="{_fmt(2 * s)}" fill="{fill}" stroke="{stroke}" stroke-width="1"/>'
        )
    raise ValueError(f"unknown shape {shape!r}")


def render_scatter(spec: PlotSpec) -> str:
    """Render the spec to SVG text; identical specs give identical strings."""
    n = len(spec.coords)
    if n == 0:
        raise EmptyInput("no points to plot")
    if not (len(spec.gold_groups) == len(spec.labels) == n):
        raise LengthMismatch(
            f"coords/gold_groups/labels lengths differ: {n}/{len(spec.gold_groups)}/{len(spec.labels)}"
        )

    # shape per gold group, by order of first appearance
    group_shape: dict[int, str] = {}
    for g in spec.gold_groups:
        if g not in group_shape:
            group_shape[g] = SHAPES[len(group_shape) % len(SHAPES)]

    xs = [c[0] for c in spec.coords]
    ys = [c[1] for c in spec.coords]
    xmin, xmax, ymin, ymax = min(xs), max(xs), min(ys), max(ys)
    xspan = (xmax - xmin) or 1.0
    yspan = (ymax - ymin) or 1.0
    xmin, xmax = xmin - 0.05 * xspan, xmax + 0.05 * xspan
    ymin, ymax = ymin - 0.05 * yspan, ymax + 0.05 * yspan

    margin_left, margin_right, margin_top, margin_bottom = 55, 150, 35, 45
    plot_w = spec.width - margin_left - margin_right
    plot_h = spec.height - margin_top - margin_bottom

    def sx(x: float) -> float:
        return margin_left + (x - xmin) / (xmax - xmin) * plot_w

    def sy(y: float) -> float:
        # SVG y grows downward
        return margin_top + (ymax - y) / (ymax - ymin) * plot_h

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}">',
    ]
    if spec.meta:
        desc = " ".join(f"{k}={v}" for k, v in sorted(spec.meta.items()))
        parts.append(f"<desc>{escape(desc)}</desc>")
    parts.append(f'<rect width="{spec.width}" height="{spec.height}" fill="white"/>')
    parts.append(
        f'<text x="{spec.width // 2}" y="22" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{escape(spec.title)}</text>'
    )

    # frame and ticks (min / mid / max per axis)
    parts.append(
        f'<rect x="{margin_left}" y="{margin_top}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#333333"/>'
    )
    for frac in (0.0, 0.5, 1.0):
        xv = xmin + frac * (xmax - xmin)
        yv = ymin + frac * (ymax - ymin)
        px, py = sx(xv), sy(yv)
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{margin_top + plot_h}" x2="{_fmt(px)}" '
            f'y2="{margin_top + plot_h + 5}" stroke="#333333"/>'
        )
        parts.append(
            f'<text x="{_fmt(px)}" y="{margin_top + plot_h + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{_tick(xv)}</text>'
        )
        parts.append(
            f'<line x1="{margin_left - 5}" y1="{_fmt(py)}" x2="{margin_left}" '
            f'y2="{_fmt(py)}" stroke="#333333"/>'
        )
        parts.append(
            f'<text x="{margin_left - 8}" y="{_fmt(py + 3)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{_tick(yv)}</text>'
        )

    for (x, y), group, label in zip(spec.coords, spec.gold_groups, spec.labels):
        hollow = label == -1
        color = NOISE_COLOR if hollow else PALETTE[label % len(PALETTE)]
        parts.append(_marker(group_shape[group], sx(x), sy(y), color, hollow))

    # legend: gold-group shapes, then cluster-label colors
    lx = spec.width - margin_right + 15
    ly = margin_top + 10
    parts.append(
        f'<text x="{lx}" y="{ly}" font-family="sans-serif" font-size="11" '
        f'font-weight="bold">gold group</text>'
    )
    ly += 16
    for group, shape in group_shape.items():
        parts.append(_marker(shape, lx + 6, ly - 3, "#333333", False).replace('class="pt"', 'class="legend"'))
        parts.append(
            f'<text x="{lx + 18}" y="{ly}" font-family="sans-serif" font-size="11">{group}</text>'
        )
        ly += 16
    ly += 8
    parts.append(
        f'<text x="{lx}" y="{ly}" font-family="sans-serif" font-size="11" '
        f'font-weight="bold">cluster</text>'
    )
    ly += 16
    for label in dict.fromkeys(spec.labels):
        hollow = label == -1
        color = NOISE_COLOR if hollow else PALETTE[label % len(PALETTE)]
        parts.append(
            f'<rect x="{lx}" y="{ly - 9}" width="12" height="12" '
            f'fill="{"none" if hollow else color}" stroke="{NOISE_COLOR if hollow else "#333333"}"/>'
        )
        name = "noise" if label == -1 else str(label)
        parts.append(
            f'<text x="{lx + 18}" y="{ly}" font-family="sans-serif" font-size="11">{name}</text>'
        )
        ly += 16

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def scatter_svg(spec: PlotSpec, path: str) -> None:
    """Render and write a standalone SVG; byte-deterministic per spec."""
    text = render_scatter(spec)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
