"""SVG rendering of a localized network.

One figure shows the ground-truth layout: cluster-colored node circles,
yellow radio links, and one displacement segment per node and algorithm,
drawn from the true position to the estimated one (blue for the baseline,
red for the cluster-based pipeline). Longer segments mean larger errors.
"""
from __future__ import annotations

from typing import Mapping

from .clustering import ClusterSet
from .localization import _as_position_dict
from .network import Network

CLUSTER_PALETTE = [
    "#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3",
    "#937860", "#da8bc3", "#8c8c8c", "#ccb974", "#64b5cd",
    "#2f4b7c", "#ffa600", "#a05195", "#665191", "#f95d6a",
]
ALGORITHM_COLORS = {"mds_map": "#1f32d6", "cb_mds": "#d62728"}
EDGE_COLOR = "#f5d321"

_CANVAS = 720
_MARGIN = 40
_LEGEND_HEIGHT = 74


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def render_figure(
    net: Network,
    truth,
    estimates: Mapping[str, object],
    clusters: ClusterSet | None = None,
) -> str:
    """Render one trial as a standalone SVG document (returned as a string)."""
    true_pos = _as_position_dict(truth)
    est_maps = {name: _as_position_dict(est) for name, est in estimates.items()}
    for name, est in est_maps.items():
        if est.keys() != true_pos.keys():
            raise ValueError(f"estimate '{name}' does not cover the same nodes as truth")

    xs = [p[0] for p in true_pos.values()]
    ys = [p[1] for p in true_pos.values()]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-9)
    scale = (_CANVAS - 2 * _MARGIN) / span
    height = _CANVAS + _LEGEND_HEIGHT

    def to_px(p):
        return (
            _MARGIN + (p[0] - x0) * scale,
            _MARGIN + (y1 - p[1]) * scale,  # flip y: SVG grows downward
        )

    core_of = clusters.core_of() if clusters is not None else {}
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_CANVAS}" height="{height}" '
        f'viewBox="0 0 {_CANVAS} {height}">',
        f'<rect width="{_CANVAS}" height="{height}" fill="white"/>',
    ]

    parts.append('<g id="edges">')
    for (i, j) in sorted(net.edges):
        ax, ay = to_px(true_pos[i])
        bx, by = to_px(true_pos[j])
        parts.append(
            f'<line x1="{_fmt(ax)}" y1="{_fmt(ay)}" x2="{_fmt(bx)}" y2="{_fmt(by)}" '
            f'stroke="{EDGE_COLOR}" stroke-width="1"/>'
        )
    parts.append("</g>")

    for name in sorted(est_maps):
        color = ALGORITHM_COLORS.get(name, "#555555")
        parts.append(f'<g id="error-{name}">')
        est = est_maps[name]
        for node in sorted(true_pos):
            dx = est[node][0] - true_pos[node][0]
            dy = est[node][1] - true_pos[node][1]
            if dx * dx + dy * dy < 1e-18:  # zero-length segments are invisible; skip
                continue
            ax, ay = to_px(true_pos[node])
            bx, by = to_px(est[node])
            parts.append(
                f'<line x1="{_fmt(ax)}" y1="{_fmt(ay)}" x2="{_fmt(bx)}" y2="{_fmt(by)}" '
                f'stroke="{color}" stroke-width="1.4"/>'
            )
        parts.append("</g>")

    parts.append('<g id="nodes">')
    for node in sorted(true_pos):
        px, py = to_px(true_pos[node])
        color = CLUSTER_PALETTE[core_of[node] % len(CLUSTER_PALETTE)] if core_of else "#8c8c8c"
        parts.append(
            f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="4" fill="{color}" '
            f'stroke="black" stroke-width="0.6"/>'
        )
    parts.append("</g>")

    legend_y = _CANVAS + 6
    entries = [("radio link", EDGE_COLOR)] + [
        (f"true to {name} estimate", ALGORITHM_COLORS.get(name, "#555555"))
        for name in sorted(est_maps)
    ]
    parts.append('<g id="legend" font-family="sans-serif" font-size="13">')
    for row, (label, color) in enumerate(entries):
        ly = legend_y + 18 * row + 10
        parts.append(
            f'<line x1="{_MARGIN}" y1="{ly}" x2="{_MARGIN + 28}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{_MARGIN + 36}" y="{ly + 4}">{label}</text>')
    bar_px = scale  # one unit edge distance
    bar_x = _CANVAS - _MARGIN - bar_px
    bar_y = legend_y + 12
    parts.append(
        f'<line x1="{_fmt(bar_x)}" y1="{bar_y}" x2="{_fmt(bar_x + bar_px)}" y2="{bar_y}" '
        f'stroke="black" stroke-width="2"/>'
    )
    parts.append(f'<text x="{_fmt(bar_x)}" y="{bar_y + 16}">1 r</text>')
    parts.append("</g>")

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
