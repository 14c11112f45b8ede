"""Minimal hand-rolled SVG line plots (axes, polylines, legend).

The curves this package emits are simple eigenvalue/diagnostic branches, so
a small deterministic writer beats a plotting dependency: identical inputs
produce byte-identical files.
"""

from __future__ import annotations

import numpy as np

_WIDTH, _HEIGHT = 640, 480
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 64, 24, 36, 48
_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2",
)
_TICKS = 5


def _fmt(x: float) -> str:
    return format(float(x), ".6g")


def svg_line_plot(
    x,
    series: dict[str, np.ndarray],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
) -> str:
    """Render one polyline per named series over the common abscissa `x`."""
    x = np.asarray(x, dtype=float)
    ys = {name: np.asarray(v, dtype=float) for name, v in series.items()}
    finite = np.concatenate([v[np.isfinite(v)] for v in ys.values()])
    x0, x1 = float(x.min()), float(x.max())
    y0, y1 = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def px(v):
        return _MARGIN_L + (v - x0) / (x1 - x0) * plot_w

    def py(v):
        return _MARGIN_T + (y1 - v) / (y1 - y0) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(
            f'<text x="{_WIDTH // 2}" y="22" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>'
        )
    # axes box
    out.append(
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="black" stroke-width="1"/>'
    )
    for i in range(_TICKS + 1):
        xv = x0 + (x1 - x0) * i / _TICKS
        yv = y0 + (y1 - y0) * i / _TICKS
        xp, yp = px(xv), py(yv)
        out.append(
            f'<line x1="{xp:.2f}" y1="{_MARGIN_T + plot_h}" x2="{xp:.2f}" '
            f'y2="{_MARGIN_T + plot_h + 5}" stroke="black"/>'
        )
        out.append(
            f'<text x="{xp:.2f}" y="{_MARGIN_T + plot_h + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_fmt(xv)}</text>'
        )
        out.append(
            f'<line x1="{_MARGIN_L - 5}" y1="{yp:.2f}" x2="{_MARGIN_L}" '
            f'y2="{yp:.2f}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_MARGIN_L - 8}" y="{yp + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_fmt(yv)}</text>'
        )
    if xlabel:
        out.append(
            f'<text x="{_MARGIN_L + plot_w // 2}" y="{_HEIGHT - 12}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="12">{xlabel}</text>'
        )
    if ylabel:
        yc = _MARGIN_T + plot_h // 2
        out.append(
            f'<text x="16" y="{yc}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="12" transform="rotate(-90 16 {yc})">{ylabel}</text>'
        )
    for idx, (name, yv) in enumerate(ys.items()):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = " ".join(
            f"{px(xi):.2f},{py(yi):.2f}"
            for xi, yi in zip(x, yv)
            if np.isfinite(yi)
        )
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        ly = _MARGIN_T + 14 + 16 * idx
        lx = _WIDTH - _MARGIN_R - 130
        out.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        out.append(
            f'<text x="{lx + 28}" y="{ly}" font-family="sans-serif" '
            f'font-size="11">{name}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
