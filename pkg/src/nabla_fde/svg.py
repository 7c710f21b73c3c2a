"""Minimal deterministic SVG line charts (polylines, axes, legend)."""

from __future__ import annotations

import math
from html import escape
from typing import Sequence

import numpy as np

WIDTH, HEIGHT = 720, 450
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 170, 40, 50

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#000000",
)


def _nice_ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def line_chart(
    series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    title: str = "",
    xlabel: str = "k",
    ylabel: str = "y",
) -> str:
    """Render ``(label, xs, ys)`` curves into one SVG document.

    Non-finite points are dropped.  Output depends only on the inputs.
    """
    xs_all = [np.asarray(x, dtype=float) for _, x, _ in series]
    ys_all = [np.asarray(y, dtype=float) for _, _, y in series]
    finite = [np.isfinite(x) & np.isfinite(y) for x, y in zip(xs_all, ys_all)]
    xv = np.concatenate([x[f] for x, f in zip(xs_all, finite)] or [np.zeros(1)])
    yv = np.concatenate([y[f] for y, f in zip(ys_all, finite)] or [np.zeros(1)])
    if xv.size == 0:
        xv, yv = np.zeros(1), np.zeros(1)
    x0, x1 = float(xv.min()), float(xv.max())
    y0, y1 = float(yv.min()), float(yv.max())
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(x):
        return MARGIN_L + (x - x0) / (x1 - x0) * pw

    def py(y):
        return MARGIN_T + (y1 - y) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>')

    # axes and ticks
    out.append(
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>'
    )
    for t in _nice_ticks(x0, x1):
        X = px(t)
        out.append(f'<line x1="{_fmt(X)}" y1="{MARGIN_T + ph}" x2="{_fmt(X)}" y2="{MARGIN_T + ph + 5}" stroke="#333"/>')
        out.append(f'<text x="{_fmt(X)}" y="{MARGIN_T + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _nice_ticks(y0, y1):
        Y = py(t)
        out.append(f'<line x1="{MARGIN_L - 5}" y1="{_fmt(Y)}" x2="{MARGIN_L}" y2="{_fmt(Y)}" stroke="#333"/>')
        out.append(f'<line x1="{MARGIN_L}" y1="{_fmt(Y)}" x2="{MARGIN_L + pw}" y2="{_fmt(Y)}" stroke="#ddd"/>')
        out.append(f'<text x="{MARGIN_L - 8}" y="{_fmt(Y + 4)}" text-anchor="end">{t:g}</text>')
    if y0 < 0 < y1:
        out.append(
            f'<line x1="{MARGIN_L}" y1="{_fmt(py(0))}" x2="{MARGIN_L + pw}" y2="{_fmt(py(0))}" stroke="#999" stroke-dasharray="4 3"/>'
        )
    out.append(f'<text x="{MARGIN_L + pw / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="18" y="{MARGIN_T + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {MARGIN_T + ph / 2:.1f})">{escape(ylabel)}</text>'
    )

    # curves and legend
    for i, ((label, _, _), x, y, f) in enumerate(zip(series, xs_all, ys_all, finite)):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(x[f], y[f]))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = MARGIN_T + 10 + 18 * i
        lx = MARGIN_L + pw + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 22}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 28}" y="{ly + 4}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
