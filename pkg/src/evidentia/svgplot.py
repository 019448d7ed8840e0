"""Minimal deterministic SVG output for LR comparison panels.

Only what the comparison figures need: a log10-log10 scatter with the
diagonal and the LR = 1 lines, and a step-line density panel.  Output
depends only on the inputs, so identical data give identical bytes.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 480, 480
MARGIN = dict(left=64, right=16, top=40, bottom=56)
POINT_RADIUS = 2.0
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _num(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


class _Frame:
    def __init__(self, xlim, ylim):
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        self.left = MARGIN["left"]
        self.right = WIDTH - MARGIN["right"]
        self.top = MARGIN["top"]
        self.bottom = HEIGHT - MARGIN["bottom"]

    def px(self, x):
        return self.left + (x - self.x0) / (self.x1 - self.x0) * (self.right - self.left)

    def py(self, y):
        return self.bottom - (y - self.y0) / (self.y1 - self.y0) * (self.bottom - self.top)


def _nice_limits(lo: float, hi: float, pad: float = 0.05):
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return -1.0, 1.0
    if hi - lo < 1e-9:
        lo, hi = lo - 1.0, hi + 1.0
    span = hi - lo
    return lo - pad * span, hi + pad * span


def _ticks(lo: float, hi: float, max_ticks: int = 8):
    span = hi - lo
    raw = span / max_ticks
    step = 10 ** math.floor(math.log10(raw))
    for m in (1, 2, 5, 10):
        if m * step >= raw:
            step *= m
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12:
        out.append(0.0 if abs(t) < step * 1e-9 else t)
        t += step
    return out, step


def _tick_label(t: float, step: float) -> str:
    if step >= 1:
        return str(int(round(t)))
    digits = max(0, -int(math.floor(math.log10(step))))
    return f"{t:.{digits}f}"


def _axes(f: _Frame, xlabel: str, ylabel: str, title: str):
    parts = [
        f'<rect x="{f.left}" y="{f.top}" width="{f.right - f.left}" '
        f'height="{f.bottom - f.top}" fill="none" stroke="#000" stroke-width="1"/>',
    ]
    xt, xs = _ticks(f.x0, f.x1)
    yt, ys = _ticks(f.y0, f.y1)
    for t in xt:
        x = _num(f.px(t))
        parts.append(f'<line x1="{x}" y1="{f.bottom}" x2="{x}" y2="{f.bottom + 4}" stroke="#000"/>')
        parts.append(f'<text x="{x}" y="{f.bottom + 16}" text-anchor="middle">{_tick_label(t, xs)}</text>')
    for t in yt:
        y = _num(f.py(t))
        parts.append(f'<line x1="{f.left - 4}" y1="{y}" x2="{f.left}" y2="{y}" stroke="#000"/>')
        parts.append(f'<text x="{f.left - 6}" y="{y}" text-anchor="end" '
                     f'dominant-baseline="middle">{_tick_label(t, ys)}</text>')
    cx = _num((f.left + f.right) / 2)
    cy = _num((f.top + f.bottom) / 2)
    parts.append(f'<text x="{cx}" y="{HEIGHT - 16}" text-anchor="middle">{escape(xlabel)}</text>')
    parts.append(f'<text x="16" y="{cy}" text-anchor="middle" '
                 f'transform="rotate(-90 16 {cy})">{escape(ylabel)}</text>')
    parts.append(f'<text x="{cx}" y="22" text-anchor="middle" font-weight="bold">{escape(title)}</text>')
    return parts


def _document(body) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">')
    return "\n".join([head, f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#fff"/>', *body, "</svg>"]) + "\n"


def scatter_log10(x, y, title: str = "", xlabel: str = "log10 x", ylabel: str = "log10 y",
                  n_dropped: int = 0) -> str:
    """Scatter of already log10-transformed, finite coordinates.

    Draws the y = x diagonal and the lines x = 0 and y = 0 (LR = 1).  The
    annotation reports how many points are shown and how many were dropped
    by the caller.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"x and y differ in shape: {x.shape} vs {y.shape}")
    if x.size:
        lo = min(float(x.min()), float(y.min()), 0.0)
        hi = max(float(x.max()), float(y.max()), 0.0)
    else:
        lo, hi = -1.0, 1.0
    lim = _nice_limits(lo, hi)
    f = _Frame(lim, lim)
    body = _axes(f, xlabel, ylabel, title)
    body.append(f'<line x1="{_num(f.px(lim[0]))}" y1="{_num(f.py(lim[0]))}" '
                f'x2="{_num(f.px(lim[1]))}" y2="{_num(f.py(lim[1]))}" '
                f'stroke="#888" stroke-dasharray="4 3"/>')
    body.append(f'<line x1="{_num(f.px(0))}" y1="{f.top}" x2="{_num(f.px(0))}" y2="{f.bottom}" stroke="#888"/>')
    body.append(f'<line x1="{f.left}" y1="{_num(f.py(0))}" x2="{f.right}" y2="{_num(f.py(0))}" stroke="#888"/>')
    body.append(f'<g fill="{COLORS[0]}" fill-opacity="0.6">')
    for xi, yi in zip(x, y):
        body.append(f'<circle cx="{_num(f.px(xi))}" cy="{_num(f.py(yi))}" r="{POINT_RADIUS}"/>')
    body.append("</g>")
    note = f"{x.size} points"
    if n_dropped:
        note += f"; {n_dropped} non-finite dropped"
    body.append(f'<text x="{f.left + 6}" y="{f.top + 14}">{escape(note)}</text>')
    return _document(body)


def density_lines(curves, title: str = "", xlabel: str = "x", ylabel: str = "density",
                  markers=()) -> str:
    """Line plot of ``(label, x, y)`` curves with optional vertical markers.

    ``markers`` is a sequence of ``(label, x)`` pairs drawn as dashed lines.
    """
    curves = [(lab, np.asarray(cx, float), np.asarray(cy, float)) for lab, cx, cy in curves]
    xs = [c[1] for c in curves if c[1].size] + [np.array([m[1] for m in markers], float)]
    allx = np.concatenate(xs) if xs else np.array([])
    ally = np.concatenate([c[2] for c in curves]) if curves else np.array([])
    xlim = _nice_limits(float(allx.min()), float(allx.max()), 0.02) if allx.size else (-1.0, 1.0)
    ymax = float(ally.max()) if ally.size and ally.max() > 0 else 1.0
    f = _Frame(xlim, (0.0, ymax * 1.08))
    body = _axes(f, xlabel, ylabel, title)
    for i, (label, cx, cy) in enumerate(curves):
        color = COLORS[i % len(COLORS)]
        pts = " ".join(f"{_num(f.px(a))},{_num(f.py(b))}" for a, b in zip(cx, cy))
        body.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        body.append(f'<text x="{f.right - 6}" y="{f.top + 14 + 14 * i}" text-anchor="end" '
                    f'fill="{color}">{escape(label)}</text>')
    for label, mx in markers:
        x = _num(f.px(mx))
        body.append(f'<line x1="{x}" y1="{f.top}" x2="{x}" y2="{f.bottom}" stroke="#000" '
                    f'stroke-dasharray="3 3"/>')
        body.append(f'<text x="{x}" y="{f.top - 4}" text-anchor="middle">{escape(label)}</text>')
    return _document(body)
