"""Deterministic CSV tables and static SVG line plots."""
from __future__ import annotations

import math
from numbers import Integral, Real

import numpy as np

from .errors import PreconditionError

__all__ = ["emit_table", "read_table", "emit_svg_plot"]

WIDTH, HEIGHT = 800, 600
MARGIN = {"left": 90, "right": 30, "top": 50, "bottom": 70}
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


def _cell(value, r, c):
    if isinstance(value, str):
        if "," in value or "\n" in value:
            raise PreconditionError(f"row {r}, column {c}: text cells may not contain ',' or newlines")
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, Integral):
        return str(int(value))
    if isinstance(value, Real):
        x = float(value)
        if not math.isfinite(x):
            raise PreconditionError(f"row {r}, column {c}: non-finite value {x!r}")
        return f"{x:.16e}"
    raise PreconditionError(f"row {r}, column {c}: unsupported value {value!r}")


def emit_table(rows, columns, path) -> None:
    """Write ``rows`` as CSV with a header; floats keep 17 significant digits."""
    columns = list(columns)
    lines = [",".join(columns)]
    for r, row in enumerate(rows):
        row = list(row)
        if len(row) != len(columns):
            raise PreconditionError(f"row {r} has {len(row)} cells, expected {len(columns)}")
        lines.append(",".join(_cell(v, r, c) for c, v in zip(columns, row)))
    text = "\n".join(lines) + "\n"
    with open(path, "w", newline="") as fh:
        fh.write(text)


def read_table(path):
    """Inverse of :func:`emit_table` for numeric tables: ``(columns, float array)``."""
    with open(path) as fh:
        columns = fh.readline().rstrip("\n").split(",")
        rows = [[float(v) for v in line.rstrip("\n").split(",")] for line in fh if line.strip()]
    return columns, np.array(rows, dtype=float).reshape(len(rows), len(columns))


def _nice_ticks(lo, hi, target=6):
    span = hi - lo
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * span:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t = first + len(ticks) * step
    return ticks


def _range(values):
    lo, hi = float(np.min(values)), float(np.max(values))
    if lo == hi:
        pad = abs(lo) * 0.1 or 1.0
        return lo - pad, hi + pad
    pad = 0.04 * (hi - lo)
    return lo - pad, hi + pad


def _esc(text):
    return str(text).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_svg_plot(series, labels, path, title: str = "", xlabel: str = "", ylabel: str = "") -> None:
    """Render ``series`` (a list of ``(x, y)`` pairs) as polylines in an 800x600 SVG."""
    series = list(series)
    labels = list(labels)
    if not series:
        raise PreconditionError("nothing to plot: series list is empty")
    if len(labels) != len(series):
        raise PreconditionError(f"{len(series)} series but {len(labels)} labels")
    data = []
    for i, (x, y) in enumerate(series):
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        if x.shape != y.shape or x.ndim != 1:
            raise PreconditionError(f"series {i}: x and y must be 1D with equal length")
        if x.size == 0 or not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise PreconditionError(f"series {i}: empty or non-finite data")
        data.append((x, y))
    xlo, xhi = _range(np.concatenate([d[0] for d in data]))
    ylo, yhi = _range(np.concatenate([d[1] for d in data]))
    left, top = MARGIN["left"], MARGIN["top"]
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(v):
        return left + (v - xlo) / (xhi - xlo) * pw

    def sy(v):
        return top + ph - (v - ylo) / (yhi - ylo) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _nice_ticks(xlo, xhi):
        px = sx(t)
        out.append(f'<line x1="{px:.2f}" y1="{top + ph}" x2="{px:.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{top + ph + 20}" text-anchor="middle">{t:.6g}</text>')
    for t in _nice_ticks(ylo, yhi):
        py = sy(t)
        out.append(f'<line x1="{left - 5}" y1="{py:.2f}" x2="{left}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{py + 4:.2f}" text-anchor="end">{t:.6g}</text>')
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="30" text-anchor="middle" font-size="16">{_esc(title)}</text>')
    if xlabel:
        out.append(f'<text x="{left + pw / 2:.1f}" y="{HEIGHT - 20}" text-anchor="middle">{_esc(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="20" y="{top + ph / 2:.1f}" text-anchor="middle" '
                   f'transform="rotate(-90 20 {top + ph / 2:.1f})">{_esc(ylabel)}</text>')
    for i, (x, y) in enumerate(data):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{sx(a):.3f},{sy(b):.3f}" for a, b in zip(x, y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
    for i, label in enumerate(labels):
        color = PALETTE[i % len(PALETTE)]
        ly = top + 15 + 18 * i
        lx = left + pw - 140
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 32}" y="{ly + 4}">{_esc(label)}</text>')
    out.append("</svg>")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(out) + "\n")
