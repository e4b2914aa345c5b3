"""Standalone SVG heatmaps for surfaces and best-codec maps.

Cells are drawn as ``<rect class="cell">`` elements; horizontally adjacent
cells of the same colour are merged into one rectangle. Each cell rectangle
carries ``data-row``, ``data-col`` and ``data-n`` attributes so tests can
reconstruct the colour grid without rendering.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .output import fmt

# fixed cycle keyed by codec index so re-runs keep their colours
CATEGORICAL = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#393b79",
)

# viridis sampled at 9 stops, interpolated linearly
_VIRIDIS = np.array([
    [68, 1, 84], [71, 44, 122], [59, 81, 139], [44, 113, 142], [33, 144, 141],
    [39, 173, 129], [92, 200, 99], [170, 220, 50], [253, 231, 37],
], dtype=float)

CELL = 4
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 170, 40, 50
NODATA = "#ffffff"


def continuous_color(u: float) -> str:
    """Colour for ``u`` in [0, 1] on a viridis-like ramp."""
    u = min(max(u, 0.0), 1.0) * (len(_VIRIDIS) - 1)
    i = min(int(u), len(_VIRIDIS) - 2)
    rgb = _VIRIDIS[i] + (u - i) * (_VIRIDIS[i + 1] - _VIRIDIS[i])
    return "#%02x%02x%02x" % tuple(int(round(v)) for v in rgb)


def categorical_color(index: int) -> str:
    return CATEGORICAL[index % len(CATEGORICAL)]


def _num(x):
    return f"{x:.2f}".rstrip("0").rstrip(".")


def _axes(lambda_db, gamma_db):
    return np.asarray(lambda_db, dtype=float).ravel(), np.asarray(gamma_db, dtype=float).ravel()


def _ticks(axis, every=10.0):
    finite = axis[np.isfinite(axis)]
    if finite.size == 0:
        return []
    lo = math.ceil(finite.min() / every) * every
    return [(i, v) for i, v in enumerate(axis) if np.isfinite(v) and abs((v - lo) % every) < 1e-9]


def _frame(lambda_db, gamma_db, title):
    nl, ng = len(lambda_db), len(gamma_db)
    w = MARGIN_L + nl * CELL + MARGIN_R
    h = MARGIN_T + ng * CELL + MARGIN_B
    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" '
        f'font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>',
        f'<text x="{MARGIN_L}" y="20" font-size="13">{escape(title)}</text>',
    ]
    axes = [f'<g class="axes">',
            f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{nl * CELL}" height="{ng * CELL}" '
            f'fill="none" stroke="#000000"/>']
    y0 = MARGIN_T + ng * CELL
    for i, v in _ticks(lambda_db):
        x = MARGIN_L + (i + 0.5) * CELL
        axes.append(f'<line x1="{_num(x)}" y1="{y0}" x2="{_num(x)}" y2="{y0 + 4}" stroke="#000000"/>')
        axes.append(f'<text x="{_num(x)}" y="{y0 + 16}" text-anchor="middle">{_num(v)}</text>')
    for i, v in _ticks(gamma_db):
        y = y0 - (i + 0.5) * CELL
        axes.append(f'<line x1="{MARGIN_L - 4}" y1="{_num(y)}" x2="{MARGIN_L}" y2="{_num(y)}" stroke="#000000"/>')
        axes.append(f'<text x="{MARGIN_L - 6}" y="{_num(y + 4)}" text-anchor="end">{_num(v)}</text>')
    axes.append(f'<text x="{_num(MARGIN_L + nl * CELL / 2)}" y="{h - 10}" text-anchor="middle">'
                f'10 log10(lambda) [dB]</text>')
    axes.append(f'<text x="16" y="{_num(MARGIN_T + ng * CELL / 2)}" text-anchor="middle" '
                f'transform="rotate(-90 16 {_num(MARGIN_T + ng * CELL / 2)})">10 log10(gamma) [dB]</text>')
    axes.append("</g>")
    return head, axes


def _cells(colors):
    """Row-run-length encoded cell rectangles; row 0 (lowest gamma) at the bottom."""
    ng, nl = colors.shape
    out = ['<g class="cells" shape-rendering="crispEdges">']
    for g in range(ng):
        y = MARGIN_T + (ng - 1 - g) * CELL
        l = 0
        while l < nl:
            run = 1
            while l + run < nl and colors[g, l + run] == colors[g, l]:
                run += 1
            out.append(f'<rect class="cell" data-row="{g}" data-col="{l}" data-n="{run}" '
                       f'x="{MARGIN_L + l * CELL}" y="{y}" width="{run * CELL}" height="{CELL}" '
                       f'fill="{colors[g, l]}"/>')
            l += run
    out.append("</g>")
    return out


def _marker(lambda_db, gamma_db, point_db):
    if point_db is None:
        return []
    lx, gx = point_db

    def pos(axis, v):
        if len(axis) == 1 or not math.isfinite(v):
            return 0.0
        # measured from the top end, which is always finite
        return (len(axis) - 1) - (axis[-1] - v) / (axis[-1] - axis[-2])

    x = MARGIN_L + (pos(lambda_db, lx) + 0.5) * CELL
    y = MARGIN_T + len(gamma_db) * CELL - (pos(gamma_db, gx) + 0.5) * CELL
    return [f'<g class="app-point" data-lambda-db="{fmt(lx)}" data-gamma-db="{fmt(gx)}">',
            f'<circle cx="{_num(x)}" cy="{_num(y)}" r="5" fill="none" stroke="#000000" stroke-width="2"/>',
            f'<text x="{_num(x + 7)}" y="{_num(y - 7)}">app ({_num(lx)}, {_num(gx)}) dB</text>',
            "</g>"]


def surface_svg(lambda_db, gamma_db, values, title="", point_db=None, symmetric=False) -> str:
    """Continuous heatmap of a ``(gamma, lambda)`` matrix; non-finite cells are left blank."""
    lambda_db, gamma_db = _axes(lambda_db, gamma_db)
    values = np.asarray(values, dtype=float)
    finite = values[np.isfinite(values)]
    if finite.size:
        lo, hi = float(finite.min()), float(finite.max())
        if symmetric:
            m = max(abs(lo), abs(hi))
            lo, hi = -m, m
    else:
        lo, hi = 0.0, 1.0
    span = hi - lo if hi > lo else 1.0
    colors = np.empty(values.shape, dtype=object)
    for idx, v in np.ndenumerate(values):
        colors[idx] = continuous_color((v - lo) / span) if math.isfinite(v) else NODATA
    head, axes = _frame(lambda_db, gamma_db, title)
    x0 = MARGIN_L + len(lambda_db) * CELL + 20
    bar = ['<g class="colorbar">']
    nsteps = 64
    hbar = len(gamma_db) * CELL
    for k in range(nsteps):
        y = MARGIN_T + hbar * (1 - (k + 1) / nsteps)
        bar.append(f'<rect x="{x0}" y="{_num(y)}" width="14" height="{_num(hbar / nsteps + 0.5)}" '
                   f'fill="{continuous_color((k + 0.5) / nsteps)}"/>')
    bar.append(f'<text x="{x0 + 18}" y="{MARGIN_T + 8}">{_num(hi)}</text>')
    bar.append(f'<text x="{x0 + 18}" y="{MARGIN_T + hbar}">{_num(lo)}</text>')
    bar.append("</g>")
    body = head + _cells(colors) + axes + bar + _marker(lambda_db, gamma_db, point_db)
    return "\n".join(body + ["</svg>"]) + "\n"


def best_map_svg(lambda_db, gamma_db, best, codec_names, title="", point_db=None) -> str:
    """Categorical map of winning codec indices with a legend of the winners."""
    lambda_db, gamma_db = _axes(lambda_db, gamma_db)
    best = np.asarray(best)
    colors = np.empty(best.shape, dtype=object)
    for idx, v in np.ndenumerate(best):
        colors[idx] = categorical_color(int(v))
    head, axes = _frame(lambda_db, gamma_db, title)
    x0 = MARGIN_L + len(lambda_db) * CELL + 20
    legend = ['<g class="legend">']
    for k, i in enumerate(sorted(set(best.ravel().tolist()))):
        y = MARGIN_T + 16 * k
        legend.append(f'<rect data-index="{i}" x="{x0}" y="{y}" width="12" height="12" '
                      f'fill="{categorical_color(i)}"/>')
        legend.append(f'<text x="{x0 + 16}" y="{y + 10}">{i}: {escape(codec_names[i])}</text>')
    legend.append("</g>")
    body = head + _cells(colors) + axes + legend + _marker(lambda_db, gamma_db, point_db)
    return "\n".join(body + ["</svg>"]) + "\n"


def parse_cells(svg_text: str):
    """Recover the cell colour grid from a heatmap written by this module."""
    import xml.etree.ElementTree as ET

    root = ET.fromstring(svg_text)
    ns = "{http://www.w3.org/2000/svg}"
    cells = [e for e in root.iter(f"{ns}rect") if e.get("class") == "cell"]
    ng = 1 + max(int(e.get("data-row")) for e in cells)
    nl = max(int(e.get("data-col")) + int(e.get("data-n")) for e in cells)
    grid = np.empty((ng, nl), dtype=object)
    for e in cells:
        g, l, n = int(e.get("data-row")), int(e.get("data-col")), int(e.get("data-n"))
        grid[g, l:l + n] = e.get("fill")
    return grid
