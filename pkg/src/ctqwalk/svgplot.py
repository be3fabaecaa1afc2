"""Minimal deterministic SVG plotting: line, multiline, and heatmap.

Output is a single self-contained SVG string, a pure function of the input
data and labels, so repeated renders are byte-identical.  Heatmaps use a
fixed five-anchor color ramp (dark violet, blue, teal, green, yellow; the
anchors are listed in _RAMP) linearly interpolated over the value range.
Series paths carry class="series", heatmap cells class="cell", and legend
entries class="legend" so artifacts stay easy to inspect.
"""

from __future__ import annotations

import numpy as np

from .errors import EmptyResult

_W, _H = 640.0, 480.0
_ML, _MR, _MT, _MB = 70.0, 24.0, 44.0, 52.0
_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#7f7f7f", "#9467bd", "#8c564b"]
_RAMP = [
    (0.267, 0.005, 0.329),
    (0.229, 0.322, 0.545),
    (0.127, 0.566, 0.551),
    (0.369, 0.789, 0.383),
    (0.993, 0.906, 0.144),
]


def _ramp_color(u: float) -> str:
    u = min(max(u, 0.0), 1.0)
    pos = u * (len(_RAMP) - 1)
    i = min(int(pos), len(_RAMP) - 2)
    f = pos - i
    r, g, b = (a + f * (b2 - a) for a, b2 in zip(_RAMP[i], _RAMP[i + 1]))
    return f"#{int(round(255 * r)):02x}{int(round(255 * g)):02x}{int(round(255 * b)):02x}"


def _span(lo: float, hi: float) -> tuple[float, float]:
    if hi <= lo:
        pad = 0.5 if lo == 0 else abs(lo) * 0.05
        return lo - pad, lo + pad
    return lo, hi


def _px(v: float) -> str:
    return f"{v:.2f}"


class _Canvas:
    def __init__(self, title: str, xlabel: str, ylabel: str):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W:g}" height="{_H:g}" '
            f'viewBox="0 0 {_W:g} {_H:g}">',
            f'<rect x="0" y="0" width="{_W:g}" height="{_H:g}" fill="#ffffff"/>',
            f'<text x="{_W / 2:g}" y="20" text-anchor="middle" font-family="monospace" '
            f'font-size="13">{_esc(title)}</text>',
            f'<text x="{(_ML + _W - _MR) / 2:g}" y="{_H - 12:g}" text-anchor="middle" '
            f'font-family="monospace" font-size="12">{_esc(xlabel)}</text>',
            f'<text x="16" y="{(_MT + _H - _MB) / 2:g}" text-anchor="middle" '
            f'font-family="monospace" font-size="12" '
            f'transform="rotate(-90 16 {(_MT + _H - _MB) / 2:g})">{_esc(ylabel)}</text>',
        ]

    def add(self, fragment: str):
        self.parts.append(fragment)

    def axes(self, x_lo, x_hi, y_lo, y_hi, n_ticks: int = 5):
        x0, x1 = _ML, _W - _MR
        y0, y1 = _H - _MB, _MT
        self.add(
            f'<rect x="{_px(x0)}" y="{_px(y1)}" width="{_px(x1 - x0)}" '
            f'height="{_px(y0 - y1)}" fill="none" stroke="#000000"/>'
        )
        for i in range(n_ticks):
            f = i / (n_ticks - 1)
            xv = x_lo + f * (x_hi - x_lo)
            yv = y_lo + f * (y_hi - y_lo)
            xp = x0 + f * (x1 - x0)
            yp = y0 - f * (y0 - y1)
            self.add(f'<line x1="{_px(xp)}" y1="{_px(y0)}" x2="{_px(xp)}" y2="{_px(y0 + 5)}" stroke="#000000"/>')
            self.add(
                f'<text x="{_px(xp)}" y="{_px(y0 + 18)}" text-anchor="middle" '
                f'font-family="monospace" font-size="11">{xv:.3g}</text>'
            )
            self.add(f'<line x1="{_px(x0 - 5)}" y1="{_px(yp)}" x2="{_px(x0)}" y2="{_px(yp)}" stroke="#000000"/>')
            self.add(
                f'<text x="{_px(x0 - 8)}" y="{_px(yp + 4)}" text-anchor="end" '
                f'font-family="monospace" font-size="11">{yv:.3g}</text>'
            )

    def to_svg(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _scale(v, lo, hi, p0, p1):
    return p0 + (np.asarray(v, dtype=float) - lo) / (hi - lo) * (p1 - p0)


def _render_lines(series: dict, title, xlabel, ylabel) -> str:
    if not series:
        raise EmptyResult("no series to plot")
    for label, (x, y) in series.items():
        if len(x) == 0 or len(x) != len(y):
            raise EmptyResult(f"series {label!r} empty or mismatched")
    all_x = np.concatenate([np.asarray(x, dtype=float) for x, _ in series.values()])
    all_y = np.concatenate([np.asarray(y, dtype=float) for _, y in series.values()])
    x_lo, x_hi = _span(float(all_x.min()), float(all_x.max()))
    y_lo, y_hi = _span(float(all_y.min()), float(all_y.max()))
    cv = _Canvas(title, xlabel, ylabel)
    cv.axes(x_lo, x_hi, y_lo, y_hi)
    for i, (label, (x, y)) in enumerate(series.items()):
        color = _PALETTE[i % len(_PALETTE)]
        xs = _scale(x, x_lo, x_hi, _ML, _W - _MR)
        ys = _scale(y, y_lo, y_hi, _H - _MB, _MT)
        pts = " ".join(f"{_px(a)},{_px(b)}" for a, b in zip(xs, ys))
        cv.add(f'<polyline class="series" points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        lx, ly = _W - _MR - 110, _MT + 16 + 16 * i
        cv.add(f'<line x1="{_px(lx)}" y1="{_px(ly - 4)}" x2="{_px(lx + 22)}" y2="{_px(ly - 4)}" stroke="{color}" stroke-width="2"/>')
        cv.add(
            f'<text class="legend" x="{_px(lx + 28)}" y="{_px(ly)}" '
            f'font-family="monospace" font-size="11">{_esc(str(label))}</text>'
        )
    return cv.to_svg()


def _render_heatmap(x, y, z, title, xlabel, ylabel) -> str:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    if x.size == 0 or y.size == 0 or z.size == 0:
        raise EmptyResult("empty heatmap input")
    if z.shape != (y.size, x.size):
        raise ValueError(f"z shape {z.shape} does not match (len(y), len(x)) = ({y.size}, {x.size})")
    z_lo, z_hi = _span(float(z.min()), float(z.max()))
    cv = _Canvas(title, xlabel, ylabel)
    x_edges = np.linspace(_ML, _W - _MR, x.size + 1)
    y_edges = np.linspace(_H - _MB, _MT, y.size + 1)
    for iy in range(y.size):
        for ix in range(x.size):
            u = (z[iy, ix] - z_lo) / (z_hi - z_lo)
            x0, x1 = x_edges[ix], x_edges[ix + 1]
            y1, y0 = y_edges[iy], y_edges[iy + 1]
            cv.add(
                f'<rect class="cell" x="{_px(x0)}" y="{_px(y0)}" '
                f'width="{_px(x1 - x0)}" height="{_px(y1 - y0)}" fill="{_ramp_color(u)}"/>'
            )
    cv.axes(float(x.min()), float(x.max()), float(y.min()), float(y.max()))
    cv.add(
        f'<text class="legend" x="{_px(_W - _MR)}" y="{_px(_MT - 8)}" text-anchor="end" '
        f'font-family="monospace" font-size="11">range [{z_lo:.3g}, {z_hi:.3g}]</text>'
    )
    return cv.to_svg()


def render_plot(result, kind: str, path, *, title: str = "", xlabel: str = "", ylabel: str = "") -> None:
    """Write one SVG artifact.

    kind "line": result is (x, y).  kind "multiline": result is an ordered
    mapping label -> (x, y).  kind "heatmap": result is (x, y, z) with z of
    shape (len(y), len(x)).
    """
    if kind == "line":
        x, y = result
        svg = _render_lines({"": (x, y)}, title, xlabel, ylabel)
    elif kind == "multiline":
        svg = _render_lines(dict(result), title, xlabel, ylabel)
    elif kind == "heatmap":
        x, y, z = result
        svg = _render_heatmap(x, y, z, title, xlabel, ylabel)
    else:
        raise ValueError(f"unknown plot kind {kind!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
