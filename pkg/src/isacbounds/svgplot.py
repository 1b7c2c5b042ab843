"""Minimal deterministic SVG line plots (no plotting library, no timestamps).

Byte output depends only on the input data, so identical runs produce
identical files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import TooFewPoints
from .tables import atomic_write_text

_WIDTH, _HEIGHT = 720, 480
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 160, 40, 55
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


@dataclass(frozen=True)
class AxesSpec:
    """Axis labels and scale for write_svg_plot."""

    title: str
    x_label: str
    y_label: str
    log_y: bool = False
    series_labels: tuple[str, ...] = field(default_factory=tuple)


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _ticks_linear(lo: float, hi: float, n: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-12 * step:
        ticks.append(t)
        t += step
    return ticks


def write_svg_plot(series, axes_spec: AxesSpec, path: str) -> None:
    """Render one polyline per series to a standalone SVG.

    series: list of (label, [(x, y), ...]); every series needs >= 2 points.
    Log-scale y places gridlines at decades. Non-positive y values are
    rejected on a log axis.
    """
    series = [(label, [(float(x), float(y)) for x, y in pts]) for label, pts in series]
    if not series or any(len(pts) < 2 for _, pts in series):
        raise TooFewPoints("each plotted series needs at least two points")

    xs = [x for _, pts in series for x, _ in pts]
    ys = [y for _, pts in series for _, y in pts]
    if axes_spec.log_y and min(ys) <= 0:
        raise ValueError("log-scale y axis requires positive values")

    x_lo, x_hi = min(xs), max(xs)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if axes_spec.log_y:
        y_lo = math.floor(math.log10(min(ys)))
        y_hi = math.ceil(math.log10(max(ys)))
        if y_hi == y_lo:
            y_hi += 1
    else:
        y_lo, y_hi = min(ys), max(ys)
        if y_hi == y_lo:
            y_hi = y_lo + 1.0

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def px(x: float) -> float:
        return _MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        if axes_spec.log_y:
            frac = (math.log10(y) - y_lo) / (y_hi - y_lo)
        else:
            frac = (y - y_lo) / (y_hi - y_lo)
        return _MARGIN_T + (1.0 - frac) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH // 2}" y="22" text-anchor="middle" font-family="sans-serif" '
        f'font-size="15">{axes_spec.title}</text>',
    ]

    # gridlines + tick labels
    if axes_spec.log_y:
        y_ticks = [10.0**d for d in range(int(y_lo), int(y_hi) + 1)]
    else:
        y_ticks = _ticks_linear(y_lo, y_hi)
    for t in y_ticks:
        ypix = py(t)
        parts.append(
            f'<line x1="{_MARGIN_L}" y1="{_fmt(ypix)}" x2="{_WIDTH - _MARGIN_R}" '
            f'y2="{_fmt(ypix)}" stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_L - 8}" y="{_fmt(ypix + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_fmt(t)}</text>'
        )
    for t in _ticks_linear(x_lo, x_hi):
        xpix = px(t)
        parts.append(
            f'<line x1="{_fmt(xpix)}" y1="{_MARGIN_T}" x2="{_fmt(xpix)}" '
            f'y2="{_HEIGHT - _MARGIN_B}" stroke="#eeeeee" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(xpix)}" y="{_HEIGHT - _MARGIN_B + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_fmt(t)}</text>'
        )

    # axes frame
    parts.append(
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{_MARGIN_L + plot_w / 2:.6g}" y="{_HEIGHT - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{axes_spec.x_label}</text>'
    )
    parts.append(
        f'<text x="18" y="{_MARGIN_T + plot_h / 2:.6g}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 18 {_MARGIN_T + plot_h / 2:.6g})">{axes_spec.y_label}</text>'
    )

    # series + legend
    for i, (label, pts) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        coords = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in pts)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.8"/>'
        )
        ly = _MARGIN_T + 16 + 20 * i
        lx = _WIDTH - _MARGIN_R + 12
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 26}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="1.8"/>'
        )
        parts.append(
            f'<text x="{lx + 32}" y="{ly}" font-family="sans-serif" font-size="12">{label}</text>'
        )

    parts.append("</svg>")
    atomic_write_text(path, "\n".join(parts) + "\n")
