"""Deterministic standalone SVG 1.1 scatter and stem plots.

Byte-identical output for identical input is part of the contract, so all
numbers are formatted with a fixed precision and no library renderer is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

WIDTH, HEIGHT = 640, 480
MARGIN = 56


@dataclass(frozen=True)
class PlotStyle:
    title: str = ""
    x_label: str = "x"
    y_label: str = "y"
    point_radius: float = 3.0
    color: str = "#1f6fb4"


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _nice_ticks(lo: float, hi: float, target: int = 6):
    if hi <= lo:
        lo, hi = lo - 1.0, hi + 1.0
    span = hi - lo
    step = 10.0 ** math.floor(math.log10(span / target))
    for mult in (1, 2, 5, 10):
        if span / (step * mult) <= target:
            step *= mult
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * span:
        ticks.append(0.0 if abs(t) < 1e-12 * span else t)
        t += step
    return ticks


def _bounds(xs, ys):
    if xs:
        xlo, xhi = min(xs), max(xs)
        ylo, yhi = min(ys), max(ys)
    else:
        xlo, xhi, ylo, yhi = -1.0, 1.0, -1.0, 1.0
    def pad(lo, hi):
        if hi - lo < 1e-12:
            return lo - 1.0, hi + 1.0
        d = 0.08 * (hi - lo)
        return lo - d, hi + d
    return pad(xlo, xhi) + pad(ylo, yhi)


class _Canvas:
    def __init__(self, xlo, xhi, ylo, yhi):
        self.xlo, self.xhi, self.ylo, self.yhi = xlo, xhi, ylo, yhi

    def x(self, v):
        return MARGIN + (v - self.xlo) / (self.xhi - self.xlo) * (WIDTH - 2 * MARGIN)

    def y(self, v):
        return HEIGHT - MARGIN - (v - self.ylo) / (self.yhi - self.ylo) * (HEIGHT - 2 * MARGIN)


def _frame(canvas: _Canvas, style: PlotStyle):
    parts = []
    parts.append(f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
                 f'height="{HEIGHT - 2 * MARGIN}" fill="none" stroke="#333333" '
                 'stroke-width="1"/>')
    for t in _nice_ticks(canvas.xlo, canvas.xhi):
        px = canvas.x(t)
        parts.append(f'<line x1="{_fmt(px)}" y1="{HEIGHT - MARGIN}" x2="{_fmt(px)}" '
                     f'y2="{HEIGHT - MARGIN + 5}" stroke="#333333" stroke-width="1"/>')
        parts.append(f'<text x="{_fmt(px)}" y="{HEIGHT - MARGIN + 18}" '
                     f'font-size="11" text-anchor="middle">{_fmt(t)}</text>')
    for t in _nice_ticks(canvas.ylo, canvas.yhi):
        py = canvas.y(t)
        parts.append(f'<line x1="{MARGIN - 5}" y1="{_fmt(py)}" x2="{MARGIN}" '
                     f'y2="{_fmt(py)}" stroke="#333333" stroke-width="1"/>')
        parts.append(f'<text x="{MARGIN - 8}" y="{_fmt(py + 4)}" font-size="11" '
                     f'text-anchor="end">{_fmt(t)}</text>')
    if style.title:
        parts.append(f'<text x="{WIDTH // 2}" y="24" font-size="14" '
                     f'text-anchor="middle">{style.title}</text>')
    parts.append(f'<text x="{WIDTH // 2}" y="{HEIGHT - 14}" font-size="12" '
                 f'text-anchor="middle">{style.x_label}</text>')
    parts.append(f'<text x="16" y="{HEIGHT // 2}" font-size="12" text-anchor="middle" '
                 f'transform="rotate(-90 16 {HEIGHT // 2})">{style.y_label}</text>')
    return parts


def _document(body) -> str:
    head = ('<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">\n'
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>\n')
    return head + "\n".join(body) + "\n</svg>\n"


def scatter_svg(points, style: PlotStyle = PlotStyle()) -> str:
    """Scatter plot of (x, y) pairs; axes only when the list is empty."""
    pts = [(float(x), float(y)) for x, y in points]
    xlo, xhi, ylo, yhi = _bounds([p[0] for p in pts], [p[1] for p in pts])
    canvas = _Canvas(xlo, xhi, ylo, yhi)
    body = _frame(canvas, style)
    for x, y in pts:
        body.append(f'<circle cx="{_fmt(canvas.x(x))}" cy="{_fmt(canvas.y(y))}" '
                    f'r="{_fmt(style.point_radius)}" fill="{style.color}"/>')
    return _document(body)


def stem_svg(stems, style: PlotStyle = PlotStyle()) -> str:
    """Stem plot of (x, height) pairs with a baseline at zero."""
    pts = [(float(x), float(h)) for x, h in stems]
    ys = [p[1] for p in pts] + [0.0]
    xlo, xhi, ylo, yhi = _bounds([p[0] for p in pts],
                                 ys if pts else [])
    canvas = _Canvas(xlo, xhi, ylo, yhi)
    body = _frame(canvas, style)
    base = canvas.y(0.0)
    body.append(f'<line x1="{MARGIN}" y1="{_fmt(base)}" x2="{WIDTH - MARGIN}" '
                f'y2="{_fmt(base)}" stroke="#999999" stroke-width="1"/>')
    for x, h in pts:
        px = canvas.x(x)
        body.append(f'<line x1="{_fmt(px)}" y1="{_fmt(base)}" x2="{_fmt(px)}" '
                    f'y2="{_fmt(canvas.y(h))}" stroke="{style.color}" '
                    'stroke-width="1.5"/>')
        body.append(f'<circle cx="{_fmt(px)}" cy="{_fmt(canvas.y(h))}" '
                    f'r="{_fmt(style.point_radius)}" fill="{style.color}"/>')
    return _document(body)
