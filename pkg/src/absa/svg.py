"""Minimal deterministic SVG charts: line, scatter and boxplot panels.

Coordinates are written with two decimals so identical data always yields
identical bytes.
"""

from __future__ import annotations

import math
from typing import Mapping, Optional, Sequence
from xml.sax.saxutils import escape

from absa.stats_core import BoxplotSummary

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _n(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if not (math.isfinite(lo) and math.isfinite(hi)):
        return []
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / max(count, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = start
    while t <= hi + step * 1e-9:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _fmt_tick(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.2g}"
    return f"{v:.6g}"


class Panel:
    """One set of axes placed at ``(x0, y0)`` with a plot area of ``w`` by ``h``."""

    def __init__(self, x0, y0, w, h, xlim, ylim, title="", xlabel="", ylabel=""):
        self.x0, self.y0, self.w, self.h = x0, y0, w, h
        self.xlim = _pad(xlim)
        self.ylim = _pad(ylim)
        self.title, self.xlabel, self.ylabel = title, xlabel, ylabel
        self.parts: list[str] = []

    def px(self, x: float) -> float:
        lo, hi = self.xlim
        return self.x0 + (x - lo) / (hi - lo) * self.w

    def py(self, y: float) -> float:
        lo, hi = self.ylim
        return self.y0 + self.h - (y - lo) / (hi - lo) * self.h

    def axes(self, xticks: Optional[Sequence[tuple[float, str]]] = None) -> None:
        x0, y0, w, h = self.x0, self.y0, self.w, self.h
        self.parts.append(
            f'<rect x="{_n(x0)}" y="{_n(y0)}" width="{_n(w)}" height="{_n(h)}" '
            'fill="none" stroke="#000" stroke-width="1"/>'
        )
        if xticks is None:
            xticks = [(t, _fmt_tick(t)) for t in nice_ticks(*self.xlim)]
        for t, label in xticks:
            x = self.px(t)
            self.parts.append(
                f'<line x1="{_n(x)}" y1="{_n(y0 + h)}" x2="{_n(x)}" y2="{_n(y0 + h + 4)}" stroke="#000"/>'
            )
            self.parts.append(
                f'<text x="{_n(x)}" y="{_n(y0 + h + 16)}" font-size="10" text-anchor="middle">{escape(label)}</text>'
            )
        for t in nice_ticks(*self.ylim):
            y = self.py(t)
            self.parts.append(
                f'<line x1="{_n(x0 - 4)}" y1="{_n(y)}" x2="{_n(x0)}" y2="{_n(y)}" stroke="#000"/>'
            )
            self.parts.append(
                f'<text x="{_n(x0 - 6)}" y="{_n(y + 3)}" font-size="10" text-anchor="end">{_fmt_tick(t)}</text>'
            )
        if self.title:
            self.parts.append(
                f'<text x="{_n(x0 + w / 2)}" y="{_n(y0 - 8)}" font-size="12" text-anchor="middle">{escape(self.title)}</text>'
            )
        if self.xlabel:
            self.parts.append(
                f'<text x="{_n(x0 + w / 2)}" y="{_n(y0 + h + 32)}" font-size="11" text-anchor="middle">{escape(self.xlabel)}</text>'
            )
        if self.ylabel:
            cx, cy = x0 - 42, y0 + h / 2
            self.parts.append(
                f'<text x="{_n(cx)}" y="{_n(cy)}" font-size="11" text-anchor="middle" '
                f'transform="rotate(-90 {_n(cx)} {_n(cy)})">{escape(self.ylabel)}</text>'
            )

    def hline(self, y: float, color="#888", dash="4 3", label: str = "") -> None:
        if not (self.ylim[0] <= y <= self.ylim[1]):
            return
        py = self.py(y)
        self.parts.append(
            f'<line x1="{_n(self.x0)}" y1="{_n(py)}" x2="{_n(self.x0 + self.w)}" y2="{_n(py)}" '
            f'stroke="{color}" stroke-dasharray="{dash}"/>'
        )
        if label:
            self.parts.append(
                f'<text x="{_n(self.x0 + self.w - 2)}" y="{_n(py - 2)}" font-size="9" fill="{color}" text-anchor="end">{escape(label)}</text>'
            )

    def polyline(self, xs, ys, color, markers=True) -> None:
        pts = " ".join(f"{_n(self.px(x))},{_n(self.py(y))}" for x, y in zip(xs, ys))
        self.parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        if markers:
            self.points(xs, ys, color, r=2.5)

    def points(self, xs, ys, color, r=2.0) -> None:
        for x, y in zip(xs, ys):
            self.parts.append(
                f'<circle cx="{_n(self.px(x))}" cy="{_n(self.py(y))}" r="{_n(r)}" fill="{color}"/>'
            )

    def box(self, x: float, half_width_px: float, b: BoxplotSummary, color: str) -> None:
        cx = self.px(x)
        left, right = cx - half_width_px, cx + half_width_px
        q1, q3, med = self.py(b.q1), self.py(b.q3), self.py(b.median)
        lo, hi = self.py(b.whisker_low), self.py(b.whisker_high)
        p = self.parts
        p.append(f'<line x1="{_n(cx)}" y1="{_n(hi)}" x2="{_n(cx)}" y2="{_n(q3)}" stroke="{color}"/>')
        p.append(f'<line x1="{_n(cx)}" y1="{_n(q1)}" x2="{_n(cx)}" y2="{_n(lo)}" stroke="{color}"/>')
        for y in (hi, lo):
            p.append(
                f'<line x1="{_n(cx - half_width_px / 2)}" y1="{_n(y)}" x2="{_n(cx + half_width_px / 2)}" y2="{_n(y)}" stroke="{color}"/>'
            )
        p.append(
            f'<rect x="{_n(left)}" y="{_n(q3)}" width="{_n(right - left)}" height="{_n(max(q1 - q3, 0.0))}" '
            f'fill="none" stroke="{color}"/>'
        )
        p.append(f'<line x1="{_n(left)}" y1="{_n(med)}" x2="{_n(right)}" y2="{_n(med)}" stroke="#d62728" stroke-width="1.5"/>')
        for o in b.outliers:
            p.append(f'<circle cx="{_n(cx)}" cy="{_n(self.py(o))}" r="2" fill="none" stroke="{color}"/>')

    def legend(self, labels: Sequence[str]) -> None:
        for i, label in enumerate(labels):
            y = self.y0 + 12 + 14 * i
            x = self.x0 + 8
            color = PALETTE[i % len(PALETTE)]
            self.parts.append(f'<line x1="{_n(x)}" y1="{_n(y - 3)}" x2="{_n(x + 14)}" y2="{_n(y - 3)}" stroke="{color}" stroke-width="2"/>')
            self.parts.append(f'<text x="{_n(x + 18)}" y="{_n(y)}" font-size="10">{escape(label)}</text>')


def _pad(lim: tuple[float, float]) -> tuple[float, float]:
    lo, hi = float(lim[0]), float(lim[1])
    if hi > lo:
        return lo, hi
    span = abs(lo) * 0.05 or 1.0
    return lo - span, hi + span


def _extent(values, margin=0.05):
    lo, hi = min(values), max(values)
    span = hi - lo
    return (lo - margin * span, hi + margin * span) if span > 0 else (lo, hi)


def document(width: float, height: float, panels: Sequence[Panel]) -> str:
    body = "\n".join(part for panel in panels for part in panel.parts)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_n(width)}" height="{_n(height)}" '
        f'viewBox="0 0 {_n(width)} {_n(height)}" font-family="sans-serif">\n'
        f'<rect width="100%" height="100%" fill="#fff"/>\n{body}\n</svg>\n'
    )


def line_chart(
    categories: Sequence[str],
    series: Mapping[str, Sequence[float]],
    title: str,
    xlabel: str,
    ylabel: str,
    guides: Sequence[float] = (),
    ylim: Optional[tuple[float, float]] = None,
) -> str:
    """Series plotted against evenly spaced categorical x positions."""
    xs = list(range(len(categories)))
    all_y = [v for ys in series.values() for v in ys] + list(guides)
    panel = Panel(70, 30, 420, 260, (-0.5, len(xs) - 0.5), ylim or _extent(all_y), title, xlabel, ylabel)
    panel.axes(xticks=list(zip(xs, categories)))
    for g in guides:
        panel.hline(g, label=f"{g:g}")
    for i, (name, ys) in enumerate(series.items()):
        panel.polyline(xs, ys, PALETTE[i % len(PALETTE)])
    panel.legend(list(series))
    return document(520, 340, [panel])


def robustness_figure(
    parameter: str,
    values: Sequence[float],
    a_hat: Mapping[str, Sequence[float]],
    boxes: Mapping[str, Sequence[BoxplotSummary]],
    guides: Sequence[float] = (0.56, 0.64, 0.71),
) -> str:
    """A-measure against parameter value (left) and one boxplot panel per output."""
    outputs = list(a_hat)
    xlim = _extent(values, 0.08) if len(values) > 1 else (values[0] - 1, values[0] + 1)
    rows = max(1, len(outputs))
    height = 60 + rows * 230
    panels = []
    left = Panel(70, 30, 340, rows * 230 - 60, xlim, (0.0, 1.0), f"A-measure vs {parameter}", parameter, "A-measure")
    left.axes()
    left.hline(0.5, color="#000", dash="1 2")
    for g in guides:
        left.hline(g, label=f"{g:g}")
        left.hline(1.0 - g)
    for i, o in enumerate(outputs):
        left.polyline(values, a_hat[o], PALETTE[i % len(PALETTE)])
    left.legend(outputs)
    panels.append(left)
    spacing = (xlim[1] - xlim[0]) / max(len(values), 1)
    for i, o in enumerate(outputs):
        bs = boxes[o]
        ys = [v for b in bs for v in (b.whisker_low, b.whisker_high, *b.outliers)]
        panel = Panel(490, 30 + i * 230, 340, 170, xlim, _extent(ys), f"{o} vs {parameter}", parameter, o)
        panel.axes()
        half = max(2.0, 0.3 * spacing / (xlim[1] - xlim[0]) * panel.w)
        for v, b in zip(values, bs):
            panel.box(v, half, b, PALETTE[i % len(PALETTE)])
        panels.append(panel)
    return document(860, height, panels)


def scatter_chart(xs: Sequence[float], ys: Sequence[float], title: str, xlabel: str, ylabel: str) -> str:
    panel = Panel(70, 30, 420, 260, _extent(xs), _extent(ys), title, xlabel, ylabel)
    panel.axes()
    panel.points(xs, ys, PALETTE[0])
    return document(520, 340, [panel])
