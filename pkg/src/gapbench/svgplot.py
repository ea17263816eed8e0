"""Minimal SVG line/scatter charts; enough for gap curves and log-log scaling plots."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from html import escape
from pathlib import Path
from typing import Sequence

WIDTH, HEIGHT = 640, 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 72, 20, 36, 56
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")


@dataclass
class Series:
    xs: Sequence[float]
    ys: Sequence[float]
    label: str = ""
    style: str = "line"  # line | points | both


@dataclass
class Chart:
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    logx: bool = False
    logy: bool = False
    series: list[Series] = field(default_factory=list)

    def add(self, xs, ys, label: str = "", style: str = "line") -> "Chart":
        self.series.append(Series(list(xs), list(ys), label, style))
        return self

    def render(self, comment: str = "") -> str:
        return render(self, comment)

    def save(self, path: str | Path, comment: str = "") -> None:
        Path(path).write_text(render(self, comment))


def _fmt(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.0e}"
    return f"{v:.4g}"


def _ticks(lo: float, hi: float, log: bool) -> list[float]:
    if log:
        a, b = math.floor(lo), math.ceil(hi)
        return [float(e) for e in range(a, b + 1)]
    span = hi - lo or 1.0
    step = 10 ** math.floor(math.log10(span / 5))
    for mult in (1, 2, 5, 10):
        if span / (step * mult) <= 6:
            step *= mult
            break
    start = math.ceil(lo / step) * step
    out = []
    t = start
    while t <= hi + 1e-12 * span:
        out.append(round(t, 12))
        t += step
    return out


def render(chart: Chart, comment: str = "") -> str:
    tx = (lambda v: math.log10(v)) if chart.logx else float
    ty = (lambda v: math.log10(v)) if chart.logy else float
    pts = []
    for s in chart.series:
        for x, y in zip(s.xs, s.ys):
            if (chart.logx and x <= 0) or (chart.logy and y <= 0):
                continue
            if math.isfinite(x) and math.isfinite(y):
                pts.append((tx(x), ty(y)))
    if not pts:
        pts = [(0.0, 0.0), (1.0, 1.0)]
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(v: float) -> float:
        return MARGIN_L + (v - x0) / (x1 - x0) * pw

    def py(v: float) -> float:
        return MARGIN_T + (1 - (v - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">'
    ]
    if comment:
        out.append(f"<!-- {comment.replace('--', '- -')} -->")
    out.append(f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>')
    out.append(
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>'
    )
    for t in _ticks(x0, x1, chart.logx):
        if x0 <= t <= x1:
            X = px(t)
            label = _fmt(10**t) if chart.logx else _fmt(t)
            out.append(f'<line x1="{X:.2f}" y1="{MARGIN_T + ph}" x2="{X:.2f}" y2="{MARGIN_T + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{X:.2f}" y="{MARGIN_T + ph + 18}" text-anchor="middle">{label}</text>')
    for t in _ticks(y0, y1, chart.logy):
        if y0 <= t <= y1:
            Y = py(t)
            label = _fmt(10**t) if chart.logy else _fmt(t)
            out.append(f'<line x1="{MARGIN_L - 5}" y1="{Y:.2f}" x2="{MARGIN_L}" y2="{Y:.2f}" stroke="black"/>')
            out.append(f'<text x="{MARGIN_L - 8}" y="{Y + 4:.2f}" text-anchor="end">{label}</text>')
    if chart.title:
        out.append(f'<text x="{WIDTH / 2}" y="22" text-anchor="middle" font-size="14">{escape(chart.title)}</text>')
    if chart.xlabel:
        out.append(f'<text x="{MARGIN_L + pw / 2}" y="{HEIGHT - 14}" text-anchor="middle">{escape(chart.xlabel)}</text>')
    if chart.ylabel:
        cy = MARGIN_T + ph / 2
        out.append(
            f'<text x="18" y="{cy}" text-anchor="middle" transform="rotate(-90 18 {cy})">{escape(chart.ylabel)}</text>'
        )
    for k, s in enumerate(chart.series):
        color = PALETTE[k % len(PALETTE)]
        xy = [
            (px(tx(x)), py(ty(y)))
            for x, y in zip(s.xs, s.ys)
            if not ((chart.logx and x <= 0) or (chart.logy and y <= 0)) and math.isfinite(x) and math.isfinite(y)
        ]
        if s.style in ("line", "both") and len(xy) > 1:
            path = " ".join(f"{X:.2f},{Y:.2f}" for X, Y in xy)
            out.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        if s.style in ("points", "both"):
            out.extend(f'<circle cx="{X:.2f}" cy="{Y:.2f}" r="3" fill="{color}"/>' for X, Y in xy)
        if s.label:
            ly = MARGIN_T + 16 + 16 * k
            out.append(f'<rect x="{MARGIN_L + 10}" y="{ly - 9}" width="10" height="10" fill="{color}"/>')
            out.append(f'<text x="{MARGIN_L + 26}" y="{ly}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
