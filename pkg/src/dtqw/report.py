"""Deterministic CSV formatting and a minimal self-contained SVG line chart."""

from __future__ import annotations

import csv
import io
import math
from xml.sax.saxutils import escape


def fmt(x) -> str:
    """``%.12g`` for floats, ``str`` for ints, empty for None."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return "%.12g" % x


def write_csv(schema: str, header: list[str], rows, comments=(), trailer=()) -> str:
    buf = io.StringIO()
    buf.write(f"# schema: {schema}\n")
    for key, value in comments:
        buf.write(f"# {key}: {fmt(value) if not isinstance(value, str) else value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    for key, value in trailer:
        buf.write(f"# {key}: {fmt(value) if not isinstance(value, str) else value}\n")
    return buf.getvalue()


def line_chart_svg(xs, ys, title: str, xlabel: str, ylabel: str, log_y: bool = True,
                   width: int = 640, height: int = 400) -> str:
    """Polyline chart with markers; ``log_y`` plots ``log10(y)`` (y must be positive)."""
    pts = [(float(x), float(y)) for x, y in zip(xs, ys) if y is not None and (not log_y or y > 0)]
    margin_l, margin_r, margin_t, margin_b = 70, 20, 40, 50
    pw, ph = width - margin_l - margin_r, height - margin_t - margin_b
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14">{escape(title)}</text>',
    ]
    if pts:
        tx = [p[0] for p in pts]
        ty = [math.log10(p[1]) if log_y else p[1] for p in pts]
        x0, x1 = min(tx), max(tx)
        y0, y1 = min(ty), max(ty)
        if x1 == x0:
            x0, x1 = x0 - 1, x1 + 1
        if y1 == y0:
            y0, y1 = y0 - 1, y1 + 1
        if log_y:
            y0, y1 = math.floor(y0), math.ceil(y1)

        def sx(x):
            return margin_l + (x - x0) / (x1 - x0) * pw

        def sy(y):
            return margin_t + ph - (y - y0) / (y1 - y0) * ph

        parts.append(f'<rect x="{margin_l}" y="{margin_t}" width="{pw}" height="{ph}" '
                     'fill="none" stroke="black"/>')
        ticks = range(int(y0), int(y1) + 1) if log_y else [y0 + i * (y1 - y0) / 4 for i in range(5)]
        for t in ticks:
            label = f"1e{t}" if log_y else fmt(t)
            parts.append(f'<line x1="{margin_l - 4}" y1="{sy(t):.2f}" x2="{margin_l}" y2="{sy(t):.2f}" stroke="black"/>')
            parts.append(f'<text x="{margin_l - 6}" y="{sy(t) + 4:.2f}" text-anchor="end" '
                         f'font-family="sans-serif" font-size="11">{label}</text>')
        for x in tx:
            parts.append(f'<text x="{sx(x):.2f}" y="{margin_t + ph + 16}" text-anchor="middle" '
                         f'font-family="sans-serif" font-size="11">{fmt(x)}</text>')
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(tx, ty))
        parts.append(f'<polyline points="{coords}" fill="none" stroke="#1f77b4" stroke-width="2"/>')
        for x, y in zip(tx, ty):
            parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="#1f77b4"/>')
    parts.append(f'<text x="{margin_l + pw / 2:.1f}" y="{height - 12}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="12">{escape(xlabel)}</text>')
    parts.append(f'<text x="16" y="{margin_t + ph / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
                 f'font-size="12" transform="rotate(-90 16 {margin_t + ph / 2:.1f})">{escape(ylabel)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
