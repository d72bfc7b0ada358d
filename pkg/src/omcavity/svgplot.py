"""Hand-emitted SVG line plots.

No plotting library: the output is a standalone SVG 1.1 document with a
fixed 800x600 viewBox, fixed margins and 6 ticks per axis, so identical
inputs produce byte-identical files.  Unstable branches are drawn dashed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

WIDTH, HEIGHT = 800, 600
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 80, 30, 40, 60
N_TICKS = 6

PALETTE = ("#1f4e8c", "#c23b22", "#2e7d32", "#7b1fa2", "#e65100", "#00695c")


@dataclass(frozen=True)
class Series:
    x: tuple
    y: tuple
    label: str = ""
    dashed: bool = False
    color: str | None = None


def _fmt(v: float) -> str:
    s = f"{v:.6g}"
    return "0" if s == "-0" else s


def _ticks(lo: float, hi: float, n: int = N_TICKS):
    if hi == lo:
        hi = lo + 1.0
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def _finite(series):
    pts = []
    for s in series:
        for xv, yv in zip(s.x, s.y):
            if xv == xv and yv == yv and abs(xv) != float("inf") and abs(yv) != float("inf"):
                pts.append((xv, yv))
    return pts


def render_svg(series, x_label: str = "", y_label: str = "",
               title: str = "") -> str:
    """Render data series to a standalone SVG document string."""
    series = list(series)
    pts = _finite(series)
    if pts:
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        x_lo, x_hi = min(xs), max(xs)
        y_lo, y_hi = min(ys), max(ys)
        if y_hi == y_lo:
            y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
        if x_hi == x_lo:
            x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
        pad = 0.04 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - pad, y_hi + pad
    else:
        x_lo, x_hi, y_lo, y_hi = 0.0, 1.0, 0.0, 1.0

    px0, px1 = MARGIN_L, WIDTH - MARGIN_R
    py0, py1 = HEIGHT - MARGIN_B, MARGIN_T

    def sx(v):
        return px0 + (v - x_lo) / (x_hi - x_lo) * (px1 - px0)

    def sy(v):
        return py0 + (v - y_lo) / (y_hi - y_lo) * (py1 - py0)

    out = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
               f'viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">')
    out.append(f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>')
    out.append(f'<rect x="{px0}" y="{py1}" width="{px1 - px0}" '
               f'height="{py0 - py1}" fill="none" stroke="#000000"/>')

    for tv in _ticks(x_lo, x_hi):
        xp = _fmt(sx(tv))
        out.append(f'<line x1="{xp}" y1="{py0}" x2="{xp}" y2="{py0 + 6}" stroke="#000000"/>')
        out.append(f'<text x="{xp}" y="{py0 + 22}" font-size="13" font-family="sans-serif" '
                   f'text-anchor="middle">{_fmt(tv)}</text>')
    for tv in _ticks(y_lo, y_hi):
        yp = _fmt(sy(tv))
        out.append(f'<line x1="{px0 - 6}" y1="{yp}" x2="{px0}" y2="{yp}" stroke="#000000"/>')
        out.append(f'<text x="{px0 - 10}" y="{yp}" font-size="13" font-family="sans-serif" '
                   f'text-anchor="end" dominant-baseline="middle">{_fmt(tv)}</text>')

    if x_label:
        out.append(f'<text x="{(px0 + px1) / 2:.6g}" y="{HEIGHT - 16}" font-size="15" '
                   f'font-family="sans-serif" text-anchor="middle">{_escape(x_label)}</text>')
    if y_label:
        cx, cy = 22, (py0 + py1) / 2
        out.append(f'<text x="{cx}" y="{cy:.6g}" font-size="15" font-family="sans-serif" '
                   f'text-anchor="middle" transform="rotate(-90 {cx} {cy:.6g})">'
                   f'{_escape(y_label)}</text>')
    if title:
        out.append(f'<text x="{(px0 + px1) / 2:.6g}" y="{MARGIN_T - 14}" font-size="16" '
                   f'font-family="sans-serif" text-anchor="middle">{_escape(title)}</text>')

    for i, s in enumerate(series):
        coords = [(sx(xv), sy(yv)) for xv, yv in zip(s.x, s.y)
                  if xv == xv and yv == yv]
        if not coords:
            continue
        color = s.color or PALETTE[i % len(PALETTE)]
        dash = ' stroke-dasharray="6 4"' if s.dashed else ""
        points = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in coords)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5"'
                   f'{dash} points="{points}"/>')
        if s.label:
            ly = MARGIN_T + 18 + 18 * i
            out.append(f'<line x1="{px1 - 120}" y1="{ly - 4}" x2="{px1 - 90}" '
                       f'y2="{ly - 4}" stroke="{color}" stroke-width="1.5"{dash}/>')
            out.append(f'<text x="{px1 - 84}" y="{ly}" font-size="13" '
                       f'font-family="sans-serif">{_escape(s.label)}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return (s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))
