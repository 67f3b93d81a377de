"""Canonical SVG 1.1 emission of a display list.

Byte-determinism contract: fixed attribute order, numbers at six
significant digits without exponents, mm user units, y flipped once from
the paper frame into SVG screen space.
"""

from __future__ import annotations

import math
from decimal import Decimal
from typing import Iterable, Optional

from ..model import Color, Linetype
from .displaylist import (
    ArcPrim,
    CirclePrim,
    DotPrim,
    HatchPrim,
    LinePrim,
    PolylinePrim,
    TextPrim,
)
from .font import measure_text

MARGIN_MM = 5.0

COLOR_HEX = {
    Color.BLACK: "#000000",
    Color.RED: "#d40000",
    Color.GREEN: "#008000",
    Color.BLUE: "#0000d4",
    Color.CYAN: "#008080",
    Color.MAGENTA: "#a000a0",
    Color.YELLOW: "#c8a000",
    Color.WHITE: "#ffffff",
}

DASH = {
    Linetype.SOLID: None,
    Linetype.THICK_SOLID: None,
    Linetype.DASHED: "4 2",
    Linetype.DASH_DOT: "8 2 1 2",
}


def fmt(x: float) -> str:
    """Six significant digits, positional notation, no negative zero."""
    v = float(x)
    if v == 0.0:
        return "0"
    s = f"{v:.6g}"
    if "e" in s or "E" in s:
        s = format(Decimal(s), "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return s if s not in ("-0", "") else "0"


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
    )


def _prim_bbox(prim):
    if isinstance(prim, LinePrim):
        return (min(prim.x1, prim.x2), min(prim.y1, prim.y2), max(prim.x1, prim.x2), max(prim.y1, prim.y2))
    if isinstance(prim, PolylinePrim):
        xs = [p[0] for p in prim.points]
        ys = [p[1] for p in prim.points]
        return (min(xs), min(ys), max(xs), max(ys))
    if isinstance(prim, ArcPrim):
        return (prim.cx - prim.r, prim.cy - prim.r, prim.cx + prim.r, prim.cy + prim.r)
    if isinstance(prim, CirclePrim):
        return (prim.cx - prim.r, prim.cy - prim.r, prim.cx + prim.r, prim.cy + prim.r)
    if isinstance(prim, DotPrim):
        r = prim.d / 2.0
        return (prim.cx - r, prim.cy - r, prim.cx + r, prim.cy + r)
    if isinstance(prim, HatchPrim):
        xs = [p[0] for p in prim.ring]
        ys = [p[1] for p in prim.ring]
        return (min(xs), min(ys), max(xs), max(ys))
    if isinstance(prim, TextPrim):
        w, h = measure_text(prim.content, prim.font)
        return (prim.x, prim.y, prim.x + w, prim.y + h)
    raise TypeError(f"unknown primitive {type(prim).__name__}")


def _stroke_attrs(color: Color, linetype: Linetype, width: float) -> str:
    out = f' stroke="{COLOR_HEX[color]}" stroke-width="{fmt(width)}"'
    dash = DASH[linetype]
    if dash is not None:
        out += f' stroke-dasharray="{dash}"'
    return out


def _hatch_segments(ring, spacing: float, angle: float):
    """Family of parallel segments clipped to a simple polygon ring."""
    ca, sa = math.cos(angle), math.sin(angle)
    # project ring onto the normal of the hatch direction
    n = (-sa, ca)
    ds = [p[0] * n[0] + p[1] * n[1] for p in ring]
    d_min, d_max = min(ds), max(ds)
    us = [p[0] * ca + p[1] * sa for p in ring]
    u_min, u_max = min(us) - 1.0, max(us) + 1.0
    segments = []
    k = math.floor(d_min / spacing) + 1
    while k * spacing < d_max:
        d = k * spacing
        k += 1
        # hatch line: points p with dot(p, n) == d, param u along (ca, sa)
        hits = []
        m = len(ring)
        for i in range(m):
            x1, y1 = ring[i]
            x2, y2 = ring[(i + 1) % m]
            f1 = x1 * n[0] + y1 * n[1] - d
            f2 = x2 * n[0] + y2 * n[1] - d
            if (f1 > 0) == (f2 > 0) or f1 == f2:
                continue
            t = f1 / (f1 - f2)
            px, py = x1 + (x2 - x1) * t, y1 + (y2 - y1) * t
            hits.append(px * ca + py * sa)
        hits.sort()
        for a, b in zip(hits[0::2], hits[1::2]):
            if b - a > 1e-9:
                ax, ay = a * ca + d * n[0], a * sa + d * n[1]
                bx, by = b * ca + d * n[0], b * sa + d * n[1]
                if u_min <= a <= u_max:
                    segments.append((ax, ay, bx, by))
    return segments


def emit_svg(display_list: Iterable, meta: Optional[dict] = None) -> bytes:
    """Canonical SVG bytes for a display list; same input, same bytes."""
    prims = list(display_list)
    if prims:
        boxes = [_prim_bbox(p) for p in prims]
        min_x = min(b[0] for b in boxes) - MARGIN_MM
        min_y = min(b[1] for b in boxes) - MARGIN_MM
        max_x = max(b[2] for b in boxes) + MARGIN_MM
        max_y = max(b[3] for b in boxes) + MARGIN_MM
    else:
        min_x, min_y, max_x, max_y = 0.0, 0.0, 10.0, 10.0
    width = max_x - min_x
    height = max_y - min_y

    def X(x: float) -> str:
        return fmt(x - min_x)

    def Y(y: float) -> str:
        return fmt(max_y - y)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{fmt(width)}mm" '
        f'height="{fmt(height)}mm" viewBox="0 0 {fmt(width)} {fmt(height)}">',
    ]
    title = (meta or {}).get("title")
    if title:
        lines.append(f"<title>{_escape(title)}</title>")

    for prim in prims:
        if isinstance(prim, LinePrim):
            lines.append(
                f'<line x1="{X(prim.x1)}" y1="{Y(prim.y1)}" x2="{X(prim.x2)}" y2="{Y(prim.y2)}"'
                f' fill="none"{_stroke_attrs(prim.color, prim.linetype, prim.width)}/>'
            )
        elif isinstance(prim, PolylinePrim):
            pts = " ".join(f"{X(x)},{Y(y)}" for x, y in prim.points)
            tag = "polygon" if prim.closed else "polyline"
            lines.append(
                f'<{tag} points="{pts}" fill="none"'
                f"{_stroke_attrs(prim.color, prim.linetype, prim.width)}/>"
            )
        elif isinstance(prim, ArcPrim):
            if abs(abs(prim.sweep) - 2.0 * math.pi) < 1e-12:
                lines.append(
                    f'<circle cx="{X(prim.cx)}" cy="{Y(prim.cy)}" r="{fmt(prim.r)}" fill="none"'
                    f"{_stroke_attrs(prim.color, prim.linetype, prim.width)}/>"
                )
            else:
                x0 = prim.cx + prim.r * math.cos(prim.a0)
                y0 = prim.cy + prim.r * math.sin(prim.a0)
                x1 = prim.cx + prim.r * math.cos(prim.a0 + prim.sweep)
                y1 = prim.cy + prim.r * math.sin(prim.a0 + prim.sweep)
                large = 1 if abs(prim.sweep) > math.pi else 0
                sweep_flag = 0 if prim.sweep > 0 else 1
                d = (
                    f"M {X(x0)} {Y(y0)} A {fmt(prim.r)} {fmt(prim.r)} 0 "
                    f"{large} {sweep_flag} {X(x1)} {Y(y1)}"
                )
                lines.append(
                    f'<path d="{d}" fill="none"'
                    f"{_stroke_attrs(prim.color, prim.linetype, prim.width)}/>"
                )
        elif isinstance(prim, CirclePrim):
            lines.append(
                f'<circle cx="{X(prim.cx)}" cy="{Y(prim.cy)}" r="{fmt(prim.r)}" fill="none"'
                f"{_stroke_attrs(prim.color, prim.linetype, prim.width)}/>"
            )
        elif isinstance(prim, DotPrim):
            lines.append(
                f'<circle cx="{X(prim.cx)}" cy="{Y(prim.cy)}" r="{fmt(prim.d / 2.0)}"'
                f' fill="{COLOR_HEX[prim.color]}" stroke="none"/>'
            )
        elif isinstance(prim, HatchPrim):
            parts = []
            for angle in prim.angles:
                for ax, ay, bx, by in _hatch_segments(prim.ring, prim.spacing, angle):
                    parts.append(f"M {X(ax)} {Y(ay)} L {X(bx)} {Y(by)}")
            if parts:
                lines.append(
                    f'<path d="{" ".join(parts)}" fill="none"'
                    f"{_stroke_attrs(prim.color, Linetype.SOLID, prim.width)}/>"
                )
        elif isinstance(prim, TextPrim):
            w, _ = measure_text(prim.content, prim.font)
            extras = ""
            if prim.font.compression != 1.0 and w > 0:
                extras += f' textLength="{fmt(w)}" lengthAdjust="spacingAndGlyphs"'
            if prim.font.slant != 0.0:
                deg = math.degrees(prim.font.slant)
                extras += f' transform="skewX({fmt(-deg)})"'
            lines.append(
                f'<text x="{X(prim.x)}" y="{Y(prim.y)}" font-family="sans-serif"'
                f' font-size="{fmt(prim.font.size)}" fill="{COLOR_HEX[prim.color]}"'
                f"{extras}>{_escape(prim.content)}</text>"
            )
        else:
            raise TypeError(f"unknown primitive {type(prim).__name__}")

    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("utf-8")
