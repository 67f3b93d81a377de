"""Protection-height surface over the plan.

A Scene compiles a terminal set into primitive zone contributors (cones,
tents, prisms, pair saddles, double-wire strips). The same sources drive
both height evaluation here and the level-cut figures in sections.py, so
the two can never disagree about parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..model import TOL, DoubleWire, Mesh, Rod, Wire
from .formulas import (
    ROD,
    WIRE,
    FormulaTable,
    cone_params,
    default_table,
    effective_wire_height,
    pair_params,
)

#: Saddle-skirt bisection stops below this height interval, mm.
BISECT_TOL_MM = 0.1
BISECT_MAX_ITER = 60


@dataclass(frozen=True, slots=True)
class ConeSource:
    cx: float
    cy: float
    h0: float
    r0: float


@dataclass(frozen=True, slots=True)
class TentSource:
    x1: float
    y1: float
    x2: float
    y2: float
    h0: float
    r0: float


@dataclass(frozen=True, slots=True)
class PrismSource:
    ring: tuple
    z: float


@dataclass(frozen=True, slots=True)
class SaddleSource:
    """Common zone of an equal rod pair; rod 1 at (ax, ay), unit axis (ux, uy)."""

    ax: float
    ay: float
    ux: float
    uy: float
    L: float
    h0: float
    r0: float
    hc: float
    rc: float


@dataclass(frozen=True, slots=True)
class StripSource:
    """Inner region of a double wire: rectangle between the two wire lines.

    Cross profile is the circular arc through (0, h0), (L/2, hc), (L, h0);
    k/K are its center height and radius (k may be None when hc == h0 and
    the profile is flat).
    """

    x1: float
    y1: float
    tx: float
    ty: float
    span: float
    nx: float
    ny: float
    L: float
    h0: float
    hc: float
    k: Optional[float]
    K: Optional[float]


def _waist_w(u, L, rx, rcx):
    """Half-width of the pair waist at axis position u (arrays ok).

    The boundary is the circular arc through (0, rx), (L/2, rcx), (L, rx);
    a collinear triple degenerates to the straight segment w == rx.
    """
    rx = np.asarray(rx, dtype=float)
    rcx = np.asarray(rcx, dtype=float)
    u = np.asarray(u, dtype=float)
    diff = rx - rcx
    degenerate = np.abs(diff) <= 1e-9 * np.maximum(np.abs(rx), 1.0)
    safe = np.where(degenerate, 1.0, diff)
    c = (0.25 * L * L + rx * rx - rcx * rcx) / (2.0 * safe)
    R = c - rcx
    x = u - 0.5 * L
    under = np.maximum(R * R - x * x, 0.0)
    w = c - np.sqrt(under)
    return np.where(degenerate, rx, w)


def strip_arc_geometry(h0: float, hc: float, L: float):
    """Center height k and radius K of the cross-profile arc, or (None, None) flat."""
    if h0 - hc <= 1e-9 * max(h0, 1.0):
        return None, None
    k = (0.25 * L * L + h0 * h0 - hc * hc) / (2.0 * (h0 - hc))
    return k, k - hc


def rods_pair_qualifies(h_a: float, h_b: float) -> bool:
    return abs(h_a - h_b) <= TOL


class Scene:
    """Compiled zone contributors for one terminal set and zone type."""

    __slots__ = ("cones", "tents", "prisms", "saddles", "strips", "top")

    def __init__(self, cones, tents, prisms, saddles, strips, top):
        self.cones = cones
        self.tents = tents
        self.prisms = prisms
        self.saddles = saddles
        self.strips = strips
        self.top = top

    def heights(self, x, y) -> np.ndarray:
        """Protection height at plan points; broadcasts over arrays."""
        xa = np.asarray(x, dtype=float)
        ya = np.asarray(y, dtype=float)
        shape = np.broadcast(xa, ya).shape
        xf = np.ascontiguousarray(np.broadcast_to(xa, shape).reshape(-1))
        yf = np.ascontiguousarray(np.broadcast_to(ya, shape).reshape(-1))
        out = np.zeros(xf.shape, dtype=float)
        for c in self.cones:
            d = np.hypot(xf - c.cx, yf - c.cy)
            np.maximum(out, np.where(d < c.r0, c.h0 * (1.0 - d / c.r0), 0.0), out=out)
        for t in self.tents:
            d = _dist_to_segment(xf, yf, t.x1, t.y1, t.x2, t.y2)
            np.maximum(out, np.where(d < t.r0, t.h0 * (1.0 - d / t.r0), 0.0), out=out)
        for p in self.prisms:
            inside = _point_in_ring(xf, yf, p.ring)
            np.maximum(out, np.where(inside, p.z, 0.0), out=out)
        if self.saddles:
            _saddle_heights_batch(self.saddles, xf, yf, out)
        for s in self.strips:
            np.maximum(out, _strip_height(s, xf, yf), out=out)
        return out.reshape(shape)

    def height_at(self, x: float, y: float) -> float:
        return float(self.heights(float(x), float(y)))


def _dist_to_segment(x, y, x1, y1, x2, y2):
    dx = x2 - x1
    dy = y2 - y1
    den = dx * dx + dy * dy
    t = ((x - x1) * dx + (y - y1) * dy) / den
    t = np.clip(t, 0.0, 1.0)
    return np.hypot(x - (x1 + t * dx), y - (y1 + t * dy))


def _point_in_ring(x, y, ring):
    inside = np.zeros(x.shape, dtype=bool)
    n = len(ring)
    j = n - 1
    for i in range(n):
        xi, yi = ring[i]
        xj, yj = ring[j]
        if yi != yj:
            cond = ((yi > y) != (yj > y)) & (x < (xj - xi) * (y - yi) / (yj - yi) + xi)
            inside ^= cond
        j = i
    return inside


def _saddle_heights_batch(saddles, x, y, out):
    """Saddle surfaces for all pairs in one 2-D pass: hc on core plateaus,
    inverted waist membership (one batched bisection) in the skirts."""
    ax = np.array([s.ax for s in saddles])[:, None]
    ay = np.array([s.ay for s in saddles])[:, None]
    ux = np.array([s.ux for s in saddles])[:, None]
    uy = np.array([s.uy for s in saddles])[:, None]
    L = np.array([s.L for s in saddles])[:, None]
    h0 = np.array([s.h0 for s in saddles])[:, None]
    r0 = np.array([s.r0 for s in saddles])[:, None]
    hc = np.array([s.hc for s in saddles])[:, None]
    rc = np.array([s.rc for s in saddles])[:, None]

    dx = x[None, :] - ax
    dy = y[None, :] - ay
    u = dx * ux + dy * uy
    av = np.abs(dy * ux - dx * uy)
    member0 = (u >= 0.0) & (u <= L) & (av <= r0)
    if not member0.any():
        return
    member0 &= av <= _waist_w(u, L, r0, rc)
    if not member0.any():
        return
    plateau = member0 & (av <= _waist_w(u, L, r0 * (1.0 - hc / h0), np.zeros_like(hc)))
    if plateau.any():
        np.maximum(out, np.max(np.where(plateau, hc, 0.0), axis=0), out=out)

    rows, cols = np.nonzero(member0 & ~plateau)
    if rows.size == 0:
        return
    ku = u[rows, cols]
    kv = av[rows, cols]
    Lr = L[rows, 0]
    h0r = h0[rows, 0]
    r0r = r0[rows, 0]
    hcr = hc[rows, 0]
    rcr = rc[rows, 0]
    lo = np.zeros_like(ku)
    hi = hcr.copy()
    for _ in range(BISECT_MAX_ITER):
        if float(np.max(hi - lo)) < BISECT_TOL_MM:
            break
        mid = 0.5 * (lo + hi)
        rx = r0r * (1.0 - mid / h0r)
        rcx = rcr * (1.0 - mid / hcr)
        inside = kv <= _waist_w(ku, Lr, rx, rcx)
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    np.maximum.at(out, cols, lo)


def _strip_height(s: StripSource, x, y):
    dx = x - s.x1
    dy = y - s.y1
    t = dx * s.tx + dy * s.ty
    w = dx * s.nx + dy * s.ny
    mask = (t >= 0.0) & (t <= s.span) & (w >= 0.0) & (w <= s.L)
    if s.k is None:
        z = np.full(x.shape, s.hc, dtype=float)
    else:
        under = np.maximum(s.K * s.K - (w - 0.5 * s.L) ** 2, 0.0)
        z = s.k - np.sqrt(under)
    return np.where(mask, z, 0.0)


def terminal_top(t) -> float:
    """Overall top elevation of a terminal, mm."""
    c = t.construction
    if isinstance(c, Rod):
        return c.apex.z
    if isinstance(c, Mesh):
        return c.ring[0].z
    if isinstance(c, DoubleWire):
        return max(t.height, c.height2)
    return t.height


def _wire_geometry(c) -> tuple:
    span = math.hypot(c.support2.x - c.support1.x, c.support2.y - c.support1.y)
    return span


def compile_scene(terminals: Sequence, zone, table: Optional[FormulaTable] = None) -> Scene:
    table = table or default_table()
    cones = []
    tents = []
    prisms = []
    saddles = []
    strips = []
    top = 0.0
    rods = []

    for t in terminals:
        c = t.construction
        top = max(top, terminal_top(t))
        if isinstance(c, Rod):
            h = c.apex.z
            cp = cone_params(h, zone, ROD, table)
            cones.append(ConeSource(cx=c.apex.x, cy=c.apex.y, h0=cp.h0, r0=cp.r0))
            rods.append((c.apex.x, c.apex.y, h))
        elif isinstance(c, Mesh):
            prisms.append(PrismSource(ring=tuple((p.x, p.y) for p in c.ring), z=c.ring[0].z))
        elif isinstance(c, Wire):
            span = _wire_geometry(c)
            h_eff = effective_wire_height(t.height, span, table)
            if h_eff > 0.0:
                cp = cone_params(h_eff, zone, WIRE, table)
                tents.append(
                    TentSource(c.support1.x, c.support1.y, c.support2.x, c.support2.y, cp.h0, cp.r0)
                )
        elif isinstance(c, DoubleWire):
            span = _wire_geometry(c)
            dxw = (c.support2.x - c.support1.x) / span
            dyw = (c.support2.y - c.support1.y) / span
            nx, ny = -dyw, dxw
            sign = 1.0 if c.offset2 >= 0 else -1.0
            off = abs(c.offset2)
            w2x1 = c.support1.x + sign * nx * off
            w2y1 = c.support1.y + sign * ny * off
            w2x2 = c.support2.x + sign * nx * off
            w2y2 = c.support2.y + sign * ny * off
            h1 = effective_wire_height(t.height, span, table)
            h2 = effective_wire_height(c.height2, span, table)
            if h1 > 0.0:
                cp1 = cone_params(h1, zone, WIRE, table)
                tents.append(TentSource(c.support1.x, c.support1.y, c.support2.x, c.support2.y, cp1.h0, cp1.r0))
            if h2 > 0.0:
                cp2 = cone_params(h2, zone, WIRE, table)
                tents.append(TentSource(w2x1, w2y1, w2x2, w2y2, cp2.h0, cp2.r0))
            if h1 > 0.0 and abs(t.height - c.height2) <= TOL:
                pp = pair_params(h1, off, zone, WIRE, table)
                if pp.hc > 0.0:
                    cp1 = cone_params(h1, zone, WIRE, table)
                    k, K = strip_arc_geometry(cp1.h0, pp.hc, off)
                    strips.append(
                        StripSource(
                            x1=c.support1.x,
                            y1=c.support1.y,
                            tx=dxw,
                            ty=dyw,
                            span=span,
                            nx=sign * nx,
                            ny=sign * ny,
                            L=off,
                            h0=cp1.h0,
                            hc=pp.hc,
                            k=k,
                            K=K,
                        )
                    )

    for i in range(len(rods)):
        for j in range(i + 1, len(rods)):
            ax, ay, ha = rods[i]
            bx, by, hb = rods[j]
            if not rods_pair_qualifies(ha, hb):
                continue
            L = math.hypot(bx - ax, by - ay)
            if L <= TOL:
                continue
            pp = pair_params(ha, L, zone, ROD, table)
            if pp.hc <= 0.0:
                continue
            cp = cone_params(ha, zone, ROD, table)
            saddles.append(
                SaddleSource(
                    ax=ax,
                    ay=ay,
                    ux=(bx - ax) / L,
                    uy=(by - ay) / L,
                    L=L,
                    h0=cp.h0,
                    r0=cp.r0,
                    hc=pp.hc,
                    rc=pp.rc,
                )
            )

    return Scene(tuple(cones), tuple(tents), tuple(prisms), tuple(saddles), tuple(strips), top)


def height_at(terminals: Sequence, zone, x: float, y: float, table: Optional[FormulaTable] = None) -> float:
    """Height of the full protection zone over plan point (x, y), mm."""
    return compile_scene(terminals, zone, table).height_at(x, y)
