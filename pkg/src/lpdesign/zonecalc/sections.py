"""Horizontal zone sections, vertical profiles and the relief stack."""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from ..errors import GeometryError, NoTerminalsError
from ..model import TOL
from .field import Scene, compile_scene
from .formulas import FormulaTable
from .geometry import (
    Contour,
    LevelFigure,
    circle_figure,
    merge_figures,
    polygon_figure,
    rect_figure,
    stadium_figure,
    waist_figure,
)

#: Number of relief steps (5% of the height range each).
RELIEF_STEPS = 20

#: Uniform profile sampling step cap, mm.
PROFILE_MAX_STEP = 100.0
PROFILE_BASE_SAMPLES = 512


def level_figures(scene: Scene, hx: float) -> list[LevelFigure]:
    """Exact per-contributor figures of the section at level hx."""
    figs: list[LevelFigure] = []
    for c in scene.cones:
        if hx < c.h0:
            figs.append(circle_figure(c.cx, c.cy, c.r0 * (1.0 - hx / c.h0)))
    for t in scene.tents:
        if hx < t.h0:
            figs.append(stadium_figure(t.x1, t.y1, t.x2, t.y2, t.r0 * (1.0 - hx / t.h0)))
    for p in scene.prisms:
        if hx <= p.z:
            figs.append(polygon_figure(p.ring))
    for s in scene.saddles:
        if hx < s.hc:
            rx = s.r0 * (1.0 - hx / s.h0)
            rcx = s.rc * (1.0 - hx / s.hc)
            figs.append(waist_figure(s.ax, s.ay, s.ux, s.uy, s.L, rx, rcx))
    for s in scene.strips:
        ex = (s.x1 + s.tx * s.span, s.y1 + s.ty * s.span)
        if hx <= s.hc:
            lo, hi = 0.0, s.L
            bands = [(lo, hi)]
        elif s.k is not None and hx < s.h0:
            delta = math.sqrt(max(s.K * s.K - (s.k - hx) ** 2, 0.0))
            half = 0.5 * s.L
            if delta >= half - 1e-9:
                bands = []
            else:
                bands = [(0.0, half - delta), (half + delta, s.L)]
        else:
            bands = []
        for w0, w1 in bands:
            corners = (
                (s.x1 + s.nx * w0, s.y1 + s.ny * w0),
                (ex[0] + s.nx * w0, ex[1] + s.ny * w0),
                (ex[0] + s.nx * w1, ex[1] + s.ny * w1),
                (s.x1 + s.nx * w1, s.y1 + s.ny * w1),
            )
            figs.append(rect_figure(corners))
    return figs


def horizontal_section(
    terminals: Sequence, zone, hx: float, table: Optional[FormulaTable] = None
) -> list[Contour]:
    """Union outline of the protection zone at level hx (mm)."""
    if hx < 0.0:
        raise GeometryError("section level must be >= 0")
    scene = compile_scene(terminals, zone, table)
    return merge_figures(level_figures(scene, hx))


def relief(terminals: Sequence, zone, table: Optional[FormulaTable] = None):
    """Stacked horizontal sections from 0 to the tallest terminal.

    21 levels at 5% steps of the range; empty levels keep empty contour
    lists.
    """
    terminals = list(terminals)
    if not terminals:
        raise NoTerminalsError("relief needs at least one terminal")
    scene = compile_scene(terminals, zone, table)
    top = scene.top
    out = []
    for i in range(RELIEF_STEPS + 1):
        level = top * i / RELIEF_STEPS
        out.append((level, merge_figures(level_figures(scene, level))))
    return out


def _segment_events(scene: Scene, x1, y1, x2, y2, length) -> list[float]:
    """Exact parameter stations: apex projections, zero crossings, ring edges."""
    dx, dy = x2 - x1, y2 - y1
    ux, uy = dx / length, dy / length
    ts: list[float] = []

    def add(t):
        if -1e-9 <= t <= length + 1e-9:
            ts.append(min(max(t, 0.0), length))

    def circle_events(cx, cy, r):
        # |p(t) - c|^2 = r^2, p(t) = p1 + t*(u)
        bx, by = x1 - cx, y1 - cy
        b = 2.0 * (bx * ux + by * uy)
        c0 = bx * bx + by * by - r * r
        disc = b * b - 4.0 * c0
        add(-(bx * ux + by * uy))  # closest approach (cone apex station)
        if disc >= 0.0:
            sq = math.sqrt(disc)
            add((-b - sq) / 2.0)
            add((-b + sq) / 2.0)

    for c in scene.cones:
        circle_events(c.cx, c.cy, c.r0)
    for t in scene.tents:
        circle_events(t.x1, t.y1, t.r0)
        circle_events(t.x2, t.y2, t.r0)
        # crossings of the two band edge lines
        nxw = -(t.y2 - t.y1)
        nyw = t.x2 - t.x1
        nlen = math.hypot(nxw, nyw)
        nxw, nyw = nxw / nlen, nyw / nlen
        for side in (-1.0, 1.0):
            # line through wire shifted by side*r0: dot(p - q, n) = 0
            qx, qy = t.x1 + side * t.r0 * nxw, t.y1 + side * t.r0 * nyw
            den = ux * nxw + uy * nyw
            if abs(den) > 1e-12:
                add(((qx - x1) * nxw + (qy - y1) * nyw) / den)
    for p in scene.prisms:
        ring = p.ring
        n = len(ring)
        for i in range(n):
            ax, ay = ring[i]
            bx, by = ring[(i + 1) % n]
            ex, ey = bx - ax, by - ay
            den = ux * ey - uy * ex
            if abs(den) < 1e-12:
                continue
            t_par = ((ax - x1) * ey - (ay - y1) * ex) / den
            s_par = ((ax - x1) * uy - (ay - y1) * ux) / -den
            if -1e-9 <= s_par <= 1.0 + 1e-9:
                add(t_par)
    for s in scene.saddles:
        for px, py in ((s.ax, s.ay), (s.ax + s.ux * s.L, s.ay + s.uy * s.L)):
            add((px - x1) * ux + (py - y1) * uy)
    for s in scene.strips:
        for wline in (0.0, s.L):
            qx, qy = s.x1 + s.nx * wline, s.y1 + s.ny * wline
            den = ux * s.nx + uy * s.ny
            if abs(den) > 1e-12:
                add(((qx - x1) * s.nx + (qy - y1) * s.ny) / den)
    return ts


def vertical_profile(
    terminals: Sequence,
    zone,
    cut_p1,
    cut_p2,
    table: Optional[FormulaTable] = None,
) -> list[list[tuple[float, float]]]:
    """Zone boundary in the cutting plane as (t, z) polyline chains.

    t is the distance along the cut segment from its first point, z the
    protection height; spans of zero height are omitted.
    """
    x1, y1 = cut_p1
    x2, y2 = cut_p2
    length = math.hypot(x2 - x1, y2 - y1)
    if length <= TOL:
        raise GeometryError("cut segment must have nonzero length")
    scene = compile_scene(terminals, zone, table)

    step = min(length / PROFILE_BASE_SAMPLES, PROFILE_MAX_STEP)
    n = max(2, math.ceil(length / step))
    ts = set(float(length) * i / n for i in range(n + 1))
    ts.update(_segment_events(scene, x1, y1, x2, y2, length))
    stations = sorted(ts)

    ux, uy = (x2 - x1) / length, (y2 - y1) / length

    def eval_heights(tlist):
        arr = np.asarray(tlist, dtype=float)
        return scene.heights(x1 + arr * ux, y1 + arr * uy)

    t_arr = np.asarray(stations)
    z_arr = eval_heights(t_arr)

    # Corner refinement: densify where adjacent slopes differ by > 1%.
    for _ in range(3):
        dt = np.diff(t_arr)
        slopes = np.diff(z_arr) / dt
        wide = (dt[:-1] >= 1.0) & (dt[1:] >= 1.0)
        scale = np.maximum(np.maximum(np.abs(slopes[:-1]), np.abs(slopes[1:])), 1e-9)
        corner = wide & (np.abs(slopes[:-1] - slopes[1:]) > 0.01 * scale)
        idx = np.nonzero(corner)[0]
        if idx.size == 0:
            break
        mids = np.unique(
            np.concatenate([(t_arr[idx] + t_arr[idx + 1]) / 2.0, (t_arr[idx + 1] + t_arr[idx + 2]) / 2.0])
        )
        fresh = np.setdiff1d(mids, t_arr)
        if fresh.size == 0:
            break
        fresh_z = eval_heights(fresh)
        order = np.argsort(np.concatenate([t_arr, fresh]), kind="stable")
        t_arr = np.concatenate([t_arr, fresh])[order]
        z_arr = np.concatenate([z_arr, fresh_z])[order]
    stations = list(t_arr)
    zs = list(z_arr)

    chains: list[list[tuple[float, float]]] = []
    current: list[tuple[float, float]] = []
    for i, (t, z) in enumerate(zip(stations, zs)):
        if z > TOL:
            if not current and i > 0 and zs[i - 1] <= TOL:
                # interpolate the ground touch point
                t0, z0 = stations[i - 1], zs[i - 1]
                if z - z0 > 1e-12:
                    tq = t0 + (t - t0) * (0.0 - z0) / (z - z0)
                    current.append((tq, 0.0))
            current.append((t, z))
        else:
            if current:
                t0, z0 = current[-1]
                if z0 > TOL and t - t0 > 1e-12:
                    tq = t0 + (t - t0) * z0 / max(z0 - z, 1e-12)
                    current.append((min(tq, t), 0.0))
                chains.append(_collapse_collinear(current))
                current = []
    if current:
        chains.append(_collapse_collinear(current))
    return chains


def _collapse_collinear(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    if len(points) <= 2:
        return points
    out = [points[0]]
    for i in range(1, len(points) - 1):
        ax, ay = out[-1]
        bx, by = points[i]
        cx, cy = points[i + 1]
        cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        span = math.hypot(cx - ax, cy - ay) * max(math.hypot(bx - ax, by - ay), 1e-12)
        if abs(cross) > 1e-9 * max(span, 1.0):
            out.append(points[i])
    out.append(points[-1])
    return out
