"""Planar contours (exact arcs + segments) and level-cut figure shapes.

Exact primitives are kept wherever a figure stands alone; overlapping
figures are polygonized (720 segments per full turn) only for the boolean
union, per the drafting contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from shapely.geometry import Polygon as ShPolygon
from shapely.ops import unary_union

TWO_PI = 2.0 * math.pi
SEGMENTS_PER_TURN = 720
_ANGLE_STEP = TWO_PI / SEGMENTS_PER_TURN


@dataclass(frozen=True, slots=True)
class Seg:
    x1: float
    y1: float
    x2: float
    y2: float


@dataclass(frozen=True, slots=True)
class Arc:
    """Circular arc, CCW for positive sweep; a full circle has sweep 2*pi."""

    cx: float
    cy: float
    r: float
    a0: float
    sweep: float

    def point_at(self, t: float) -> tuple[float, float]:
        a = self.a0 + self.sweep * t
        return (self.cx + self.r * math.cos(a), self.cy + self.r * math.sin(a))


@dataclass(frozen=True, slots=True)
class Poly:
    """Run of straight segments through consecutive points."""

    points: tuple


Piece = Union[Seg, Arc, Poly]


def arc_samples(arc: Arc, include_end: bool = True) -> np.ndarray:
    n = max(2, math.ceil(abs(arc.sweep) / _ANGLE_STEP))
    last = n + 1 if include_end else n
    a = arc.a0 + arc.sweep * np.arange(last) / n
    return np.column_stack([arc.cx + arc.r * np.cos(a), arc.cy + arc.r * np.sin(a)])


@dataclass(frozen=True, slots=True)
class Contour:
    """Closed planar curve; CCW pieces for outer boundaries, CW for holes."""

    pieces: tuple[Piece, ...]

    def is_full_circle(self) -> bool:
        return (
            len(self.pieces) == 1
            and isinstance(self.pieces[0], Arc)
            and abs(abs(self.pieces[0].sweep) - TWO_PI) < 1e-12
        )

    def polygonize(self) -> np.ndarray:
        """Open vertex ring (N, 2); arcs at the union sampling density."""
        parts = []
        for piece in self.pieces:
            if isinstance(piece, Seg):
                parts.append(np.array([[piece.x1, piece.y1], [piece.x2, piece.y2]]))
            elif isinstance(piece, Poly):
                parts.append(np.asarray(piece.points, dtype=float))
            else:
                parts.append(arc_samples(piece))
        pts = np.vstack(parts)
        keep = np.ones(len(pts), dtype=bool)
        keep[1:] = (np.abs(np.diff(pts[:, 0])) > 1e-9) | (np.abs(np.diff(pts[:, 1])) > 1e-9)
        pts = pts[keep]
        if len(pts) > 1 and abs(pts[0, 0] - pts[-1, 0]) < 1e-9 and abs(pts[0, 1] - pts[-1, 1]) < 1e-9:
            pts = pts[:-1]
        return pts

    def bbox(self) -> tuple[float, float, float, float]:
        ring = self.polygonize()
        return (
            float(ring[:, 0].min()),
            float(ring[:, 1].min()),
            float(ring[:, 0].max()),
            float(ring[:, 1].max()),
        )


def circle_contour(cx: float, cy: float, r: float) -> Contour:
    return Contour((Arc(cx, cy, r, 0.0, TWO_PI),))


def ring_contour(points) -> Contour:
    """Closed polygonal contour; the single Poly piece wraps around."""
    pts = tuple((float(p[0]), float(p[1])) for p in points)
    return Contour((Poly(points=pts + pts[:1]),))


def stadium_contour(x1, y1, x2, y2, r) -> Contour:
    L = math.hypot(x2 - x1, y2 - y1)
    ux, uy = (x2 - x1) / L, (y2 - y1) / L
    nx, ny = -uy, ux
    a_n = math.atan2(ny, nx)
    # CCW: bottom edge, cap around p2, top edge, cap around p1.
    return Contour(
        (
            Seg(x1 - nx * r, y1 - ny * r, x2 - nx * r, y2 - ny * r),
            Arc(x2, y2, r, a_n - math.pi, math.pi),
            Seg(x2 + nx * r, y2 + ny * r, x1 + nx * r, y1 + ny * r),
            Arc(x1, y1, r, a_n, math.pi),
        )
    )


@dataclass(frozen=True, slots=True)
class LevelFigure:
    """One zone contributor cut at a level: rings plus an optional exact form."""

    rings: tuple
    exact: Contour | None


def circle_figure(cx, cy, r) -> LevelFigure:
    arc = Arc(cx, cy, r, 0.0, TWO_PI)
    ring = np.asarray(arc_samples(arc, include_end=False), dtype=float)
    return LevelFigure(rings=(ring,), exact=circle_contour(cx, cy, r))


def stadium_figure(x1, y1, x2, y2, r) -> LevelFigure:
    exact = stadium_contour(x1, y1, x2, y2, r)
    return LevelFigure(rings=(exact.polygonize(),), exact=exact)


def polygon_figure(points) -> LevelFigure:
    exact = ring_contour(points)
    return LevelFigure(rings=(np.asarray(points, dtype=float),), exact=exact)


def rect_figure(corners) -> LevelFigure:
    exact = ring_contour(corners)
    return LevelFigure(rings=(np.asarray(corners, dtype=float),), exact=exact)


def _waist_arc_world(ax, ay, ux, uy, L, v_sign, c, R, u_from, u_to, w_from, w_to):
    """Sample the waist boundary arc between two axis stations, local -> world."""
    # Local circle center (L/2, v_sign*c), lower (v_sign=+1) / upper branch.
    a_from = math.atan2(w_from - c, u_from - 0.5 * L)
    a_to = math.atan2(w_to - c, u_to - 0.5 * L)
    n = max(2, math.ceil(abs(a_to - a_from) / _ANGLE_STEP))
    a = a_from + (a_to - a_from) * np.arange(n + 1) / n
    u = 0.5 * L + R * np.cos(a)
    w = c + R * np.sin(a)
    return np.column_stack([ax + u * ux - v_sign * w * uy, ay + u * uy + v_sign * w * ux])


def waist_figure(ax, ay, ux, uy, L, rx, rcx) -> LevelFigure:
    """Pair waist at one level: region bounded by the two arcs through
    (0, +-rx), (L/2, +-rcx) in pair-axis coordinates. rcx >= 0."""
    if abs(rx - rcx) <= 1e-9 * max(abs(rx), 1.0):
        nx, ny = -uy, ux
        bx, by = ax + ux * L, ay + uy * L
        corners = (
            (ax - nx * rx, ay - ny * rx),
            (bx - nx * rx, by - ny * rx),
            (bx + nx * rx, by + ny * rx),
            (ax + nx * rx, ay + ny * rx),
        )
        return rect_figure(corners)

    c = (0.25 * L * L + rx * rx - rcx * rcx) / (2.0 * (rx - rcx))
    R = c - rcx
    # Lower boundary left->right (v = -w(u)), then upper boundary right->left.
    ring = np.vstack(
        [
            _waist_arc_world(ax, ay, ux, uy, L, -1.0, c, R, 0.0, 0.5 * L, rx, rcx),
            _waist_arc_world(ax, ay, ux, uy, L, -1.0, c, R, 0.5 * L, L, rcx, rx)[1:],
            _waist_arc_world(ax, ay, ux, uy, L, 1.0, c, R, L, 0.5 * L, rx, rcx),
            _waist_arc_world(ax, ay, ux, uy, L, 1.0, c, R, 0.5 * L, 0.0, rcx, rx)[1:],
        ]
    )
    return LevelFigure(rings=(ring,), exact=None)


def _ring_polygon(ring: np.ndarray) -> ShPolygon:
    # rings are simple by construction; validity repair happens lazily in
    # the union step if GEOS objects
    return ShPolygon(ring)


def _normalize_ring(coords, ccw: bool) -> np.ndarray:
    pts = np.asarray(coords, dtype=float)
    if len(pts) > 1 and np.allclose(pts[0], pts[-1]):
        pts = pts[:-1]
    x = pts[:, 0]
    y = pts[:, 1]
    area = float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))
    if (area > 0) != ccw:
        pts = pts[::-1]
    start = int(np.lexsort((pts[:, 1], pts[:, 0]))[0])
    return np.roll(pts, -start, axis=0)


def merge_figures(figures) -> list[Contour]:
    """Overlapping figures merged into maximal contours; isolated figures
    keep their exact arc form. Hole rings come out CW after an outer CCW."""
    units = []
    for fig in figures:
        exact = fig.exact if len(fig.rings) == 1 else None
        for ring in fig.rings:
            if len(ring) >= 3:
                units.append((ring, exact, _ring_polygon(ring)))
                exact = None
    n = len(units)
    if n == 0:
        return []

    boxes = np.array(
        [
            (r[:, 0].min(), r[:, 1].min(), r[:, 0].max(), r[:, 1].max())
            for r, _, _ in units
        ]
    )
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if find(i) == find(j):
                continue
            if (
                boxes[i, 2] < boxes[j, 0]
                or boxes[j, 2] < boxes[i, 0]
                or boxes[i, 3] < boxes[j, 1]
                or boxes[j, 3] < boxes[i, 1]
            ):
                continue
            if units[i][2].intersects(units[j][2]):
                parent[find(i)] = find(j)

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)

    contours: list[Contour] = []
    for members in groups.values():
        if len(members) == 1 and units[members[0]][1] is not None:
            contours.append(units[members[0]][1])
            continue
        try:
            merged = unary_union([units[i][2] for i in members])
        except Exception:
            merged = unary_union([units[i][2].buffer(0) for i in members])
        geoms = getattr(merged, "geoms", [merged])
        for geom in geoms:
            if geom.is_empty or geom.geom_type != "Polygon" or geom.area < 1e-9:
                continue
            contours.append(ring_contour(_normalize_ring(geom.exterior.coords, ccw=True)))
            for interior in geom.interiors:
                contours.append(ring_contour(_normalize_ring(interior.coords, ccw=False)))

    contours.sort(key=lambda c: c.bbox())
    return contours
