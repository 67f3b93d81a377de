"""Shared builders, random generators and the grid oracle for tests."""

from __future__ import annotations

import math
import random

import numpy as np
from matplotlib.path import Path as MplPath
from scipy.ndimage import binary_dilation

from lpdesign import editops as eo
from lpdesign.model import (
    PLAN,
    AirTerminal,
    Color,
    DoubleWire,
    Linetype,
    Mesh,
    PaperVec,
    PlanPoint,
    Point3,
    Project,
    Rod,
    Wire,
    ZoneType,
    default_default_settings,
    default_general_settings,
    new_project,
)
from lpdesign.zonecalc import compile_scene, level_figures


def make_rod(tid, x, y, h, freestanding=True, label=None, type_text="СМ-1", mount=0.0):
    return AirTerminal(
        id=tid,
        label=label or f"МА-{tid}",
        type_text=type_text,
        construction=Rod(apex=Point3(float(x), float(y), float(mount) + float(h)), freestanding=freestanding),
        height=float(h),
        color=Color.BLACK,
        linetype=Linetype.SOLID,
    )


def make_mesh(tid, pts, z, label=None):
    ring = tuple(Point3(float(x), float(y), float(z)) for x, y in pts)
    return AirTerminal(
        id=tid,
        label=label or f"МС-{tid}",
        type_text="С-12",
        construction=Mesh(ring=ring),
        height=None,
        color=Color.BLACK,
        linetype=Linetype.SOLID,
    )


def make_wire(tid, p1, p2, h, label=None):
    return AirTerminal(
        id=tid,
        label=label or f"МТ-{tid}",
        type_text="Т-1",
        construction=Wire(
            support1=Point3(float(p1[0]), float(p1[1]), float(h)),
            support2=Point3(float(p2[0]), float(p2[1]), float(h)),
        ),
        height=float(h),
        color=Color.BLACK,
        linetype=Linetype.SOLID,
    )


def make_double_wire(tid, p1, p2, h, offset2, h2=None, label=None):
    return AirTerminal(
        id=tid,
        label=label or f"МТ-{tid}",
        type_text="Т-2",
        construction=DoubleWire(
            support1=Point3(float(p1[0]), float(p1[1]), float(h)),
            support2=Point3(float(p2[0]), float(p2[1]), float(h)),
            offset2=float(offset2),
            height2=float(h2 if h2 is not None else h),
        ),
        height=float(h),
        color=Color.BLACK,
        linetype=Linetype.SOLID,
    )


def base_project(*terminals, zone=ZoneType.B) -> Project:
    from dataclasses import replace

    general = replace(default_general_settings(), zone_type=zone)
    p = new_project(general, default_default_settings())
    next_id = max((t.id for t in terminals), default=0) + 1
    return replace(p, terminals=tuple(terminals), next_id=next_id)


def convex_ring(rng: random.Random, cx, cy, r, n=5):
    """Star-shaped ring; bounded angular gaps (< pi) keep it simple."""
    gaps = [rng.uniform(0.5, 1.0) for _ in range(n)]
    total = sum(gaps)
    angles = []
    acc = rng.uniform(0, 2 * math.pi)
    for g in gaps:
        angles.append(acc)
        acc += 2 * math.pi * g / total
    return [
        (cx + r * k * math.cos(a), cy + r * k * math.sin(a))
        for a in angles
        for k in [rng.uniform(0.6, 1.0)]
    ]


def random_terminal(rng: random.Random, tid: int, heights=(8000.0, 10000.0, 15000.0, 20000.0)):
    x = rng.uniform(-40000, 40000)
    y = rng.uniform(-40000, 40000)
    h = rng.choice(heights)
    kind = rng.random()
    if kind < 0.55:
        return make_rod(tid, x, y, h)
    if kind < 0.7:
        pts = convex_ring(rng, x, y, rng.uniform(4000, 12000))
        ring = pts if _ccw(pts) else pts[::-1]
        return make_mesh(tid, ring, rng.uniform(2000, 12000))
    if kind < 0.87:
        dx = rng.uniform(8000, 60000)
        return make_wire(tid, (x, y), (x + dx, y + rng.uniform(-5000, 5000)), h)
    dx = rng.uniform(8000, 60000)
    return make_double_wire(tid, (x, y), (x + dx, y), h, rng.choice([-1, 1]) * rng.uniform(2000, h))


def _ccw(pts) -> bool:
    area = 0.0
    for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
        area += x1 * y2 - x2 * y1
    return area > 0


def random_terminals(rng: random.Random, n: int):
    return [random_terminal(rng, i + 1) for i in range(n)]


# --- randomized editing sessions ------------------------------------------

def _pick(rng, seq):
    return rng.choice(seq) if seq else None


def random_command(rng: random.Random, p: Project):
    """A plausible next command for the project; referentially valid in the
    common case, occasionally rejected by apply (callers tolerate that)."""
    terminals = [t.id for t in p.terminals]
    rods = [t.id for t in p.terminals if isinstance(t.construction, Rod)]
    meshes = [t.id for t in p.terminals if isinstance(t.construction, Mesh)]
    sections = [s.id for s in p.drawing_sections]
    zss = [z.id for z in p.zone_sections]
    plan_zss = [z.id for z in p.zone_sections if z.section_ref == PLAN]
    roll = rng.random()

    if roll < 0.22 or not terminals:
        t = random_terminal(rng, 0)
        return eo.AddTerminal(
            construction=t.construction, label=None, type_text=t.type_text, height=t.height
        )
    if roll < 0.28:
        return eo.AddDrawingSection(
            letter=rng.choice("АБВГ"),
            scale=rng.choice([0.01, 0.02, 0.005]),
            base_projection=PaperVec(rng.uniform(150, 400), rng.uniform(0, 200)),
            cut_p1=PlanPoint(rng.uniform(-50000, 0), rng.uniform(-50000, 50000)),
            cut_p2=PlanPoint(rng.uniform(1000, 50000), rng.uniform(-50000, 50000)),
            label_offset=rng.choice([-12.0, 12.0]),
        )
    if roll < 0.36:
        refs = tuple(rng.sample(terminals, k=rng.randint(0, min(3, len(terminals)))))
        free_views = [PLAN] + sections
        taken = {z.section_ref for z in p.zone_sections}
        free_views = [v for v in free_views if v not in taken]
        if not free_views:
            return eo.MoveProject(d=PaperVec(rng.uniform(-5, 5), rng.uniform(-5, 5)))
        view = rng.choice(free_views)
        return eo.AddZoneSection(
            section_ref=view,
            terminal_refs=refs,
            cut_height=rng.uniform(0, 15000) if view == PLAN else None,
        )
    if roll < 0.42 and terminals:
        return eo.AddTerminalText(
            terminal_ref=_pick(rng, terminals),
            start_offset=PaperVec(rng.uniform(-50, 250), rng.uniform(-50, 250)),
            leader_point_offset=PaperVec(rng.uniform(-5, 5), rng.uniform(-5, 5)),
        )
    if roll < 0.47 and plan_zss:
        return eo.AddZoneLevelText(
            zone_section_ref=_pick(rng, plan_zss),
            start_offset=PaperVec(rng.uniform(-50, 250), rng.uniform(-50, 250)),
            leader_angle=rng.uniform(0, 6.28),
        )
    if roll < 0.52 and len(rods) >= 2:
        a, b = rng.sample(rods, 2)
        return eo.AddDistanceDim(
            terminal_a=a, terminal_b=b, line_offset=PaperVec(rng.uniform(-20, 20), rng.uniform(-20, 20))
        )
    if roll < 0.57 and plan_zss and rods:
        zs = p.zone_section(_pick(rng, plan_zss))
        members = [t for t in zs.terminal_refs if t in rods]
        if members:
            return eo.AddRadiusDimPlan(
                param_text=f"Rx{rng.randint(1, 9)}",
                terminal_ref=_pick(rng, members),
                zone_section_ref=zs.id,
                angle=rng.uniform(0, 6.28),
            )
        return eo.AddTerminalToZoneSection(zone_section_id=zs.id, terminal_id=_pick(rng, rods))
    if roll < 0.62 and terminals:
        return eo.AddTableEntry(
            terminal_ref=_pick(rng, [t.id for t in p.terminals if not isinstance(t.construction, Mesh)] or terminals),
            protected_level=rng.uniform(0, 10000),
        )
    if roll < 0.66:
        return eo.AddGroundingElectrode(
            center_offset=PlanPoint(rng.uniform(-40000, 40000), rng.uniform(-40000, 40000)),
            rod_count=rng.randint(1, 8),
            rod_spacing=rng.uniform(3000, 5000),
        )
    if roll < 0.74 and terminals:
        return eo.MoveTerminal(id=_pick(rng, terminals), dx=rng.uniform(-5000, 5000), dy=rng.uniform(-5000, 5000))
    if roll < 0.80 and terminals:
        return eo.DeleteTerminal(id=_pick(rng, terminals))
    if roll < 0.84 and zss:
        return eo.DeleteZoneSection(id=_pick(rng, zss))
    if roll < 0.87 and sections:
        return eo.DeleteDrawingSection(id=_pick(rng, sections))
    if roll < 0.90 and rods:
        return eo.CopyTerminal(id=_pick(rng, rods), x=rng.uniform(-40000, 40000), y=rng.uniform(-40000, 40000))
    if roll < 0.93 and terminals:
        return eo.SetTerminalProps(id=_pick(rng, terminals), type_text=f"СМ-{rng.randint(1, 9)}")
    if roll < 0.96 and plan_zss:
        return eo.SetZoneSectionProps(id=_pick(rng, plan_zss), cut_height=rng.uniform(0, 12000))
    return eo.MoveProject(d=PaperVec(rng.uniform(-5, 5), rng.uniform(-5, 5)))


def random_session(rng: random.Random, steps: int) -> Project:
    """Project after a randomized editing session (rejections tolerated)."""
    p = new_project(default_general_settings(), default_default_settings())
    for _ in range(steps):
        cmd = random_command(rng, p)
        try:
            p, _ = eo.apply(p, cmd)
        except Exception:
            continue
    return p


# --- grid oracle ------------------------------------------------------------

def section_bounds(terminals, zone, pad=0.1):
    scene = compile_scene(terminals, zone)
    figs = level_figures(scene, 0.0)
    if not figs:
        return (-1000.0, -1000.0, 1000.0, 1000.0)
    boxes = []
    for fig in figs:
        for ring in fig.rings:
            boxes.append((ring[:, 0].min(), ring[:, 1].min(), ring[:, 0].max(), ring[:, 1].max()))
    min_x = min(b[0] for b in boxes)
    min_y = min(b[1] for b in boxes)
    max_x = max(b[2] for b in boxes)
    max_y = max(b[3] for b in boxes)
    dx = (max_x - min_x) * pad + 1000.0
    dy = (max_y - min_y) * pad + 1000.0
    return (min_x - dx, min_y - dy, max_x + dx, max_y + dy)


def grid_points(bounds, n):
    min_x, min_y, max_x, max_y = bounds
    xs = min_x + (np.arange(n) + 0.5) * (max_x - min_x) / n
    ys = min_y + (np.arange(n) + 0.5) * (max_y - min_y) / n
    return np.meshgrid(xs, ys)


def contour_rings(contours):
    return [c.polygonize() for c in contours]


def membership_mask(contours, X, Y, rings=None) -> np.ndarray:
    """Even-odd membership of grid points against all contours."""
    pts = np.column_stack([X.ravel(), Y.ravel()])
    inside = np.zeros(pts.shape[0], dtype=bool)
    for ring in rings if rings is not None else contour_rings(contours):
        if len(ring) < 3:
            continue
        # bbox prefilter keeps contains_points off far-away cells
        in_box = (
            (pts[:, 0] >= ring[:, 0].min())
            & (pts[:, 0] <= ring[:, 0].max())
            & (pts[:, 1] >= ring[:, 1].min())
            & (pts[:, 1] <= ring[:, 1].max())
        )
        if in_box.any():
            inside[in_box] ^= MplPath(ring).contains_points(pts[in_box])
    return inside.reshape(X.shape)


def _resample_ring(ring, step):
    closed = np.vstack([ring, ring[:1]])
    seg = np.hypot(np.diff(closed[:, 0]), np.diff(closed[:, 1]))
    s = np.concatenate([[0.0], np.cumsum(seg)])
    total = s[-1]
    if total <= 0:
        return ring
    k = max(8, int(total / step) + 1)
    ss = np.union1d(np.linspace(0.0, total, k), s)  # keep the true vertices
    return np.column_stack([np.interp(ss, s, closed[:, 0]), np.interp(ss, s, closed[:, 1])])


def boundary_band(contours, bounds, n, rings=None) -> np.ndarray:
    """Cells crossed by any contour, dilated by one cell."""
    min_x, min_y, max_x, max_y = bounds
    wx = (max_x - min_x) / n
    wy = (max_y - min_y) / n
    mask = np.zeros((n, n), dtype=bool)
    step = min(wx, wy) / 2.0
    for ring in rings if rings is not None else contour_rings(contours):
        dense = _resample_ring(np.asarray(ring), step)
        ix = np.clip(((dense[:, 0] - min_x) / wx).astype(int), 0, n - 1)
        iy = np.clip(((dense[:, 1] - min_y) / wy).astype(int), 0, n - 1)
        mask[iy, ix] = True
    return binary_dilation(mask, iterations=1)


def grid_consistency(terminals, zone, hx, n=200):
    """(mismatches, checked) between height thresholding and contour
    membership outside the one-cell boundary band."""
    from lpdesign.zonecalc import horizontal_section

    scene = compile_scene(terminals, zone)
    contours = horizontal_section(terminals, zone, hx)
    bounds = section_bounds(terminals, zone)
    X, Y = grid_points(bounds, n)
    heights = scene.heights(X, Y)
    inside = membership_mask(contours, X, Y)
    band = boundary_band(contours, bounds, n)
    ok = ~band
    mism = np.count_nonzero(((heights >= hx) != inside) & ok)
    return mism, int(np.count_nonzero(ok))
