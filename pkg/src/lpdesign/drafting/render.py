"""Plan and section drawing generation from a validated project."""

from __future__ import annotations

import math
from typing import Optional

from .. import tablegen
from ..errors import NotFoundError, RenderError
from ..model import (
    PLAN,
    Color,
    DimDirection,
    DoubleWire,
    DrawingSection,
    GeneralSettings,
    LeaderMode,
    Linetype,
    Mesh,
    Project,
    Rod,
    ScalePlacement,
    TickStyle,
    Wire,
    validate,
)
from ..numfmt import format_fixed, meters, round_half_away
from ..zonecalc import (
    Arc,
    FormulaTable,
    Seg,
    cone_params,
    default_table,
    effective_wire_height,
    horizontal_section,
    min_width_at,
    pair_params,
    radius_at,
    vertical_profile,
)
from .displaylist import (
    THICK,
    THIN,
    ArcPrim,
    CirclePrim,
    DotPrim,
    HatchPrim,
    LinePrim,
    PolylinePrim,
    TextPrim,
    width_for,
)
from .font import measure_text
from .transform import ViewTransform, plan_transform, section_axes, section_transform, section_u

HATCH_ANGLES = (math.pi / 4.0, -math.pi / 4.0)
ARROW_BARB_ANGLE = math.radians(22.0)
#: Leader length for zone level texts, mm Paper.
ZONE_TEXT_LEADER_LEN = 10.0
#: Shelf drop below the text baseline, mm Paper.
SHELF_DROP = 1.0


class ZoneResults:
    """Cached zone computations backing one render pass."""

    def __init__(self, project: Project, table: Optional[FormulaTable] = None):
        self.project = project
        self.table = table or default_table()
        self.zone = project.general.zone_type
        self._sections: dict[int, list] = {}
        self._profiles: dict[int, list] = {}

    def _members(self, zs):
        by_id = {t.id: t for t in self.project.terminals}
        return [by_id[i] for i in zs.terminal_refs]

    def contours(self, zs) -> list:
        if zs.id not in self._sections:
            self._sections[zs.id] = horizontal_section(
                self._members(zs), self.zone, zs.cut_height, self.table
            )
        return self._sections[zs.id]

    def profile(self, section: DrawingSection, zs) -> list:
        if zs.id not in self._profiles:
            self._profiles[zs.id] = vertical_profile(
                self._members(zs),
                self.zone,
                (section.cut_p1.x, section.cut_p1.y),
                (section.cut_p2.x, section.cut_p2.y),
                self.table,
            )
        return self._profiles[zs.id]


def _drawing_height(terminal, table) -> float:
    """Height driving the drawn zone: apex elevation for rods, sagged
    support height for wires."""
    c = terminal.construction
    if isinstance(c, Rod):
        return c.apex.z
    if isinstance(c, (Wire, DoubleWire)):
        span = math.hypot(c.support2.x - c.support1.x, c.support2.y - c.support1.y)
        return effective_wire_height(terminal.height, span, table)
    return c.ring[0].z


def contour_prims(contours, vt: ViewTransform, color, linetype):
    from ..zonecalc.geometry import Poly

    prims = []
    width = width_for(linetype)
    for contour in contours:
        seg_run = []
        for piece in contour.pieces:
            if isinstance(piece, Seg):
                p1 = vt.plan_point(piece.x1, piece.y1)
                p2 = vt.plan_point(piece.x2, piece.y2)
                if not seg_run:
                    seg_run.append(p1)
                seg_run.append(p2)
            elif isinstance(piece, Poly):
                for q in piece.points:
                    p = vt.plan_point(q[0], q[1])
                    if not seg_run or seg_run[-1] != p:
                        seg_run.append(p)
            else:
                if seg_run:
                    prims.append(PolylinePrim(tuple(seg_run), color, linetype, width))
                    seg_run = []
                c = vt.plan_point(piece.cx, piece.cy)
                prims.append(
                    ArcPrim(c[0], c[1], piece.r * vt.scale, piece.a0, piece.sweep, color, linetype, width)
                )
        if seg_run:
            closed = len(contour.pieces) > 0 and not any(
                isinstance(x, Arc) for x in contour.pieces
            )
            if closed and len(seg_run) > 1 and seg_run[0] == seg_run[-1]:
                seg_run.pop()
            prims.append(PolylinePrim(tuple(seg_run), color, linetype, width, closed=closed))
    return prims


def _arrow(prims, x, y, dx, dy, size, color):
    """Arrowhead at (x, y) pointing along (dx, dy)."""
    for sign in (1.0, -1.0):
        a = math.atan2(dy, dx) + math.pi + sign * ARROW_BARB_ANGLE
        prims.append(
            LinePrim(x, y, x + size * math.cos(a), y + size * math.sin(a), color, Linetype.SOLID, THIN)
        )


def _tick_marks(prims, x, y, dx, dy, style: TickStyle, size, color, inward: float):
    """Dimension terminator at a foot point; inward is +-1 along the line."""
    if style is TickStyle.TICK:
        a = math.atan2(dy, dx) + math.pi / 4.0
        h = size / 2.0
        prims.append(
            LinePrim(
                x - h * math.cos(a), y - h * math.sin(a), x + h * math.cos(a), y + h * math.sin(a),
                color, Linetype.SOLID, THIN,
            )
        )
    elif style is TickStyle.ARROW_IN:
        _arrow(prims, x, y, dx * inward, dy * inward, size, color)
    else:
        _arrow(prims, x, y, -dx * inward, -dy * inward, size, color)


def _shelf_text(prims, text, font, color, x_left, baseline):
    """Text over its shelf; returns (shelf_start, shelf_end)."""
    w, _ = measure_text(text, font)
    prims.append(TextPrim(x_left, baseline, text, font, color))
    y = baseline - SHELF_DROP
    prims.append(LinePrim(x_left, y, x_left + w, y, color, Linetype.SOLID, THIN))
    return ((x_left, y), (x_left + w, y))


def _leader(prims, tip, shelf_ends, to_end: bool, color):
    target = shelf_ends[1] if to_end else shelf_ends[0]
    prims.append(LinePrim(tip[0], tip[1], target[0], target[1], color, Linetype.SOLID, THIN))


def _scale_text(scale: float) -> str:
    if scale <= 1.0:
        return f"М 1: {round(1.0 / scale)}"
    return f"М {round(scale)}: 1"


def _view_label(prims, label, scale_text, placement, font, color, shelf_mid, above_gap, below_gap):
    inline = placement is ScalePlacement.INLINE
    text = f"{label} {scale_text}" if inline else label
    w, _ = measure_text(text, font)
    sx, sy = shelf_mid
    prims.append(LinePrim(sx - w / 2.0, sy, sx + w / 2.0, sy, color, Linetype.SOLID, THICK))
    prims.append(TextPrim(sx - w / 2.0, sy + above_gap, text, font, color))
    if not inline:
        w2, h2 = measure_text(scale_text, font)
        prims.append(TextPrim(sx - w2 / 2.0, sy - below_gap - h2, scale_text, font, color))


def _linear_dim(
    prims,
    general: GeneralSettings,
    pa,
    pb,
    offset,
    text,
    text_offset,
    tick_style,
    color,
):
    """Two-point linear dimension with extension lines; offset is a PaperVec
    from the first point to the dimension line."""
    dx, dy = pb[0] - pa[0], pb[1] - pa[1]
    length = math.hypot(dx, dy)
    if length < 1e-9:
        return
    ux, uy = dx / length, dy / length
    ax = pa[0] + offset.dx
    ay = pa[1] + offset.dy
    t_b = (pb[0] - ax) * ux + (pb[1] - ay) * uy
    fb = (ax + ux * t_b, ay + uy * t_b)
    fa = (ax, ay)
    over = general.dims_common.extension_overrun
    for src, foot in ((pa, fa), (pb, fb)):
        ex, ey = foot[0] - src[0], foot[1] - src[1]
        elen = math.hypot(ex, ey)
        if elen > 1e-9:
            ex, ey = ex / elen, ey / elen
            prims.append(
                LinePrim(src[0], src[1], foot[0] + ex * over, foot[1] + ey * over, color, Linetype.SOLID, THIN)
            )
    prims.append(LinePrim(fa[0], fa[1], fb[0], fb[1], color, Linetype.SOLID, THIN))
    size = general.dims_common.tick_size
    _tick_marks(prims, fa[0], fa[1], ux, uy, tick_style, size, color, inward=1.0)
    _tick_marks(prims, fb[0], fb[1], ux, uy, tick_style, size, color, inward=-1.0)
    nx, ny = -uy, ux
    mid = ((fa[0] + fb[0]) / 2.0, (fa[1] + fb[1]) / 2.0)
    w, _ = measure_text(text, general.dims_common.font)
    prims.append(
        TextPrim(
            mid[0] + nx * text_offset - w / 2.0,
            mid[1] + ny * text_offset,
            text,
            general.dims_common.font,
            color,
        )
    )


def _terminal_symbol_prims(prims, t, vt: ViewTransform, general: GeneralSettings):
    sym = general.terminal_symbols
    c = t.construction
    if isinstance(c, Rod):
        x, y = vt.plan_point(c.apex.x, c.apex.y)
        if c.freestanding:
            s = sym.square_side / 2.0
            corners = ((x - s, y - s), (x + s, y - s), (x + s, y + s), (x - s, y + s))
            prims.append(PolylinePrim(corners, t.color, t.linetype, width_for(t.linetype), closed=True))
            prims.append(LinePrim(x - s, y - s, x + s, y + s, t.color, t.linetype, THIN))
            prims.append(LinePrim(x - s, y + s, x + s, y - s, t.color, t.linetype, THIN))
        else:
            prims.append(DotPrim(x, y, sym.dot_diameter_plan, t.color))
    elif isinstance(c, Mesh):
        ring = tuple(vt.plan_point(q.x, q.y) for q in c.ring)
        prims.append(HatchPrim(ring, general.mesh_hatch.spacing, HATCH_ANGLES, t.color, THIN))
        prims.append(PolylinePrim(ring, t.color, t.linetype, width_for(t.linetype), closed=True))
    elif isinstance(c, Wire):
        p1 = vt.plan_point(c.support1.x, c.support1.y)
        p2 = vt.plan_point(c.support2.x, c.support2.y)
        prims.append(LinePrim(p1[0], p1[1], p2[0], p2[1], t.color, t.linetype, width_for(t.linetype)))
    else:
        p1 = vt.plan_point(c.support1.x, c.support1.y)
        p2 = vt.plan_point(c.support2.x, c.support2.y)
        prims.append(LinePrim(p1[0], p1[1], p2[0], p2[1], t.color, t.linetype, width_for(t.linetype)))
        span = math.hypot(c.support2.x - c.support1.x, c.support2.y - c.support1.y)
        nx = -(c.support2.y - c.support1.y) / span
        ny = (c.support2.x - c.support1.x) / span
        q1 = vt.plan_point(c.support1.x + nx * c.offset2, c.support1.y + ny * c.offset2)
        q2 = vt.plan_point(c.support2.x + nx * c.offset2, c.support2.y + ny * c.offset2)
        prims.append(LinePrim(q1[0], q1[1], q2[0], q2[1], t.color, t.linetype, width_for(t.linetype)))


def _grounding_prims(prims, g, vt: ViewTransform, general: GeneralSettings):
    color = general.grounding_color
    cx, cy = vt.plan_point(g.center_offset.x, g.center_offset.y)
    ca, sa = math.cos(g.angle), math.sin(g.angle)
    step = g.rod_spacing * vt.scale
    r = g.rod_diameter * vt.scale / 2.0
    centers = []
    for i in range(g.rod_count):
        d = (i - (g.rod_count - 1) / 2.0) * step
        centers.append((cx + ca * d, cy + sa * d))
    for a, b in zip(centers, centers[1:]):
        prims.append(LinePrim(a[0], a[1], b[0], b[1], color, g.linetype, width_for(g.linetype)))
    for x, y in centers:
        prims.append(CirclePrim(x, y, r, color, Linetype.SOLID, width_for(g.linetype)))


def _section_mark_prims(prims, s: DrawingSection, vt: ViewTransform, general: GeneralSettings):
    marks = general.section_marks
    color = marks.plan_color
    layout = s.plan_label_layout
    p1 = vt.plan_point(s.cut_p1.x, s.cut_p1.y)
    p2 = vt.plan_point(s.cut_p2.x, s.cut_p2.y)
    dx, dy = p2[0] - p1[0], p2[1] - p1[1]
    length = math.hypot(dx, dy)
    ux, uy = dx / length, dy / length
    side = 1.0 if layout.label_offset >= 0 else -1.0
    nx, ny = -uy * side, ux * side
    letter = s.letter.split()[0] if s.letter.split() else s.letter
    for end, outward in ((p1, (-ux, -uy)), (p2, (ux, uy))):
        ox, oy = outward
        dash_end = (end[0] + ox * layout.dash_len, end[1] + oy * layout.dash_len)
        prims.append(LinePrim(end[0], end[1], dash_end[0], dash_end[1], color, Linetype.SOLID, THICK))
        mid = (end[0] + ox * layout.dash_len / 2.0, end[1] + oy * layout.dash_len / 2.0)
        tip = (mid[0] + nx * layout.arrow_offset, mid[1] + ny * layout.arrow_offset)
        tail = (tip[0] + nx * marks.arrow_tail_len, tip[1] + ny * marks.arrow_tail_len)
        prims.append(LinePrim(tail[0], tail[1], tip[0], tip[1], color, Linetype.SOLID, THIN))
        _arrow(prims, tip[0], tip[1], -nx, -ny, marks.arrow_len, color)
        lx = end[0] + nx * abs(layout.label_offset)
        ly = end[1] + ny * abs(layout.label_offset)
        w, h = measure_text(letter, marks.plan_font)
        prims.append(TextPrim(lx - w / 2.0, ly - h / 2.0, letter, marks.plan_font, color))


def _zone_value_text(value_mm: float, precision: int) -> str:
    return format_fixed(round_half_away(meters(value_mm), precision), precision)


def render_plan(p: Project, zc: Optional[ZoneResults] = None) -> tuple:
    """Deterministic display list of the plan view."""
    violations = validate(p)
    if violations:
        raise RenderError(violations)
    zc = zc or ZoneResults(p)
    general = p.general
    vt = plan_transform(general)
    terminals = {t.id: t for t in p.terminals}
    zone_sections = {z.id: z for z in p.zone_sections}
    prims: list = []

    # zone contours
    for zs in p.zone_sections:
        if zs.section_ref != PLAN:
            continue
        prims.extend(contour_prims(zc.contours(zs), vt, zs.color, zs.linetype))

    # symbols (hatch first inside the helper, then outlines)
    for t in p.terminals:
        _terminal_symbol_prims(prims, t, vt, general)
    for g in p.grounding:
        _grounding_prims(prims, g, vt, general)
    for s in p.drawing_sections:
        _section_mark_prims(prims, s, vt, general)

    # dimensions
    for d in p.distance_dims:
        if d.section_ref != PLAN:
            continue
        ta, tb = terminals[d.terminal_a], terminals[d.terminal_b]
        fa, fb = ta.first_point(), tb.first_point()
        value = math.hypot(fb.x - fa.x, fb.y - fa.y)
        text = _zone_value_text(value, general.distance_dim.precision)
        _linear_dim(
            prims,
            general,
            vt.plan_point(fa.x, fa.y),
            vt.plan_point(fb.x, fb.y),
            d.line_offset,
            text,
            d.text_offset,
            d.tick_style,
            general.distance_dim.color,
        )
    for d in p.radius_dims_plan:
        zs = zone_sections[d.zone_section_ref]
        t = terminals[d.terminal_ref]
        h_use = _drawing_height(t, zc.table)
        rx = radius_at(h_use, general.zone_type, "rod", zs.cut_height, zc.table) if h_use > 0 else 0.0
        precision = general.radius_plan_dim.precision
        text = f"{d.param_text} = {_zone_value_text(rx, precision)}"
        if d.include_height_in_text:
            text += f" (h = {_zone_value_text(zs.cut_height, precision)})"
        color = general.radius_plan_dim.color
        center = vt.plan_point(t.first_point().x, t.first_point().y)
        ex, ey = math.cos(d.angle), math.sin(d.angle)
        tip = (center[0] + ex * rx * vt.scale, center[1] + ey * rx * vt.scale)
        prims.append(LinePrim(center[0], center[1], tip[0], tip[1], color, Linetype.SOLID, THIN))
        _tick_marks(prims, tip[0], tip[1], ex, ey, d.tick_style, general.dims_common.tick_size, color, inward=-1.0)
        font = general.dims_common.font
        w, _ = measure_text(text, font)
        if d.auto_text_pos:
            mid = ((center[0] + tip[0]) / 2.0, (center[1] + tip[1]) / 2.0)
            anchor = (mid[0] - ey * d.text_offset - w / 2.0, mid[1] + ex * d.text_offset)
        else:
            anchor = (
                general.base_point_paper.dx + d.manual_text_pos.dx,
                general.base_point_paper.dy + d.manual_text_pos.dy,
            )
        shelf = _shelf_text(prims, text, font, color, anchor[0], anchor[1])
        if d.leader is not LeaderMode.NONE:
            frac = {LeaderMode.MID: 0.5, LeaderMode.START: 0.0, LeaderMode.END: 1.0}[d.leader]
            at = (center[0] + (tip[0] - center[0]) * frac, center[1] + (tip[1] - center[1]) * frac)
            _leader(prims, at, shelf, d.leader_to_shelf_end, color)
    for d in p.min_width_dims:
        zs = zone_sections[d.zone_section_ref]
        ta, tb = terminals[d.terminal_a], terminals[d.terminal_b]
        color = general.min_width_dim.color
        precision = general.min_width_dim.precision
        rcx, mid_nat, direction = _min_width_geometry(p, d, ta, tb, zs, zc)
        text = f"{d.param_text} = {_zone_value_text(rcx, precision)}"
        mid = vt.plan_point(mid_nat[0], mid_nat[1])
        tip = (mid[0] + direction[0] * rcx * vt.scale, mid[1] + direction[1] * rcx * vt.scale)
        prims.append(LinePrim(mid[0], mid[1], tip[0], tip[1], color, Linetype.SOLID, THIN))
        _tick_marks(
            prims, tip[0], tip[1], direction[0], direction[1], d.tick_style,
            general.dims_common.tick_size, color, inward=-1.0,
        )
        font = general.dims_common.font
        w, _ = measure_text(text, font)
        if d.auto_text_pos:
            anchor = (
                (mid[0] + tip[0]) / 2.0 - direction[1] * d.text_offset - w / 2.0,
                (mid[1] + tip[1]) / 2.0 + direction[0] * d.text_offset,
            )
        else:
            anchor = (
                general.base_point_paper.dx + d.manual_text_pos.dx,
                general.base_point_paper.dy + d.manual_text_pos.dy,
            )
        shelf = _shelf_text(prims, text, font, color, anchor[0], anchor[1])
        if d.leader is not LeaderMode.NONE:
            frac = {LeaderMode.MID: 0.5, LeaderMode.START: 0.0, LeaderMode.END: 1.0}[d.leader]
            at = (mid[0] + (tip[0] - mid[0]) * frac, mid[1] + (tip[1] - mid[1]) * frac)
            _leader(prims, at, shelf, d.leader_to_shelf_end, color)

    # texts
    style = general.terminal_text_style
    for tt in p.terminal_texts:
        if tt.section_ref != PLAN:
            continue
        t = terminals[tt.terminal_ref]
        anchor = (
            general.base_point_paper.dx + tt.start_offset.dx,
            general.base_point_paper.dy + tt.start_offset.dy,
        )
        shelf = _shelf_text(prims, t.label, style.font, style.color, anchor[0], anchor[1])
        first = vt.plan_point(t.first_point().x, t.first_point().y)
        tip = (first[0] + tt.leader_point_offset.dx, first[1] + tt.leader_point_offset.dy)
        _leader(prims, tip, shelf, tt.leader_to_shelf_end, style.color)
    zstyle = general.zone_text_style
    for zt in p.zone_texts:
        zs = zone_sections[zt.zone_section_ref]
        value = _zone_value_text(zs.cut_height, zstyle.precision)
        anchor = (
            general.base_point_paper.dx + zt.start_offset.dx,
            general.base_point_paper.dy + zt.start_offset.dy,
        )
        if zt.two_lines:
            shelf = _shelf_text(prims, "Зона защиты", zstyle.font, zstyle.color, anchor[0], anchor[1])
            prims.append(
                TextPrim(
                    anchor[0],
                    anchor[1] - zstyle.font.size * 1.6,
                    f"h = {value}",
                    zstyle.font,
                    zstyle.color,
                )
            )
        else:
            shelf = _shelf_text(
                prims, f"Зона защиты h = {value}", zstyle.font, zstyle.color, anchor[0], anchor[1]
            )
        start = shelf[1] if zt.leader_to_shelf_end else shelf[0]
        tip = (
            start[0] + math.cos(zt.leader_angle) * ZONE_TEXT_LEADER_LEN,
            start[1] + math.sin(zt.leader_angle) * ZONE_TEXT_LEADER_LEN,
        )
        prims.append(LinePrim(start[0], start[1], tip[0], tip[1], zstyle.color, Linetype.SOLID, THIN))

    # plan view label
    pv = general.plan_view
    _view_label(
        prims,
        pv.label,
        _scale_text(pv.scale),
        pv.scale_placement,
        pv.font,
        Color.BLACK,
        (general.base_point_paper.dx + pv.shelf_mid_offset.dx,
         general.base_point_paper.dy + pv.shelf_mid_offset.dy),
        pv.above_gap,
        pv.below_gap,
    )

    # calculation table
    if p.table_entries:
        calc = tablegen.build_table(p, zc.table)
        prims.extend(tablegen.layout_table(calc, general))

    return tuple(prims)


def _min_width_geometry(p, d, ta, tb, zs, zc):
    """(rcx mm, midpoint nature, unit dim direction in paper axes)."""
    zone = p.general.zone_type
    if d.terminal_a == d.terminal_b:
        c = ta.construction
        span = math.hypot(c.support2.x - c.support1.x, c.support2.y - c.support1.y)
        h_eff = effective_wire_height(ta.height, span, zc.table)
        off = abs(c.offset2)
        rcx = 0.0
        if h_eff > 0 and abs(ta.height - c.height2) <= 1e-6:
            pp = pair_params(h_eff, off, zone, "wire", zc.table)
            rcx = min_width_at(pp, zs.cut_height)
        ux = (c.support2.x - c.support1.x) / span
        uy = (c.support2.y - c.support1.y) / span
        sign = 1.0 if c.offset2 >= 0 else -1.0
        mid = (
            (c.support1.x + c.support2.x) / 2.0 + sign * (-uy) * off / 2.0,
            (c.support1.y + c.support2.y) / 2.0 + sign * ux * off / 2.0,
        )
        direction = (-sign * -uy, -sign * ux)
        return rcx, mid, direction
    fa, fb = ta.first_point(), tb.first_point()
    L = math.hypot(fb.x - fa.x, fb.y - fa.y)
    h_a = _drawing_height(ta, zc.table)
    rcx = 0.0
    if L > 1e-9 and abs(h_a - _drawing_height(tb, zc.table)) <= 1e-6 and h_a > 0:
        pp = pair_params(h_a, L, zone, "rod", zc.table)
        rcx = min_width_at(pp, zs.cut_height)
    ux, uy = (fb.x - fa.x) / L, (fb.y - fa.y) / L
    mid = ((fa.x + fb.x) / 2.0, (fa.y + fb.y) / 2.0)
    return rcx, mid, (-uy, ux)


def render_section(p: Project, section_id: int, zc: Optional[ZoneResults] = None) -> tuple:
    """Display list of one displaced vertical section view."""
    violations = validate(p)
    if violations:
        raise RenderError(violations)
    section = p.drawing_section(section_id)
    if section is None:
        raise NotFoundError(f"no drawing section with id {section_id}")
    zs = p.zone_section_for(section_id)
    if zs is None:
        raise NotFoundError(f"drawing section {section_id} has no zone section")
    zc = zc or ZoneResults(p)
    general = p.general
    vt = section_transform(section)
    terminals = {t.id: t for t in p.terminals}
    prims: list = []

    # zone profile
    width = width_for(zs.linetype)
    for chain in zc.profile(section, zs):
        pts = tuple(
            (vt.origin.dx + section_u(section, t) * vt.scale, vt.origin.dy + z * vt.scale)
            for t, z in chain
        )
        if len(pts) >= 2:
            prims.append(PolylinePrim(pts, zs.color, zs.linetype, width))

    # terminal symbols on the section
    sym = general.terminal_symbols
    for tid in zs.terminal_refs:
        t = terminals[tid]
        c = t.construction
        if isinstance(c, Rod):
            x = vt.to_paper(c.apex)[0]
            y_apex = vt.origin.dy + c.apex.z * vt.scale
            y_mount = vt.origin.dy + (c.apex.z - t.height) * vt.scale
            half = sym.triangle_base / 2.0
            prims.append(
                PolylinePrim(
                    ((x - half, y_mount), (x + half, y_mount), (x, y_apex)),
                    t.color,
                    t.linetype,
                    width_for(t.linetype),
                    closed=True,
                )
            )
        elif isinstance(c, (Wire, DoubleWire)):
            for wx, wy, wz in _wire_lines_of(t):
                cross = _line_cross(section, wx, wy)
                if cross is None:
                    continue
                u = vt.origin.dx + cross * vt.scale
                prims.append(DotPrim(u, vt.origin.dy + wz * vt.scale, sym.dot_diameter_section, t.color))

    # dims bound to this section
    for d in p.radius_dims_vert:
        if d.section_ref != section_id:
            continue
        t = terminals[d.terminal_ref]
        h_use = _drawing_height(t, zc.table)
        kind = "rod" if isinstance(t.construction, Rod) else "wire"
        r0 = cone_params(h_use, general.zone_type, kind, zc.table).r0 if h_use > 0 else 0.0
        precision = general.radius_vert_dim.precision
        text = f"{d.param_text} = {_zone_value_text(r0, precision)}"
        color = general.radius_vert_dim.color
        u_t = vt.to_paper(t.first_point())[0]
        y0 = vt.origin.dy  # zero elevation
        sign = -1.0 if d.direction is DimDirection.LEFT else 1.0
        pa = (u_t, y0)
        pb = (u_t + sign * r0 * vt.scale, y0)
        _linear_dim(prims, general, pa, pb, d.line_offset, text, d.text_offset, d.tick_style, color)
    for d in p.distance_dims:
        if d.section_ref != section_id:
            continue
        ta, tb = terminals[d.terminal_a], terminals[d.terminal_b]
        fa, fb = ta.first_point(), tb.first_point()
        value = math.hypot(fb.x - fa.x, fb.y - fa.y)
        text = _zone_value_text(value, general.distance_dim.precision)
        pa = (vt.to_paper(fa)[0], vt.origin.dy)
        pb = (vt.to_paper(fb)[0], vt.origin.dy)
        _linear_dim(
            prims, general, pa, pb, d.line_offset, text, d.text_offset, d.tick_style,
            general.distance_dim.color,
        )

    # terminal texts bound to this section
    style = general.terminal_text_style
    for tt in p.terminal_texts:
        if tt.section_ref != section_id:
            continue
        t = terminals[tt.terminal_ref]
        anchor = (
            vt.origin.dx + tt.start_offset.dx,
            vt.origin.dy + tt.start_offset.dy,
        )
        shelf = _shelf_text(prims, t.label, style.font, style.color, anchor[0], anchor[1])
        first = vt.to_paper(t.first_point())
        tip = (first[0] + tt.leader_point_offset.dx, first[1] + tt.leader_point_offset.dy)
        _leader(prims, tip, shelf, tt.leader_to_shelf_end, style.color)

    # own label
    marks = general.section_marks
    ol = section.own_label_layout
    tokens = section.letter.split()
    base = tokens[0] if tokens else section.letter
    suffix = " ".join(tokens[1:])
    label = f"{base} – {base}" + (f" {suffix}" if suffix else "")
    _view_label(
        prims,
        label,
        _scale_text(section.scale),
        ol.scale_placement,
        ol.font,
        marks.own_color,
        (vt.origin.dx + ol.shelf_mid_offset.dx, vt.origin.dy + ol.shelf_mid_offset.dy),
        ol.above_gap,
        ol.below_gap,
    )
    return tuple(prims)


def _wire_lines_of(t):
    c = t.construction
    lines = [((c.support1.x, c.support1.y), (c.support2.x, c.support2.y), c.support1.z)]
    if isinstance(c, DoubleWire):
        span = math.hypot(c.support2.x - c.support1.x, c.support2.y - c.support1.y)
        nx = -(c.support2.y - c.support1.y) / span
        ny = (c.support2.x - c.support1.x) / span
        lines.append(
            (
                (c.support1.x + nx * c.offset2, c.support1.y + ny * c.offset2),
                (c.support2.x + nx * c.offset2, c.support2.y + ny * c.offset2),
                c.height2,
            )
        )
    return lines


def _line_cross(section: DrawingSection, w1, w2) -> Optional[float]:
    """u coordinate where the wire segment crosses the cutting plane."""
    dx = section.cut_p2.x - section.cut_p1.x
    dy = section.cut_p2.y - section.cut_p1.y
    ex = w2[0] - w1[0]
    ey = w2[1] - w1[1]
    den = ex * dy - ey * dx
    if abs(den) < 1e-12:
        return None
    # solve w1 + s*(e) = cut_p1 + r*(d)
    s = ((section.cut_p1.x - w1[0]) * dy - (section.cut_p1.y - w1[1]) * dx) / den
    if not (0.0 <= s <= 1.0):
        return None
    px = w1[0] + ex * s
    py = w1[1] + ey * s
    e_u, _ = section_axes(section)
    return e_u[0] * px + e_u[1] * py
