"""Parametric document model: object lists, settings, links, validation.

All Nature lengths are 64-bit floats in mm, elevations relative to the zero
mark at the base point. Paper lengths are mm on the printed sheet. The model
is a pure immutable value; every mutation goes through ``lpdesign.editops``
and produces a new :class:`Project`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Optional, Union

from .errors import GeometryError, ValidationError

#: Sentinel section id for the top view (plan). Real ids start at 1.
PLAN = 0

#: Validity ceiling of the zone formulas, mm Nature.
MAX_HEIGHT_MM = 150_000.0

#: Coordinate comparison tolerance, mm.
TOL = 1e-6


class Color(str, Enum):
    BLACK = "black"
    RED = "red"
    GREEN = "green"
    BLUE = "blue"
    CYAN = "cyan"
    MAGENTA = "magenta"
    YELLOW = "yellow"
    WHITE = "white"


class Linetype(str, Enum):
    SOLID = "solid"
    DASHED = "dashed"
    DASH_DOT = "dash-dot"
    THICK_SOLID = "thick-solid"


class ZoneType(str, Enum):
    A = "A"
    B = "B"


class TerminalKind(str, Enum):
    ROD = "rod"
    MESH = "mesh"
    WIRE = "wire"
    DOUBLE_WIRE = "double-wire"


class TickStyle(str, Enum):
    ARROW_IN = "arrow-in"
    ARROW_OUT = "arrow-out"
    TICK = "tick"


class LeaderMode(str, Enum):
    NONE = "none"
    MID = "mid"
    START = "start"
    END = "end"


class ScalePlacement(str, Enum):
    INLINE = "inline"
    OWN_LINE = "own-line"


class LengthUnit(str, Enum):
    MM = "mm"
    CM = "cm"
    M = "m"


class SortMode(str, Enum):
    NONE = "none"
    ALPHABETICAL = "alphabetical"
    GROUPED = "grouped"


class DimDirection(str, Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True, slots=True)
class Point3:
    """Point in the internal right-handed frame, mm Nature."""

    x: float
    y: float
    z: float


@dataclass(frozen=True, slots=True)
class PlanPoint:
    """2D point/vector in the internal XY plane, mm Nature."""

    x: float
    y: float


@dataclass(frozen=True, slots=True)
class PaperVec:
    """2D offset (or anchored point) on the printed sheet, mm Paper."""

    dx: float
    dy: float


@dataclass(frozen=True, slots=True)
class Rod:
    apex: Point3
    freestanding: bool = False


@dataclass(frozen=True, slots=True)
class Mesh:
    ring: tuple[Point3, ...]


@dataclass(frozen=True, slots=True)
class Wire:
    support1: Point3
    support2: Point3


@dataclass(frozen=True, slots=True)
class DoubleWire:
    support1: Point3
    support2: Point3
    #: Signed perpendicular offset of the second wire from the first, mm.
    offset2: float
    #: Height of the second wire, mm.
    height2: float


Construction = Union[Rod, Mesh, Wire, DoubleWire]

_KIND_BY_TYPE = {
    Rod: TerminalKind.ROD,
    Mesh: TerminalKind.MESH,
    Wire: TerminalKind.WIRE,
    DoubleWire: TerminalKind.DOUBLE_WIRE,
}


@dataclass(frozen=True, slots=True)
class AirTerminal:
    id: int
    label: str
    type_text: str
    construction: Construction
    #: Construction height, mm Nature; None for mesh terminals.
    height: Optional[float]
    color: Color
    linetype: Linetype

    @property
    def kind(self) -> TerminalKind:
        return _KIND_BY_TYPE[type(self.construction)]

    def first_point(self) -> Point3:
        c = self.construction
        if isinstance(c, Rod):
            return c.apex
        if isinstance(c, Mesh):
            return c.ring[0]
        return c.support1


@dataclass(frozen=True, slots=True)
class FontSettings:
    size: float
    slant: float = 0.0
    compression: float = 1.0


@dataclass(frozen=True, slots=True)
class PlanMarkLayout:
    """Section designation on the plan: strokes, arrows, letters (mm Paper)."""

    dash_len: float
    arrow_offset: float
    #: Signed; the sign picks the label side of the cut segment and with it
    #: the view direction.
    label_offset: float


@dataclass(frozen=True, slots=True)
class OwnLabelLayout:
    """Section designation on its own view (mm Paper)."""

    shelf_mid_offset: PaperVec
    above_gap: float
    below_gap: float
    scale_placement: ScalePlacement
    font: FontSettings


@dataclass(frozen=True, slots=True)
class DrawingSection:
    id: int
    letter: str
    #: Paper/Nature ratio of this view.
    scale: float
    #: Projection of the base point onto this view, whole-chart Paper frame.
    base_projection: PaperVec
    cut_p1: PlanPoint
    cut_p2: PlanPoint
    plan_label_layout: PlanMarkLayout
    own_label_layout: OwnLabelLayout


@dataclass(frozen=True, slots=True)
class ZoneSection:
    id: int
    #: PLAN or a DrawingSection id.
    section_ref: int
    terminal_refs: tuple[int, ...]
    #: mm Nature; present iff section_ref == PLAN.
    cut_height: Optional[float]
    color: Color
    linetype: Linetype


@dataclass(frozen=True, slots=True)
class TerminalText:
    id: int
    terminal_ref: int
    section_ref: int
    start_offset: PaperVec
    leader_point_offset: PaperVec
    leader_to_shelf_end: bool


@dataclass(frozen=True, slots=True)
class ZoneLevelText:
    id: int
    zone_section_ref: int
    start_offset: PaperVec
    leader_angle: float
    leader_to_shelf_end: bool
    two_lines: bool


@dataclass(frozen=True, slots=True)
class DistanceDim:
    id: int
    terminal_a: int
    terminal_b: int
    section_ref: int
    line_offset: PaperVec
    text_offset: float
    tick_style: TickStyle


@dataclass(frozen=True, slots=True)
class RadiusDimPlan:
    id: int
    param_text: str
    terminal_ref: int
    zone_section_ref: int
    #: Radians CCW from +X.
    angle: float
    auto_text_pos: bool
    text_offset: float
    manual_text_pos: PaperVec
    leader: LeaderMode
    leader_to_shelf_end: bool
    tick_style: TickStyle
    include_height_in_text: bool


@dataclass(frozen=True, slots=True)
class RadiusDimVert:
    id: int
    param_text: str
    terminal_ref: int
    section_ref: int
    line_offset: PaperVec
    text_offset: float
    tick_style: TickStyle
    direction: DimDirection


@dataclass(frozen=True, slots=True)
class MinWidthDim:
    id: int
    param_text: str
    #: Ordered: the dimension line goes left, perpendicular to a -> b.
    terminal_a: int
    terminal_b: int
    zone_section_ref: int
    auto_text_pos: bool
    text_offset: float
    manual_text_pos: PaperVec
    leader: LeaderMode
    leader_to_shelf_end: bool
    tick_style: TickStyle


@dataclass(frozen=True, slots=True)
class TableEntry:
    id: int
    terminal_ref: int
    #: Second terminal of a double entry, or None for a single.
    terminal_ref2: Optional[int]
    #: Protected level elevation, mm Nature, relative to the zero mark.
    protected_level: float


@dataclass(frozen=True, slots=True)
class GroundingElectrode:
    id: int
    center_offset: PlanPoint
    linetype: Linetype
    rod_count: int
    angle: float
    rod_spacing: float
    rod_diameter: float


@dataclass(frozen=True, slots=True)
class PlanViewSettings:
    label: str
    shelf_mid_offset: PaperVec
    above_gap: float
    below_gap: float
    scale: float
    scale_placement: ScalePlacement
    font: FontSettings


@dataclass(frozen=True, slots=True)
class TableSettings:
    corner_offset: PaperVec
    unit: LengthUnit
    precision: int
    row_height: float
    header_linetype: Linetype
    border_linetype: Linetype
    separator_linetype: Linetype
    font: FontSettings
    sort_mode: SortMode
    merge_identical_singles: bool


@dataclass(frozen=True, slots=True)
class SymbolSettings:
    square_side: float
    dot_diameter_plan: float
    dot_diameter_section: float
    triangle_base: float


@dataclass(frozen=True, slots=True)
class SectionMarkSettings:
    plan_font: FontSettings
    own_font: FontSettings
    arrow_tail_len: float
    arrow_len: float
    plan_color: Color
    own_color: Color


@dataclass(frozen=True, slots=True)
class TextStyle:
    font: FontSettings
    color: Color


@dataclass(frozen=True, slots=True)
class ZoneTextStyle:
    font: FontSettings
    precision: int
    color: Color


@dataclass(frozen=True, slots=True)
class DimCommonSettings:
    font: FontSettings
    extension_overrun: float
    tick_size: float


@dataclass(frozen=True, slots=True)
class DimKindSettings:
    precision: int
    color: Color


@dataclass(frozen=True, slots=True)
class HatchSettings:
    spacing: float


@dataclass(frozen=True, slots=True)
class GeneralSettings:
    base_point_paper: PaperVec
    zone_type: ZoneType
    plan_view: PlanViewSettings
    table: TableSettings
    terminal_symbols: SymbolSettings
    section_marks: SectionMarkSettings
    terminal_text_style: TextStyle
    zone_text_style: ZoneTextStyle
    dims_common: DimCommonSettings
    distance_dim: DimKindSettings
    radius_plan_dim: DimKindSettings
    radius_vert_dim: DimKindSettings
    min_width_dim: DimKindSettings
    grounding_color: Color
    mesh_hatch: HatchSettings


@dataclass(frozen=True, slots=True)
class TerminalDefaults:
    construction_variant: TerminalKind
    freestanding: bool
    color: Color
    linetype: Linetype


@dataclass(frozen=True, slots=True)
class SectionMarkDefaults:
    dash_len: float
    arrow_offset: float
    above_gap: float
    below_gap: float
    scale_placement: ScalePlacement


@dataclass(frozen=True, slots=True)
class ZoneSectionDefaults:
    color: Color
    linetype: Linetype


@dataclass(frozen=True, slots=True)
class TextDefaults:
    leader_to_shelf_end: bool


@dataclass(frozen=True, slots=True)
class ZoneTextDefaults:
    two_lines: bool


@dataclass(frozen=True, slots=True)
class DimDefaults:
    text_offset: float
    auto_text_pos: bool
    leader: LeaderMode
    leader_to_shelf_end: bool
    tick_style: TickStyle


@dataclass(frozen=True, slots=True)
class PlanRadiusDimDefaults:
    include_height_in_text: bool


@dataclass(frozen=True, slots=True)
class GroundingDefaults:
    linetype: Linetype
    rod_count: int
    angle: float
    rod_spacing: float
    rod_diameter: float


@dataclass(frozen=True, slots=True)
class DefaultSettings:
    terminal: TerminalDefaults
    section_mark: SectionMarkDefaults
    zone_section: ZoneSectionDefaults
    texts: TextDefaults
    zone_text: ZoneTextDefaults
    dims: DimDefaults
    plan_radius_dims: PlanRadiusDimDefaults
    grounding: GroundingDefaults


#: Names of the object-list fields of Project, in schema order.
OBJECT_LISTS = (
    "terminals",
    "drawing_sections",
    "zone_sections",
    "terminal_texts",
    "zone_texts",
    "distance_dims",
    "radius_dims_plan",
    "radius_dims_vert",
    "min_width_dims",
    "table_entries",
    "grounding",
)


@dataclass(frozen=True, slots=True)
class Project:
    general: GeneralSettings
    defaults: DefaultSettings
    terminals: tuple[AirTerminal, ...] = ()
    drawing_sections: tuple[DrawingSection, ...] = ()
    zone_sections: tuple[ZoneSection, ...] = ()
    terminal_texts: tuple[TerminalText, ...] = ()
    zone_texts: tuple[ZoneLevelText, ...] = ()
    distance_dims: tuple[DistanceDim, ...] = ()
    radius_dims_plan: tuple[RadiusDimPlan, ...] = ()
    radius_dims_vert: tuple[RadiusDimVert, ...] = ()
    min_width_dims: tuple[MinWidthDim, ...] = ()
    table_entries: tuple[TableEntry, ...] = ()
    grounding: tuple[GroundingElectrode, ...] = ()
    next_id: int = 1

    def _find(self, list_name: str, obj_id: int):
        for obj in getattr(self, list_name):
            if obj.id == obj_id:
                return obj
        return None

    def terminal(self, obj_id: int) -> Optional[AirTerminal]:
        return self._find("terminals", obj_id)

    def drawing_section(self, obj_id: int) -> Optional[DrawingSection]:
        return self._find("drawing_sections", obj_id)

    def zone_section(self, obj_id: int) -> Optional[ZoneSection]:
        return self._find("zone_sections", obj_id)

    def zone_section_for(self, section_ref: int) -> Optional[ZoneSection]:
        """The (at most one) zone section bound to a view."""
        for zs in self.zone_sections:
            if zs.section_ref == section_ref:
                return zs
        return None

    def all_ids(self) -> set[int]:
        out = set()
        for name in OBJECT_LISTS:
            out.update(obj.id for obj in getattr(self, name))
        return out


@dataclass(frozen=True, slots=True)
class Violation:
    path: str
    kind: str
    message: str


@dataclass(frozen=True, slots=True)
class RefSpec:
    """One reference edge of the document graph.

    ``collection`` references shrink on target deletion; scalar references
    delete their owner. validate() and the editops cascade both read this
    table, so the dangling-ref check and the cascade can never disagree.
    """

    list_name: str
    field_name: str
    target: str
    allow_plan: bool = False
    optional: bool = False
    collection: bool = False


REF_SPECS: tuple[RefSpec, ...] = (
    RefSpec("zone_sections", "section_ref", "drawing_sections", allow_plan=True),
    RefSpec("zone_sections", "terminal_refs", "terminals", collection=True),
    RefSpec("terminal_texts", "terminal_ref", "terminals"),
    RefSpec("terminal_texts", "section_ref", "drawing_sections", allow_plan=True),
    RefSpec("zone_texts", "zone_section_ref", "zone_sections"),
    RefSpec("distance_dims", "terminal_a", "terminals"),
    RefSpec("distance_dims", "terminal_b", "terminals"),
    RefSpec("distance_dims", "section_ref", "drawing_sections", allow_plan=True),
    RefSpec("radius_dims_plan", "terminal_ref", "terminals"),
    RefSpec("radius_dims_plan", "zone_section_ref", "zone_sections"),
    RefSpec("radius_dims_vert", "terminal_ref", "terminals"),
    RefSpec("radius_dims_vert", "section_ref", "drawing_sections"),
    RefSpec("min_width_dims", "terminal_a", "terminals"),
    RefSpec("min_width_dims", "terminal_b", "terminals"),
    RefSpec("min_width_dims", "zone_section_ref", "zone_sections"),
    RefSpec("table_entries", "terminal_ref", "terminals"),
    RefSpec("table_entries", "terminal_ref2", "terminals", optional=True),
)


def mesh_ring_area(ring) -> float:
    """Signed shoelace area of a horizontal ring, mm². Positive iff CCW.

    Raises GeometryError when the vertices do not share one z.
    """
    pts = tuple(ring)
    if len(pts) < 3:
        raise GeometryError("mesh ring needs at least 3 vertices")
    z0 = pts[0].z
    for p in pts:
        if abs(p.z - z0) > TOL:
            raise GeometryError("mesh ring vertices must share one z")
    area = 0.0
    for a, b in zip(pts, pts[1:] + pts[:1]):
        area += a.x * b.y - b.x * a.y
    return 0.5 * area


def _segments_cross(p1, p2, q1, q2) -> bool:
    """Strict proper intersection of two plan segments (shared endpoints ok)."""

    def orient(a, b, c):
        return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0 and d3 != 0 and d4 != 0


def mesh_self_intersects(ring) -> bool:
    pts = tuple(ring)
    n = len(pts)
    edges = [(pts[i], pts[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j == (i + 1) % n) or ((j + 1) % n == i):
                continue
            if _segments_cross(*edges[i], *edges[j]):
                return True
    return False


def _finite(*values) -> bool:
    return all(isinstance(v, (int, float)) and math.isfinite(v) for v in values)


def _point_finite(p: Point3) -> bool:
    return _finite(p.x, p.y, p.z)


class _Collector:
    def __init__(self):
        self.items: list[Violation] = []

    def add(self, path, kind, message):
        self.items.append(Violation(path, kind, message))

    def rng(self, value, lo, hi, path, name):
        if not _finite(value):
            self.add(path, "Finite", f"{name} must be finite")
        elif not (lo <= value <= hi):
            self.add(path, "Range", f"{name} out of {lo:g}..{hi:g}")

    def positive(self, value, path, name):
        if not _finite(value) or value <= 0:
            self.add(path, "Range", f"{name} must be > 0")


def _check_font(f: FontSettings, path: str, out: _Collector):
    out.positive(f.size, f"{path}.size", "size")
    out.positive(f.compression, f"{path}.compression", "compression")
    if not _finite(f.slant):
        out.add(f"{path}.slant", "Finite", "slant must be finite")


def _check_general(g: GeneralSettings, out: _Collector, prefix="general"):
    if not _finite(g.base_point_paper.dx, g.base_point_paper.dy):
        out.add(f"{prefix}.base_point_paper", "Finite", "base point must be finite")
    out.positive(g.plan_view.scale, f"{prefix}.plan_view.scale", "scale")
    _check_font(g.plan_view.font, f"{prefix}.plan_view.font", out)
    t = g.table
    out.rng(t.precision, 0, 7, f"{prefix}.table.precision", "precision")
    out.rng(t.row_height, 3.0, 50.0, f"{prefix}.table.row_height", "row_height")
    _check_font(t.font, f"{prefix}.table.font", out)
    s = g.terminal_symbols
    out.positive(s.square_side, f"{prefix}.terminal_symbols.square_side", "square_side")
    out.positive(s.dot_diameter_plan, f"{prefix}.terminal_symbols.dot_diameter_plan", "dot_diameter_plan")
    out.positive(s.dot_diameter_section, f"{prefix}.terminal_symbols.dot_diameter_section", "dot_diameter_section")
    out.positive(s.triangle_base, f"{prefix}.terminal_symbols.triangle_base", "triangle_base")
    m = g.section_marks
    _check_font(m.plan_font, f"{prefix}.section_marks.plan_font", out)
    _check_font(m.own_font, f"{prefix}.section_marks.own_font", out)
    out.positive(m.arrow_tail_len, f"{prefix}.section_marks.arrow_tail_len", "arrow_tail_len")
    out.positive(m.arrow_len, f"{prefix}.section_marks.arrow_len", "arrow_len")
    _check_font(g.terminal_text_style.font, f"{prefix}.terminal_text_style.font", out)
    _check_font(g.zone_text_style.font, f"{prefix}.zone_text_style.font", out)
    out.rng(g.zone_text_style.precision, 0, 7, f"{prefix}.zone_text_style.precision", "precision")
    _check_font(g.dims_common.font, f"{prefix}.dims_common.font", out)
    out.rng(g.dims_common.extension_overrun, 0.0, 7.5, f"{prefix}.dims_common.extension_overrun", "extension_overrun")
    out.rng(g.dims_common.tick_size, 0.0, 12.6, f"{prefix}.dims_common.tick_size", "tick_size")
    for name in ("distance_dim", "radius_plan_dim", "radius_vert_dim", "min_width_dim"):
        out.rng(getattr(g, name).precision, 0, 7, f"{prefix}.{name}.precision", "precision")
    out.positive(g.mesh_hatch.spacing, f"{prefix}.mesh_hatch.spacing", "spacing")


def _check_defaults(d: DefaultSettings, out: _Collector, prefix="defaults"):
    sm = d.section_mark
    out.rng(sm.dash_len, 0.0, 25.5, f"{prefix}.section_mark.dash_len", "dash_len")
    out.rng(sm.arrow_offset, 0.0, 25.5, f"{prefix}.section_mark.arrow_offset", "arrow_offset")
    out.rng(sm.above_gap, 0.0, 25.5, f"{prefix}.section_mark.above_gap", "above_gap")
    out.rng(sm.below_gap, 0.0, 25.5, f"{prefix}.section_mark.below_gap", "below_gap")
    if not _finite(d.dims.text_offset):
        out.add(f"{prefix}.dims.text_offset", "Finite", "text_offset must be finite")
    gr = d.grounding
    out.rng(gr.rod_count, 1, 32, f"{prefix}.grounding.rod_count", "rod_count")
    out.rng(gr.rod_spacing, 3000.0, 5000.0, f"{prefix}.grounding.rod_spacing", "rod_spacing")
    out.positive(gr.rod_diameter, f"{prefix}.grounding.rod_diameter", "rod_diameter")
    if not _finite(gr.angle):
        out.add(f"{prefix}.grounding.angle", "Finite", "angle must be finite")


def _check_terminal(t: AirTerminal, path: str, out: _Collector):
    c = t.construction
    if isinstance(c, Rod):
        if not _point_finite(c.apex):
            out.add(f"{path}.construction.apex", "Finite", "apex must be finite")
            return
        if t.height is None or not _finite(t.height) or t.height <= 0:
            out.add(f"{path}.height", "Range", "height must be > 0")
            return
        if t.height > MAX_HEIGHT_MM:
            out.add(f"{path}.height", "Range", f"height out of 0..{MAX_HEIGHT_MM:g}")
        if c.apex.z > MAX_HEIGHT_MM:
            out.add(f"{path}.construction.apex", "Range", f"apex elevation out of 0..{MAX_HEIGHT_MM:g}")
        mount_z = c.apex.z - t.height
        if mount_z < -TOL:
            out.add(f"{path}.construction.apex", "Range", "apex below mounting elevation zero")
        if c.freestanding and abs(mount_z) > TOL:
            out.add(f"{path}.construction", "Geometry", "freestanding rod requires apex.z == height")
    elif isinstance(c, Mesh):
        if t.height is not None:
            out.add(f"{path}.height", "Range", "mesh terminals carry no height")
        if len(c.ring) < 3:
            out.add(f"{path}.construction.ring", "Degenerate", "mesh ring needs at least 3 vertices")
            return
        if not all(_point_finite(p) for p in c.ring):
            out.add(f"{path}.construction.ring", "Finite", "ring vertices must be finite")
            return
        z0 = c.ring[0].z
        if any(abs(p.z - z0) > TOL for p in c.ring):
            out.add(f"{path}.construction.ring", "Geometry", "ring vertices must share one z")
            return
        if not (0.0 <= z0 <= MAX_HEIGHT_MM):
            out.add(f"{path}.construction.ring", "Range", f"ring elevation out of 0..{MAX_HEIGHT_MM:g}")
        area = mesh_ring_area(c.ring)
        if area == 0.0:
            out.add(f"{path}.construction.ring", "Degenerate", "ring is degenerate (zero area)")
        elif area < 0.0:
            out.add(f"{path}.construction.ring", "Orientation", "ring must be counter-clockwise")
        if mesh_self_intersects(c.ring):
            out.add(f"{path}.construction.ring", "Geometry", "ring must not self-intersect")
    else:
        s1, s2 = c.support1, c.support2
        if not (_point_finite(s1) and _point_finite(s2)):
            out.add(f"{path}.construction", "Finite", "supports must be finite")
            return
        if abs(s1.z - s2.z) > TOL:
            out.add(f"{path}.construction", "Geometry", "support z must be equal for both points")
        if math.hypot(s2.x - s1.x, s2.y - s1.y) <= TOL:
            out.add(f"{path}.construction", "Degenerate", "supports must be distinct in plan")
        if t.height is None or not _finite(t.height) or t.height <= 0:
            out.add(f"{path}.height", "Range", "height must be > 0")
            return
        if t.height > MAX_HEIGHT_MM:
            out.add(f"{path}.height", "Range", f"height out of 0..{MAX_HEIGHT_MM:g}")
        if abs(s1.z - t.height) > TOL:
            out.add(f"{path}.height", "Geometry", "wire height must equal support elevation")
        if isinstance(c, DoubleWire):
            if not _finite(c.offset2) or abs(c.offset2) <= TOL:
                out.add(f"{path}.construction.offset2", "Degenerate", "second wire offset must be nonzero")
            if not _finite(c.height2) or not (0.0 < c.height2 <= MAX_HEIGHT_MM):
                out.add(f"{path}.construction.height2", "Range", f"height2 out of 0..{MAX_HEIGHT_MM:g}")


def validate(p: Project) -> list[Violation]:
    """All invariant and cross-reference violations, ordered by path."""
    out = _Collector()
    _check_general(p.general, out)
    _check_defaults(p.defaults, out)

    ids_by_list: dict[str, set[int]] = {}
    seen: set[int] = set()
    max_id = 0
    for name in OBJECT_LISTS:
        ids = set()
        for i, obj in enumerate(getattr(p, name)):
            if obj.id in seen:
                out.add(f"{name}[{i}].id", "DuplicateId", f"id {obj.id} already used")
            elif obj.id <= 0:
                out.add(f"{name}[{i}].id", "Range", "id must be >= 1")
            seen.add(obj.id)
            ids.add(obj.id)
            max_id = max(max_id, obj.id)
        ids_by_list[name] = ids
    if p.next_id <= max_id:
        out.add("next_id", "Range", f"next_id {p.next_id} not above max id {max_id}")

    for spec in REF_SPECS:
        objs = getattr(p, spec.list_name)
        targets = ids_by_list[spec.target]
        for i, obj in enumerate(objs):
            value = getattr(obj, spec.field_name)
            refs = value if spec.collection else (value,)
            for r in refs:
                if r is None:
                    if spec.optional:
                        continue
                    out.add(f"{spec.list_name}[{i}].{spec.field_name}", "DanglingRef", "reference missing")
                    continue
                if spec.allow_plan and r == PLAN:
                    continue
                if r not in targets:
                    out.add(
                        f"{spec.list_name}[{i}].{spec.field_name}",
                        "DanglingRef",
                        f"no {spec.target} object with id {r}",
                    )

    for i, t in enumerate(p.terminals):
        _check_terminal(t, f"terminals[{i}]", out)

    for i, s in enumerate(p.drawing_sections):
        path = f"drawing_sections[{i}]"
        out.positive(s.scale, f"{path}.scale", "scale")
        if math.hypot(s.cut_p2.x - s.cut_p1.x, s.cut_p2.y - s.cut_p1.y) <= TOL:
            out.add(f"{path}.cut_segment", "Degenerate", "cut segment must have nonzero length")
        pl = s.plan_label_layout
        out.rng(pl.dash_len, 0.0, 25.5, f"{path}.plan_label_layout.dash_len", "dash_len")
        out.rng(pl.arrow_offset, 0.0, 25.5, f"{path}.plan_label_layout.arrow_offset", "arrow_offset")
        if not _finite(pl.label_offset):
            out.add(f"{path}.plan_label_layout.label_offset", "Finite", "label_offset must be finite")
        ol = s.own_label_layout
        out.rng(ol.above_gap, 0.0, 25.5, f"{path}.own_label_layout.above_gap", "above_gap")
        out.rng(ol.below_gap, 0.0, 25.5, f"{path}.own_label_layout.below_gap", "below_gap")
        _check_font(ol.font, f"{path}.own_label_layout.font", out)

    section_use: dict[int, int] = {}
    for i, zs in enumerate(p.zone_sections):
        path = f"zone_sections[{i}]"
        if zs.section_ref in section_use:
            out.add(f"{path}.section_ref", "Duplicate", "view already carries a zone section")
        else:
            section_use[zs.section_ref] = zs.id
        if zs.section_ref == PLAN:
            if zs.cut_height is None:
                out.add(f"{path}.cut_height", "Range", "plan zone section requires cut_height")
            elif not _finite(zs.cut_height) or zs.cut_height < 0:
                out.add(f"{path}.cut_height", "Range", "cut_height must be >= 0")
        elif zs.cut_height is not None:
            out.add(f"{path}.cut_height", "Range", "cut_height only on the plan zone section")
        if len(set(zs.terminal_refs)) != len(zs.terminal_refs):
            out.add(f"{path}.terminal_refs", "Duplicate", "terminal listed twice")

    zs_by_id = {zs.id: zs for zs in p.zone_sections}
    term_by_id = {t.id: t for t in p.terminals}

    for i, zt in enumerate(p.zone_texts):
        zs = zs_by_id.get(zt.zone_section_ref)
        if zs is not None and zs.section_ref != PLAN:
            out.add(f"zone_texts[{i}].zone_section_ref", "Geometry", "zone text requires a plan-bound zone section")
        if not _finite(zt.leader_angle):
            out.add(f"zone_texts[{i}].leader_angle", "Finite", "leader_angle must be finite")

    for i, d in enumerate(p.distance_dims):
        path = f"distance_dims[{i}]"
        if d.terminal_a == d.terminal_b:
            out.add(f"{path}.terminal_b", "Geometry", "distance needs two distinct terminals")
        for fld in ("terminal_a", "terminal_b"):
            t = term_by_id.get(getattr(d, fld))
            if t is not None and t.kind is not TerminalKind.ROD:
                out.add(f"{path}.{fld}", "Kind", "distance dims join rod terminals")

    for i, d in enumerate(p.radius_dims_plan):
        path = f"radius_dims_plan[{i}]"
        t = term_by_id.get(d.terminal_ref)
        if t is not None and t.kind is not TerminalKind.ROD:
            out.add(f"{path}.terminal_ref", "Kind", "plan radius dims measure rod terminals")
        zs = zs_by_id.get(d.zone_section_ref)
        if zs is not None:
            if zs.section_ref != PLAN:
                out.add(f"{path}.zone_section_ref", "Geometry", "zone section must be plan-bound")
            elif d.terminal_ref not in zs.terminal_refs:
                out.add(f"{path}.terminal_ref", "Geometry", "terminal not in the zone section")

    for i, d in enumerate(p.radius_dims_vert):
        t = term_by_id.get(d.terminal_ref)
        if t is not None and t.kind is TerminalKind.MESH:
            out.add(f"radius_dims_vert[{i}].terminal_ref", "Kind", "mesh terminals have no zone radius")

    for i, d in enumerate(p.min_width_dims):
        path = f"min_width_dims[{i}]"
        ta = term_by_id.get(d.terminal_a)
        tb = term_by_id.get(d.terminal_b)
        zs = zs_by_id.get(d.zone_section_ref)
        if zs is not None and zs.section_ref != PLAN:
            out.add(f"{path}.zone_section_ref", "Geometry", "zone section must be plan-bound")
        if ta is None or tb is None:
            continue
        if d.terminal_a == d.terminal_b:
            if ta.kind is not TerminalKind.DOUBLE_WIRE:
                out.add(f"{path}.terminal_b", "Kind", "self-pair allowed only for double wires")
        else:
            if ta.kind is not TerminalKind.ROD or tb.kind is not TerminalKind.ROD:
                out.add(f"{path}.terminal_a", "Kind", "pair must join rod terminals")
            elif ta.height is not None and tb.height is not None and abs(ta.height - tb.height) > TOL:
                out.add(f"{path}.terminal_b", "Geometry", "paired rods must share one height")

    for i, e in enumerate(p.table_entries):
        path = f"table_entries[{i}]"
        if not _finite(e.protected_level) or e.protected_level < 0:
            out.add(f"{path}.protected_level", "Range", "protected_level must be >= 0")
        t1 = term_by_id.get(e.terminal_ref)
        if t1 is not None and t1.kind is TerminalKind.MESH:
            out.add(f"{path}.terminal_ref", "Kind", "mesh terminals do not enter the table")
        if e.terminal_ref2 is not None:
            if e.terminal_ref2 == e.terminal_ref:
                out.add(f"{path}.terminal_ref2", "Geometry", "double entry needs two distinct terminals")
            for fld in ("terminal_ref", "terminal_ref2"):
                t = term_by_id.get(getattr(e, fld))
                if t is not None and t.kind is not TerminalKind.ROD:
                    out.add(f"{path}.{fld}", "Kind", "double table entries join rod terminals")

    for i, g in enumerate(p.grounding):
        path = f"grounding[{i}]"
        out.rng(g.rod_count, 1, 32, f"{path}.rod_count", "rod_count")
        out.rng(g.rod_spacing, 3000.0, 25000.0, f"{path}.rod_spacing", "rod_spacing")
        out.positive(g.rod_diameter, f"{path}.rod_diameter", "rod_diameter")
        if not _finite(g.angle, g.center_offset.x, g.center_offset.y):
            out.add(f"{path}.angle", "Finite", "grounding geometry must be finite")

    return sorted(out.items, key=lambda v: (v.path, v.kind, v.message))


def validate_settings(general: GeneralSettings, defaults: DefaultSettings) -> list[Violation]:
    out = _Collector()
    _check_general(general, out)
    _check_defaults(defaults, out)
    return sorted(out.items, key=lambda v: (v.path, v.kind, v.message))


def new_project(general: GeneralSettings, defaults: DefaultSettings) -> Project:
    """Fresh empty document. Raises ValidationError on bad settings."""
    violations = validate_settings(general, defaults)
    if violations:
        raise ValidationError(violations)
    return Project(general=general, defaults=defaults)


def default_font(size: float = 3.5) -> FontSettings:
    return FontSettings(size=size, slant=0.0, compression=1.0)


def default_general_settings() -> GeneralSettings:
    return GeneralSettings(
        base_point_paper=PaperVec(60.0, 90.0),
        zone_type=ZoneType.B,
        plan_view=PlanViewSettings(
            label="План",
            shelf_mid_offset=PaperVec(0.0, 120.0),
            above_gap=1.5,
            below_gap=2.0,
            scale=0.01,
            scale_placement=ScalePlacement.INLINE,
            font=default_font(5.0),
        ),
        table=TableSettings(
            corner_offset=PaperVec(150.0, 0.0),
            unit=LengthUnit.M,
            precision=2,
            row_height=8.0,
            header_linetype=Linetype.THICK_SOLID,
            border_linetype=Linetype.THICK_SOLID,
            separator_linetype=Linetype.SOLID,
            font=default_font(3.5),
            sort_mode=SortMode.NONE,
            merge_identical_singles=False,
        ),
        terminal_symbols=SymbolSettings(
            square_side=4.0,
            dot_diameter_plan=1.2,
            dot_diameter_section=1.2,
            triangle_base=3.0,
        ),
        section_marks=SectionMarkSettings(
            plan_font=default_font(7.0),
            own_font=default_font(7.0),
            arrow_tail_len=6.0,
            arrow_len=4.0,
            plan_color=Color.BLACK,
            own_color=Color.BLACK,
        ),
        terminal_text_style=TextStyle(font=default_font(3.5), color=Color.BLACK),
        zone_text_style=ZoneTextStyle(font=default_font(3.5), precision=2, color=Color.BLUE),
        dims_common=DimCommonSettings(font=default_font(3.5), extension_overrun=2.0, tick_size=2.5),
        distance_dim=DimKindSettings(precision=2, color=Color.BLACK),
        radius_plan_dim=DimKindSettings(precision=2, color=Color.BLACK),
        radius_vert_dim=DimKindSettings(precision=2, color=Color.BLACK),
        min_width_dim=DimKindSettings(precision=2, color=Color.BLACK),
        grounding_color=Color.BLACK,
        mesh_hatch=HatchSettings(spacing=3.0),
    )


def default_default_settings() -> DefaultSettings:
    return DefaultSettings(
        terminal=TerminalDefaults(
            construction_variant=TerminalKind.ROD,
            freestanding=True,
            color=Color.BLACK,
            linetype=Linetype.SOLID,
        ),
        section_mark=SectionMarkDefaults(
            dash_len=8.0,
            arrow_offset=2.0,
            above_gap=1.5,
            below_gap=2.0,
            scale_placement=ScalePlacement.INLINE,
        ),
        zone_section=ZoneSectionDefaults(color=Color.BLUE, linetype=Linetype.DASHED),
        texts=TextDefaults(leader_to_shelf_end=False),
        zone_text=ZoneTextDefaults(two_lines=False),
        dims=DimDefaults(
            text_offset=1.0,
            auto_text_pos=True,
            leader=LeaderMode.NONE,
            leader_to_shelf_end=False,
            tick_style=TickStyle.ARROW_IN,
        ),
        plan_radius_dims=PlanRadiusDimDefaults(include_height_in_text=False),
        grounding=GroundingDefaults(
            linetype=Linetype.SOLID,
            rod_count=3,
            angle=0.0,
            rod_spacing=4000.0,
            rod_diameter=25.0,
        ),
    )
