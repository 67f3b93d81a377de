"""Command layer: every menu operation as a validated, cascading transform.

apply() is pure: project in, project out, plus a ChangeSet. A rejected
command raises and the input project is untouched (values are immutable).
Cascades follow the shared reference graph in model.REF_SPECS, the same
table validate() uses for dangling-reference checks.
"""

from __future__ import annotations

import dataclasses
import math
import re
from dataclasses import dataclass, replace
from typing import Optional

from .codec import decode, encode
from .errors import GeometryError, KindError, ParseError, RefError, ValidationError
from .model import (
    OBJECT_LISTS,
    PLAN,
    TOL,
    REF_SPECS,
    AirTerminal,
    Color,
    Construction,
    DefaultSettings,
    DimDirection,
    DistanceDim,
    DoubleWire,
    DrawingSection,
    GeneralSettings,
    GroundingElectrode,
    LeaderMode,
    Linetype,
    Mesh,
    MinWidthDim,
    OwnLabelLayout,
    PaperVec,
    PlanMarkLayout,
    PlanPoint,
    Point3,
    Project,
    RadiusDimPlan,
    RadiusDimVert,
    Rod,
    TableEntry,
    TerminalText,
    TickStyle,
    Violation,
    Wire,
    ZoneLevelText,
    ZoneSection,
    validate,
)


@dataclass(frozen=True, slots=True)
class ChangeSet:
    created: tuple[int, ...] = ()
    deleted: tuple[int, ...] = ()
    modified: tuple[int, ...] = ()
    diagnostics: tuple[str, ...] = ()


# --- Command payloads -------------------------------------------------------

@dataclass(frozen=True, slots=True)
class AddTerminal:
    construction: Construction
    label: Optional[str] = None
    type_text: str = ""
    height: Optional[float] = None
    freestanding: Optional[bool] = None
    color: Optional[Color] = None
    linetype: Optional[Linetype] = None


@dataclass(frozen=True, slots=True)
class DeleteTerminal:
    id: int
    #: DrawingSection id: drop the terminal from that section's zone section
    #: only; None deletes it from the whole project with cascades.
    section_context: Optional[int] = None


@dataclass(frozen=True, slots=True)
class MoveTerminal:
    id: int
    dx: float = 0.0
    dy: float = 0.0
    dz: float = 0.0
    section_context: Optional[int] = None


@dataclass(frozen=True, slots=True)
class CopyTerminal:
    id: int
    x: float
    y: float


@dataclass(frozen=True, slots=True)
class SetTerminalProps:
    id: int
    label: Optional[str] = None
    type_text: Optional[str] = None
    color: Optional[Color] = None
    linetype: Optional[Linetype] = None
    height: Optional[float] = None
    freestanding: Optional[bool] = None
    offset2: Optional[float] = None
    height2: Optional[float] = None


@dataclass(frozen=True, slots=True)
class AddMeshVertex:
    id: int
    index: int
    x: float
    y: float


@dataclass(frozen=True, slots=True)
class MoveMeshVertex:
    id: int
    index: int
    dx: float
    dy: float


@dataclass(frozen=True, slots=True)
class DeleteMeshVertex:
    id: int
    index: int


@dataclass(frozen=True, slots=True)
class AddDrawingSection:
    letter: str
    scale: float
    base_projection: PaperVec
    cut_p1: PlanPoint
    cut_p2: PlanPoint
    label_offset: float = 10.0
    shelf_mid_offset: PaperVec = PaperVec(0.0, 60.0)


@dataclass(frozen=True, slots=True)
class DeleteDrawingSection:
    id: int


@dataclass(frozen=True, slots=True)
class MoveDrawingSectionMark:
    id: int
    dx: float
    dy: float


@dataclass(frozen=True, slots=True)
class SetCutSegment:
    id: int
    cut_p1: PlanPoint
    cut_p2: PlanPoint


@dataclass(frozen=True, slots=True)
class MoveSectionView:
    id: int
    d: PaperVec


@dataclass(frozen=True, slots=True)
class AddZoneSection:
    section_ref: int
    terminal_refs: tuple[int, ...]
    cut_height: Optional[float] = None
    color: Optional[Color] = None
    linetype: Optional[Linetype] = None


@dataclass(frozen=True, slots=True)
class DeleteZoneSection:
    id: int


@dataclass(frozen=True, slots=True)
class SetZoneSectionProps:
    id: int
    cut_height: Optional[float] = None
    color: Optional[Color] = None
    linetype: Optional[Linetype] = None


@dataclass(frozen=True, slots=True)
class AddTerminalToZoneSection:
    zone_section_id: int
    terminal_id: int


@dataclass(frozen=True, slots=True)
class RemoveTerminalFromZoneSection:
    zone_section_id: int
    terminal_id: int


@dataclass(frozen=True, slots=True)
class AddTerminalText:
    terminal_ref: int
    start_offset: PaperVec
    section_ref: int = PLAN
    leader_point_offset: PaperVec = PaperVec(0.0, 0.0)
    leader_to_shelf_end: Optional[bool] = None


@dataclass(frozen=True, slots=True)
class MoveTerminalText:
    id: int
    d: PaperVec


@dataclass(frozen=True, slots=True)
class DeleteTerminalText:
    id: int


@dataclass(frozen=True, slots=True)
class AddZoneLevelText:
    zone_section_ref: int
    start_offset: PaperVec
    leader_angle: float = 0.0
    leader_to_shelf_end: Optional[bool] = None
    two_lines: Optional[bool] = None


@dataclass(frozen=True, slots=True)
class MoveZoneLevelText:
    id: int
    d: PaperVec


@dataclass(frozen=True, slots=True)
class DeleteZoneLevelText:
    id: int


@dataclass(frozen=True, slots=True)
class AddDistanceDim:
    terminal_a: int
    terminal_b: int
    line_offset: PaperVec
    section_ref: int = PLAN
    text_offset: Optional[float] = None
    tick_style: Optional[TickStyle] = None


@dataclass(frozen=True, slots=True)
class MoveDistanceDim:
    id: int
    d: PaperVec


@dataclass(frozen=True, slots=True)
class DeleteDistanceDim:
    id: int


@dataclass(frozen=True, slots=True)
class AddRadiusDimPlan:
    param_text: str
    terminal_ref: int
    zone_section_ref: int
    angle: float
    auto_text_pos: Optional[bool] = None
    text_offset: Optional[float] = None
    manual_text_pos: PaperVec = PaperVec(0.0, 0.0)
    leader: Optional[LeaderMode] = None
    leader_to_shelf_end: Optional[bool] = None
    tick_style: Optional[TickStyle] = None
    include_height_in_text: Optional[bool] = None


@dataclass(frozen=True, slots=True)
class MoveRadiusDimPlan:
    id: int
    angle: float


@dataclass(frozen=True, slots=True)
class DeleteRadiusDimPlan:
    id: int


@dataclass(frozen=True, slots=True)
class AddRadiusDimVert:
    param_text: str
    terminal_ref: int
    section_ref: int
    line_offset: PaperVec
    text_offset: Optional[float] = None
    tick_style: Optional[TickStyle] = None
    direction: DimDirection = DimDirection.LEFT


@dataclass(frozen=True, slots=True)
class MoveRadiusDimVert:
    id: int
    d: PaperVec


@dataclass(frozen=True, slots=True)
class DeleteRadiusDimVert:
    id: int


@dataclass(frozen=True, slots=True)
class AddMinWidthDim:
    param_text: str
    terminal_a: int
    terminal_b: int
    zone_section_ref: int
    auto_text_pos: Optional[bool] = None
    text_offset: Optional[float] = None
    manual_text_pos: PaperVec = PaperVec(0.0, 0.0)
    leader: Optional[LeaderMode] = None
    leader_to_shelf_end: Optional[bool] = None
    tick_style: Optional[TickStyle] = None


@dataclass(frozen=True, slots=True)
class MoveMinWidthDim:
    id: int
    d: PaperVec


@dataclass(frozen=True, slots=True)
class DeleteMinWidthDim:
    id: int


@dataclass(frozen=True, slots=True)
class AddTableEntry:
    terminal_ref: int
    protected_level: float
    terminal_ref2: Optional[int] = None


@dataclass(frozen=True, slots=True)
class DeleteTableEntry:
    id: int


@dataclass(frozen=True, slots=True)
class EditTableEntry:
    id: int
    protected_level: Optional[float] = None
    terminal_ref: Optional[int] = None
    terminal_ref2: Optional[int] = None
    clear_ref2: bool = False


@dataclass(frozen=True, slots=True)
class AddGroundingElectrode:
    center_offset: PlanPoint
    linetype: Optional[Linetype] = None
    rod_count: Optional[int] = None
    angle: Optional[float] = None
    rod_spacing: Optional[float] = None
    rod_diameter: Optional[float] = None


@dataclass(frozen=True, slots=True)
class DeleteGroundingElectrode:
    id: int


@dataclass(frozen=True, slots=True)
class MoveGroundingElectrode:
    id: int
    dx: float
    dy: float


@dataclass(frozen=True, slots=True)
class CopyGroundingElectrode:
    id: int
    x: float
    y: float


@dataclass(frozen=True, slots=True)
class MoveProject:
    d: PaperVec


@dataclass(frozen=True, slots=True)
class UpdateGeneralSettings:
    general: GeneralSettings


@dataclass(frozen=True, slots=True)
class UpdateDefaults:
    defaults: DefaultSettings


COMMAND_TYPES: dict[str, type] = {}
_KIND_BY_COMMAND: dict[type, str] = {}


def _register_commands():
    import sys

    module = sys.modules[__name__]
    for name in dir(module):
        obj = getattr(module, name)
        if (
            isinstance(obj, type)
            and dataclasses.is_dataclass(obj)
            and obj.__module__ == __name__
            and name not in ("ChangeSet",)
        ):
            kind = re.sub(r"(?<!^)(?=[A-Z])", "_", name).lower()
            COMMAND_TYPES[kind] = obj
            _KIND_BY_COMMAND[obj] = kind


_register_commands()


def command_to_obj(c) -> dict:
    kind = _KIND_BY_COMMAND.get(type(c))
    if kind is None:
        raise KindError(f"not a command: {type(c).__name__}")
    out = {"kind": kind}
    out.update(encode(c))
    return out


def command_from_obj(obj) -> object:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError("$: command needs a kind tag")
    cls = COMMAND_TYPES.get(obj["kind"])
    if cls is None:
        raise ParseError(f"$: unknown command kind {obj['kind']!r}")
    rest = {k: v for k, v in obj.items() if k != "kind"}
    return decode(cls, rest, "$")


# --- helpers ----------------------------------------------------------------

def _rep(p: Project, name: str, value) -> Project:
    return replace(p, **{name: value})


def _alloc(p: Project) -> tuple[Project, int]:
    return replace(p, next_id=p.next_id + 1), p.next_id


def _owner_index(p: Project) -> dict[int, str]:
    idx = {}
    for name in OBJECT_LISTS:
        for obj in getattr(p, name):
            idx[obj.id] = name
    return idx


def _require(p: Project, list_name: str, obj_id: int):
    obj = p._find(list_name, obj_id)
    if obj is None:
        raise RefError(f"no {list_name} object with id {obj_id}")
    return obj


def _translate_point(pt: Point3, dx, dy, dz=0.0) -> Point3:
    return Point3(pt.x + dx, pt.y + dy, pt.z + dz)


def _translate_construction(c: Construction, dx, dy, dz=0.0) -> Construction:
    if isinstance(c, Rod):
        return replace(c, apex=_translate_point(c.apex, dx, dy, dz))
    if isinstance(c, Mesh):
        return replace(c, ring=tuple(_translate_point(q, dx, dy, dz) for q in c.ring))
    if isinstance(c, Wire):
        return Wire(_translate_point(c.support1, dx, dy, dz), _translate_point(c.support2, dx, dy, dz))
    return replace(
        c,
        support1=_translate_point(c.support1, dx, dy, dz),
        support2=_translate_point(c.support2, dx, dy, dz),
    )


def _bump_label(p: Project, label: str) -> str:
    used = {t.label for t in p.terminals}
    m = re.search(r"(\d+)\s*$", label)
    if m:
        prefix = label[: m.start(1)]
        n = int(m.group(1)) + 1
    else:
        prefix = label + "-"
        n = 2
    while f"{prefix}{n}" in used:
        n += 1
    return f"{prefix}{n}"


def _next_label(p: Project) -> str:
    used = {t.label for t in p.terminals}
    n = 1
    while f"МА-{n}" in used:
        n += 1
    return f"МА-{n}"


def cascade_closure(p: Project, seeds: set[int]) -> tuple[set[int], list[tuple[str, int]]]:
    """Transitive dependents of deleting the seed objects.

    Returns (ids to delete, [(list_name, id) collection hosts to shrink]).
    """
    owner = _owner_index(p)
    for s in seeds:
        if s not in owner:
            raise RefError(f"no object with id {s}")
    deleted = set(seeds)
    queue = list(seeds)
    shrink: list[tuple[str, int]] = []
    while queue:
        x = queue.pop()
        x_list = owner[x]
        for spec in REF_SPECS:
            if spec.target != x_list:
                continue
            for obj in getattr(p, spec.list_name):
                if obj.id in deleted:
                    continue
                value = getattr(obj, spec.field_name)
                if spec.collection:
                    if x in value:
                        shrink.append((spec.list_name, obj.id))
                elif value == x:
                    deleted.add(obj.id)
                    queue.append(obj.id)
    shrink = [(n, i) for (n, i) in shrink if i not in deleted]
    return deleted, shrink


def _apply_deletion(p: Project, seeds: set[int]) -> tuple[Project, ChangeSet]:
    deleted, shrink = cascade_closure(p, seeds)
    shrink_ids = {i for (_, i) in shrink}
    new_lists = {}
    for name in OBJECT_LISTS:
        objs = []
        for obj in getattr(p, name):
            if obj.id in deleted:
                continue
            objs.append(obj)
        new_lists[name] = tuple(objs)
    # shrink collection references (zone section memberships)
    new_lists["zone_sections"] = tuple(
        replace(zs, terminal_refs=tuple(t for t in zs.terminal_refs if t not in deleted))
        if zs.id in shrink_ids
        else zs
        for zs in new_lists["zone_sections"]
    )
    q = replace(p, **new_lists)
    return q, ChangeSet(deleted=tuple(sorted(deleted)), modified=tuple(sorted(shrink_ids)))


def _referencing_ids(p: Project, target_id: int) -> set[int]:
    """Objects that reference target_id through any edge (one hop)."""
    out = set()
    for spec in REF_SPECS:
        for obj in getattr(p, spec.list_name):
            value = getattr(obj, spec.field_name)
            if spec.collection:
                if target_id in value:
                    out.add(obj.id)
            elif value == target_id:
                out.add(obj.id)
    return out


# --- handlers ---------------------------------------------------------------

def _add_terminal(p: Project, c: AddTerminal):
    d = p.defaults.terminal
    construction = c.construction
    if isinstance(construction, Rod):
        free = d.freestanding if c.freestanding is None else c.freestanding
        construction = replace(construction, freestanding=free)
        height = c.height if c.height is not None else construction.apex.z
    elif isinstance(construction, Mesh):
        height = None
    else:
        height = c.height if c.height is not None else construction.support1.z
    p, tid = _alloc(p)
    t = AirTerminal(
        id=tid,
        label=c.label if c.label is not None else _next_label(p),
        type_text=c.type_text,
        construction=construction,
        height=height,
        color=c.color or d.color,
        linetype=c.linetype or d.linetype,
    )
    return _rep(p, "terminals", p.terminals + (t,)), ChangeSet(created=(tid,))


def _delete_terminal(p: Project, c: DeleteTerminal):
    _require(p, "terminals", c.id)
    if c.section_context is not None and c.section_context != PLAN:
        _require(p, "drawing_sections", c.section_context)
        zs = p.zone_section_for(c.section_context)
        if zs is None or c.id not in zs.terminal_refs:
            raise RefError(f"terminal {c.id} is not on section {c.section_context}")
        return _remove_member(p, zs, c.id)
    return _apply_deletion(p, {c.id})


def _remove_member(p: Project, zs: ZoneSection, terminal_id: int):
    new_zs = replace(zs, terminal_refs=tuple(t for t in zs.terminal_refs if t != terminal_id))
    zss = tuple(new_zs if z.id == zs.id else z for z in p.zone_sections)
    p = _rep(p, "zone_sections", zss)
    # plan radius dims require membership; drop the orphaned ones
    doomed = {
        d.id
        for d in p.radius_dims_plan
        if d.zone_section_ref == zs.id and d.terminal_ref == terminal_id
    }
    if doomed:
        q, cs = _apply_deletion(p, doomed)
        return q, ChangeSet(deleted=cs.deleted, modified=tuple(sorted({zs.id} | set(cs.modified))))
    return p, ChangeSet(modified=(zs.id,))


def _drop_unpaired_width_dims(p: Project, terminal_id: int):
    """A height change can break the equal-height invariant of min-width
    dims; a dimension that cannot be regenerated into validity is deleted
    instead."""
    terms = {t.id: t for t in p.terminals}
    doomed = set()
    for d in p.min_width_dims:
        if terminal_id not in (d.terminal_a, d.terminal_b) or d.terminal_a == d.terminal_b:
            continue
        ha = terms[d.terminal_a].height
        hb = terms[d.terminal_b].height
        if ha is None or hb is None or abs(ha - hb) > TOL:
            doomed.add(d.id)
    if not doomed:
        return p, ()
    q, cs = _apply_deletion(p, doomed)
    return q, cs.deleted


def _move_terminal(p: Project, c: MoveTerminal):
    t = _require(p, "terminals", c.id)
    if c.section_context is not None and c.section_context != PLAN:
        _require(p, "drawing_sections", c.section_context)
        if abs(c.dx) > 0 or abs(c.dy) > 0:
            raise GeometryError("terminals move only vertically on a section")
        construction = _translate_construction(t.construction, 0.0, 0.0, c.dz)
        height = t.height if t.height is None else t.height + c.dz
        if isinstance(construction, DoubleWire):
            construction = replace(construction, height2=construction.height2 + c.dz)
        new_t = replace(t, construction=construction, height=height)
    else:
        if abs(c.dz) > 0:
            raise GeometryError("plan moves are horizontal; edit the height instead")
        new_t = replace(t, construction=_translate_construction(t.construction, c.dx, c.dy))
    p = _rep(p, "terminals", tuple(new_t if x.id == c.id else x for x in p.terminals))
    deleted = ()
    if new_t.height != t.height:
        p, deleted = _drop_unpaired_width_dims(p, c.id)
    touched = _referencing_ids(p, c.id)
    return p, ChangeSet(deleted=deleted, modified=tuple(sorted({c.id} | touched)))


def _copy_terminal(p: Project, c: CopyTerminal):
    q, new_id = copy_object(p, c.id, (c.x, c.y))
    return q, ChangeSet(created=(new_id,))


def _set_terminal_props(p: Project, c: SetTerminalProps):
    t = _require(p, "terminals", c.id)
    construction = t.construction
    height = t.height
    if c.height is not None:
        if isinstance(construction, Rod):
            mount = construction.apex.z - (t.height or 0.0)
            construction = replace(
                construction, apex=replace(construction.apex, z=mount + c.height)
            )
        elif isinstance(construction, Mesh):
            raise KindError("mesh terminals carry no height")
        else:
            s1 = replace(construction.support1, z=c.height)
            s2 = replace(construction.support2, z=c.height)
            construction = replace(construction, support1=s1, support2=s2)
        height = c.height
    if c.freestanding is not None:
        if not isinstance(construction, Rod):
            raise KindError("freestanding applies to rod terminals")
        construction = replace(construction, freestanding=c.freestanding)
    if c.offset2 is not None or c.height2 is not None:
        if not isinstance(construction, DoubleWire):
            raise KindError("offset2/height2 apply to double wires")
        construction = replace(
            construction,
            offset2=c.offset2 if c.offset2 is not None else construction.offset2,
            height2=c.height2 if c.height2 is not None else construction.height2,
        )
    new_t = replace(
        t,
        label=t.label if c.label is None else c.label,
        type_text=t.type_text if c.type_text is None else c.type_text,
        color=c.color or t.color,
        linetype=c.linetype or t.linetype,
        construction=construction,
        height=height,
    )
    p = _rep(p, "terminals", tuple(new_t if x.id == c.id else x for x in p.terminals))
    deleted = ()
    if new_t.height != t.height:
        p, deleted = _drop_unpaired_width_dims(p, c.id)
    return p, ChangeSet(deleted=deleted, modified=tuple(sorted({c.id} | _referencing_ids(p, c.id))))


def _mesh_of(p, tid) -> tuple[AirTerminal, Mesh]:
    t = _require(p, "terminals", tid)
    if not isinstance(t.construction, Mesh):
        raise KindError(f"terminal {tid} is not a mesh")
    return t, t.construction


def _replace_mesh(p, t, ring) -> Project:
    new_t = replace(t, construction=Mesh(ring=tuple(ring)))
    return _rep(p, "terminals", tuple(new_t if x.id == t.id else x for x in p.terminals))


def _add_mesh_vertex(p: Project, c: AddMeshVertex):
    t, mesh = _mesh_of(p, c.id)
    if not (0 <= c.index <= len(mesh.ring)):
        raise GeometryError("vertex index out of range")
    z = mesh.ring[0].z
    ring = list(mesh.ring)
    ring.insert(c.index, Point3(c.x, c.y, z))
    return _replace_mesh(p, t, ring), ChangeSet(modified=(c.id,))


def _move_mesh_vertex(p: Project, c: MoveMeshVertex):
    t, mesh = _mesh_of(p, c.id)
    if not (0 <= c.index < len(mesh.ring)):
        raise GeometryError("vertex index out of range")
    ring = list(mesh.ring)
    ring[c.index] = _translate_point(ring[c.index], c.dx, c.dy)
    return _replace_mesh(p, t, ring), ChangeSet(modified=tuple(sorted({c.id} | _referencing_ids(p, c.id))))


def _delete_mesh_vertex(p: Project, c: DeleteMeshVertex):
    t, mesh = _mesh_of(p, c.id)
    if not (0 <= c.index < len(mesh.ring)):
        raise GeometryError("vertex index out of range")
    if len(mesh.ring) <= 3:
        raise GeometryError("mesh ring keeps at least 3 vertices")
    ring = list(mesh.ring)
    del ring[c.index]
    return _replace_mesh(p, t, ring), ChangeSet(modified=(c.id,))


def _add_drawing_section(p: Project, c: AddDrawingSection):
    d = p.defaults.section_mark
    p, sid = _alloc(p)
    s = DrawingSection(
        id=sid,
        letter=c.letter,
        scale=c.scale,
        base_projection=c.base_projection,
        cut_p1=c.cut_p1,
        cut_p2=c.cut_p2,
        plan_label_layout=PlanMarkLayout(
            dash_len=d.dash_len, arrow_offset=d.arrow_offset, label_offset=c.label_offset
        ),
        own_label_layout=OwnLabelLayout(
            shelf_mid_offset=c.shelf_mid_offset,
            above_gap=d.above_gap,
            below_gap=d.below_gap,
            scale_placement=d.scale_placement,
            font=p.general.section_marks.own_font,
        ),
    )
    return _rep(p, "drawing_sections", p.drawing_sections + (s,)), ChangeSet(created=(sid,))


def _delete_drawing_section(p: Project, c: DeleteDrawingSection):
    _require(p, "drawing_sections", c.id)
    return _apply_deletion(p, {c.id})


def _move_drawing_section_mark(p: Project, c: MoveDrawingSectionMark):
    s = _require(p, "drawing_sections", c.id)
    new_s = replace(
        s,
        cut_p1=PlanPoint(s.cut_p1.x + c.dx, s.cut_p1.y + c.dy),
        cut_p2=PlanPoint(s.cut_p2.x + c.dx, s.cut_p2.y + c.dy),
    )
    p = _rep(p, "drawing_sections", tuple(new_s if x.id == c.id else x for x in p.drawing_sections))
    return p, ChangeSet(modified=tuple(sorted({c.id} | _referencing_ids(p, c.id))))


def _set_cut_segment(p: Project, c: SetCutSegment):
    s = _require(p, "drawing_sections", c.id)
    new_s = replace(s, cut_p1=c.cut_p1, cut_p2=c.cut_p2)
    p = _rep(p, "drawing_sections", tuple(new_s if x.id == c.id else x for x in p.drawing_sections))
    return p, ChangeSet(modified=tuple(sorted({c.id} | _referencing_ids(p, c.id))))


def _move_section_view(p: Project, c: MoveSectionView):
    s = _require(p, "drawing_sections", c.id)
    bp = PaperVec(s.base_projection.dx + c.d.dx, s.base_projection.dy + c.d.dy)
    new_s = replace(s, base_projection=bp)
    p = _rep(p, "drawing_sections", tuple(new_s if x.id == c.id else x for x in p.drawing_sections))
    return p, ChangeSet(modified=(c.id,))


def _add_zone_section(p: Project, c: AddZoneSection):
    if c.section_ref != PLAN:
        _require(p, "drawing_sections", c.section_ref)
    for t in c.terminal_refs:
        _require(p, "terminals", t)
    if p.zone_section_for(c.section_ref) is not None:
        raise ValidationError(
            [Violation("zone_sections", "Duplicate", "view already carries a zone section")]
        )
    d = p.defaults.zone_section
    p, zid = _alloc(p)
    zs = ZoneSection(
        id=zid,
        section_ref=c.section_ref,
        terminal_refs=tuple(dict.fromkeys(c.terminal_refs)),
        cut_height=c.cut_height,
        color=c.color or d.color,
        linetype=c.linetype or d.linetype,
    )
    return _rep(p, "zone_sections", p.zone_sections + (zs,)), ChangeSet(created=(zid,))


def _delete_zone_section(p: Project, c: DeleteZoneSection):
    _require(p, "zone_sections", c.id)
    return _apply_deletion(p, {c.id})


def _set_zone_section_props(p: Project, c: SetZoneSectionProps):
    zs = _require(p, "zone_sections", c.id)
    new_zs = replace(
        zs,
        cut_height=zs.cut_height if c.cut_height is None else c.cut_height,
        color=c.color or zs.color,
        linetype=c.linetype or zs.linetype,
    )
    p = _rep(p, "zone_sections", tuple(new_zs if x.id == c.id else x for x in p.zone_sections))
    touched = {c.id}
    if c.cut_height is not None:
        touched |= _referencing_ids(p, c.id)
    return p, ChangeSet(modified=tuple(sorted(touched)))


def _add_member(p: Project, c: AddTerminalToZoneSection):
    zs = _require(p, "zone_sections", c.zone_section_id)
    _require(p, "terminals", c.terminal_id)
    if c.terminal_id in zs.terminal_refs:
        raise ValidationError(
            [Violation("zone_sections", "Duplicate", "terminal already in the zone section")]
        )
    new_zs = replace(zs, terminal_refs=zs.terminal_refs + (c.terminal_id,))
    p = _rep(p, "zone_sections", tuple(new_zs if x.id == zs.id else x for x in p.zone_sections))
    return p, ChangeSet(modified=(zs.id,))


def _remove_member_cmd(p: Project, c: RemoveTerminalFromZoneSection):
    zs = _require(p, "zone_sections", c.zone_section_id)
    if c.terminal_id not in zs.terminal_refs:
        raise RefError(f"terminal {c.terminal_id} is not in zone section {zs.id}")
    return _remove_member(p, zs, c.terminal_id)


def _add_simple(list_name: str, builder):
    def handler(p: Project, c):
        p, oid = _alloc(p)
        obj = builder(p, c, oid)
        return _rep(p, list_name, getattr(p, list_name) + (obj,)), ChangeSet(created=(oid,))

    return handler


def _delete_simple(list_name: str):
    def handler(p: Project, c):
        _require(p, list_name, c.id)
        return _apply_deletion(p, {c.id})

    return handler


def _move_field(list_name: str, mover):
    def handler(p: Project, c):
        obj = _require(p, list_name, c.id)
        new_obj = mover(obj, c)
        p = _rep(p, list_name, tuple(new_obj if x.id == c.id else x for x in getattr(p, list_name)))
        return p, ChangeSet(modified=(c.id,))

    return handler


def _build_terminal_text(p, c: AddTerminalText, oid):
    _require(p, "terminals", c.terminal_ref)
    if c.section_ref != PLAN:
        _require(p, "drawing_sections", c.section_ref)
    lse = p.defaults.texts.leader_to_shelf_end if c.leader_to_shelf_end is None else c.leader_to_shelf_end
    return TerminalText(
        id=oid,
        terminal_ref=c.terminal_ref,
        section_ref=c.section_ref,
        start_offset=c.start_offset,
        leader_point_offset=c.leader_point_offset,
        leader_to_shelf_end=lse,
    )


def _build_zone_text(p, c: AddZoneLevelText, oid):
    _require(p, "zone_sections", c.zone_section_ref)
    d = p.defaults
    return ZoneLevelText(
        id=oid,
        zone_section_ref=c.zone_section_ref,
        start_offset=c.start_offset,
        leader_angle=c.leader_angle,
        leader_to_shelf_end=d.texts.leader_to_shelf_end
        if c.leader_to_shelf_end is None
        else c.leader_to_shelf_end,
        two_lines=d.zone_text.two_lines if c.two_lines is None else c.two_lines,
    )


def _build_distance_dim(p, c: AddDistanceDim, oid):
    _require(p, "terminals", c.terminal_a)
    _require(p, "terminals", c.terminal_b)
    if c.section_ref != PLAN:
        _require(p, "drawing_sections", c.section_ref)
    d = p.defaults.dims
    return DistanceDim(
        id=oid,
        terminal_a=c.terminal_a,
        terminal_b=c.terminal_b,
        section_ref=c.section_ref,
        line_offset=c.line_offset,
        text_offset=d.text_offset if c.text_offset is None else c.text_offset,
        tick_style=c.tick_style or d.tick_style,
    )


def _build_radius_dim_plan(p, c: AddRadiusDimPlan, oid):
    _require(p, "terminals", c.terminal_ref)
    _require(p, "zone_sections", c.zone_section_ref)
    d = p.defaults
    return RadiusDimPlan(
        id=oid,
        param_text=c.param_text,
        terminal_ref=c.terminal_ref,
        zone_section_ref=c.zone_section_ref,
        angle=c.angle,
        auto_text_pos=d.dims.auto_text_pos if c.auto_text_pos is None else c.auto_text_pos,
        text_offset=d.dims.text_offset if c.text_offset is None else c.text_offset,
        manual_text_pos=c.manual_text_pos,
        leader=c.leader or d.dims.leader,
        leader_to_shelf_end=d.dims.leader_to_shelf_end
        if c.leader_to_shelf_end is None
        else c.leader_to_shelf_end,
        tick_style=c.tick_style or d.dims.tick_style,
        include_height_in_text=d.plan_radius_dims.include_height_in_text
        if c.include_height_in_text is None
        else c.include_height_in_text,
    )


def _build_radius_dim_vert(p, c: AddRadiusDimVert, oid):
    _require(p, "terminals", c.terminal_ref)
    _require(p, "drawing_sections", c.section_ref)
    d = p.defaults.dims
    return RadiusDimVert(
        id=oid,
        param_text=c.param_text,
        terminal_ref=c.terminal_ref,
        section_ref=c.section_ref,
        line_offset=c.line_offset,
        text_offset=d.text_offset if c.text_offset is None else c.text_offset,
        tick_style=c.tick_style or d.tick_style,
        direction=c.direction,
    )


def _build_min_width_dim(p, c: AddMinWidthDim, oid):
    _require(p, "terminals", c.terminal_a)
    _require(p, "terminals", c.terminal_b)
    _require(p, "zone_sections", c.zone_section_ref)
    d = p.defaults.dims
    return MinWidthDim(
        id=oid,
        param_text=c.param_text,
        terminal_a=c.terminal_a,
        terminal_b=c.terminal_b,
        zone_section_ref=c.zone_section_ref,
        auto_text_pos=d.auto_text_pos if c.auto_text_pos is None else c.auto_text_pos,
        text_offset=d.text_offset if c.text_offset is None else c.text_offset,
        manual_text_pos=c.manual_text_pos,
        leader=c.leader or d.leader,
        leader_to_shelf_end=d.leader_to_shelf_end
        if c.leader_to_shelf_end is None
        else c.leader_to_shelf_end,
        tick_style=c.tick_style or d.tick_style,
    )


def _build_table_entry(p, c: AddTableEntry, oid):
    _require(p, "terminals", c.terminal_ref)
    if c.terminal_ref2 is not None:
        _require(p, "terminals", c.terminal_ref2)
    return TableEntry(
        id=oid,
        terminal_ref=c.terminal_ref,
        terminal_ref2=c.terminal_ref2,
        protected_level=c.protected_level,
    )


def _edit_table_entry(p: Project, c: EditTableEntry):
    e = _require(p, "table_entries", c.id)
    ref2 = None if c.clear_ref2 else (c.terminal_ref2 if c.terminal_ref2 is not None else e.terminal_ref2)
    new_e = replace(
        e,
        protected_level=e.protected_level if c.protected_level is None else c.protected_level,
        terminal_ref=e.terminal_ref if c.terminal_ref is None else c.terminal_ref,
        terminal_ref2=ref2,
    )
    p = _rep(p, "table_entries", tuple(new_e if x.id == c.id else x for x in p.table_entries))
    return p, ChangeSet(modified=(c.id,))


def _build_grounding(p, c: AddGroundingElectrode, oid):
    d = p.defaults.grounding
    return GroundingElectrode(
        id=oid,
        center_offset=c.center_offset,
        linetype=c.linetype or d.linetype,
        rod_count=d.rod_count if c.rod_count is None else c.rod_count,
        angle=d.angle if c.angle is None else c.angle,
        rod_spacing=d.rod_spacing if c.rod_spacing is None else c.rod_spacing,
        rod_diameter=d.rod_diameter if c.rod_diameter is None else c.rod_diameter,
    )


def _copy_grounding(p: Project, c: CopyGroundingElectrode):
    q, new_id = copy_object(p, c.id, (c.x, c.y))
    return q, ChangeSet(created=(new_id,))


def _move_project(p: Project, c: MoveProject):
    bp = p.general.base_point_paper
    general = replace(p.general, base_point_paper=PaperVec(bp.dx + c.d.dx, bp.dy + c.d.dy))
    p = replace(p, general=general)
    return p, ChangeSet(modified=tuple(sorted(p.all_ids())))


def _update_general(p: Project, c: UpdateGeneralSettings):
    p = replace(p, general=c.general)
    return p, ChangeSet(modified=tuple(sorted(p.all_ids())))


def _update_defaults(p: Project, c: UpdateDefaults):
    return replace(p, defaults=c.defaults), ChangeSet()


_HANDLERS = {
    AddTerminal: _add_terminal,
    DeleteTerminal: _delete_terminal,
    MoveTerminal: _move_terminal,
    CopyTerminal: _copy_terminal,
    SetTerminalProps: _set_terminal_props,
    AddMeshVertex: _add_mesh_vertex,
    MoveMeshVertex: _move_mesh_vertex,
    DeleteMeshVertex: _delete_mesh_vertex,
    AddDrawingSection: _add_drawing_section,
    DeleteDrawingSection: _delete_drawing_section,
    MoveDrawingSectionMark: _move_drawing_section_mark,
    SetCutSegment: _set_cut_segment,
    MoveSectionView: _move_section_view,
    AddZoneSection: _add_zone_section,
    DeleteZoneSection: _delete_zone_section,
    SetZoneSectionProps: _set_zone_section_props,
    AddTerminalToZoneSection: _add_member,
    RemoveTerminalFromZoneSection: _remove_member_cmd,
    AddTerminalText: _add_simple("terminal_texts", _build_terminal_text),
    MoveTerminalText: _move_field(
        "terminal_texts",
        lambda o, c: replace(o, start_offset=PaperVec(o.start_offset.dx + c.d.dx, o.start_offset.dy + c.d.dy)),
    ),
    DeleteTerminalText: _delete_simple("terminal_texts"),
    AddZoneLevelText: _add_simple("zone_texts", _build_zone_text),
    MoveZoneLevelText: _move_field(
        "zone_texts",
        lambda o, c: replace(o, start_offset=PaperVec(o.start_offset.dx + c.d.dx, o.start_offset.dy + c.d.dy)),
    ),
    DeleteZoneLevelText: _delete_simple("zone_texts"),
    AddDistanceDim: _add_simple("distance_dims", _build_distance_dim),
    MoveDistanceDim: _move_field(
        "distance_dims",
        lambda o, c: replace(o, line_offset=PaperVec(o.line_offset.dx + c.d.dx, o.line_offset.dy + c.d.dy)),
    ),
    DeleteDistanceDim: _delete_simple("distance_dims"),
    AddRadiusDimPlan: _add_simple("radius_dims_plan", _build_radius_dim_plan),
    MoveRadiusDimPlan: _move_field("radius_dims_plan", lambda o, c: replace(o, angle=c.angle)),
    DeleteRadiusDimPlan: _delete_simple("radius_dims_plan"),
    AddRadiusDimVert: _add_simple("radius_dims_vert", _build_radius_dim_vert),
    MoveRadiusDimVert: _move_field(
        "radius_dims_vert",
        lambda o, c: replace(o, line_offset=PaperVec(o.line_offset.dx + c.d.dx, o.line_offset.dy + c.d.dy)),
    ),
    DeleteRadiusDimVert: _delete_simple("radius_dims_vert"),
    AddMinWidthDim: _add_simple("min_width_dims", _build_min_width_dim),
    MoveMinWidthDim: _move_field(
        "min_width_dims",
        lambda o, c: replace(
            o,
            manual_text_pos=PaperVec(o.manual_text_pos.dx + c.d.dx, o.manual_text_pos.dy + c.d.dy),
            auto_text_pos=False,
        ),
    ),
    DeleteMinWidthDim: _delete_simple("min_width_dims"),
    AddTableEntry: _add_simple("table_entries", _build_table_entry),
    DeleteTableEntry: _delete_simple("table_entries"),
    EditTableEntry: _edit_table_entry,
    AddGroundingElectrode: _add_simple("grounding", _build_grounding),
    DeleteGroundingElectrode: _delete_simple("grounding"),
    MoveGroundingElectrode: _move_field(
        "grounding",
        lambda o, c: replace(o, center_offset=PlanPoint(o.center_offset.x + c.dx, o.center_offset.y + c.dy)),
    ),
    CopyGroundingElectrode: _copy_grounding,
    MoveProject: _move_project,
    UpdateGeneralSettings: _update_general,
    UpdateDefaults: _update_defaults,
}


def apply(p: Project, command) -> tuple[Project, ChangeSet]:
    """Apply one command; the result always validates clean or the call
    raises and p stays as it was."""
    handler = _HANDLERS.get(type(command))
    if handler is None:
        raise KindError(f"unknown command {type(command).__name__}")
    q, changes = handler(p, command)
    violations = validate(q)
    if violations:
        raise ValidationError(violations)
    return q, changes


def cascade_rules(command, p: Project) -> list[tuple[str, str, int]]:
    """Planned dependent actions of a command: (action, list_name, id)."""
    owner = _owner_index(p)

    def deletion_plan(seed: int):
        deleted, shrink = cascade_closure(p, {seed})
        plan = [("delete", owner[i], i) for i in sorted(deleted)]
        plan += [("modify", name, i) for (name, i) in sorted(shrink)]
        return plan

    if isinstance(command, DeleteTerminal) and (
        command.section_context is None or command.section_context == PLAN
    ):
        return deletion_plan(command.id)
    if isinstance(command, (DeleteDrawingSection, DeleteZoneSection)):
        return deletion_plan(command.id)
    if isinstance(command, (DeleteTerminalText, DeleteZoneLevelText, DeleteDistanceDim,
                            DeleteRadiusDimPlan, DeleteRadiusDimVert, DeleteMinWidthDim,
                            DeleteTableEntry, DeleteGroundingElectrode)):
        return deletion_plan(command.id)
    if isinstance(
        command,
        (MoveTerminal, MoveMeshVertex, SetTerminalProps, MoveDrawingSectionMark, SetCutSegment),
    ):
        refs = _referencing_ids(p, command.id)
        return [("modify", owner[i], i) for i in sorted({command.id} | refs)]
    if isinstance(command, SetZoneSectionProps) and command.cut_height is not None:
        refs = _referencing_ids(p, command.id)
        return [("modify", owner[i], i) for i in sorted({command.id} | refs)]
    if isinstance(command, (UpdateGeneralSettings, MoveProject)):
        return [("modify", owner[i], i) for i in sorted(p.all_ids())]
    if isinstance(command, UpdateDefaults):
        return []
    return []


def copy_object(p: Project, obj_id: int, placement) -> tuple[Project, int]:
    """Deep copy a terminal or grounding electrode at a new plan position."""
    x, y = placement
    t = p._find("terminals", obj_id)
    if t is not None:
        first = t.first_point()
        construction = _translate_construction(t.construction, x - first.x, y - first.y)
        p, new_id = _alloc(p)
        new_t = replace(t, id=new_id, label=_bump_label(p, t.label), construction=construction)
        return _rep(p, "terminals", p.terminals + (new_t,)), new_id
    g = p._find("grounding", obj_id)
    if g is not None:
        p, new_id = _alloc(p)
        new_g = replace(g, id=new_id, center_offset=PlanPoint(x, y))
        return _rep(p, "grounding", p.grounding + (new_g,)), new_id
    if obj_id in p.all_ids():
        raise KindError("only terminals and grounding electrodes can be copied")
    raise RefError(f"no object with id {obj_id}")
