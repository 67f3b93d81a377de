"""Paper transforms, text metrics, rendering, canonical SVG."""

import math
from dataclasses import replace
from pathlib import Path

import pytest

from helpers import base_project, make_double_wire, make_mesh, make_rod, make_wire
from lpdesign.drafting import emit_svg, measure_text, render_plan, render_section
from lpdesign.drafting.displaylist import ArcPrim, LinePrim, PolylinePrim, TextPrim
from lpdesign.drafting.font import advance_of
from lpdesign.drafting.svg import fmt
from lpdesign.drafting.transform import plan_transform, section_transform
from lpdesign.errors import NotFoundError, RenderError
from lpdesign.model import (
    PLAN,
    Color,
    DistanceDim,
    DrawingSection,
    FontSettings,
    GroundingElectrode,
    Linetype,
    MinWidthDim,
    OwnLabelLayout,
    PaperVec,
    PlanMarkLayout,
    PlanPoint,
    Point3,
    RadiusDimPlan,
    RadiusDimVert,
    ScalePlacement,
    TableEntry,
    TerminalText,
    TickStyle,
    LeaderMode,
    DimDirection,
    ZoneLevelText,
    ZoneSection,
)

GOLDEN = Path(__file__).parent / "golden"
M = 1000.0


def showcase_project():
    """One project covering every drawable element kind."""
    terminals = (
        make_rod(1, 0, 0, 10 * M, label="МА-1", type_text="СМ-1"),
        make_rod(2, 20 * M, 0, 10 * M, label="МА-2", type_text="СМ-1"),
        make_rod(3, -25 * M, -20 * M, 8 * M, freestanding=False, mount=2 * M, label="МА-3", type_text="СМ-2"),
        make_mesh(4, [(35 * M, 20 * M), (50 * M, 20 * M), (50 * M, 32 * M), (35 * M, 32 * M)], 6 * M, label="МС-4"),
        make_wire(5, (-30 * M, 25 * M), (5 * M, 25 * M), 9 * M, label="МТ-5"),
        make_double_wire(6, (-30 * M, 42 * M), (5 * M, 42 * M), 9 * M, 8 * M, label="МТ-6"),
    )
    p = base_project(*terminals)
    section = DrawingSection(
        id=7,
        letter="А",
        scale=0.01,
        base_projection=PaperVec(320.0, 60.0),
        cut_p1=PlanPoint(-10 * M, -6 * M),
        cut_p2=PlanPoint(30 * M, -6 * M),
        plan_label_layout=PlanMarkLayout(dash_len=8.0, arrow_offset=2.0, label_offset=10.0),
        own_label_layout=OwnLabelLayout(
            shelf_mid_offset=PaperVec(0.0, 60.0),
            above_gap=1.5,
            below_gap=2.0,
            scale_placement=ScalePlacement.OWN_LINE,
            font=FontSettings(size=7.0),
        ),
    )
    zss = (
        ZoneSection(id=8, section_ref=PLAN, terminal_refs=(1, 2, 4, 5), cut_height=4 * M,
                    color=Color.BLUE, linetype=Linetype.DASHED),
        ZoneSection(id=9, section_ref=7, terminal_refs=(1, 2), cut_height=None,
                    color=Color.BLUE, linetype=Linetype.DASHED),
    )
    annotations = dict(
        terminal_texts=(
            TerminalText(id=10, terminal_ref=1, section_ref=PLAN, start_offset=PaperVec(-40.0, 130.0),
                         leader_point_offset=PaperVec(0.0, 0.0), leader_to_shelf_end=False),
            TerminalText(id=16, terminal_ref=1, section_ref=7, start_offset=PaperVec(-30.0, 120.0),
                         leader_point_offset=PaperVec(0.0, 0.0), leader_to_shelf_end=True),
        ),
        zone_texts=(
            ZoneLevelText(id=11, zone_section_ref=8, start_offset=PaperVec(150.0, 170.0),
                          leader_angle=3.6, leader_to_shelf_end=False, two_lines=True),
        ),
        distance_dims=(
            DistanceDim(id=12, terminal_a=1, terminal_b=2, section_ref=PLAN,
                        line_offset=PaperVec(0.0, -35.0), text_offset=1.5, tick_style=TickStyle.ARROW_IN),
        ),
        radius_dims_plan=(
            RadiusDimPlan(id=13, param_text="Rx1", terminal_ref=1, zone_section_ref=8, angle=2.2,
                          auto_text_pos=True, text_offset=1.5, manual_text_pos=PaperVec(0.0, 0.0),
                          leader=LeaderMode.NONE, leader_to_shelf_end=False,
                          tick_style=TickStyle.ARROW_IN, include_height_in_text=True),
        ),
        radius_dims_vert=(
            RadiusDimVert(id=14, param_text="R1", terminal_ref=1, section_ref=7,
                          line_offset=PaperVec(0.0, -20.0), text_offset=1.5,
                          tick_style=TickStyle.TICK, direction=DimDirection.LEFT),
        ),
        min_width_dims=(
            MinWidthDim(id=15, param_text="Rcx", terminal_a=1, terminal_b=2, zone_section_ref=8,
                        auto_text_pos=True, text_offset=1.5, manual_text_pos=PaperVec(0.0, 0.0),
                        leader=LeaderMode.MID, leader_to_shelf_end=True, tick_style=TickStyle.ARROW_OUT),
        ),
        table_entries=(
            TableEntry(id=17, terminal_ref=1, terminal_ref2=None, protected_level=4 * M),
            TableEntry(id=18, terminal_ref=1, terminal_ref2=2, protected_level=4 * M),
        ),
        grounding=(
            GroundingElectrode(id=19, center_offset=PlanPoint(-30 * M, -35 * M), linetype=Linetype.SOLID,
                               rod_count=4, angle=0.3, rod_spacing=4000.0, rod_diameter=300.0),
        ),
    )
    return replace(p, drawing_sections=(section,), zone_sections=zss, next_id=20, **annotations)


class TestToPaper:
    def test_plan_fixed_point(self, general):
        vt = plan_transform(general)
        assert vt.to_paper(Point3(0, 0, 0)) == (general.base_point_paper.dx, general.base_point_paper.dy)

    def test_plan_scaling(self, general):
        vt = plan_transform(general)  # scale 1:100
        x, y = vt.to_paper(Point3(1000.0, 2000.0, 0.0))
        assert (x - general.base_point_paper.dx, y - general.base_point_paper.dy) == (10.0, 20.0)

    def test_section_elevation(self):
        s = showcase_project().drawing_sections[0]
        vt = section_transform(s)
        p_on_plane = Point3(0.0, -6 * M, 5 * M)
        x, y = vt.to_paper(p_on_plane)
        assert y == pytest.approx(s.base_projection.dy + 50.0)

    def test_label_side_flips_axis(self):
        s = showcase_project().drawing_sections[0]
        flipped = replace(s, plan_label_layout=replace(s.plan_label_layout, label_offset=-10.0))
        u1 = section_transform(s).to_paper(Point3(10 * M, 0.0, 0.0))[0]
        u2 = section_transform(flipped).to_paper(Point3(10 * M, 0.0, 0.0))[0]
        base = s.base_projection.dx
        assert u1 - base == pytest.approx(-(u2 - base))


class TestMeasureText:
    def test_empty(self):
        w, h = measure_text("", FontSettings(size=5.0))
        assert (w, h) == (0.0, 5.0)

    def test_double_letter(self):
        w, _ = measure_text("АА", FontSettings(size=5.0, compression=1.0))
        assert w == pytest.approx(2 * advance_of("А") * 5.0)

    def test_compression_scales_linearly(self):
        full, _ = measure_text("Проект", FontSettings(size=5.0, compression=1.0))
        half, _ = measure_text("Проект", FontSettings(size=5.0, compression=0.5))
        assert half == pytest.approx(full / 2.0)


class TestSvg:
    def test_empty_display_list(self):
        data = emit_svg([])
        assert data.startswith(b"<?xml")
        assert b"<svg" in data and data.endswith(b"</svg>\n")

    def test_single_line_golden(self):
        data = emit_svg([LinePrim(0.0, 0.0, 10.0, 5.0)])
        assert data == (GOLDEN / "line.svg").read_bytes()

    def test_byte_determinism(self):
        dl = [LinePrim(0.0, 0.0, 10.0, 5.0), TextPrim(1.0, 1.0, "МА-1", FontSettings(size=3.5))]
        assert emit_svg(dl) == emit_svg(dl)

    def test_number_format(self):
        assert fmt(0.0) == "0"
        assert fmt(-0.0) == "0"
        assert fmt(1234567.0) == "1234570"  # six significant digits
        assert fmt(0.000001234567) == "0.00000123457"
        assert fmt(15.5) == "15.5"
        assert "e" not in fmt(1e7) and fmt(1e7) == "10000000"

    def test_arc_flip_geometry(self):
        # quarter arc CCW from +x to +y around the origin, radius 10
        data = emit_svg([ArcPrim(0.0, 0.0, 10.0, 0.0, math.pi / 2.0)]).decode()
        path = next(l for l in data.splitlines() if "<path" in l)
        # start (10,0) -> svg (15, 15+...)...: verify endpoints and sweep flag 0
        assert 'A 10 10 0 0 0' in path

    def test_escaping(self):
        data = emit_svg([TextPrim(0.0, 0.0, 'a<b & "c"', FontSettings(size=3.5))]).decode()
        assert "a&lt;b &amp; &quot;c&quot;" in data


class TestRenderPlan:
    def test_golden(self):
        data = emit_svg(render_plan(showcase_project()), {"title": "План"})
        assert data == (GOLDEN / "plan.svg").read_bytes()

    def test_determinism(self):
        p = showcase_project()
        assert render_plan(p) == render_plan(p)
        assert emit_svg(render_plan(p)) == emit_svg(render_plan(p))

    def test_empty_project_is_label_only(self, empty_project):
        prims = render_plan(empty_project)
        texts = [x for x in prims if isinstance(x, TextPrim)]
        assert len(texts) == 1
        assert texts[0].content.startswith("План")

    def test_invalid_project_refused(self):
        p = base_project(make_rod(1, 0, 0, -5))
        with pytest.raises(RenderError):
            render_plan(p)

    def test_freestanding_square_and_mounted_dot(self):
        from lpdesign.drafting.displaylist import DotPrim

        p = base_project(make_rod(1, 0, 0, 10 * M), make_rod(2, 9 * M, 0, 10 * M, freestanding=False, mount=1 * M))
        prims = render_plan(p)
        assert any(isinstance(x, PolylinePrim) and x.closed and len(x.points) == 4 for x in prims)
        assert any(isinstance(x, DotPrim) for x in prims)

    def test_dimension_text_formats(self):
        prims = render_plan(showcase_project())
        texts = {x.content for x in prims if isinstance(x, TextPrim)}
        # rx = 15*(1 - 4/9.2) = 8.478 m; rcx = 15*(7.8-4)/7.8 = 7.308 m
        assert "Rx1 = 8.48 (h = 4.00)" in texts
        assert "Rcx = 7.31" in texts
        assert "20.00" in texts  # distance in meters

    def test_scale_covariance(self):
        p = showcase_project()
        doubled = replace(p, general=replace(p.general, plan_view=replace(p.general.plan_view, scale=0.02)))
        c1 = next(x for x in render_plan(p) if isinstance(x, ArcPrim))
        c2 = next(x for x in render_plan(doubled) if isinstance(x, ArcPrim))
        assert c2.r == pytest.approx(2 * c1.r)
        base = p.general.base_point_paper
        assert c2.cx - base.dx == pytest.approx(2 * (c1.cx - base.dx))

    def test_view_exclusivity(self):
        p = showcase_project()
        plan_texts = {x.content for x in render_plan(p) if isinstance(x, TextPrim)}
        section_texts = {x.content for x in render_section(p, 7) if isinstance(x, TextPrim)}
        # the section-bound radius dim never shows on the plan and vice versa
        assert not any(t.startswith("R1 =") for t in plan_texts)
        assert any(t.startswith("R1 =") for t in section_texts)
        assert not any(t.startswith("Rx1 =") for t in section_texts)


class TestRenderSection:
    def test_golden(self):
        data = emit_svg(render_section(showcase_project(), 7), {"title": "Сечение"})
        assert data == (GOLDEN / "section.svg").read_bytes()

    def test_unknown_section(self):
        with pytest.raises(NotFoundError):
            render_section(showcase_project(), 99)

    def test_triangle_height_matches_scale(self):
        p = showcase_project()
        prims = render_section(p, 7)
        tris = [x for x in prims if isinstance(x, PolylinePrim) and x.closed and len(x.points) == 3]
        assert tris
        tri = tris[0]
        ys = [pt[1] for pt in tri.points]
        assert max(ys) - min(ys) == pytest.approx(100.0)  # 10 m at 1:100

    def test_unlisted_terminal_not_drawn(self):
        p = showcase_project()
        zss = tuple(
            replace(z, terminal_refs=(1,)) if z.id == 9 else z for z in p.zone_sections
        )
        p2 = replace(p, zone_sections=zss)
        tris = [x for x in render_section(p2, 7) if isinstance(x, PolylinePrim) and x.closed and len(x.points) == 3]
        assert len(tris) == 1

    def test_own_line_scale_label(self):
        p = showcase_project()
        texts = [x.content for x in render_section(p, 7) if isinstance(x, TextPrim)]
        assert "А – А" in texts
        assert "М 1: 100" in texts
