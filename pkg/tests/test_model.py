"""Document model: invariants, validation, value semantics."""

from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import base_project, make_double_wire, make_mesh, make_rod, make_wire
from lpdesign.errors import GeometryError, ValidationError
from lpdesign.model import (
    PLAN,
    Color,
    GroundingElectrode,
    Linetype,
    PlanPoint,
    Point3,
    TerminalText,
    PaperVec,
    ZoneSection,
    mesh_ring_area,
    new_project,
    validate,
)


class TestNewProject:
    def test_empty(self, general, defaults):
        p = new_project(general, defaults)
        assert p.terminals == ()
        assert p.next_id == 1
        assert validate(p) == []

    def test_value_semantics(self, general, defaults):
        a = new_project(general, defaults)
        b = new_project(general, defaults)
        assert a == b and a is not b

    def test_bad_defaults_rejected(self, general, defaults):
        bad = replace(defaults, grounding=replace(defaults.grounding, rod_count=33))
        with pytest.raises(ValidationError) as err:
            new_project(general, bad)
        assert "rod_count out of 1..32" in str(err.value)
        assert any(v.path == "defaults.grounding.rod_count" for v in err.value.violations)

    def test_bad_general_rejected(self, general, defaults):
        bad = replace(general, table=replace(general.table, precision=9))
        with pytest.raises(ValidationError) as err:
            new_project(bad, defaults)
        assert any(v.path == "general.table.precision" for v in err.value.violations)


class TestMeshRingArea:
    def test_unit_triangle(self):
        ring = [Point3(0, 0, 5000), Point3(1, 0, 5000), Point3(0, 1, 5000)]
        assert mesh_ring_area(ring) == pytest.approx(0.5)

    def test_reversed_is_negative(self):
        ring = [Point3(0, 1, 5000), Point3(1, 0, 5000), Point3(0, 0, 5000)]
        assert mesh_ring_area(ring) == pytest.approx(-0.5)

    def test_collinear_degenerate(self):
        ring = [Point3(0, 0, 0), Point3(1, 1, 0), Point3(2, 2, 0)]
        assert mesh_ring_area(ring) == 0.0

    def test_unequal_z_raises(self):
        ring = [Point3(0, 0, 0), Point3(1, 0, 1), Point3(0, 1, 0)]
        with pytest.raises(GeometryError):
            mesh_ring_area(ring)

    @given(st.floats(min_value=100, max_value=50000), st.floats(min_value=100, max_value=50000))
    def test_rectangle_area(self, w, h):
        ring = [Point3(0, 0, 0), Point3(w, 0, 0), Point3(w, h, 0), Point3(0, h, 0)]
        assert mesh_ring_area(ring) == pytest.approx(w * h, rel=1e-12)


class TestTerminalValidation:
    def test_valid_kinds(self):
        p = base_project(
            make_rod(1, 0, 0, 10000),
            make_mesh(2, [(0, 0), (10000, 0), (10000, 10000), (0, 10000)], 4000),
            make_wire(3, (0, 30000), (40000, 30000), 12000),
            make_double_wire(4, (0, -30000), (40000, -30000), 12000, 8000),
        )
        assert validate(p) == []

    def test_clockwise_mesh_flagged(self):
        p = base_project(make_mesh(1, [(0, 0), (0, 10000), (10000, 10000), (10000, 0)], 4000))
        kinds = {v.kind for v in validate(p)}
        assert "Orientation" in kinds

    def test_self_intersecting_mesh_flagged(self):
        p = base_project(make_mesh(1, [(0, 0), (10000, 10000), (10000, 0), (0, 10000)], 4000))
        kinds = {v.kind for v in validate(p)}
        assert "Geometry" in kinds

    def test_freestanding_rod_mount_mismatch(self):
        bad = make_rod(1, 0, 0, 10000, mount=2000)  # freestanding but mounted at 2 m
        p = base_project(bad)
        assert any(v.kind == "Geometry" for v in validate(p))

    def test_mounted_rod_ok(self):
        p = base_project(make_rod(1, 0, 0, 10000, freestanding=False, mount=2000))
        assert validate(p) == []

    def test_too_tall(self):
        p = base_project(make_rod(1, 0, 0, 151000))
        assert any(v.kind == "Range" for v in validate(p))

    def test_wire_unequal_supports(self):
        t = make_wire(1, (0, 0), (40000, 0), 12000)
        t = replace(t, construction=replace(t.construction, support2=Point3(40000, 0, 11000)))
        p = base_project(t)
        assert any(v.kind == "Geometry" for v in validate(p))


class TestReferences:
    def test_dangling_ref(self):
        p = base_project(make_rod(1, 0, 0, 10000))
        p = replace(
            p,
            terminal_texts=(
                TerminalText(
                    id=5,
                    terminal_ref=99,
                    section_ref=PLAN,
                    start_offset=PaperVec(0, 0),
                    leader_point_offset=PaperVec(0, 0),
                    leader_to_shelf_end=False,
                ),
            ),
            next_id=6,
        )
        violations = validate(p)
        assert len(violations) == 1
        assert violations[0].kind == "DanglingRef"
        assert violations[0].path == "terminal_texts[0].terminal_ref"

    def test_duplicate_ids(self):
        p = base_project(make_rod(1, 0, 0, 10000), make_rod(1, 5000, 0, 10000))
        assert any(v.kind == "DuplicateId" for v in validate(p))

    def test_next_id_monotone(self):
        p = base_project(make_rod(5, 0, 0, 10000))
        p = replace(p, next_id=3)
        assert any(v.path == "next_id" for v in validate(p))

    def test_two_zone_sections_per_view_flagged(self):
        p = base_project(make_rod(1, 0, 0, 10000))
        zss = (
            ZoneSection(id=2, section_ref=PLAN, terminal_refs=(1,), cut_height=5000.0,
                        color=Color.BLUE, linetype=Linetype.DASHED),
            ZoneSection(id=3, section_ref=PLAN, terminal_refs=(1,), cut_height=3000.0,
                        color=Color.BLUE, linetype=Linetype.DASHED),
        )
        p = replace(p, zone_sections=zss, next_id=4)
        assert any(v.kind == "Duplicate" for v in validate(p))

    def test_cut_height_only_on_plan(self):
        p = base_project(make_rod(1, 0, 0, 10000))
        zs = ZoneSection(id=2, section_ref=PLAN, terminal_refs=(1,), cut_height=None,
                         color=Color.BLUE, linetype=Linetype.DASHED)
        p = replace(p, zone_sections=(zs,), next_id=3)
        assert any("cut_height" in v.path for v in validate(p))

    def test_grounding_ranges(self):
        p = base_project()
        g = GroundingElectrode(id=1, center_offset=PlanPoint(0, 0), linetype=Linetype.SOLID,
                               rod_count=40, angle=0.0, rod_spacing=2000.0, rod_diameter=25.0)
        p = replace(p, grounding=(g,), next_id=2)
        paths = {v.path for v in validate(p)}
        assert "grounding[0].rod_count" in paths
        assert "grounding[0].rod_spacing" in paths

    def test_violations_sorted_by_path(self):
        p = base_project(make_rod(1, 0, 0, -5), make_rod(2, 0, 0, 151000))
        violations = validate(p)
        assert [v.path for v in violations] == sorted(v.path for v in violations)
