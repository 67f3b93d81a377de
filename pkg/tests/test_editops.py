"""Command layer: cascades, atomicity, defaults behavior."""

import random
from dataclasses import replace

import pytest

from helpers import base_project, make_mesh, random_command, random_session
from lpdesign import editops as eo
from lpdesign import store
from lpdesign.errors import GeometryError, KindError, RefError, ValidationError
from lpdesign.model import (
    PLAN,
    Color,
    PaperVec,
    PlanPoint,
    Point3,
    Rod,
    default_default_settings,
    default_general_settings,
    new_project,
    validate,
)


@pytest.fixture
def project(empty_project):
    p = empty_project
    p, _ = eo.apply(p, eo.AddTerminal(construction=Rod(apex=Point3(0.0, 0.0, 10000.0), freestanding=True), label="МА-1", type_text="СМ-1"))
    p, _ = eo.apply(p, eo.AddTerminal(construction=Rod(apex=Point3(20000.0, 0.0, 10000.0), freestanding=True), label="МА-2", type_text="СМ-1"))
    p, _ = eo.apply(p, eo.AddZoneSection(section_ref=PLAN, terminal_refs=(1, 2), cut_height=5000.0))
    p, _ = eo.apply(p, eo.AddDrawingSection(
        letter="А", scale=0.01, base_projection=PaperVec(250.0, 90.0),
        cut_p1=PlanPoint(-20000.0, 0.0), cut_p2=PlanPoint(40000.0, 0.0)))
    p, _ = eo.apply(p, eo.AddZoneSection(section_ref=4, terminal_refs=(1, 2)))
    p, _ = eo.apply(p, eo.AddTerminalText(terminal_ref=1, start_offset=PaperVec(10.0, 10.0)))
    p, _ = eo.apply(p, eo.AddZoneLevelText(zone_section_ref=3, start_offset=PaperVec(30.0, 40.0)))
    p, _ = eo.apply(p, eo.AddDistanceDim(terminal_a=1, terminal_b=2, line_offset=PaperVec(0.0, -15.0)))
    p, _ = eo.apply(p, eo.AddRadiusDimPlan(param_text="Rx1", terminal_ref=1, zone_section_ref=3, angle=0.7))
    p, _ = eo.apply(p, eo.AddRadiusDimVert(param_text="R1", terminal_ref=1, section_ref=4, line_offset=PaperVec(0.0, -10.0)))
    p, _ = eo.apply(p, eo.AddMinWidthDim(param_text="Rcx", terminal_a=1, terminal_b=2, zone_section_ref=3))
    p, _ = eo.apply(p, eo.AddTableEntry(terminal_ref=1, protected_level=5000.0))
    p, _ = eo.apply(p, eo.AddTableEntry(terminal_ref=1, terminal_ref2=2, protected_level=3000.0))
    return p


class TestDeleteTerminalCascade:
    def test_everything_referencing_it_goes(self, project):
        q, cs = eo.apply(project, eo.DeleteTerminal(id=1))
        assert 1 in cs.deleted
        assert validate(q) == []
        assert 1 not in q.all_ids()
        # annotations bound to terminal 1 are gone
        assert q.terminal_texts == ()
        assert q.distance_dims == ()
        assert q.radius_dims_plan == ()
        assert q.radius_dims_vert == ()
        assert q.min_width_dims == ()
        assert q.table_entries == ()
        # zone sections survive with shrunk membership
        assert all(1 not in zs.terminal_refs for zs in q.zone_sections)
        assert len(q.zone_sections) == 2

    def test_delete_in_section_context_only_removes_membership(self, project):
        q, cs = eo.apply(project, eo.DeleteTerminal(id=1, section_context=4))
        assert cs.deleted == ()
        zs_vert = q.zone_section_for(4)
        assert 1 not in zs_vert.terminal_refs
        zs_plan = q.zone_section_for(PLAN)
        assert 1 in zs_plan.terminal_refs
        assert q.terminal(1) is not None

    def test_plan_from_cascade_rules_matches_apply(self, project):
        plan = eo.cascade_rules(eo.DeleteTerminal(id=1), project)
        q, cs = eo.apply(project, eo.DeleteTerminal(id=1))
        planned_deleted = {i for action, _, i in plan if action == "delete"}
        planned_modified = {i for action, _, i in plan if action == "modify"}
        assert planned_deleted == set(cs.deleted)
        assert planned_modified == set(cs.modified)


class TestDeleteSectionCascade:
    def test_section_takes_zone_section_and_annotations(self, project):
        q, cs = eo.apply(project, eo.DeleteDrawingSection(id=4))
        assert validate(q) == []
        assert q.drawing_sections == ()
        assert q.zone_section_for(4) is None
        assert q.radius_dims_vert == ()
        # plan-bound objects survive
        assert q.zone_section_for(PLAN) is not None
        assert q.radius_dims_plan != ()

    def test_zone_section_takes_its_texts_and_dims(self, project):
        q, cs = eo.apply(project, eo.DeleteZoneSection(id=3))
        assert validate(q) == []
        assert q.zone_texts == ()
        assert q.radius_dims_plan == ()
        assert q.min_width_dims == ()
        assert q.terminal_texts != ()


class TestMoves:
    def test_plan_move_translates_and_touches_dependents(self, project):
        q, cs = eo.apply(project, eo.MoveTerminal(id=1, dx=1000.0, dy=500.0))
        assert q.terminal(1).construction.apex == Point3(1000.0, 500.0, 10000.0)
        assert 3 in cs.modified and 8 in cs.modified  # zone section + distance dim

    def test_vertical_move_on_section_changes_height(self, project):
        q, cs = eo.apply(project, eo.MoveTerminal(id=1, dz=2000.0, section_context=4))
        t = q.terminal(1)
        assert t.height == 12000.0
        assert t.construction.apex.z == 12000.0
        # the pair no longer shares a height, so its min-width dim is dropped
        assert q.min_width_dims == ()
        assert 11 in cs.deleted

    def test_horizontal_move_on_section_rejected(self, project):
        with pytest.raises(GeometryError):
            eo.apply(project, eo.MoveTerminal(id=1, dx=100.0, section_context=4))

    def test_vertical_move_on_plan_rejected(self, project):
        with pytest.raises(GeometryError):
            eo.apply(project, eo.MoveTerminal(id=1, dz=100.0))

    def test_move_project_shifts_paper_only(self, project):
        before = project.general.base_point_paper
        q, cs = eo.apply(project, eo.MoveProject(d=PaperVec(15.0, -5.0)))
        assert q.general.base_point_paper == PaperVec(before.dx + 15.0, before.dy - 5.0)
        assert q.terminals == project.terminals
        assert set(cs.modified) == q.all_ids()


class TestAtomicity:
    def test_failed_command_leaves_project_intact(self, project):
        with pytest.raises(RefError):
            eo.apply(project, eo.DeleteTerminal(id=999))
        with pytest.raises(ValidationError):
            eo.apply(project, eo.AddZoneSection(section_ref=PLAN, terminal_refs=(), cut_height=1.0))

    def test_mesh_vertex_floor(self, empty_project):
        p, _ = eo.apply(
            empty_project,
            eo.AddTerminal(construction=make_mesh(0, [(0, 0), (10000, 0), (0, 10000)], 4000).construction),
        )
        with pytest.raises(GeometryError):
            eo.apply(p, eo.DeleteMeshVertex(id=1, index=0))

    def test_unknown_ref_in_annotation(self, project):
        with pytest.raises(RefError):
            eo.apply(project, eo.AddTerminalText(terminal_ref=77, start_offset=PaperVec(0, 0)))


class TestCopy:
    def test_copy_rod(self, project):
        q, new_id = eo.copy_object(project, 1, (5000.0, 6000.0))
        t = q.terminal(new_id)
        assert t.construction.apex == Point3(5000.0, 6000.0, 10000.0)
        assert t.label == "МА-3"
        assert validate(q) == []
        # annotations not copied
        assert len(q.terminal_texts) == len(project.terminal_texts)

    def test_copy_grounding(self, empty_project):
        p, _ = eo.apply(empty_project, eo.AddGroundingElectrode(center_offset=PlanPoint(0.0, 0.0)))
        q, cs = eo.apply(p, eo.CopyGroundingElectrode(id=1, x=9000.0, y=-2000.0))
        g = q._find("grounding", cs.created[0])
        assert g.center_offset == PlanPoint(9000.0, -2000.0)
        assert g.rod_count == p.grounding[0].rod_count

    def test_copy_wrong_kind(self, project):
        with pytest.raises(KindError):
            eo.copy_object(project, 6, (0.0, 0.0))  # a terminal text

    def test_label_bump_skips_taken(self, project):
        q, _ = eo.copy_object(project, 1, (1.0, 1.0))      # МА-3
        q, nid = eo.copy_object(q, 1, (2.0, 2.0))          # МА-4
        assert q.terminal(nid).label == "МА-4"


class TestDefaults:
    def test_update_defaults_touches_nothing(self, project):
        baseline = store.save(project)
        new_defaults = replace(
            project.defaults,
            zone_section=replace(project.defaults.zone_section, color=Color.RED),
        )
        q, cs = eo.apply(project, eo.UpdateDefaults(defaults=new_defaults))
        assert cs.modified == () and cs.deleted == () and cs.created == ()
        # existing objects byte-identical: compare serialized object lists
        before = store.project_to_obj(project)
        after = store.project_to_obj(q)
        for key in before:
            if key == "defaults":
                continue
            assert before[key] == after[key]

    def test_new_objects_take_new_defaults(self, project):
        new_defaults = replace(
            project.defaults,
            zone_section=replace(project.defaults.zone_section, color=Color.RED),
        )
        p, _ = eo.apply(project, eo.UpdateDefaults(defaults=new_defaults))
        p, _ = eo.apply(p, eo.DeleteZoneSection(id=5))
        p, cs = eo.apply(p, eo.AddZoneSection(section_ref=4, terminal_refs=(1,)))
        assert p.zone_section(cs.created[0]).color is Color.RED
        # previously existing plan zone section unchanged
        assert p.zone_section(3).color is project.zone_section(3).color

    def test_update_general_touches_all(self, project):
        general = replace(project.general, zone_type=project.general.zone_type)
        q, cs = eo.apply(project, eo.UpdateGeneralSettings(general=general))
        assert set(cs.modified) == project.all_ids()


class TestCommandCodec:
    def test_round_trip_all_kinds(self, project):
        rng = random.Random(9)
        for _ in range(300):
            cmd = random_command(rng, project)
            obj = eo.command_to_obj(cmd)
            back = eo.command_from_obj(obj)
            assert back == cmd

    def test_unknown_kind(self):
        with pytest.raises(Exception):
            eo.command_from_obj({"kind": "explode"})


class TestRandomizedSessions:
    def test_sessions_stay_valid(self):
        rng = random.Random(42)
        for seed in range(8):
            p = random_session(random.Random(1000 + seed), 60)
            assert validate(p) == []

    def test_ids_never_reused(self):
        rng = random.Random(77)
        p = new_project(default_general_settings(), default_default_settings())
        seen = set()
        for _ in range(120):
            cmd = random_command(rng, p)
            before = p.next_id
            try:
                p, cs = eo.apply(p, cmd)
            except Exception:
                continue
            assert p.next_id >= before
            for created in cs.created:
                assert created not in seen
            seen.update(cs.created)

    def test_disjoint_commands_commute(self, project):
        c1 = eo.MoveTerminal(id=1, dx=100.0, dy=0.0)
        c2 = eo.MoveZoneLevelText(id=7, d=PaperVec(1.0, 2.0))
        ab, _ = eo.apply(eo.apply(project, c1)[0], c2)
        ba, _ = eo.apply(eo.apply(project, c2)[0], c1)
        assert ab == ba

    def test_delete_then_unrelated_edit_commutes(self, project):
        c1 = eo.DeleteTableEntry(id=12)
        c2 = eo.SetZoneSectionProps(id=5, color=Color.GREEN)
        ab, _ = eo.apply(eo.apply(project, c1)[0], c2)
        ba, _ = eo.apply(eo.apply(project, c2)[0], c1)
        assert ab == ba


class TestMembership:
    def test_remove_member_drops_orphan_radius_dims(self, project):
        q, cs = eo.apply(project, eo.RemoveTerminalFromZoneSection(zone_section_id=3, terminal_id=1))
        assert validate(q) == []
        assert q.radius_dims_plan == ()  # Rx1 referenced terminal 1 in zs 3
        assert 9 in cs.deleted

    def test_add_member_duplicate_rejected(self, project):
        with pytest.raises(ValidationError):
            eo.apply(project, eo.AddTerminalToZoneSection(zone_section_id=3, terminal_id=1))

    def test_add_member(self, project):
        q, _ = eo.apply(project, eo.RemoveTerminalFromZoneSection(zone_section_id=3, terminal_id=1))
        q, _ = eo.apply(q, eo.AddTerminalToZoneSection(zone_section_id=3, terminal_id=1))
        assert 1 in q.zone_section(3).terminal_refs
