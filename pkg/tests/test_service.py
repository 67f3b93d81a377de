"""HTTP facade: endpoints, optimistic concurrency, read-only queries."""

import json
import warnings

import pytest

warnings.filterwarnings("ignore", message="Using `httpx`")

from fastapi.testclient import TestClient

from lpdesign import store
from lpdesign.service import create_app


def add_rod_payload(x, y, h, label=None):
    return {
        "kind": "add_terminal",
        "construction": {"kind": "rod", "apex": [x, y, h], "freestanding": True},
        "label": label,
        "type_text": "СМ-1",
        "height": None,
        "freestanding": None,
        "color": None,
        "linetype": None,
    }


@pytest.fixture
def client():
    with TestClient(create_app()) as c:
        yield c


@pytest.fixture
def project_id(client):
    return client.post("/v1/projects").json()["id"]


class TestProjects:
    def test_create_and_list(self, client):
        assert client.get("/v1/projects").json() == []
        pid = client.post("/v1/projects").json()["id"]
        assert client.get("/v1/projects").json() == [{"id": pid, "revision": 0}]

    def test_get_put_round_trip(self, client, project_id):
        doc = client.get(f"/v1/projects/{project_id}").json()
        assert doc["revision"] == 0
        r = client.put(f"/v1/projects/{project_id}", json=doc["project"])
        assert r.status_code == 200 and r.json()["revision"] == 1
        doc2 = client.get(f"/v1/projects/{project_id}").json()
        assert doc2["project"] == doc["project"]

    def test_unknown_project(self, client):
        assert client.get("/v1/projects/99").status_code == 404
        assert client.get("/v1/projects/99/render/plan").status_code == 404

    def test_create_from_document(self, client):
        from helpers import base_project, make_rod

        doc = json.loads(store.save(base_project(make_rod(1, 0, 0, 10000))))
        pid = client.post("/v1/projects", json=doc).json()["id"]
        got = client.get(f"/v1/projects/{pid}").json()["project"]
        assert got["terminals"][0]["label"] == "МА-1"


class TestCommands:
    def test_apply_and_revision(self, client, project_id):
        r = client.post(f"/v1/projects/{project_id}/commands", json=add_rod_payload(0, 0, 10000))
        assert r.status_code == 200
        body = r.json()
        assert body["revision"] == 1
        assert body["changeset"]["created"] == [1]

    def test_cascade_visible_in_changeset(self, client, project_id):
        client.post(f"/v1/projects/{project_id}/commands", json=add_rod_payload(0, 0, 10000))
        client.post(
            f"/v1/projects/{project_id}/commands",
            json={
                "kind": "add_terminal_text",
                "terminal_ref": 1,
                "start_offset": [10.0, 10.0],
                "section_ref": 0,
                "leader_point_offset": [0.0, 0.0],
                "leader_to_shelf_end": None,
            },
        )
        r = client.post(
            f"/v1/projects/{project_id}/commands",
            json={"kind": "delete_terminal", "id": 1, "section_context": None},
        )
        assert sorted(r.json()["changeset"]["deleted"]) == [1, 2]

    def test_stale_if_match_conflicts(self, client, project_id):
        client.post(f"/v1/projects/{project_id}/commands", json=add_rod_payload(0, 0, 10000))
        r = client.post(
            f"/v1/projects/{project_id}/commands",
            json={"kind": "delete_terminal", "id": 1, "section_context": None},
            headers={"If-Match": "0"},
        )
        assert r.status_code == 409
        # no state change happened
        assert client.get(f"/v1/projects/{project_id}").json()["revision"] == 1

    def test_invalid_command_is_422_with_paths(self, client, project_id):
        r = client.post(
            f"/v1/projects/{project_id}/commands",
            json={"kind": "delete_terminal", "id": 5, "section_context": None},
        )
        assert r.status_code == 422
        payload = add_rod_payload(0, 0, -5)
        r = client.post(f"/v1/projects/{project_id}/commands", json=payload)
        assert r.status_code == 422
        assert any("height" in v["path"] for v in r.json()["violations"])

    def test_unknown_kind(self, client, project_id):
        r = client.post(f"/v1/projects/{project_id}/commands", json={"kind": "explode"})
        assert r.status_code == 422


class TestQueries:
    def test_height_at_apex(self, client, project_id):
        client.post(f"/v1/projects/{project_id}/commands", json=add_rod_payload(0, 0, 10000))
        r = client.get(f"/v1/projects/{project_id}/query/height", params={"x": 0, "y": 0})
        assert r.json()["height_mm"] == pytest.approx(9200.0)

    def test_queries_are_read_only(self, client, project_id):
        client.post(f"/v1/projects/{project_id}/commands", json=add_rod_payload(0, 0, 10000))
        for _ in range(3):
            client.get(f"/v1/projects/{project_id}/query/height", params={"x": 1, "y": 2})
            client.get(f"/v1/projects/{project_id}/query/section", params={"x": 1, "y": 2})
            client.get(f"/v1/projects/{project_id}/relief")
            client.get(f"/v1/projects/{project_id}/table")
        assert client.get(f"/v1/projects/{project_id}").json()["revision"] == 1

    def test_section_query_contours(self, client, project_id):
        client.post(f"/v1/projects/{project_id}/commands", json=add_rod_payload(0, 0, 10000))
        r = client.get(f"/v1/projects/{project_id}/query/section", params={"x": 1000, "y": 0})
        body = r.json()
        assert body["height_mm"] > 0
        assert body["contours"], "expected at least one contour"
        ops = {op[0] for path in body["contours"] for op in path}
        assert "M" in ops and ("A" in ops or "L" in ops)

    def test_relief_levels(self, client, project_id):
        client.post(f"/v1/projects/{project_id}/commands", json=add_rod_payload(0, 0, 20000))
        levels = client.get(f"/v1/projects/{project_id}/relief").json()
        assert len(levels) == 21
        assert levels[0]["level_mm"] == 0.0
        assert levels[-1]["level_mm"] == 20000.0
        assert levels[-1]["contours"] == []

    def test_render_endpoints(self, client, project_id):
        client.post(f"/v1/projects/{project_id}/commands", json=add_rod_payload(0, 0, 10000))
        r = client.get(f"/v1/projects/{project_id}/render/plan")
        assert r.status_code == 200
        assert r.headers["content-type"].startswith("image/svg+xml")
        assert r.content.startswith(b"<?xml")
        assert client.get(f"/v1/projects/{project_id}/render/section/77").status_code == 404

    def test_table_json_and_csv(self, client, project_id):
        client.post(f"/v1/projects/{project_id}/commands", json=add_rod_payload(0, 0, 10000, "МА-1"))
        client.post(
            f"/v1/projects/{project_id}/commands",
            json={"kind": "add_table_entry", "terminal_ref": 1, "protected_level": 5000.0, "terminal_ref2": None},
        )
        body = client.get(f"/v1/projects/{project_id}/table").json()
        assert body["rows"][0]["labels"] == "МА-1"
        assert body["rows"][0]["rx"] == 6.85
        csv_r = client.get(f"/v1/projects/{project_id}/table", headers={"Accept": "text/csv"})
        assert csv_r.headers["content-type"].startswith("text/csv")
        assert csv_r.text.splitlines()[0] == "№№,h,h0,hз,rз,L,hс,rсх,Тип"


class TestPersistence:
    def test_projects_survive_restart(self, tmp_path):
        with TestClient(create_app(tmp_path)) as c:
            pid = c.post("/v1/projects").json()["id"]
            c.post(f"/v1/projects/{pid}/commands", json=add_rod_payload(0, 0, 10000))
        with TestClient(create_app(tmp_path)) as c:
            listing = c.get("/v1/projects").json()
            assert listing == [{"id": pid, "revision": 0}]
            doc = c.get(f"/v1/projects/{pid}").json()["project"]
            assert len(doc["terminals"]) == 1
