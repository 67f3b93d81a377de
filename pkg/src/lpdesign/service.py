"""HTTP/JSON facade: projects, commands, queries and renders under /v1.

Optimistic concurrency: every mutation bumps a per-project revision;
clients may send If-Match with the revision they saw and get 409 on a
mismatch. Reads run on immutable snapshots, writes are serialized per
project.
"""

from __future__ import annotations

import os
import threading
from pathlib import Path
from typing import Optional

from fastapi import Body, FastAPI, Header, Response
from fastapi.responses import JSONResponse

from . import editops, store, tablegen
from .drafting import emit_svg, render_plan, render_section
from .errors import LpdesignError, NotFoundError, ValidationError
from .model import (
    Project,
    default_default_settings,
    default_general_settings,
    new_project,
)
from .zonecalc import Arc, Seg, compile_scene, horizontal_section, relief

API_PREFIX = "/v1"


def contour_wire(contour) -> list:
    """Arc-aware path array: [["M",x,y], ["L",x,y] | ["A",cx,cy,r,a0,sweep], ...]."""
    from .zonecalc.geometry import Poly

    pieces = contour.pieces
    if not pieces:
        return []
    first = pieces[0]
    if isinstance(first, Seg):
        path = [["M", first.x1, first.y1]]
    elif isinstance(first, Poly):
        path = [["M", first.points[0][0], first.points[0][1]]]
    else:
        sx, sy = first.point_at(0.0)
        path = [["M", sx, sy]]
    for piece in pieces:
        if isinstance(piece, Seg):
            path.append(["L", piece.x2, piece.y2])
        elif isinstance(piece, Poly):
            path.extend(["L", qx, qy] for qx, qy in piece.points[1:])
        else:
            path.append(["A", piece.cx, piece.cy, piece.r, piece.a0, piece.sweep])
    return path


def _contours_wire(contours) -> list:
    return [contour_wire(c) for c in contours]


class ProjectHub:
    """In-memory project snapshots with per-project write locks and optional
    directory persistence."""

    def __init__(self, data_dir: Optional[Path] = None):
        self.data_dir = Path(data_dir) if data_dir else None
        self._projects: dict[int, tuple[Project, int]] = {}
        self._locks: dict[int, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._next_project_id = 1
        if self.data_dir:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            for path in sorted(self.data_dir.glob("*.lpz")):
                try:
                    pid = int(path.stem)
                except ValueError:
                    continue
                self._projects[pid] = (store.load(path.read_bytes()), 0)
                self._locks[pid] = threading.Lock()
                self._next_project_id = max(self._next_project_id, pid + 1)

    def ids(self) -> list[int]:
        return sorted(self._projects)

    def get(self, pid: int) -> tuple[Project, int]:
        entry = self._projects.get(pid)
        if entry is None:
            raise NotFoundError(f"no project {pid}")
        return entry

    def create(self, project: Project) -> int:
        with self._registry_lock:
            pid = self._next_project_id
            self._next_project_id += 1
            self._projects[pid] = (project, 0)
            self._locks[pid] = threading.Lock()
        self._persist(pid, project)
        return pid

    def lock(self, pid: int) -> threading.Lock:
        lock = self._locks.get(pid)
        if lock is None:
            raise NotFoundError(f"no project {pid}")
        return lock

    def replace(self, pid: int, project: Project) -> int:
        _, revision = self.get(pid)
        self._projects[pid] = (project, revision + 1)
        self._persist(pid, project)
        return revision + 1

    def _persist(self, pid: int, project: Project) -> None:
        if not self.data_dir:
            return
        target = self.data_dir / f"{pid}.lpz"
        tmp = target.with_suffix(".tmp")
        tmp.write_bytes(store.save(project))
        os.replace(tmp, target)


def _error_response(exc: Exception):
    if isinstance(exc, NotFoundError):
        return JSONResponse(status_code=404, content={"detail": str(exc)})
    if isinstance(exc, ValidationError):
        return JSONResponse(
            status_code=422,
            content={
                "detail": "validation failed",
                "violations": [
                    {"path": v.path, "kind": v.kind, "message": v.message} for v in exc.violations
                ],
            },
        )
    if isinstance(exc, LpdesignError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})
    raise exc


def _changeset_obj(cs: editops.ChangeSet) -> dict:
    return {
        "created": list(cs.created),
        "deleted": list(cs.deleted),
        "modified": list(cs.modified),
        "diagnostics": list(cs.diagnostics),
    }


def create_app(data_dir: Optional[Path] = None) -> FastAPI:
    app = FastAPI(title="lpdesign service", version="1")
    hub = ProjectHub(data_dir)
    app.state.hub = hub

    @app.exception_handler(LpdesignError)
    def _handle(request, exc):  # noqa: ANN001
        return _error_response(exc)

    @app.get(f"{API_PREFIX}/projects")
    def list_projects():
        return [{"id": pid, "revision": hub.get(pid)[1]} for pid in hub.ids()]

    @app.post(f"{API_PREFIX}/projects")
    def create_project(payload: Optional[dict] = Body(None)):
        if payload is None:
            project = new_project(default_general_settings(), default_default_settings())
        else:
            project = store.project_from_obj(payload)
        pid = hub.create(project)
        return {"id": pid, "revision": 0}

    @app.get(f"{API_PREFIX}/projects/{{pid}}")
    def get_project(pid: int):
        project, revision = hub.get(pid)
        return {"revision": revision, "project": store.project_to_obj(project)}

    @app.put(f"{API_PREFIX}/projects/{{pid}}")
    def put_project(
        pid: int,
        payload: dict = Body(...),
        if_match: Optional[str] = Header(None, alias="If-Match"),
    ):
        with hub.lock(pid):
            _, revision = hub.get(pid)
            if if_match is not None and if_match.strip('"') != str(revision):
                return JSONResponse(status_code=409, content={"detail": "revision mismatch", "revision": revision})
            project = store.project_from_obj(payload)
            new_rev = hub.replace(pid, project)
        return {"revision": new_rev}

    @app.post(f"{API_PREFIX}/projects/{{pid}}/commands")
    def post_command(
        pid: int,
        payload: dict = Body(...),
        if_match: Optional[str] = Header(None, alias="If-Match"),
    ):
        command = editops.command_from_obj(payload)
        with hub.lock(pid):
            project, revision = hub.get(pid)
            if if_match is not None and if_match.strip('"') != str(revision):
                return JSONResponse(status_code=409, content={"detail": "revision mismatch", "revision": revision})
            new_project_state, changeset = editops.apply(project, command)
            new_rev = hub.replace(pid, new_project_state)
        return {"revision": new_rev, "changeset": _changeset_obj(changeset)}

    @app.get(f"{API_PREFIX}/projects/{{pid}}/render/plan")
    def render_plan_svg(pid: int):
        project, _ = hub.get(pid)
        return Response(content=emit_svg(render_plan(project)), media_type="image/svg+xml")

    @app.get(f"{API_PREFIX}/projects/{{pid}}/render/section/{{sid}}")
    def render_section_svg(pid: int, sid: int):
        project, _ = hub.get(pid)
        return Response(
            content=emit_svg(render_section(project, sid)), media_type="image/svg+xml"
        )

    @app.get(f"{API_PREFIX}/projects/{{pid}}/query/height")
    def query_height(pid: int, x: float, y: float):
        project, _ = hub.get(pid)
        scene = compile_scene(project.terminals, project.general.zone_type)
        return {"height_mm": scene.height_at(x, y)}

    @app.get(f"{API_PREFIX}/projects/{{pid}}/query/section")
    def query_section(pid: int, x: float, y: float):
        project, _ = hub.get(pid)
        scene = compile_scene(project.terminals, project.general.zone_type)
        height = scene.height_at(x, y)
        contours = (
            horizontal_section(project.terminals, project.general.zone_type, height)
            if height > 0
            else []
        )
        return {"height_mm": height, "contours": _contours_wire(contours)}

    @app.get(f"{API_PREFIX}/projects/{{pid}}/relief")
    def relief_endpoint(pid: int):
        project, _ = hub.get(pid)
        levels = relief(project.terminals, project.general.zone_type)
        return [
            {"level_mm": level, "contours": _contours_wire(contours)}
            for level, contours in levels
        ]

    @app.get(f"{API_PREFIX}/projects/{{pid}}/table")
    def table_endpoint(pid: int, accept: Optional[str] = Header(None, alias="Accept")):
        project, _ = hub.get(pid)
        calc = tablegen.build_table(project)
        if accept and "text/csv" in accept:
            return Response(content=tablegen.to_csv(calc), media_type="text/csv; charset=utf-8")
        return {
            "headers": {"names": list(calc.headers.names), "symbols": list(calc.headers.symbols)},
            "unit": calc.unit,
            "precision": calc.precision,
            "rows": [
                {
                    "labels": r.labels,
                    "h": r.h,
                    "h0": r.h0,
                    "hx": r.hx,
                    "rx": r.rx,
                    "L": r.L,
                    "hc": r.hc,
                    "rcx": r.rcx,
                    "type": r.type_text,
                }
                for r in calc.rows
            ],
            "warnings": list(calc.warnings),
        }

    return app
