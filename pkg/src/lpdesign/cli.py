"""Batch CLI: validate, render, tabulate, relief, point queries, serve.

All lengths are mm Nature unless --unit overrides. Exit codes: 0 success,
1 validation or IO failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import store, tablegen
from .drafting import emit_svg, render_plan, render_section
from .drafting.render import contour_prims
from .drafting.transform import plan_transform
from .errors import LpdesignError, ValidationError
from .model import Color, LengthUnit, Linetype, validate
from .numfmt import UNIT_FACTOR
from .zonecalc import compile_scene, horizontal_section, relief


def _load(path: str):
    return store.load(Path(path).read_bytes())


def _print_violations(violations, as_json: bool) -> None:
    if as_json:
        payload = [{"path": v.path, "kind": v.kind, "message": v.message} for v in violations]
        print(json.dumps(payload, ensure_ascii=False), file=sys.stderr)
    else:
        for v in violations:
            print(f"{v.path}: [{v.kind}] {v.message}", file=sys.stderr)


def _cmd_validate(args) -> int:
    try:
        project = _load(args.file)
    except ValidationError as exc:
        _print_violations(exc.violations, args.json)
        return 1
    violations = validate(project)
    if violations:
        _print_violations(violations, args.json)
        return 1
    return 0


def _cmd_render(args) -> int:
    project = _load(args.file)
    if args.view == "plan":
        data = emit_svg(render_plan(project), {"title": "План"})
    elif args.view.startswith("section:"):
        sid = int(args.view.split(":", 1)[1])
        data = emit_svg(render_section(project, sid), {"title": f"Сечение {sid}"})
    else:
        print(f"unknown view {args.view!r}; use plan or section:<id>", file=sys.stderr)
        return 2
    Path(args.output).write_bytes(data)
    return 0


def _cmd_table(args) -> int:
    project = _load(args.file)
    headers = tablegen.load_headers(args.headers) if args.headers else tablegen.RUSSIAN_HEADERS
    calc = tablegen.build_table(project, headers=headers)
    text = tablegen.to_csv(calc) if args.format == "csv" else tablegen.to_text(calc)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    for warning in calc.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


def _cmd_relief(args) -> int:
    project = _load(args.file)
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    vt = plan_transform(project.general)
    levels = relief(project.terminals, project.general.zone_type)
    index = []
    for i, (level, contours) in enumerate(levels):
        prims = contour_prims(contours, vt, Color.BLACK, Linetype.SOLID)
        name = f"level_{i:02d}.svg"
        (out_dir / name).write_bytes(emit_svg(prims, {"title": f"Сечение на {level:.0f} мм"}))
        index.append({"level_mm": level, "file": name, "contours": len(contours)})
    (out_dir / "index.json").write_text(
        json.dumps({"levels": index}, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    return 0


def _cmd_query(args) -> int:
    project = _load(args.file)
    factor = UNIT_FACTOR[LengthUnit(args.unit)]
    x = args.x * factor
    y = args.y * factor
    scene = compile_scene(project.terminals, project.general.zone_type)
    height = scene.height_at(x, y)
    if args.json:
        payload = {"height_mm": height}
        if args.section:
            contours = (
                horizontal_section(project.terminals, project.general.zone_type, height)
                if height > 0
                else []
            )
            payload["contours"] = [_path_text(c) for c in contours]
        print(json.dumps(payload, ensure_ascii=False))
        return 0
    print(f"{height / factor:.3f}")
    if args.section and height > 0:
        for contour in horizontal_section(project.terminals, project.general.zone_type, height):
            print(_path_text(contour))
    return 0


def _path_text(contour) -> str:
    from .zonecalc import Seg
    from .zonecalc.geometry import Poly

    parts = []
    for piece in contour.pieces:
        if isinstance(piece, Seg):
            if not parts:
                parts.append(f"M {piece.x1:.3f} {piece.y1:.3f}")
            parts.append(f"L {piece.x2:.3f} {piece.y2:.3f}")
        elif isinstance(piece, Poly):
            if not parts:
                parts.append(f"M {piece.points[0][0]:.3f} {piece.points[0][1]:.3f}")
            parts.extend(f"L {qx:.3f} {qy:.3f}" for qx, qy in piece.points[1:])
        else:
            sx, sy = piece.point_at(0.0)
            if not parts:
                parts.append(f"M {sx:.3f} {sy:.3f}")
            parts.append(
                f"A {piece.cx:.3f} {piece.cy:.3f} {piece.r:.3f} {piece.a0:.6f} {piece.sweep:.6f}"
            )
    parts.append("Z")
    return " ".join(parts)


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    host, _, port = args.addr.rpartition(":")
    app = create_app(Path(args.data_dir) if args.data_dir else None)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lpdesign", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a project file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=_cmd_validate)

    p = sub.add_parser("render", help="render plan or a section to SVG")
    p.add_argument("file")
    p.add_argument("--view", default="plan", help="plan or section:<id>")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(run=_cmd_render)

    p = sub.add_parser("table", help="emit the calculation table")
    p.add_argument("file")
    p.add_argument("--format", choices=("csv", "txt"), default="txt")
    p.add_argument("--headers", help="JSON header override (locale)")
    p.add_argument("-o", "--output")
    p.set_defaults(run=_cmd_table)

    p = sub.add_parser("relief", help="one SVG per relief level plus index")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(run=_cmd_relief)

    p = sub.add_parser("query", help="protection height at a plan point")
    p.add_argument("file")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--section", action="store_true", help="also print the section contours")
    p.add_argument("--unit", choices=("mm", "cm", "m"), default="mm")
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=_cmd_query)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--addr", default="127.0.0.1:8321")
    p.add_argument("--data-dir")
    p.set_defaults(run=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except ValidationError as exc:
        _print_violations(exc.violations, getattr(args, "json", False))
        return 1
    except LpdesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
