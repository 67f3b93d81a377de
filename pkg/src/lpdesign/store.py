"""Versioned persistence of the parametric representation.

One canonical UTF-8 JSON schema (documented in docs/file-format.md): keys
in declaration order, floats in shortest round-trip form, two-space
indent, trailing newline, no derived geometry. Suggested extension: .lpz.
"""

from __future__ import annotations

import json
import warnings
from typing import Optional

from .codec import decode_dataclass, encode
from .errors import IntegrityError, ParseError, SaveRefused, VersionError
from .model import OBJECT_LISTS, Project, validate
from .zonecalc import FormulaTable, default_table

FORMAT_VERSION = 1


class StoreWarning(UserWarning):
    """Non-fatal load finding (formula table checksum drift)."""


def project_to_obj(p: Project, table: Optional[FormulaTable] = None) -> dict:
    table = table or default_table()
    out = {
        "format_version": FORMAT_VERSION,
        "formula_table_checksum": table.checksum,
        "general": encode(p.general),
        "defaults": encode(p.defaults),
    }
    for name in OBJECT_LISTS:
        out[name] = [encode(obj) for obj in getattr(p, name)]
    out["next_id"] = p.next_id
    return out


def project_from_obj(obj, table: Optional[FormulaTable] = None) -> Project:
    table = table or default_table()
    if not isinstance(obj, dict):
        raise ParseError("$: project document must be an object")
    if "format_version" not in obj:
        raise ParseError("$: missing format_version")
    version = obj["format_version"]
    if not isinstance(version, int) or isinstance(version, bool):
        raise ParseError("$.format_version: expected an integer")
    if version != FORMAT_VERSION:
        raise VersionError(f"unsupported format_version {version}, expected {FORMAT_VERSION}")
    checksum = obj.get("formula_table_checksum")
    if checksum is not None and checksum != table.checksum:
        warnings.warn(
            "project was saved against a different formula table "
            f"({checksum[:12]}... != {table.checksum[:12]}...)",
            StoreWarning,
            stacklevel=2,
        )
    rest = {k: v for k, v in obj.items() if k not in ("format_version", "formula_table_checksum")}
    project = decode_dataclass(Project, rest, "$")
    violations = validate(project)
    if violations:
        raise IntegrityError(violations)
    return project


def save(p: Project, table: Optional[FormulaTable] = None) -> bytes:
    """Canonical project file bytes. Refuses invalid projects."""
    violations = validate(p)
    if violations:
        raise SaveRefused(violations)
    obj = project_to_obj(p, table)
    text = json.dumps(obj, ensure_ascii=False, allow_nan=False, indent=2)
    return (text + "\n").encode("utf-8")


def _reject_constant(name: str):
    raise ParseError(f"non-finite number {name!r} not allowed")


def load(data, table: Optional[FormulaTable] = None) -> Project:
    """Parse project file bytes; inverse of save."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc}") from None
    else:
        text = data
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return project_from_obj(obj, table)
