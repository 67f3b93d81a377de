"""Type-driven encoding of model values to and from JSON-compatible objects.

The declared dataclass field types drive both directions, so documents have
one schema: points become coordinate arrays, enums their string values,
nested dataclasses objects with fields in declaration order. Decoding is
strict: unknown or missing keys fail.
"""

from __future__ import annotations

import dataclasses
import typing
from enum import Enum
from typing import Union, get_args, get_origin, get_type_hints

from .errors import ParseError
from .model import (
    Construction,
    DoubleWire,
    Mesh,
    PaperVec,
    PlanPoint,
    Point3,
    Rod,
    Wire,
)

_CONSTRUCTION_TAGS = {
    "rod": Rod,
    "mesh": Mesh,
    "wire": Wire,
    "double-wire": DoubleWire,
}
_TAG_BY_TYPE = {cls: tag for tag, cls in _CONSTRUCTION_TAGS.items()}

_hints_cache: dict[type, dict] = {}


def _hints(cls) -> dict:
    if cls not in _hints_cache:
        _hints_cache[cls] = get_type_hints(cls)
    return _hints_cache[cls]


def encode(value, declared=None):
    """Model value -> JSON-compatible object."""
    if isinstance(value, Point3):
        return [float(value.x), float(value.y), float(value.z)]
    if isinstance(value, PlanPoint):
        return [float(value.x), float(value.y)]
    if isinstance(value, PaperVec):
        return [float(value.dx), float(value.dy)]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (Rod, Mesh, Wire, DoubleWire)):
        out = {"kind": _TAG_BY_TYPE[type(value)]}
        out.update(_encode_dataclass_fields(value))
        return out
    if dataclasses.is_dataclass(value):
        return _encode_dataclass_fields(value)
    if isinstance(value, tuple) or isinstance(value, list):
        return [encode(v) for v in value]
    if value is None or isinstance(value, (str, bool, int, float)):
        if declared is float and value is not None:
            return float(value)
        return value
    raise TypeError(f"cannot encode {type(value).__name__}")


def _encode_dataclass_fields(value) -> dict:
    hints = _hints(type(value))
    out = {}
    for f in dataclasses.fields(value):
        declared = hints[f.name]
        v = getattr(value, f.name)
        if declared is float or declared == typing.Optional[float]:
            out[f.name] = None if v is None else float(v)
        else:
            out[f.name] = encode(v)
    return out


def _is_optional(tp) -> bool:
    return get_origin(tp) is Union and type(None) in get_args(tp)


def _strip_optional(tp):
    args = [a for a in get_args(tp) if a is not type(None)]
    return args[0] if len(args) == 1 else Union[tuple(args)]


def decode(tp, obj, path="$"):
    """JSON-compatible object -> model value of declared type tp."""
    if _is_optional(tp):
        if obj is None:
            return None
        return decode(_strip_optional(tp), obj, path)
    if tp is Construction or (get_origin(tp) is Union and Rod in get_args(tp)):
        return _decode_construction(obj, path)
    if tp is Point3:
        x, y, z = _number_list(obj, 3, path)
        return Point3(x, y, z)
    if tp is PlanPoint:
        x, y = _number_list(obj, 2, path)
        return PlanPoint(x, y)
    if tp is PaperVec:
        dx, dy = _number_list(obj, 2, path)
        return PaperVec(dx, dy)
    if isinstance(tp, type) and issubclass(tp, Enum):
        try:
            return tp(obj)
        except ValueError as exc:
            raise ParseError(f"{path}: {exc}") from None
    if get_origin(tp) is tuple:
        args = get_args(tp)
        if len(args) == 2 and args[1] is Ellipsis:
            if not isinstance(obj, list):
                raise ParseError(f"{path}: expected a list")
            return tuple(decode(args[0], v, f"{path}[{i}]") for i, v in enumerate(obj))
        raise ParseError(f"{path}: unsupported tuple shape")
    if dataclasses.is_dataclass(tp):
        return decode_dataclass(tp, obj, path)
    if tp is float:
        if not isinstance(obj, (int, float)) or isinstance(obj, bool):
            raise ParseError(f"{path}: expected a number")
        return float(obj)
    if tp is int:
        if not isinstance(obj, int) or isinstance(obj, bool):
            raise ParseError(f"{path}: expected an integer")
        return obj
    if tp is bool:
        if not isinstance(obj, bool):
            raise ParseError(f"{path}: expected a boolean")
        return obj
    if tp is str:
        if not isinstance(obj, str):
            raise ParseError(f"{path}: expected a string")
        return obj
    raise ParseError(f"{path}: unsupported type {tp!r}")


def decode_dataclass(cls, obj, path="$"):
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: expected an object")
    hints = _hints(cls)
    names = [f.name for f in dataclasses.fields(cls)]
    unknown = set(obj) - set(names)
    if unknown:
        raise ParseError(f"{path}: unknown keys {sorted(unknown)}")
    kwargs = {}
    for f in dataclasses.fields(cls):
        if f.name not in obj:
            raise ParseError(f"{path}: missing key {f.name!r}")
        kwargs[f.name] = decode(hints[f.name], obj[f.name], f"{path}.{f.name}")
    return cls(**kwargs)


def _decode_construction(obj, path):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError(f"{path}: construction needs a kind tag")
    tag = obj["kind"]
    cls = _CONSTRUCTION_TAGS.get(tag)
    if cls is None:
        raise ParseError(f"{path}: unknown construction kind {tag!r}")
    rest = {k: v for k, v in obj.items() if k != "kind"}
    return decode_dataclass(cls, rest, path)


def _number_list(obj, n, path):
    if not isinstance(obj, list) or len(obj) != n:
        raise ParseError(f"{path}: expected {n} coordinates")
    out = []
    for i, v in enumerate(obj):
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise ParseError(f"{path}[{i}]: expected a number")
        out.append(float(v))
    return out
