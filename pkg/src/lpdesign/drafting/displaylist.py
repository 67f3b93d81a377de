"""Resolution-independent drawing primitives, paper-space mm, y up.

Z-order is list order. Every coordinate is finite; linetype and width are
carried per primitive so the SVG emitter stays a dumb serializer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..model import Color, FontSettings, Linetype

#: Stroke widths, mm.
THIN = 0.25
THICK = 0.5


def width_for(linetype: Linetype) -> float:
    return THICK if linetype is Linetype.THICK_SOLID else THIN


@dataclass(frozen=True, slots=True)
class LinePrim:
    x1: float
    y1: float
    x2: float
    y2: float
    color: Color = Color.BLACK
    linetype: Linetype = Linetype.SOLID
    width: float = THIN


@dataclass(frozen=True, slots=True)
class PolylinePrim:
    points: tuple
    color: Color = Color.BLACK
    linetype: Linetype = Linetype.SOLID
    width: float = THIN
    closed: bool = False


@dataclass(frozen=True, slots=True)
class ArcPrim:
    cx: float
    cy: float
    r: float
    a0: float
    sweep: float
    color: Color = Color.BLACK
    linetype: Linetype = Linetype.SOLID
    width: float = THIN


@dataclass(frozen=True, slots=True)
class CirclePrim:
    cx: float
    cy: float
    r: float
    color: Color = Color.BLACK
    linetype: Linetype = Linetype.SOLID
    width: float = THIN


@dataclass(frozen=True, slots=True)
class DotPrim:
    """Filled dot of the given diameter."""

    cx: float
    cy: float
    d: float
    color: Color = Color.BLACK


@dataclass(frozen=True, slots=True)
class HatchPrim:
    """Region hatched by straight families; angles in radians."""

    ring: tuple
    spacing: float
    angles: tuple = (0.7853981633974483, -0.7853981633974483)
    color: Color = Color.BLACK
    width: float = THIN


@dataclass(frozen=True, slots=True)
class TextPrim:
    """Single text line; (x, y) is the left end of the baseline."""

    x: float
    y: float
    content: str
    font: FontSettings
    color: Color = Color.BLACK


Primitive = Union[LinePrim, PolylinePrim, ArcPrim, CirclePrim, DotPrim, HatchPrim, TextPrim]

DisplayList = tuple
