"""Paper-space drawing generation and canonical SVG output."""

from .displaylist import (
    ArcPrim,
    CirclePrim,
    DisplayList,
    DotPrim,
    HatchPrim,
    LinePrim,
    PolylinePrim,
    TextPrim,
)
from .font import measure_text
from .render import ZoneResults, render_plan, render_section
from .svg import emit_svg
from .transform import ViewTransform, plan_transform, section_transform

__all__ = [
    "ArcPrim",
    "CirclePrim",
    "DisplayList",
    "DotPrim",
    "HatchPrim",
    "LinePrim",
    "PolylinePrim",
    "TextPrim",
    "ViewTransform",
    "ZoneResults",
    "emit_svg",
    "measure_text",
    "plan_transform",
    "render_plan",
    "render_section",
    "section_transform",
]
