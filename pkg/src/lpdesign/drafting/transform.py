"""Nature -> Paper mapping for the plan and displaced vertical sections."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from ..model import PLAN, DrawingSection, GeneralSettings, PaperVec, Point3


@dataclass(frozen=True, slots=True)
class ViewTransform:
    """view is PLAN or a DrawingSection id; e_u is the in-plane horizontal
    axis of a section view (None on the plan)."""

    view: int
    scale: float
    origin: PaperVec
    e_u: Optional[tuple] = None

    def to_paper(self, p: Point3) -> tuple[float, float]:
        if self.e_u is None:
            return (self.origin.dx + p.x * self.scale, self.origin.dy + p.y * self.scale)
        u = self.e_u[0] * p.x + self.e_u[1] * p.y
        return (self.origin.dx + u * self.scale, self.origin.dy + p.z * self.scale)

    def plan_point(self, x: float, y: float) -> tuple[float, float]:
        return self.to_paper(Point3(x, y, 0.0))


def plan_transform(general: GeneralSettings) -> ViewTransform:
    return ViewTransform(view=PLAN, scale=general.plan_view.scale, origin=general.base_point_paper)


def section_axes(section: DrawingSection) -> tuple[tuple, tuple]:
    """(e_u, label-side normal) of a section view.

    The sign of plan_label_layout.label_offset picks the label side of the
    cut segment; looking from that side fixes the horizontal axis sense.
    """
    dx = section.cut_p2.x - section.cut_p1.x
    dy = section.cut_p2.y - section.cut_p1.y
    length = math.hypot(dx, dy)
    ux, uy = dx / length, dy / length
    side = 1.0 if section.plan_label_layout.label_offset >= 0 else -1.0
    n = (-uy * side, ux * side)
    e_u = (-ux * side, -uy * side)
    return e_u, n


def section_transform(section: DrawingSection) -> ViewTransform:
    e_u, _ = section_axes(section)
    return ViewTransform(
        view=section.id, scale=section.scale, origin=section.base_projection, e_u=e_u
    )


def section_u(section: DrawingSection, t: float) -> float:
    """In-plane horizontal coordinate of the cut-segment point at arclength t."""
    e_u, _ = section_axes(section)
    dx = section.cut_p2.x - section.cut_p1.x
    dy = section.cut_p2.y - section.cut_p1.y
    length = math.hypot(dx, dy)
    x = section.cut_p1.x + dx / length * t
    y = section.cut_p1.y + dy / length * t
    return e_u[0] * x + e_u[1] * y
