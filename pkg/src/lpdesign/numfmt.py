"""Number presentation rules shared by the table and dimension texts."""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal

from .model import LengthUnit

#: mm per table unit.
UNIT_FACTOR = {LengthUnit.MM: 1.0, LengthUnit.CM: 10.0, LengthUnit.M: 1000.0}


def round_half_away(value: float, precision: int) -> float:
    """Round with ties away from zero at the given decimal precision."""
    q = Decimal(repr(float(value))).quantize(Decimal(1).scaleb(-precision), rounding=ROUND_HALF_UP)
    return float(q)


def format_fixed(value: float, precision: int) -> str:
    """Fixed-point text of an already rounded value (no sign noise on zero)."""
    v = round_half_away(value, precision)
    if v == 0.0:
        v = 0.0  # never render -0.00
    return f"{v:.{precision}f}"


def to_unit(value_mm: float, unit: LengthUnit) -> float:
    return value_mm / UNIT_FACTOR[unit]


def meters(value_mm: float) -> float:
    return value_mm / 1000.0
