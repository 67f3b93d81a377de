"""Stroke-font metrics: per-glyph advance ratios relative to font size.

The drafting font of the original host CAD is proprietary; these widths
are a deterministic stand-in covering Cyrillic, Latin, digits and drawing
punctuation. Only metrics are promised, not glyph shapes.
"""

from __future__ import annotations

from ..model import FontSettings

_DEFAULT_ADVANCE = 0.70


def _spread(table: dict, chars: str, ratio: float) -> None:
    for ch in chars:
        table[ch] = ratio


def _build_advance_table() -> dict:
    t: dict[str, float] = {}
    _spread(t, "0123456789", 0.60)
    _spread(t, "ABCDEFGHKNOPQRSTUVXYZ", 0.70)
    _spread(t, "MW", 0.85)
    _spread(t, "IJ", 0.40)
    _spread(t, "L", 0.60)
    _spread(t, "abcdefghknopqrstuvxyz", 0.55)
    _spread(t, "mw", 0.80)
    _spread(t, "ijl", 0.30)
    _spread(t, "АБВГДЕЗИЙКЛНОПРСТУХЦЧЬЭЯ", 0.70)
    _spread(t, "ЖШЩЫЮМФ", 0.90)
    _spread(t, "ЪЁЕ", 0.70)
    _spread(t, "Г", 0.60)
    _spread(t, "абвгдезийклнопрстухцчьэя", 0.55)
    _spread(t, "жшщыюмф", 0.75)
    _spread(t, "ъёе", 0.55)
    _spread(t, " ", 0.45)
    _spread(t, ".,:;!", 0.30)
    _spread(t, "'’`", 0.25)
    _spread(t, "()[]{}|/\\", 0.40)
    _spread(t, "-–", 0.45)
    _spread(t, "—_", 0.70)
    _spread(t, "+=<>~", 0.65)
    _spread(t, "№", 1.00)
    _spread(t, "%", 0.90)
    _spread(t, "*°", 0.45)
    _spread(t, '"«»', 0.50)
    return t


ADVANCE = _build_advance_table()


def advance_of(ch: str) -> float:
    return ADVANCE.get(ch, _DEFAULT_ADVANCE)


def measure_text(text: str, font: FontSettings) -> tuple[float, float]:
    """(width, height) of a single text line in mm Paper."""
    width = sum(advance_of(ch) for ch in text) * font.size * font.compression
    return (width, font.size)
