"""The lightning-protection calculation table: values, ordering, layout.

Row numerics are converted to the configured unit and rounded half away
from zero before any merging or printing, so what merges is exactly what
the reader sees.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Optional

from .drafting.displaylist import LinePrim, TextPrim, width_for
from .drafting.font import measure_text
from .errors import ParseError, ValidationError
from .model import (
    TOL,
    DoubleWire,
    GeneralSettings,
    Project,
    Rod,
    SortMode,
    Wire,
    validate,
)
from .numfmt import format_fixed, round_half_away, to_unit
from .zonecalc import (
    FormulaTable,
    cone_params,
    default_table,
    effective_wire_height,
    min_width_at,
    pair_params,
    radius_at,
)


@dataclass(frozen=True, slots=True)
class TableHeaders:
    names: tuple
    symbols: tuple


RUSSIAN_HEADERS = TableHeaders(
    names=(
        "№№ Молниеприемников",
        "Высота молниеприемника",
        "Активная высота молниеприемника",
        "Высота защищаемого уровня",
        "Радиус зоны защиты одиночного молниеприемника",
        "Расстояние между молниеприемниками",
        "Минимальная высота зоны защиты двух молниеприемников",
        "Минимальная ширина защиты двух молниеприемников",
        "Тип молниеприемника",
    ),
    symbols=("", "h", "h0", "hз", "rз", "L", "hс", "rсх", ""),
)


@dataclass(frozen=True, slots=True)
class CalcRow:
    labels: str
    h: Optional[float]
    h0: Optional[float]
    hx: Optional[float]
    rx: Optional[float]
    L: Optional[float]
    hc: Optional[float]
    rcx: Optional[float]
    type_text: str

    def numeric_tuple(self):
        return (self.h, self.h0, self.hx, self.rx, self.L, self.hc, self.rcx)


@dataclass(frozen=True, slots=True)
class CalcTable:
    headers: TableHeaders
    rows: tuple
    precision: int
    unit: str
    warnings: tuple = ()


def load_headers(path) -> TableHeaders:
    """Locale override: JSON file with "names" and "symbols" arrays of 9."""
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    names = obj.get("names")
    symbols = obj.get("symbols")
    if (
        not isinstance(names, list)
        or not isinstance(symbols, list)
        or len(names) != 9
        or len(symbols) != 9
    ):
        raise ParseError(f"{path}: expected 9 names and 9 symbols")
    return TableHeaders(names=tuple(names), symbols=tuple(symbols))


def _zone_height_for(terminal, table: FormulaTable) -> tuple[float, str]:
    """(height driving the formulas, formula kind) for a table row."""
    c = terminal.construction
    if isinstance(c, Rod):
        return terminal.height, "rod"
    if isinstance(c, (Wire, DoubleWire)):
        span = math.hypot(c.support2.x - c.support1.x, c.support2.y - c.support1.y)
        return effective_wire_height(terminal.height, span, table), "wire"
    raise ValueError("mesh terminals do not enter the table")


def build_table(
    p: Project,
    table: Optional[FormulaTable] = None,
    headers: TableHeaders = RUSSIAN_HEADERS,
) -> CalcTable:
    violations = validate(p)
    if violations:
        raise ValidationError(violations)
    table = table or default_table()
    ts = p.general.table
    zone = p.general.zone_type
    terminals = {t.id: t for t in p.terminals}
    warnings: list[str] = []

    def conv(value_mm: float) -> float:
        return round_half_away(to_unit(value_mm, ts.unit), ts.precision)

    rows: list[CalcRow] = []
    for entry in p.table_entries:
        t1 = terminals[entry.terminal_ref]
        h_use, kind = _zone_height_for(t1, table)
        hx = entry.protected_level
        if h_use <= 0.0:
            warnings.append(f"{t1.label}: wire sag leaves no effective height")
            h0_mm = 0.0
            rx_mm = 0.0
        else:
            cp = cone_params(h_use, zone, kind, table)
            h0_mm = cp.h0
            rx_mm = radius_at(h_use, zone, kind, hx, table)
            if hx >= cp.h0:
                warnings.append(f"{t1.label}: protected level {hx:g} mm is above the zone apex")
        L_v = hc_v = rcx_v = None
        labels = t1.label
        type_text = t1.type_text
        if entry.terminal_ref2 is not None:
            t2 = terminals[entry.terminal_ref2]
            labels = f"{t1.label}, {t2.label}"
            if t2.type_text and t2.type_text != t1.type_text:
                type_text = f"{t1.type_text}, {t2.type_text}"
            p1 = t1.first_point()
            p2 = t2.first_point()
            L_mm = math.hypot(p2.x - p1.x, p2.y - p1.y)
            h2_use, _ = _zone_height_for(t2, table)
            if abs(h_use - h2_use) > TOL or L_mm <= TOL or h_use <= 0.0:
                warnings.append(f"{labels}: pair does not qualify for a common zone")
                hc_mm = rcx_mm = 0.0
            else:
                pp = pair_params(h_use, L_mm, zone, kind, table)
                if pp.hc <= 0.0:
                    warnings.append(f"{labels}: pair does not qualify for a common zone")
                    hc_mm = rcx_mm = 0.0
                else:
                    hc_mm = pp.hc
                    rcx_mm = min_width_at(pp, hx)
            L_v, hc_v, rcx_v = conv(L_mm), conv(hc_mm), conv(rcx_mm)
        rows.append(
            CalcRow(
                labels=labels,
                h=conv(t1.height),
                h0=conv(h0_mm),
                hx=conv(hx),
                rx=conv(rx_mm),
                L=L_v,
                hc=hc_v,
                rcx=rcx_v,
                type_text=type_text,
            )
        )

    if ts.merge_identical_singles:
        rows = _merge_singles(rows)

    if ts.sort_mode is SortMode.ALPHABETICAL:
        rows.sort(key=lambda r: r.labels)
    elif ts.sort_mode is SortMode.GROUPED:
        rows.sort(key=lambda r: (r.L is not None, r.labels))

    return CalcTable(
        headers=headers,
        rows=tuple(rows),
        precision=ts.precision,
        unit=ts.unit.value,
        warnings=tuple(warnings),
    )


def _merge_singles(rows: list[CalcRow]) -> list[CalcRow]:
    out: list[CalcRow] = []
    merged_into: dict[tuple, int] = {}
    for row in rows:
        if row.L is not None:
            out.append(row)
            continue
        key = (row.h, row.h0, row.hx, row.rx, row.type_text)
        if key in merged_into:
            i = merged_into[key]
            host = out[i]
            out[i] = CalcRow(
                labels=f"{host.labels}, {row.labels}",
                h=host.h,
                h0=host.h0,
                hx=host.hx,
                rx=host.rx,
                L=None,
                hc=None,
                rcx=None,
                type_text=host.type_text,
            )
        else:
            merged_into[key] = len(out)
            out.append(row)
    return out


def _cells_of(row: CalcRow, precision: int) -> list[str]:
    def num(v):
        return "" if v is None else format_fixed(v, precision)

    return [
        row.labels,
        num(row.h),
        num(row.h0),
        num(row.hx),
        num(row.rx),
        num(row.L),
        num(row.hc),
        num(row.rcx),
        row.type_text,
    ]


CSV_HEADER = ("№№", "h", "h0", "hз", "rз", "L", "hс", "rсх", "Тип")


def to_csv(table: CalcTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in table.rows:
        writer.writerow(_cells_of(row, table.precision))
    return buf.getvalue()


def to_text(table: CalcTable) -> str:
    """Monospace rendering for terminals and logs."""
    header = list(CSV_HEADER)
    grid = [header] + [_cells_of(r, table.precision) for r in table.rows]
    widths = [max(len(row[i]) for row in grid) for i in range(9)]
    lines = []
    for row in grid:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def _wrap_to_width(text: str, limit: float, font) -> list[str]:
    words = text.split()
    lines: list[str] = []
    current = ""
    for word in words:
        candidate = f"{current} {word}".strip()
        if current and measure_text(candidate, font)[0] > limit:
            lines.append(current)
            current = word
        else:
            current = candidate
    if current:
        lines.append(current)
    return lines or [""]


#: Cell padding, mm Paper, and the layout floor for column widths.
CELL_PAD = 1.0
MIN_COL_WIDTH = 8.0


def _column_widths(table: CalcTable, font) -> list[float]:
    widths = []
    for i in range(9):
        cells = [table.headers.symbols[i]] + [_cells_of(r, table.precision)[i] for r in table.rows]
        w = max((measure_text(c, font)[0] for c in cells), default=0.0)
        name_hint = min(measure_text(table.headers.names[i], font)[0] / 3.0, 40.0)
        widths.append(max(w + 2 * CELL_PAD, name_hint + 2 * CELL_PAD, MIN_COL_WIDTH))
    return widths


def layout_table(table: CalcTable, general: GeneralSettings) -> tuple:
    """Drawing of the table as display-list primitives (paper mm, y up)."""
    ts = general.table
    font = ts.font
    base = general.base_point_paper
    x0 = base.dx + ts.corner_offset.dx
    y0 = base.dy + ts.corner_offset.dy  # top-left corner

    cols = 9
    widths = _column_widths(table, font)

    line_h = font.size * 1.8
    name_lines = [
        _wrap_to_width(table.headers.names[i], widths[i] - 2 * CELL_PAD, font) for i in range(cols)
    ]
    names_h = max(len(ls) for ls in name_lines) * line_h + 2 * CELL_PAD
    symbols_h = ts.row_height
    total_w = sum(widths)
    total_h = names_h + symbols_h + ts.row_height * len(table.rows)

    prims = []
    xr = x0 + total_w
    yb = y0 - total_h
    border = ts.border_linetype
    header_lt = ts.header_linetype
    sep = ts.separator_linetype

    def hline(y, lt):
        prims.append(LinePrim(x0, y, xr, y, linetype=lt, width=width_for(lt)))

    def vline(x, lt):
        prims.append(LinePrim(x, y0, x, yb, linetype=lt, width=width_for(lt)))

    hline(y0, border)
    hline(y0 - names_h, header_lt)
    hline(y0 - names_h - symbols_h, header_lt)
    for r in range(1, len(table.rows)):
        hline(y0 - names_h - symbols_h - ts.row_height * r, sep)
    hline(yb, border)
    vline(x0, border)
    x = x0
    for i in range(cols - 1):
        x += widths[i]
        vline(x, sep)
    vline(xr, border)

    def centered(text, cx, cy_baseline):
        if not text:
            return
        w, _ = measure_text(text, font)
        prims.append(TextPrim(cx - w / 2.0, cy_baseline, text, font))

    x = x0
    for i in range(cols):
        cx = x + widths[i] / 2.0
        lines = name_lines[i]
        block_h = len(lines) * line_h
        top = y0 - (names_h - block_h) / 2.0
        for j, line in enumerate(lines):
            centered(line, cx, top - line_h * (j + 1) + (line_h - font.size) / 2.0)
        centered(
            table.headers.symbols[i],
            cx,
            y0 - names_h - symbols_h + (symbols_h - font.size) / 2.0,
        )
        x += widths[i]

    for r, row in enumerate(table.rows):
        cells = _cells_of(row, table.precision)
        y_base = y0 - names_h - symbols_h - ts.row_height * (r + 1) + (ts.row_height - font.size) / 2.0
        x = x0
        for i in range(cols):
            centered(cells[i], x + widths[i] / 2.0, y_base)
            x += widths[i]

    return tuple(prims)
