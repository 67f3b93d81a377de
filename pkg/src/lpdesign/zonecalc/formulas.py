"""Zone formulas of RD 34.21.122-87, driven by the bundled coefficient file.

All lengths in mm Nature. ``h`` is the effective terminal height (apex
elevation for rods, sag-corrected support height for wires).
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..errors import DomainError, KindError, ParseError
from ..model import MAX_HEIGHT_MM, TerminalKind, ZoneType

FORMULA_FILE = Path(__file__).parent / "data" / "zone_formulas.txt"

ROD = "rod"
WIRE = "wire"


@dataclass(frozen=True, slots=True)
class ConeParams:
    """Single-terminal zone: apex height h0 and ground radius r0, mm."""

    h0: float
    r0: float


@dataclass(frozen=True, slots=True)
class PairParams:
    """Equal pair: saddle minimum height hc and ground half-width rc, mm.

    hc == 0 means the pair does not qualify for a common zone.
    """

    hc: float
    rc: float


@dataclass(frozen=True, slots=True)
class SingleCoeffs:
    h0_factor: float
    r0_base: float
    r0_per_m: float


@dataclass(frozen=True, slots=True)
class PairPiece:
    #: L/h ratio range; first piece includes lo, all include hi.
    lo: float
    hi: float
    hc_a: float
    hc_b_per_m: float
    rc_c: float
    rc_from: float


@dataclass(frozen=True, slots=True)
class SagRule:
    span1_max_mm: float
    drop1_mm: float
    span2_max_mm: float
    drop2_mm: float


@dataclass(frozen=True, slots=True)
class FormulaTable:
    singles: dict
    pairs: dict
    sag: SagRule
    checksum: str

    def single(self, zone: ZoneType, kind: str) -> SingleCoeffs:
        return self.singles[(zone, kind)]

    def pair_pieces(self, zone: ZoneType, kind: str) -> tuple[PairPiece, ...]:
        return self.pairs[(zone, kind)]


def _parse_sections(text: str, source: str) -> dict:
    sections: dict[str, dict[str, str]] = {}
    current: Optional[dict[str, str]] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            current = sections.setdefault(name, {})
            continue
        if "=" not in line or current is None:
            raise ParseError(f"{source}: bad line {lineno!r}: {raw.strip()!r}", line=lineno, column=1)
        key, value = (part.strip() for part in line.split("=", 1))
        current[key] = value
    return sections


def _pieces_from(section: dict, name: str) -> tuple[PairPiece, ...]:
    count = int(section["piece_count"])
    pieces = []
    for i in range(1, count + 1):
        lo, hi = (float(v) for v in section[f"piece{i}_range"].split())
        pieces.append(
            PairPiece(
                lo=lo,
                hi=hi,
                hc_a=float(section[f"piece{i}_hc_a"]),
                hc_b_per_m=float(section[f"piece{i}_hc_b_per_m"]),
                rc_c=float(section[f"piece{i}_rc_c"]),
                rc_from=float(section[f"piece{i}_rc_from"]),
            )
        )
    for a, b in zip(pieces, pieces[1:]):
        if not math.isclose(a.hi, b.lo):
            raise ParseError(f"{name}: piece ranges must be contiguous")
    return tuple(pieces)


def load_formula_table(path: Optional[Path] = None) -> FormulaTable:
    path = Path(path) if path is not None else FORMULA_FILE
    data = path.read_bytes()
    sections = _parse_sections(data.decode("utf-8"), str(path))
    singles = {}
    pairs = {}
    for zone in ZoneType:
        zkey = f"zone_{zone.value.lower()}"
        for kind in (ROD, WIRE):
            s = sections[f"{zkey}.{kind}.single"]
            singles[(zone, kind)] = SingleCoeffs(
                h0_factor=float(s["h0_factor"]),
                r0_base=float(s["r0_base"]),
                r0_per_m=float(s["r0_per_m"]),
            )
            pairs[(zone, kind)] = _pieces_from(sections[f"{zkey}.{kind}.pair"], f"{zkey}.{kind}.pair")
    sag_raw = sections["wire_sag"]
    sag = SagRule(
        span1_max_mm=float(sag_raw["span1_max_mm"]),
        drop1_mm=float(sag_raw["drop1_mm"]),
        span2_max_mm=float(sag_raw["span2_max_mm"]),
        drop2_mm=float(sag_raw["drop2_mm"]),
    )
    return FormulaTable(singles=singles, pairs=pairs, sag=sag, checksum=hashlib.sha256(data).hexdigest())


_default_table: Optional[FormulaTable] = None


def default_table() -> FormulaTable:
    global _default_table
    if _default_table is None:
        _default_table = load_formula_table()
    return _default_table


def _norm_zone(zone) -> ZoneType:
    return zone if isinstance(zone, ZoneType) else ZoneType(str(zone))


def _norm_kind(kind) -> str:
    if isinstance(kind, TerminalKind):
        if kind is TerminalKind.ROD:
            return ROD
        if kind in (TerminalKind.WIRE, TerminalKind.DOUBLE_WIRE):
            return WIRE
        raise KindError("mesh terminals have no cone parameters")
    if kind in (ROD, WIRE):
        return kind
    raise KindError(f"unsupported terminal kind {kind!r}")


def cone_params(h: float, zone, kind=ROD, table: Optional[FormulaTable] = None) -> ConeParams:
    """h0 and r0 of a single terminal of height h (mm)."""
    table = table or default_table()
    if not (0.0 < h <= MAX_HEIGHT_MM):
        raise DomainError(f"height {h} mm outside (0, {MAX_HEIGHT_MM:g}]")
    c = table.single(_norm_zone(zone), _norm_kind(kind))
    return ConeParams(h0=c.h0_factor * h, r0=(c.r0_base + c.r0_per_m * (h / 1000.0)) * h)


def radius_at(h: float, zone, kind, hx: float, table: Optional[FormulaTable] = None) -> float:
    """Zone radius at protected level hx; 0 above the zone apex."""
    if hx < 0.0:
        raise DomainError("protected level must be >= 0")
    cp = cone_params(h, zone, kind, table)
    if hx >= cp.h0:
        return 0.0
    return cp.r0 * (1.0 - hx / cp.h0)


def pair_params(h: float, L: float, zone, kind=ROD, table: Optional[FormulaTable] = None) -> PairParams:
    """Saddle parameters of an equal pair at axis distance L (mm).

    Returns hc == 0 when L is beyond the validity range (independent
    singles).
    """
    table = table or default_table()
    if L <= 0.0:
        raise DomainError("pair distance must be > 0")
    cp = cone_params(h, zone, kind, table)
    pieces = table.pair_pieces(_norm_zone(zone), _norm_kind(kind))
    ratio_limit = pieces[-1].hi
    if L > ratio_limit * h:
        return PairParams(hc=0.0, rc=0.0)
    h_m = h / 1000.0
    for piece in pieces:
        if L <= piece.hi * h:
            hc = cp.h0 - (piece.hc_a + piece.hc_b_per_m * h_m) * (L - h)
            rc = cp.r0 * (1.0 - piece.rc_c * (L - piece.rc_from * h) / h)
            if hc <= 0.0:
                return PairParams(hc=0.0, rc=0.0)
            return PairParams(hc=hc, rc=rc)
    return PairParams(hc=0.0, rc=0.0)


def min_width_at(pair: PairParams, hx: float) -> float:
    """Half-width of the common zone at level hx; 0 at or above hc."""
    if hx < 0.0:
        raise DomainError("protected level must be >= 0")
    if pair.hc <= 0.0 or hx >= pair.hc:
        return 0.0
    return pair.rc * (pair.hc - hx) / pair.hc


def sag_drop(span: float, table: Optional[FormulaTable] = None) -> float:
    """Wire sag allowance for a support span (mm)."""
    sag = (table or default_table()).sag
    if span <= sag.span1_max_mm:
        return sag.drop1_mm
    return sag.drop2_mm


def effective_wire_height(support_height: float, span: float, table: Optional[FormulaTable] = None) -> float:
    """Wire height at mid-span after sag; floored at 0."""
    return max(support_height - sag_drop(span, table), 0.0)
