"""Protection-zone computation per RD 34.21.122-87."""

from .field import Scene, compile_scene, height_at, terminal_top
from .formulas import (
    FORMULA_FILE,
    ROD,
    WIRE,
    ConeParams,
    FormulaTable,
    PairParams,
    cone_params,
    default_table,
    effective_wire_height,
    load_formula_table,
    min_width_at,
    pair_params,
    radius_at,
    sag_drop,
)
from .geometry import Arc, Contour, Poly, Seg, circle_contour, merge_figures, ring_contour
from .sections import (
    RELIEF_STEPS,
    horizontal_section,
    level_figures,
    relief,
    vertical_profile,
)

__all__ = [
    "Arc",
    "ConeParams",
    "Contour",
    "FORMULA_FILE",
    "FormulaTable",
    "PairParams",
    "Poly",
    "RELIEF_STEPS",
    "ROD",
    "Scene",
    "Seg",
    "WIRE",
    "circle_contour",
    "compile_scene",
    "cone_params",
    "default_table",
    "effective_wire_height",
    "height_at",
    "horizontal_section",
    "level_figures",
    "load_formula_table",
    "merge_figures",
    "min_width_at",
    "pair_params",
    "radius_at",
    "relief",
    "ring_contour",
    "sag_drop",
    "terminal_top",
    "vertical_profile",
]
