"""Digit-growth functions: parsing, growth constants and dimension prediction."""

from .expr import parse_expr, to_text
from .growth import (
    DimensionPrediction,
    Equivalence,
    Estimate,
    GrowthReport,
    XiEstimate,
    classify_trend,
    equivalence_diagnostic,
    growth_constants,
    predict_dimensions,
    regimes,
    xi,
)
from .spec import AlphaLog, Expo, Expr, Power, PsiSpec, Table, eval_psi, load_table, parse_psi, table

__all__ = [
    "AlphaLog",
    "DimensionPrediction",
    "Equivalence",
    "Estimate",
    "Expo",
    "Expr",
    "GrowthReport",
    "Power",
    "PsiSpec",
    "Table",
    "XiEstimate",
    "classify_trend",
    "equivalence_diagnostic",
    "eval_psi",
    "growth_constants",
    "load_table",
    "parse_expr",
    "parse_psi",
    "predict_dimensions",
    "regimes",
    "table",
    "to_text",
    "xi",
]
