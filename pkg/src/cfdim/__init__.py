"""Exact continued-fraction tools and dimension estimates for sets defined by
the growth of partial quotients."""

from .cfcore import (
    BoundsReport,
    Convergent,
    Interval,
    convergents,
    cylinder,
    determinant,
    evaluate,
    expand,
    verify_bounds,
)
from .construct import (
    ConstructedWord,
    DSequence,
    TSequence,
    build_F_point,
    build_point,
    build_xtilde,
    d_sequence,
    membership_stats,
    theta,
)
from .enumeration import FamilySpec, count, count_D, enumerate_family
from .errors import BracketFailure, BudgetExceeded, CFDimError, PsiDomainError, PsiParseError
from .estimator import CoverSumResult, CriticalExponent, cover_sum, critical_exponent
from .montecarlo import mc_growth_law
from .psi import growth_constants, parse_psi, predict_dimensions, xi

__version__ = "0.1.0"

__all__ = [
    "BoundsReport",
    "BracketFailure",
    "BudgetExceeded",
    "CFDimError",
    "ConstructedWord",
    "Convergent",
    "CoverSumResult",
    "CriticalExponent",
    "DSequence",
    "FamilySpec",
    "Interval",
    "PsiDomainError",
    "PsiParseError",
    "TSequence",
    "build_F_point",
    "build_point",
    "build_xtilde",
    "convergents",
    "count",
    "count_D",
    "cover_sum",
    "critical_exponent",
    "cylinder",
    "d_sequence",
    "determinant",
    "enumerate_family",
    "evaluate",
    "expand",
    "growth_constants",
    "mc_growth_law",
    "membership_stats",
    "parse_psi",
    "predict_dimensions",
    "theta",
    "verify_bounds",
    "xi",
]
