"""Exact Spearman footrule bounds and independence tests under missing data."""

from .coefficients import (
    CoefficientSet,
    TauBounds,
    coefficient_set,
    footrule,
    kendall_tau_raw,
    scale_footrule,
    scale_rho,
    scale_tau,
    spearman_rho_raw,
    tau_bounds,
)
from .core import CsvFormatError, MissingPattern, PairedSample, parse_csv, rank_vector, read_csv
from .errors import (
    AllMissingCoordinate,
    BadAlpha,
    BadDimension,
    BadRange,
    BudgetExceeded,
    DuplicateValue,
    FootruleError,
    LengthMismatch,
    WrongCase,
)
from .inference import NullApprox, Outcome, PValueBounds, TestOutcome, decide, footrule_pvalue, pvalue_bounds
from .lower import lower_bound
from .oracle import brute_force_bounds
from .upper import FootruleBounds, bounds, upper_bound

__version__ = "0.1.0"

__all__ = [
    "AllMissingCoordinate",
    "BadAlpha",
    "BadDimension",
    "BadRange",
    "BudgetExceeded",
    "CoefficientSet",
    "CsvFormatError",
    "DuplicateValue",
    "FootruleBounds",
    "FootruleError",
    "LengthMismatch",
    "MissingPattern",
    "NullApprox",
    "Outcome",
    "PValueBounds",
    "PairedSample",
    "TauBounds",
    "TestOutcome",
    "WrongCase",
    "bounds",
    "brute_force_bounds",
    "coefficient_set",
    "decide",
    "footrule",
    "footrule_pvalue",
    "kendall_tau_raw",
    "lower_bound",
    "parse_csv",
    "pvalue_bounds",
    "rank_vector",
    "read_csv",
    "scale_footrule",
    "scale_rho",
    "scale_tau",
    "spearman_rho_raw",
    "tau_bounds",
    "upper_bound",
]
