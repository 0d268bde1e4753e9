"""Additive decomposable demand model fitted by penalized least squares."""

from assistcast.gam.design import TrendBasis, build_design_matrix
from assistcast.gam.diagnostics import ResidualDiagnostics, residual_diagnostics
from assistcast.gam.model import ComponentBreakdown, FittedModel, fit, predict
from assistcast.gam.spec import (
    ADDITIVE,
    MULTIPLICATIVE,
    HolidayWindow,
    ModelSpec,
    default_holiday_windows,
)
from assistcast.gam.tuning import expand_grid, grid_search

__all__ = [
    "ADDITIVE",
    "MULTIPLICATIVE",
    "ComponentBreakdown",
    "FittedModel",
    "HolidayWindow",
    "ModelSpec",
    "ResidualDiagnostics",
    "TrendBasis",
    "build_design_matrix",
    "default_holiday_windows",
    "expand_grid",
    "fit",
    "grid_search",
    "predict",
    "residual_diagnostics",
]
