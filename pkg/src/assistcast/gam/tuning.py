"""Hyperparameter grid search under a time-ordered validation split."""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Sequence

import pandas as pd

from assistcast.evalx import armse, mae
from assistcast.gam.model import fit, predict
from assistcast.gam.spec import ModelSpec

logger = logging.getLogger(__name__)

_TIE_EPS = 1e-12


def expand_grid(
    template: ModelSpec,
    seasonality_scales: Sequence[float] = (0.1, 1.0, 10.0),
    holiday_scales: Sequence[float] = (1.0, 10.0),
    modes: Sequence[str] = ("ADDITIVE", "MULTIPLICATIVE"),
) -> list[ModelSpec]:
    """Cartesian candidate grid over penalty scales and seasonality modes."""
    specs = []
    for mode in modes:
        for s in seasonality_scales:
            for h in holiday_scales:
                scales = dict(template.penalty_scales)
                scales["seasonality"] = float(s)
                scales["holidays"] = float(h)
                specs.append(replace(template, seasonality_mode=mode, penalty_scales=scales))
    return specs


def grid_search(
    train_panel: pd.DataFrame,
    spec_grid: Sequence[ModelSpec],
    validation_split: float = 0.2,
) -> tuple[ModelSpec, pd.DataFrame]:
    """Pick the grid entry with the lowest validation asymmetric RMSE.

    The validation block is the chronological tail of the training rows; no
    shuffling.  Ties (to 1e-12) break on MAE, then on grid order.  Returns
    the winning spec and the full score table.
    """
    if not spec_grid:
        raise ValueError("spec grid must not be empty")
    if not 0 < validation_split < 1:
        raise ValueError(f"validation_split must be in (0, 1), got {validation_split}")

    ordered = train_panel.sort_values("hour_start", kind="stable").reset_index(drop=True)
    n_val = max(1, int(round(len(ordered) * validation_split)))
    fit_rows = ordered.iloc[:-n_val]
    val_rows = ordered.iloc[-n_val:]
    if len(fit_rows) == 0:
        raise ValueError("validation split leaves no training rows")

    records = []
    for i, spec in enumerate(spec_grid):
        model = fit(fit_rows, spec)
        yhat, _ = predict(model, val_rows)
        y = val_rows["y"].to_numpy(dtype=float)
        records.append(
            {
                "spec_index": i,
                "seasonality_mode": spec.seasonality_mode,
                "seasonality_scale": spec.penalty_scales["seasonality"],
                "holiday_scale": spec.penalty_scales["holidays"],
                "armse": armse(y, yhat),
                "mae": mae(y, yhat),
            }
        )
    scores = pd.DataFrame.from_records(records)

    best_idx = 0
    for i in range(1, len(records)):
        best, cand = records[best_idx], records[i]
        if cand["armse"] < best["armse"] - _TIE_EPS:
            best_idx = i
        elif abs(cand["armse"] - best["armse"]) <= _TIE_EPS and cand["mae"] < best["mae"] - _TIE_EPS:
            best_idx = i
    logger.debug("grid search winner: entry %d of %d", best_idx, len(records))
    return spec_grid[best_idx], scores
