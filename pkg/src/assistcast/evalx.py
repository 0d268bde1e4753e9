"""Forecast evaluation: MAE, asymmetric RMSE, tolerance coverage, YoY baseline.

Under-prediction carries more operational risk than over-prediction (too few
staff versus idle margin), so the squared-error metric weights negative
errors (yhat < y) more heavily.  The year-on-year baseline lags demand by
364 days, preserving the day of week, optionally scaled by a growth factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

BASELINE_LABEL = "Baseline"
HOURLY, DAILY = "hourly", "daily"

YOY_LAG = pd.Timedelta(days=364)

REPORT_COLUMNS = ["station", "horizon", "mae", "armse", "coverage_pct", "resolution", "n"]


def _paired(y, yhat) -> tuple[np.ndarray, np.ndarray]:
    y = np.asarray(y, dtype=float)
    yhat = np.asarray(yhat, dtype=float)
    if y.shape != yhat.shape:
        raise ValueError(f"length mismatch: y has {y.shape}, yhat has {yhat.shape}")
    if y.size == 0:
        raise ValueError("empty series")
    return y, yhat


def mae(y, yhat) -> float:
    """Mean absolute error."""
    y, yhat = _paired(y, yhat)
    return float(np.abs(y - yhat).mean())


def armse(y, yhat, weight: float = 2.0) -> float:
    """Asymmetric RMSE: errors e = yhat - y, squared, weighted when e < 0."""
    if weight < 1:
        raise ValueError(f"under-prediction weight must be >= 1, got {weight}")
    y, yhat = _paired(y, yhat)
    e = yhat - y
    w = np.where(e < 0, weight, 1.0)
    return float(math.sqrt((w * e**2).mean()))


def coverage(y, yhat, tolerance: float) -> float:
    """Percentage of forecasts within +/- tolerance of the observed value."""
    if tolerance < 0:
        raise ValueError(f"tolerance must be >= 0, got {tolerance}")
    y, yhat = _paired(y, yhat)
    return float(100.0 * (np.abs(y - yhat) <= tolerance).mean())


@dataclass(frozen=True)
class EvalConfig:
    """Per-station tolerance thresholds and the under-prediction weight."""

    tolerances: dict[str, float] = field(default_factory=dict)
    under_prediction_weight: float = 2.0

    def __post_init__(self) -> None:
        if self.under_prediction_weight < 1:
            raise ValueError("under_prediction_weight must be >= 1")
        for station, tol in self.tolerances.items():
            if tol < 0:
                raise ValueError(f"tolerance for {station} must be >= 0")

    def tolerance_for(self, station: str) -> float:
        if station not in self.tolerances:
            raise KeyError(f"no tolerance configured for station {station!r}")
        return self.tolerances[station]


def default_tolerances(panel: pd.DataFrame) -> dict[str, float]:
    """Station tolerance default: 10% of mean daily demand, ceil, floor 2."""
    out: dict[str, float] = {}
    for station, grp in panel.groupby("station"):
        daily = grp.groupby(grp["hour_start"].dt.normalize())["y"].sum()
        out[station] = float(max(2, math.ceil(0.10 * daily.mean())))
    return out


def yoy_baseline(
    panel: pd.DataFrame, targets: pd.DataFrame, growth_factor: float = 1.0
) -> pd.DataFrame:
    """Year-on-year forecast: yhat(t) = y(t - 364d) * growth_factor.

    ``targets`` rows need (station, hour_start); every lagged hour must be
    present in the panel, otherwise the uncovered hours are reported.
    """
    lookup = panel.set_index(["station", "hour_start"])["y"]
    out = targets[["station", "hour_start"]].copy()
    lag_idx = pd.MultiIndex.from_arrays([out["station"], out["hour_start"] - YOY_LAG])
    covered = lag_idx.isin(lookup.index)
    if not covered.all():
        missing = [f"{s} {t}" for s, t in lag_idx[~covered]]
        shown = ", ".join(missing[:5]) + ("..." if len(missing) > 5 else "")
        raise ValueError(f"history does not cover {len(missing)} lagged hours: {shown}")
    out["yhat"] = lookup.reindex(lag_idx).to_numpy(dtype=float) * growth_factor
    out["bucket"] = BASELINE_LABEL
    return out


def evaluate_by_bucket(
    forecasts: pd.DataFrame,
    observations: pd.DataFrame,
    bucket_order: list[str],
    config: EvalConfig,
) -> pd.DataFrame:
    """Per (station, bucket label, resolution) metric table.

    ``forecasts`` rows carry (station, hour_start, bucket, yhat) including
    baseline rows tagged ``Baseline``; ``observations`` carry the matching
    (station, hour_start, y).  Daily metrics are computed on calendar-day
    sums of both series, not on averaged hourly metrics.
    """
    obs = observations.set_index(["station", "hour_start"])["y"]
    joined = forecasts.copy()
    keys = pd.MultiIndex.from_arrays([joined["station"], joined["hour_start"]])
    missing = ~keys.isin(obs.index)
    if missing.any():
        bad = joined.loc[missing, ["station", "hour_start"]].iloc[0]
        raise ValueError(
            f"forecast rows without matching observations, e.g. {bad['station']} at {bad['hour_start']}"
        )
    joined["y"] = obs.loc[keys].to_numpy(dtype=float)

    labels = [BASELINE_LABEL] + [b for b in bucket_order if b != BASELINE_LABEL]
    weight = config.under_prediction_weight
    records = []
    for station in sorted(joined["station"].unique()):
        tol = config.tolerance_for(station)
        station_rows = joined[joined["station"] == station]
        for label in labels:
            rows = station_rows[station_rows["bucket"] == label]
            if len(rows) == 0:
                continue
            records.append(
                {
                    "station": station,
                    "horizon": label,
                    "mae": mae(rows["y"], rows["yhat"]),
                    "armse": armse(rows["y"], rows["yhat"], weight),
                    "coverage_pct": coverage(rows["y"], rows["yhat"], tol),
                    "resolution": HOURLY,
                    "n": len(rows),
                }
            )
            day = rows["hour_start"].dt.normalize()
            daily = rows.groupby(day)[["y", "yhat"]].sum()
            records.append(
                {
                    "station": station,
                    "horizon": label,
                    "mae": mae(daily["y"], daily["yhat"]),
                    "armse": armse(daily["y"], daily["yhat"], weight),
                    "coverage_pct": coverage(daily["y"], daily["yhat"], tol),
                    "resolution": DAILY,
                    "n": len(daily),
                }
            )
    return pd.DataFrame.from_records(records, columns=REPORT_COLUMNS)
