"""Design matrix for the decomposable model.

Column layout (deterministic): trend offset + rate, changepoint hinges
``max(0, t - t_cp)``, sin/cos Fourier pairs per enabled seasonality, one
indicator per (holiday, offset day), then external regressors in spec order.
Each column carries a group label so penalties and component extraction can
address it.
"""

from __future__ import annotations

import numpy as np
import pandas as pd

from assistcast.gam.spec import SEASONALITY_PERIODS_DAYS, ModelSpec

SECONDS_PER_DAY = 86400.0

GROUP_TREND_BASE = "trend_base"
GROUP_TREND_DELTA = "trend_delta"
GROUP_HOLIDAYS = "holidays"
GROUP_REGRESSORS = "regressors"
TREND_GROUPS = (GROUP_TREND_BASE, GROUP_TREND_DELTA)


def _epoch_days(timestamps: pd.DatetimeIndex) -> np.ndarray:
    """Absolute days since the Unix epoch; anchors seasonal phase to the calendar."""
    return timestamps.asi8 / 1e9 / SECONDS_PER_DAY


class TrendBasis:
    """Scaled-time trend basis with fixed changepoint locations.

    Time is mapped to [0, 1] over the training span; changepoints are placed
    evenly over the first ``changepoint_range`` fraction of training history.
    Hinge terms extrapolate the final piecewise-linear segment naturally.
    """

    def __init__(self, t_start: pd.Timestamp, t_scale_s: float, changepoints: pd.DatetimeIndex):
        if t_scale_s <= 0:
            raise ValueError("trend time scale must be positive")
        self.t_start = pd.Timestamp(t_start)
        self.t_scale_s = float(t_scale_s)
        self.changepoints = pd.DatetimeIndex(changepoints)

    @classmethod
    def from_history(cls, timestamps: pd.DatetimeIndex, spec: ModelSpec) -> "TrendBasis":
        if len(timestamps) < 2:
            raise ValueError("need at least two timestamps to anchor the trend")
        ts = timestamps.sort_values()
        t_start, t_end = ts[0], ts[-1]
        scale = (t_end - t_start).total_seconds()
        n_cp = spec.n_changepoints
        cutoff = int(np.floor(len(ts) * spec.changepoint_range))
        if n_cp + 1 > cutoff:
            n_cp = max(cutoff - 1, 0)
        if n_cp > 0:
            idx = np.linspace(0, cutoff - 1, n_cp + 1).round().astype(int)[1:]
            changepoints = ts[idx]
        else:
            changepoints = pd.DatetimeIndex([])
        return cls(t_start, scale, changepoints)

    def scaled_time(self, timestamps: pd.DatetimeIndex) -> np.ndarray:
        return (timestamps.asi8 - self.t_start.value) / 1e9 / self.t_scale_s

    @property
    def changepoints_t(self) -> np.ndarray:
        return self.scaled_time(self.changepoints)

    def matrix(self, timestamps: pd.DatetimeIndex) -> tuple[np.ndarray, list[str], list[str]]:
        t = self.scaled_time(timestamps)
        cols = [np.ones_like(t), t]
        labels = ["trend_offset", "trend_rate"]
        groups = [GROUP_TREND_BASE, GROUP_TREND_BASE]
        for i, cp in enumerate(self.changepoints_t):
            cols.append(np.maximum(0.0, t - cp))
            labels.append(f"trend_cp_{i:03d}")
            groups.append(GROUP_TREND_DELTA)
        return np.column_stack(cols), labels, groups

    def to_dict(self) -> dict:
        return {
            "t_start": int(self.t_start.value),
            "t_scale_s": self.t_scale_s,
            "changepoints": [int(v) for v in self.changepoints.asi8],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrendBasis":
        return cls(
            t_start=pd.Timestamp(int(d["t_start"])),
            t_scale_s=float(d["t_scale_s"]),
            changepoints=pd.DatetimeIndex(np.asarray(d["changepoints"], dtype="int64").view("M8[ns]")),
        )


def fourier_matrix(timestamps: pd.DatetimeIndex, period_days: float, order: int) -> np.ndarray:
    """2*order columns: sin/cos pairs at harmonics of the given period."""
    t = _epoch_days(timestamps)
    out = np.empty((len(t), 2 * order))
    for k in range(1, order + 1):
        angle = 2.0 * np.pi * k * t / period_days
        out[:, 2 * (k - 1)] = np.sin(angle)
        out[:, 2 * (k - 1) + 1] = np.cos(angle)
    return out


def holiday_matrix(
    timestamps: pd.DatetimeIndex, windows: tuple
) -> tuple[np.ndarray, list[str]]:
    """One 0/1 indicator per (window, offset day)."""
    dates = timestamps.normalize()
    cols: list[np.ndarray] = []
    labels: list[str] = []
    one_day = pd.Timedelta(days=1)
    for window in windows:
        anchors = pd.DatetimeIndex([pd.Timestamp(d) for d in window.anchor_dates])
        for offset in window.offsets:
            active = anchors + offset * one_day
            cols.append(dates.isin(active).astype(float))
            labels.append(f"{window.name}_{offset:+d}")
    if not cols:
        return np.empty((len(timestamps), 0)), []
    return np.column_stack(cols), labels


def build_design_matrix(
    timestamps: pd.DatetimeIndex,
    spec: ModelSpec,
    regressor_values: pd.DataFrame | None,
    trend_basis: TrendBasis,
) -> tuple[np.ndarray, list[str], list[str]]:
    """Assemble the full design matrix.

    Returns (matrix, column labels, per-column group names).  Identical
    inputs produce identical matrices; a regressor named in the spec but
    absent from ``regressor_values`` is an error.
    """
    blocks: list[np.ndarray] = []
    labels: list[str] = []
    groups: list[str] = []

    trend_m, trend_labels, trend_groups = trend_basis.matrix(timestamps)
    blocks.append(trend_m)
    labels.extend(trend_labels)
    groups.extend(trend_groups)

    for season in ("daily", "weekly", "yearly"):
        if season not in spec.fourier_orders:
            continue
        order = spec.fourier_orders[season]
        blocks.append(fourier_matrix(timestamps, SEASONALITY_PERIODS_DAYS[season], order))
        for k in range(1, order + 1):
            labels.extend([f"{season}_sin{k}", f"{season}_cos{k}"])
            groups.extend([season, season])

    hol_m, hol_labels = holiday_matrix(timestamps, spec.holiday_windows)
    if hol_labels:
        blocks.append(hol_m)
        labels.extend(hol_labels)
        groups.extend([GROUP_HOLIDAYS] * len(hol_labels))

    if spec.regressor_names:
        if regressor_values is None:
            raise ValueError(f"regressor values required for {list(spec.regressor_names)}")
        for name in spec.regressor_names:
            if name not in regressor_values.columns:
                raise ValueError(f"missing regressor column {name!r}")
            blocks.append(regressor_values[name].to_numpy(dtype=float).reshape(-1, 1))
            labels.append(name)
            groups.append(GROUP_REGRESSORS)

    matrix = np.hstack(blocks) if blocks else np.empty((len(timestamps), 0))
    return matrix, labels, groups
