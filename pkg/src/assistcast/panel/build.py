"""Station-hour panel assembly: aggregation, weather join, imputation, split.

The panel is a plain DataFrame with one row per (station, hour_start) over a
gap-free hourly grid, the hourly pre-booked assistance count ``y``, regressor
columns, and (after :func:`tag_split`) a ``split_tag`` of TRAIN or TEST.
Hours are half-open ``[h, h+1h)``: an event exactly on the boundary belongs
to the next hour.
"""

from __future__ import annotations

import math

import numpy as np
import pandas as pd

WEATHER_COLUMNS = ["temperature_c", "rainfall_mm", "humidity_pct"]

TRAIN, TEST, FUTURE = "TRAIN", "TEST", "FUTURE"

IMPUTE_POLICIES = ("forward-fill-then-train-mean", "train-mean")


def hourly_grid(start: pd.Timestamp, end: pd.Timestamp) -> pd.DatetimeIndex:
    """Hour starts covering [start, end), both floored to the hour."""
    start = pd.Timestamp(start).floor("h")
    end = pd.Timestamp(end).floor("h")
    if end <= start:
        raise ValueError(f"span end {end} must be after start {start}")
    return pd.date_range(start, end, freq="h", inclusive="left")


def build_panel(
    events: pd.DataFrame,
    stations: list[str],
    span: tuple[pd.Timestamp, pd.Timestamp],
) -> pd.DataFrame:
    """Aggregate retained pre-booked events to a gap-free station-hour panel.

    Every station gets the full hourly grid over ``span``; hours without
    events carry y = 0.  An event outside the span is an error (the span is
    the ingestion contract, silently dropping data would hide it).
    """
    grid = hourly_grid(*span)
    if len(events):
        floored = events["scheduled_time"].dt.floor("h")
        outside = ~floored.isin(grid)
        if outside.any():
            first = events.loc[outside].iloc[0]
            raise ValueError(
                f"span {span[0]}..{span[1]} does not cover event "
                f"{first['journey_id']!r} at {first['scheduled_time']} ({first['station']})"
            )
        unknown = ~events["station"].isin(stations)
        if unknown.any():
            codes = sorted(events.loc[unknown, "station"].unique())
            raise ValueError(f"events at stations outside panel scope: {codes}")

    index = pd.MultiIndex.from_product([stations, grid], names=["station", "hour_start"])
    panel = pd.DataFrame(index=index).reset_index()

    if len(events):
        counts = (
            events.assign(hour_start=events["scheduled_time"].dt.floor("h"))
            .groupby(["station", "hour_start"])
            .size()
            .rename("y")
        )
        panel = panel.merge(counts, how="left", left_on=["station", "hour_start"], right_index=True)
        panel["y"] = panel["y"].fillna(0).astype(int)
    else:
        panel["y"] = 0

    return panel.sort_values(["station", "hour_start"], kind="stable").reset_index(drop=True)


def join_weather(panel: pd.DataFrame, observations: pd.DataFrame) -> pd.DataFrame:
    """Left-join hourly weather observations keyed by (station, hour_start).

    Unmatched panel rows keep NaN in all weather columns for the imputation
    step; duplicate observation keys are an error.
    """
    missing = [c for c in ["station", "hour_start", *WEATHER_COLUMNS] if c not in observations.columns]
    if missing:
        raise ValueError(f"weather observations missing columns: {missing}")
    dupes = observations.duplicated(subset=["station", "hour_start"])
    if dupes.any():
        key = observations.loc[dupes, ["station", "hour_start"]].iloc[0]
        raise ValueError(f"duplicate weather observation for {key['station']} at {key['hour_start']}")
    obs = observations[["station", "hour_start", *WEATHER_COLUMNS]]
    return panel.merge(obs, how="left", on=["station", "hour_start"])


def split_time_ordered(
    panel: pd.DataFrame, train_fraction: float = 0.8
) -> tuple[pd.DataFrame, pd.DataFrame]:
    """Chronological per-station split: first floor(f * n) rows train, rest test.

    Input is sorted internally (robustness over strictness); per station the
    maximum TRAIN timestamp always precedes the minimum TEST timestamp.
    """
    if not 0 < train_fraction < 1:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    tagged = tag_split(panel, train_fraction)
    train = tagged[tagged["split_tag"] == TRAIN].reset_index(drop=True)
    test = tagged[tagged["split_tag"] == TEST].reset_index(drop=True)
    return train, test


def tag_split(panel: pd.DataFrame, train_fraction: float = 0.8) -> pd.DataFrame:
    """Return the panel with a split_tag column (TRAIN then TEST per station)."""
    out = panel.sort_values(["station", "hour_start"], kind="stable").reset_index(drop=True)
    tags = np.empty(len(out), dtype=object)
    for _, idx in out.groupby("station").indices.items():
        n = len(idx)
        if n < 5:
            raise ValueError(f"cannot split {n} rows per station (need at least 5)")
        n_train = math.floor(train_fraction * n)
        tags[idx[:n_train]] = TRAIN
        tags[idx[n_train:]] = TEST
    out["split_tag"] = tags
    return out


def impute_missing(
    panel: pd.DataFrame,
    policy: str = "forward-fill-then-train-mean",
    columns: list[str] | None = None,
) -> tuple[pd.DataFrame, dict[str, float]]:
    """Fill missing regressor cells; fill statistics come from TRAIN rows only.

    Forward-fill propagates past observations within a station (never future
    ones), then remaining gaps take the TRAIN-column mean.  Returns the
    filled panel and the train means used, so inference can reuse them.
    """
    if policy not in IMPUTE_POLICIES:
        raise ValueError(f"unknown imputation policy {policy!r}, expected one of {IMPUTE_POLICIES}")
    if "split_tag" not in panel.columns:
        raise ValueError("panel must carry split_tag before imputation (run tag_split first)")
    if columns is None:
        columns = [c for c in WEATHER_COLUMNS if c in panel.columns]

    out = panel.sort_values(["station", "hour_start"], kind="stable").reset_index(drop=True)
    train_mask = out["split_tag"] == TRAIN
    means: dict[str, float] = {}
    for col in columns:
        train_vals = out.loc[train_mask, col]
        if train_vals.isna().all():
            raise ValueError(f"column {col!r} entirely missing in TRAIN rows, cannot impute")
        means[col] = float(train_vals.mean())
        if policy == "forward-fill-then-train-mean":
            out[col] = out.groupby("station")[col].ffill()
        out[col] = out[col].fillna(means[col])
    return out, means
