"""Horizon buckets: one model per lead-time range, routed by whole-day horizon.

The horizon of a target hour is the ceiling of its fractional-day distance
from the forecast origin, so every target strictly after the origin lands in
exactly one bucket.  Adjacent buckets are distinct models; trajectories are
concatenated without blending, and continuity at bucket boundaries is not
asserted (only gap-freeness is).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import pandas as pd

from assistcast.gam.model import FittedModel, fit, predict
from assistcast.gam.spec import ModelSpec
from assistcast.gam.tuning import grid_search

SECONDS_PER_DAY = 86400.0

WEATHER_REGRESSORS = ("temperature_c", "rainfall_mm", "humidity_pct")


@dataclass(frozen=True)
class HorizonBucket:
    """A lead-time interval [h_min, h_max] days with its permitted regressors."""

    name: str
    h_min: int
    h_max: int | None  # None = unbounded
    regressor_names: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.h_min < 1:
            raise ValueError(f"bucket {self.name!r}: h_min must be >= 1")
        if self.h_max is not None and self.h_max < self.h_min:
            raise ValueError(f"bucket {self.name!r}: h_max must be >= h_min")

    def contains(self, horizon_days: int) -> bool:
        if horizon_days < self.h_min:
            return False
        return self.h_max is None or horizon_days <= self.h_max

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "h_min_days": self.h_min,
            "h_max_days": self.h_max,
            "regressors": list(self.regressor_names),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HorizonBucket":
        return cls(
            name=d["name"],
            h_min=int(d["h_min_days"]),
            h_max=None if d.get("h_max_days") is None else int(d["h_max_days"]),
            regressor_names=tuple(d["regressors"]),
        )


class BucketSet:
    """An ordered, non-overlapping bucket list jointly covering [1, infinity)."""

    def __init__(self, buckets: Sequence[HorizonBucket]):
        buckets = list(buckets)
        if not buckets:
            raise ValueError("bucket set must not be empty")
        if buckets[0].h_min != 1:
            raise ValueError("first bucket must start at horizon 1")
        for prev, nxt in zip(buckets, buckets[1:]):
            if prev.h_max is None:
                raise ValueError(f"bucket {prev.name!r} is unbounded but not last")
            if nxt.h_min != prev.h_max + 1:
                raise ValueError(
                    f"buckets {prev.name!r} and {nxt.name!r} do not tile: "
                    f"{prev.h_max} then {nxt.h_min}"
                )
        if buckets[-1].h_max is not None:
            raise ValueError("last bucket must be unbounded to cover all horizons")
        self.buckets = tuple(buckets)

    def __iter__(self):
        return iter(self.buckets)

    def __len__(self) -> int:
        return len(self.buckets)

    @property
    def names(self) -> list[str]:
        return [b.name for b in self.buckets]

    def by_name(self, name: str) -> HorizonBucket:
        for b in self.buckets:
            if b.name == name:
                return b
        raise KeyError(f"no bucket named {name!r}")

    def to_list(self) -> list[dict]:
        return [b.to_dict() for b in self.buckets]

    @classmethod
    def from_list(cls, items: list[dict]) -> "BucketSet":
        return cls([HorizonBucket.from_dict(d) for d in items])


def default_buckets() -> BucketSet:
    """The five standard buckets with horizon-appropriate regressor sets.

    Weather covariates are only usable at short lead times; booking-count
    features use thresholds at least as long as the bucket's maximum horizon
    so their values are fully known at the forecast origin.
    """
    return BucketSet(
        [
            HorizonBucket("VeryShort", 1, 2, ("cum_2d", "diff_7d_2d", *WEATHER_REGRESSORS)),
            HorizonBucket("Short", 3, 7, ("cum_7d", "diff_14d_7d", *WEATHER_REGRESSORS)),
            HorizonBucket("MediumI", 8, 14, ("cum_14d", "cum_28d", "diff_28d_14d")),
            HorizonBucket("MediumII", 15, 28, ("cum_28d", "cum_56d", "diff_56d_28d")),
            HorizonBucket("Long", 29, None, ("cum_56d",)),
        ]
    )


def horizon_days(origin: pd.Timestamp, target: pd.Timestamp) -> int:
    """Whole-day horizon: ceiling of the fractional-day lead time."""
    delta_s = (pd.Timestamp(target) - pd.Timestamp(origin)).total_seconds()
    if delta_s <= 0:
        raise ValueError(f"target {target} must be after origin {origin}")
    return math.ceil(delta_s / SECONDS_PER_DAY)


def route(origin: pd.Timestamp, target: pd.Timestamp, buckets: BucketSet) -> HorizonBucket:
    """The unique bucket serving the given (origin, target) pair."""
    h = horizon_days(origin, target)
    for bucket in buckets:
        if bucket.contains(h):
            return bucket
    raise ValueError(f"no bucket covers horizon {h} days")  # unreachable for a valid BucketSet


def train_bucketed(
    train_panel: pd.DataFrame,
    buckets: BucketSet,
    spec_template: ModelSpec,
    spec_grid: Sequence[ModelSpec] | None = None,
    validation_split: float = 0.2,
) -> dict[str, FittedModel]:
    """Fit one model per bucket on a single station's training rows.

    Each bucket's design uses only that bucket's regressor columns; when a
    grid is supplied every bucket is grid-searched independently and refitted
    on the full training rows with its winning spec.
    """
    models: dict[str, FittedModel] = {}
    for bucket in buckets:
        missing = [c for c in bucket.regressor_names if c not in train_panel.columns]
        if missing:
            raise ValueError(f"bucket {bucket.name!r} references absent regressors: {missing}")
        if spec_grid:
            candidates = [s.with_regressors(bucket.regressor_names) for s in spec_grid]
            best, _ = grid_search(train_panel, candidates, validation_split)
        else:
            best = spec_template.with_regressors(bucket.regressor_names)
        models[bucket.name] = fit(train_panel, best)
    return models


def forecast_trajectory(
    models: Mapping[str, FittedModel],
    buckets: BucketSet,
    origin: pd.Timestamp,
    start: pd.Timestamp,
    end: pd.Timestamp,
    future_regressors: pd.DataFrame,
) -> pd.DataFrame:
    """One continuous hourly forecast over [start, end] from bucket models.

    ``future_regressors`` is indexed by hour_start and must carry every
    regressor any routed bucket needs, computed as-of the origin and scaled
    with the training scaler.  Every hour is served by exactly one bucket
    model; the result is gap-free with columns
    (hour_start, horizon_days, bucket, yhat).
    """
    start, end = pd.Timestamp(start), pd.Timestamp(end)
    if end < start:
        raise ValueError(f"span end {end} before start {start}")
    hours = pd.date_range(start.floor("h"), end.floor("h"), freq="h")
    if hours[0] <= pd.Timestamp(origin):
        raise ValueError(f"forecast span must start after origin {origin}")
    missing_hours = hours.difference(pd.DatetimeIndex(future_regressors.index))
    if len(missing_hours):
        raise ValueError(
            f"future regressors missing {len(missing_hours)} hours, first {missing_hours[0]}"
        )

    horizon = np.array([horizon_days(origin, t) for t in hours])
    bucket_names = []
    for h in horizon:
        for bucket in buckets:
            if bucket.contains(int(h)):
                bucket_names.append(bucket.name)
                break
    frame = pd.DataFrame({"hour_start": hours, "horizon_days": horizon, "bucket": bucket_names})

    yhat = np.full(len(frame), np.nan)
    for name in frame["bucket"].unique():
        if name not in models:
            raise ValueError(f"no trained model for required bucket {name!r}")
        mask = (frame["bucket"] == name).to_numpy()
        rows = future_regressors.loc[hours[mask]].copy()
        rows["hour_start"] = hours[mask]
        yhat[mask], _ = predict(models[name], rows)
    frame["yhat"] = yhat
    return frame
