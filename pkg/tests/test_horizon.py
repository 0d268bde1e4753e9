"""Bucket definitions, ceiling-day routing, bucketed training, trajectories."""

from __future__ import annotations

import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from assistcast.gam import ModelSpec
from assistcast.horizon import (
    BucketSet,
    HorizonBucket,
    default_buckets,
    forecast_trajectory,
    horizon_days,
    route,
    train_bucketed,
)

BUCKETS = default_buckets()
ORIGIN = pd.Timestamp("2024-01-01 00:00")


def test_default_bucket_count_and_ranges():
    assert len(BUCKETS) == 5
    ranges = [(b.h_min, b.h_max) for b in BUCKETS]
    assert ranges == [(1, 2), (3, 7), (8, 14), (15, 28), (29, None)]


def test_weather_only_in_short_buckets():
    weather = {"temperature_c", "rainfall_mm", "humidity_pct"}
    by_name = {b.name: set(b.regressor_names) for b in BUCKETS}
    assert weather <= by_name["VeryShort"]
    assert weather <= by_name["Short"]
    for name in ("MediumI", "MediumII", "Long"):
        assert not weather & by_name[name]


def test_booking_thresholds_cover_bucket_horizons():
    """Every cum_<tau> a bucket uses must satisfy tau >= h_max so the value is
    fully known at the forecast origin."""
    for bucket in BUCKETS:
        if bucket.h_max is None:
            continue
        for name in bucket.regressor_names:
            if name.startswith("cum_"):
                tau_days = int(name.removeprefix("cum_").removesuffix("d"))
                assert tau_days >= bucket.h_max


def test_route_examples():
    assert route(ORIGIN, pd.Timestamp("2024-01-02 09:00"), BUCKETS).name == "VeryShort"  # H=2
    assert route(ORIGIN, pd.Timestamp("2024-01-10 00:00"), BUCKETS).name == "MediumI"  # H=9
    assert route(ORIGIN, pd.Timestamp("2024-02-15 00:00"), BUCKETS).name == "Long"  # H=45


def test_route_rejects_past_targets():
    with pytest.raises(ValueError, match="after origin"):
        route(ORIGIN, ORIGIN, BUCKETS)
    with pytest.raises(ValueError, match="after origin"):
        route(ORIGIN, ORIGIN - pd.Timedelta(hours=1), BUCKETS)


def test_exact_whole_day_horizons():
    assert horizon_days(ORIGIN, ORIGIN + pd.Timedelta(days=2)) == 2
    assert horizon_days(ORIGIN, ORIGIN + pd.Timedelta(days=2, minutes=1)) == 3
    assert horizon_days(ORIGIN, ORIGIN + pd.Timedelta(hours=1)) == 1


@given(st.integers(min_value=1, max_value=400))
@settings(max_examples=400, deadline=None)
def test_every_horizon_routes_to_exactly_one_bucket(h):
    matches = [b.name for b in BUCKETS if b.contains(h)]
    assert len(matches) == 1


def test_bucket_set_must_tile_from_one():
    with pytest.raises(ValueError, match="start at horizon 1"):
        BucketSet([HorizonBucket("x", 2, None, ())])
    with pytest.raises(ValueError, match="do not tile"):
        BucketSet([
            HorizonBucket("a", 1, 3, ()),
            HorizonBucket("b", 5, None, ()),
        ])
    with pytest.raises(ValueError, match="unbounded"):
        BucketSet([HorizonBucket("a", 1, 3, ())])


def test_custom_finer_buckets_supported():
    fine = BucketSet([
        HorizonBucket("day1", 1, 1, ("cum_2d",)),
        HorizonBucket("day2", 2, 2, ("cum_2d",)),
        HorizonBucket("rest", 3, None, ("cum_7d",)),
    ])
    assert route(ORIGIN, ORIGIN + pd.Timedelta(hours=30), fine).name == "day2"


# --- bucketed training -----------------------------------------------------------


def _training_panel(n=24 * 30, seed=4):
    rng = np.random.default_rng(seed)
    hours = pd.date_range("2024-01-01", periods=n, freq="h")
    frame = pd.DataFrame({
        "hour_start": hours,
        "y": rng.poisson(3, n).astype(float),
    })
    for col in ("cum_2d", "cum_7d", "cum_14d", "cum_28d", "cum_56d",
                "diff_7d_2d", "diff_14d_7d", "diff_28d_14d", "diff_56d_28d",
                "temperature_c", "rainfall_mm", "humidity_pct"):
        frame[col] = rng.normal(0, 1, n)
    return frame


TEMPLATE = ModelSpec(n_changepoints=3, fourier_orders={"daily": 2, "weekly": 2})


def test_bucket_models_use_only_their_regressors():
    panel = _training_panel()
    models = train_bucketed(panel, BUCKETS, TEMPLATE)
    assert set(models) == set(BUCKETS.names)
    long_cols = models["Long"].columns
    assert "cum_56d" in long_cols
    assert not any(c in long_cols for c in ("temperature_c", "rainfall_mm", "humidity_pct"))
    vs_cols = models["VeryShort"].columns
    assert "temperature_c" in vs_cols


def test_identical_regressor_sets_give_identical_coefficients():
    panel = _training_panel()
    pair = BucketSet([
        HorizonBucket("a", 1, 5, ("cum_7d",)),
        HorizonBucket("b", 6, None, ("cum_7d",)),
    ])
    models = train_bucketed(panel, pair, TEMPLATE)
    assert np.array_equal(models["a"].coef, models["b"].coef)


def test_absent_regressor_rejected():
    panel = _training_panel().drop(columns=["cum_56d"])
    with pytest.raises(ValueError, match="cum_56d"):
        train_bucketed(panel, BUCKETS, TEMPLATE)


# --- trajectory assembly ------------------------------------------------------------


def _future_frame(hours):
    rng = np.random.default_rng(9)
    frame = pd.DataFrame(index=hours)
    for col in ("cum_2d", "cum_7d", "cum_14d", "cum_28d", "cum_56d",
                "diff_7d_2d", "diff_14d_7d", "diff_28d_14d", "diff_56d_28d",
                "temperature_c", "rainfall_mm", "humidity_pct"):
        frame[col] = rng.normal(0, 1, len(hours))
    return frame


def test_next_day_span_served_entirely_by_very_short():
    panel = _training_panel()
    models = train_bucketed(panel, BUCKETS, TEMPLATE)
    origin = panel["hour_start"].iloc[-1]
    start = origin + pd.Timedelta(hours=1)
    end = origin + pd.Timedelta(hours=24)
    traj = forecast_trajectory(models, BUCKETS, origin, start, end,
                               _future_frame(pd.date_range(start, end, freq="h")))
    assert len(traj) == 24
    assert (traj["bucket"] == "VeryShort").all()


def test_35_day_span_uses_all_buckets_and_is_gap_free():
    panel = _training_panel()
    models = train_bucketed(panel, BUCKETS, TEMPLATE)
    origin = panel["hour_start"].iloc[-1]
    start = origin + pd.Timedelta(hours=1)
    end = origin + pd.Timedelta(days=35)
    hours = pd.date_range(start, end, freq="h")
    traj = forecast_trajectory(models, BUCKETS, origin, start, end, _future_frame(hours))

    assert len(traj) == len(hours)  # conservation
    assert set(traj["bucket"]) == set(BUCKETS.names)
    assert not traj["hour_start"].duplicated().any()
    assert (traj["hour_start"].diff().dropna() == pd.Timedelta(hours=1)).all()
    # hour 673 onward (ceil(673/24) = 29 days) belongs to the unbounded bucket
    deltas = (traj["hour_start"] - origin).dt.total_seconds() / 3600
    assert (traj.loc[deltas >= 673, "bucket"] == "Long").all()
    assert (traj.loc[deltas < 673, "bucket"] != "Long").all()


def test_each_hour_served_by_its_routed_bucket():
    panel = _training_panel()
    models = train_bucketed(panel, BUCKETS, TEMPLATE)
    origin = panel["hour_start"].iloc[-1]
    start, end = origin + pd.Timedelta(hours=1), origin + pd.Timedelta(days=10)
    hours = pd.date_range(start, end, freq="h")
    traj = forecast_trajectory(models, BUCKETS, origin, start, end, _future_frame(hours))
    for row in traj.itertuples():
        assert route(origin, row.hour_start, BUCKETS).name == row.bucket


def test_missing_bucket_model_rejected():
    panel = _training_panel()
    models = train_bucketed(panel, BUCKETS, TEMPLATE)
    models.pop("Long")
    origin = panel["hour_start"].iloc[-1]
    start, end = origin + pd.Timedelta(hours=1), origin + pd.Timedelta(days=40)
    hours = pd.date_range(start, end, freq="h")
    with pytest.raises(ValueError, match="Long"):
        forecast_trajectory(models, BUCKETS, origin, start, end, _future_frame(hours))


def test_span_must_follow_origin():
    panel = _training_panel()
    models = train_bucketed(panel, BUCKETS, TEMPLATE)
    origin = panel["hour_start"].iloc[-1]
    hours = pd.date_range(origin - pd.Timedelta(hours=3), origin, freq="h")
    with pytest.raises(ValueError, match="after origin"):
        forecast_trajectory(models, BUCKETS, origin, hours[0], hours[-1], _future_frame(hours))
