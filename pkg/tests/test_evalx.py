"""Metric tests against independent brute-force oracles."""

from __future__ import annotations

import math

import numpy as np
import pandas as pd
import pytest

from assistcast import evalx

# --- brute-force oracles: plain loops, no numpy ---------------------------


def mae_oracle(y, yhat):
    return sum(abs(a - b) for a, b in zip(y, yhat)) / len(y)


def armse_oracle(y, yhat, weight=2.0):
    total = 0.0
    for a, b in zip(y, yhat):
        e = b - a
        w = weight if e < 0 else 1.0
        total += w * e * e
    return math.sqrt(total / len(y))


def coverage_oracle(y, yhat, tol):
    hits = sum(1 for a, b in zip(y, yhat) if abs(a - b) <= tol)
    return 100.0 * hits / len(y)


def rmse_oracle(y, yhat):
    return math.sqrt(sum((b - a) ** 2 for a, b in zip(y, yhat)) / len(y))


# --- frozen hand values ----------------------------------------------------


def test_mae_hand_values():
    assert evalx.mae([0, 4], [2, 2]) == 2.0
    assert evalx.mae([1], [4]) == 3.0
    assert evalx.mae([3, 3, 3], [3, 3, 3]) == 0.0


def test_armse_hand_value():
    # e = [-1, +1]: under-prediction weighted 2 -> sqrt((2 + 1) / 2)
    assert evalx.armse([2, 2], [1, 3]) == pytest.approx(math.sqrt(1.5), abs=1e-12)


def test_armse_perfect_forecast_is_zero():
    assert evalx.armse([5, 1, 2], [5, 1, 2]) == 0.0


def test_armse_all_over_predictions_equals_rmse():
    y = [1.0, 2.0, 3.0]
    yhat = [2.0, 2.5, 3.1]
    assert evalx.armse(y, yhat) == pytest.approx(rmse_oracle(y, yhat), abs=1e-12)


def test_coverage_hand_values():
    assert evalx.coverage([0, 0], [2, 5], 3) == 50.0
    assert evalx.coverage([1, 2], [1, 2], 0) == 100.0
    # boundary inclusive: tolerance equal to the max error still counts
    assert evalx.coverage([0, 0], [2, 5], 5) == 100.0


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        evalx.mae([1, 2], [1])
    with pytest.raises(ValueError):
        evalx.armse([1, 2], [1])
    with pytest.raises(ValueError):
        evalx.coverage([], [], 1)


# --- oracle equivalence on random series ------------------------------------


def test_metrics_match_oracles_on_random_series():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        n = rng.integers(1, 51)
        y = rng.uniform(0, 100, n)
        yhat = rng.uniform(0, 100, n)
        tol = float(rng.uniform(0, 50))
        assert evalx.mae(y, yhat) == pytest.approx(mae_oracle(y, yhat), abs=1e-9)
        assert evalx.armse(y, yhat) == pytest.approx(armse_oracle(y, yhat), abs=1e-9)
        assert evalx.coverage(y, yhat, tol) == pytest.approx(coverage_oracle(y, yhat, tol), abs=1e-9)


def test_armse_weight_one_is_rmse():
    rng = np.random.default_rng(7)
    for _ in range(200):
        n = int(rng.integers(1, 40))
        y = rng.uniform(0, 100, n)
        yhat = rng.uniform(0, 100, n)
        assert evalx.armse(y, yhat, weight=1.0) == pytest.approx(rmse_oracle(y, yhat), abs=1e-12)


def test_armse_bounds_vs_rmse():
    rng = np.random.default_rng(3)
    for _ in range(200):
        n = int(rng.integers(2, 40))
        y = rng.uniform(0, 50, n)
        yhat = rng.uniform(0, 50, n)
        rmse = rmse_oracle(y, yhat)
        a = evalx.armse(y, yhat, weight=2.0)
        assert a >= rmse - 1e-12
        assert a <= math.sqrt(2.0) * rmse + 1e-12
        if all(b >= a_ for a_, b in zip(y, yhat)):  # no under-predictions
            assert a == pytest.approx(rmse, abs=1e-12)


def test_coverage_monotone_in_tolerance():
    rng = np.random.default_rng(11)
    y = rng.uniform(0, 100, 60)
    yhat = rng.uniform(0, 100, 60)
    values = [evalx.coverage(y, yhat, t) for t in np.linspace(0, 120, 25)]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_metrics_invariant_under_joint_permutation():
    rng = np.random.default_rng(13)
    y = rng.uniform(0, 100, 40)
    yhat = rng.uniform(0, 100, 40)
    perm = rng.permutation(40)
    assert evalx.mae(y, yhat) == pytest.approx(evalx.mae(y[perm], yhat[perm]), abs=1e-12)
    assert evalx.armse(y, yhat) == pytest.approx(evalx.armse(y[perm], yhat[perm]), abs=1e-12)
    assert evalx.coverage(y, yhat, 10) == pytest.approx(
        evalx.coverage(y[perm], yhat[perm], 10), abs=1e-12
    )


# --- YoY baseline ------------------------------------------------------------


def _history_panel(station="YRK", start="2023-01-02", periods=24 * 400):
    hours = pd.date_range(start, periods=periods, freq="h")
    rng = np.random.default_rng(5)
    return pd.DataFrame({
        "station": station,
        "hour_start": hours,
        "y": rng.poisson(3.0, periods),
    })


def test_yoy_baseline_lags_364_days():
    panel = _history_panel()
    target_hour = panel["hour_start"].iloc[-1]
    targets = pd.DataFrame({"station": ["YRK"], "hour_start": [target_hour]})
    out = evalx.yoy_baseline(panel, targets)
    lagged = panel.loc[panel["hour_start"] == target_hour - pd.Timedelta(days=364), "y"].iloc[0]
    assert out["yhat"].iloc[0] == float(lagged)
    assert out["bucket"].iloc[0] == evalx.BASELINE_LABEL


def test_yoy_baseline_growth_factor():
    panel = _history_panel()
    target_hour = panel["hour_start"].iloc[-1]
    targets = pd.DataFrame({"station": ["YRK"], "hour_start": [target_hour]})
    base = evalx.yoy_baseline(panel, targets)["yhat"].iloc[0]
    scaled = evalx.yoy_baseline(panel, targets, growth_factor=1.05)["yhat"].iloc[0]
    assert scaled == pytest.approx(base * 1.05, abs=1e-12)


def test_yoy_baseline_preserves_day_of_week():
    panel = _history_panel()
    target_hour = panel["hour_start"].iloc[-1]
    lagged_hour = target_hour - evalx.YOY_LAG
    assert target_hour.dayofweek == lagged_hour.dayofweek


def test_yoy_baseline_missing_history_lists_hours():
    panel = _history_panel(periods=24 * 10)  # far too short for a 364d lag
    targets = pd.DataFrame({"station": ["YRK"], "hour_start": [panel["hour_start"].iloc[-1]]})
    with pytest.raises(ValueError, match="lagged hours"):
        evalx.yoy_baseline(panel, targets)


# --- report assembly ---------------------------------------------------------


def _forecast_fixture():
    hours = pd.date_range("2024-01-01", periods=48, freq="h")
    obs = pd.DataFrame({"station": "YRK", "hour_start": hours, "y": 2.0})
    perfect = pd.DataFrame({
        "station": "YRK", "hour_start": hours, "bucket": "VeryShort", "yhat": 2.0,
    })
    baseline = pd.DataFrame({
        "station": "YRK", "hour_start": hours, "bucket": evalx.BASELINE_LABEL, "yhat": 3.0,
    })
    return pd.concat([perfect, baseline], ignore_index=True), obs


def test_evaluate_by_bucket_perfect_forecast():
    forecasts, obs = _forecast_fixture()
    config = evalx.EvalConfig(tolerances={"YRK": 2.0})
    rep = evalx.evaluate_by_bucket(forecasts, obs, ["VeryShort"], config)
    hourly = rep[(rep["horizon"] == "VeryShort") & (rep["resolution"] == "hourly")].iloc[0]
    assert hourly["mae"] == 0.0
    assert hourly["armse"] == 0.0
    assert hourly["coverage_pct"] == 100.0


def test_evaluate_by_bucket_row_shape():
    forecasts, obs = _forecast_fixture()
    config = evalx.EvalConfig(tolerances={"YRK": 2.0})
    rep = evalx.evaluate_by_bucket(forecasts, obs, ["VeryShort"], config)
    # (1 baseline + 1 bucket) x 2 resolutions
    assert len(rep) == 4
    assert list(rep.columns) == evalx.REPORT_COLUMNS
    assert (rep["n"] > 0).all()


def test_daily_metrics_use_day_sums_not_hourly_averages():
    # two hours of one day: errors +5 and -5 cancel in the day sum
    hours = pd.date_range("2024-01-01 08:00", periods=2, freq="h")
    obs = pd.DataFrame({"station": "YRK", "hour_start": hours, "y": [10.0, 10.0]})
    forecasts = pd.DataFrame({
        "station": "YRK", "hour_start": hours, "bucket": "Short", "yhat": [15.0, 5.0],
    })
    config = evalx.EvalConfig(tolerances={"YRK": 1.0})
    rep = evalx.evaluate_by_bucket(forecasts, obs, ["Short"], config)
    hourly = rep[rep["resolution"] == "hourly"].iloc[0]
    daily = rep[rep["resolution"] == "daily"].iloc[0]
    assert hourly["mae"] == 5.0
    assert daily["mae"] == 0.0  # day-summed forecast is exact


def test_evaluate_mismatched_keys_rejected():
    forecasts, obs = _forecast_fixture()
    forecasts.loc[0, "hour_start"] = pd.Timestamp("2030-01-01")
    config = evalx.EvalConfig(tolerances={"YRK": 2.0})
    with pytest.raises(ValueError, match="without matching observations"):
        evalx.evaluate_by_bucket(forecasts, obs, ["VeryShort"], config)


def test_default_tolerances_floor_and_scale():
    hours = pd.date_range("2024-01-01", periods=24 * 10, freq="h")
    small = pd.DataFrame({"station": "BWK", "hour_start": hours, "y": 0})
    big = pd.DataFrame({"station": "KGX", "hour_start": hours, "y": 10})
    tol = evalx.default_tolerances(pd.concat([small, big], ignore_index=True))
    assert tol["BWK"] == 2.0  # floor
    assert tol["KGX"] == 24.0  # ceil(0.1 * 240)


def test_eval_config_validation():
    with pytest.raises(ValueError):
        evalx.EvalConfig(under_prediction_weight=0.5)
    with pytest.raises(ValueError):
        evalx.EvalConfig(tolerances={"YRK": -1.0})
