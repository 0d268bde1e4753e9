"""Generator determinism, calibration targets, schema conformance."""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from assistcast import synth
from assistcast.panel import AsOfFeatureSpec, build_panel, compute_asof_features, ingest_events
from assistcast.panel.io import read_events_csv, read_roster_csv, read_weather_csv


def _one_station_spec(seed=7, months=3, **profile_kwargs):
    defaults = dict(code="YRK", base_level=1.2)
    defaults.update(profile_kwargs)
    return synth.SynthSpec(
        stations=(synth.StationProfile(**defaults),),
        start=pd.Timestamp("2024-01-01"),
        end=pd.Timestamp("2024-01-01") + pd.Timedelta(days=30 * months),
        seed=seed,
    )


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_fixed_seed_gives_byte_identical_files(tmp_path):
    spec = _one_station_spec(seed=7, months=2)
    a = synth.generate(spec, tmp_path / "a")
    b = synth.generate(spec, tmp_path / "b")
    for key in ("events", "weather", "roster", "truth"):
        assert _digest(a.paths[key]) == _digest(b.paths[key])


def test_different_seed_changes_events(tmp_path):
    a = synth.generate(_one_station_spec(seed=7, months=1), tmp_path / "a")
    b = synth.generate(_one_station_spec(seed=8, months=1), tmp_path / "b")
    assert _digest(a.paths["events"]) != _digest(b.paths["events"])


def test_flat_profile_matches_poisson_mean(tmp_path):
    spec = _one_station_spec(
        months=4, base_level=1.5, trend_per_year=0.0, daily_amplitude=0.0,
        weekly_amplitude=0.0, yearly_amplitude=0.0, holiday_scale=0.0,
        weather_sensitivity=0.0, day_shock_sigma=0.0,
    )
    result = synth.generate(spec, tmp_path)
    lam = float(synth.softplus(1.5))
    events = read_events_csv(result.events_path)
    pre = events[events["channel"] == "PREBOOKED"]
    n_hours = len(result.truth)
    empirical = len(pre) / n_hours
    se = np.sqrt(lam / n_hours)
    assert abs(empirical - lam) <= 3 * se


def test_lead_time_mass_hits_final_week_target(tmp_path):
    spec = _one_station_spec(months=9, base_level=2.0)
    result = synth.generate(spec, tmp_path)
    events = read_events_csv(result.events_path)
    pre = events[events["channel"] == "PREBOOKED"]
    assert len(pre) >= 10_000
    lead = pre["scheduled_time"] - pre["booking_created"]
    share = float((lead <= pd.Timedelta(days=7)).mean())
    assert abs(share - 0.44) <= 0.05


def test_generated_files_pass_ingestion_cleanly(tmp_path):
    spec = synth.default_spec(start="2024-01-01", end="2024-02-01")
    result = synth.generate(spec, tmp_path)
    events = read_events_csv(result.events_path)
    read_weather_csv(result.weather_path)
    read_roster_csv(result.roster_path)
    ingest = ingest_events(events, [p.code for p in spec.stations])
    assert ingest.diagnostics == []
    assert len(ingest.events) > 0
    assert len(ingest.tuag_events) > 0
    # prebooked invariant holds on every generated booking
    assert (ingest.events["booking_created"] <= ingest.events["scheduled_time"]).all()


def test_truth_round_trip_and_rate_identity(tmp_path):
    spec = _one_station_spec(months=1)
    result = synth.generate(spec, tmp_path)
    loaded = synth.load_truth(result.truth_path)
    assert len(loaded) == len(result.truth)
    reconstructed = synth.softplus(loaded["latent"].to_numpy())
    np.testing.assert_allclose(loaded["lam"].to_numpy(), reconstructed, atol=1e-5)


def test_late_booking_features_explain_more_variance(tmp_path):
    """cum_2d carries strictly more signal about y than cum_56d."""
    spec = _one_station_spec(months=6, base_level=1.5)
    result = synth.generate(spec, tmp_path)
    events = read_events_csv(result.events_path)
    ingest = ingest_events(events, ["YRK"])
    span = (spec.start, spec.end)
    panel = build_panel(ingest.events, ["YRK"], span)
    feats = AsOfFeatureSpec(
        thresholds=(pd.Timedelta(days=2), pd.Timedelta(days=56)), include_adjacent_diffs=False
    )
    panel = compute_asof_features(panel, ingest.events, feats)

    def r2(x, y):
        slope, intercept = np.polyfit(x, y, 1)
        resid = y - (slope * x + intercept)
        return 1 - resid.var() / y.var()

    y = panel["y"].to_numpy(dtype=float)
    assert r2(panel["cum_2d"].to_numpy(), y) > r2(panel["cum_56d"].to_numpy(), y)


# --- truth_report -----------------------------------------------------------------


def _truth_frame(n=1000):
    rng = np.random.default_rng(0)
    hours = pd.date_range("2024-01-01", periods=n, freq="h")
    return pd.DataFrame({
        "station": "YRK",
        "hour_start": hours,
        "trend": np.linspace(0, 2, n),
        "daily": np.sin(np.arange(n) / 24),
        "weekly": np.cos(np.arange(n) / 168),
        "yearly": rng.normal(0, 1, n),
        "holiday": np.zeros(n),
        "regressor_effect": rng.normal(0, 1, n),
        "shock": np.zeros(n),
    })


def test_component_compared_with_itself_is_one():
    truth = _truth_frame()
    fitted = truth.set_index("hour_start")[["trend", "daily", "weekly"]]
    report = synth.truth_report(truth, fitted, "YRK")
    by_comp = report.set_index("component")["correlation"]
    assert by_comp["trend"] == pytest.approx(1.0)
    assert by_comp["daily"] == pytest.approx(1.0)


def test_constant_fitted_component_reports_missing():
    truth = _truth_frame()
    fitted = truth.set_index("hour_start")[["trend"]].copy()
    fitted["trend"] = 3.0
    report = synth.truth_report(truth, fitted, "YRK")
    assert np.isnan(report["correlation"].iloc[0])


def test_independent_noise_has_negligible_correlation():
    truth = _truth_frame()
    rng = np.random.default_rng(99)
    fitted = truth.set_index("hour_start")[["trend"]].copy()
    fitted["trend"] = rng.normal(0, 1, len(fitted))
    report = synth.truth_report(truth, fitted, "YRK")
    assert abs(report["correlation"].iloc[0]) < 0.1


def test_key_mismatch_rejected():
    truth = _truth_frame()
    fitted = truth.set_index("hour_start")[["trend"]]
    fitted.index = fitted.index + pd.Timedelta(days=400)
    with pytest.raises(ValueError, match="does not cover"):
        synth.truth_report(truth, fitted, "YRK")


def test_non_positive_span_rejected():
    with pytest.raises(ValueError, match="span"):
        synth.SynthSpec(
            stations=(synth.StationProfile("YRK", 1.0),),
            start=pd.Timestamp("2024-01-02"),
            end=pd.Timestamp("2024-01-01"),
        )
