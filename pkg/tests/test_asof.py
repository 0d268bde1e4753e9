"""As-of booking features: brute-force oracle equivalence and leakage freedom."""

from __future__ import annotations

import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from assistcast.panel import AsOfFeatureSpec, compute_asof_features
from assistcast.panel.asof import format_duration, parse_duration

HOUR = pd.Timestamp("2024-03-10 09:00")
SPEC_7D = AsOfFeatureSpec(thresholds=(pd.Timedelta(days=1), pd.Timedelta(days=7)))


def brute_force_cum(panel, bookings, tau, origin=None):
    """Independent oracle: plain loops over rows and bookings."""
    out = []
    for _, row in panel.iterrows():
        cutoff = row["hour_start"] - tau
        if origin is not None and origin < cutoff:
            cutoff = origin
        count = 0
        for _, b in bookings.iterrows():
            if (
                b["station"] == row["station"]
                and b["scheduled_time"].floor("h") == row["hour_start"]
                and b["booking_created"] <= cutoff
            ):
                count += 1
        out.append(count)
    return out


def _panel(hours, station="YRK"):
    return pd.DataFrame({"station": station, "hour_start": hours, "y": 0})


def _bookings(offsets, hour=HOUR, station="YRK"):
    """Bookings for the hour, created at the given lead offsets before it."""
    return pd.DataFrame(
        {
            "station": station,
            "scheduled_time": [hour + pd.Timedelta(minutes=10)] * len(offsets),
            "booking_created": [hour - off for off in offsets],
        }
    )


def test_cum_counts_bookings_created_by_threshold():
    bookings = _bookings([pd.Timedelta(days=10), pd.Timedelta(days=5), pd.Timedelta(hours=12)])
    panel = compute_asof_features(_panel([HOUR]), bookings, SPEC_7D)
    assert panel["cum_7d"].iloc[0] == 1  # only the 10-day-old booking
    assert panel["cum_1d"].iloc[0] == 2  # the 12h booking is inside the final day


def test_adjacent_diff_is_interval_count():
    bookings = _bookings([pd.Timedelta(days=10), pd.Timedelta(days=5), pd.Timedelta(hours=12)])
    panel = compute_asof_features(_panel([HOUR]), bookings, SPEC_7D)
    # created in (t-7d, t-1d]: exactly the 5-day-old booking
    assert panel["diff_7d_1d"].iloc[0] == 1


def test_boundary_is_inclusive():
    bookings = _bookings([pd.Timedelta(days=7)])  # created exactly at t - 7d
    panel = compute_asof_features(_panel([HOUR]), bookings, SPEC_7D)
    assert panel["cum_7d"].iloc[0] == 1


def test_training_mode_is_self_relative():
    hours = [HOUR, HOUR + pd.Timedelta(hours=5)]
    bookings = pd.concat([_bookings([pd.Timedelta(days=2)], hour=h) for h in hours])
    panel = compute_asof_features(_panel(hours), bookings, SPEC_7D)
    assert list(panel["cum_1d"]) == [1, 1]


def test_inference_mode_caps_at_origin():
    # booking created 12h before the hour; origin sits 2 days earlier
    bookings = _bookings([pd.Timedelta(hours=12)])
    origin = HOUR - pd.Timedelta(days=2)
    panel = compute_asof_features(_panel([HOUR]), bookings, SPEC_7D, as_of_origin=origin)
    assert panel["cum_1d"].iloc[0] == 0  # not yet created at the origin


def test_missing_booking_created_rejected():
    bookings = _bookings([pd.Timedelta(days=2)])
    bookings.loc[0, "booking_created"] = pd.NaT
    with pytest.raises(ValueError, match="booking_created"):
        compute_asof_features(_panel([HOUR]), bookings, SPEC_7D)


def test_duration_labels_round_trip():
    for label in ("2d", "7d", "56d", "12h"):
        assert format_duration(parse_duration(label)) == label
    with pytest.raises(ValueError):
        parse_duration("2w")


def test_default_spec_columns():
    spec = AsOfFeatureSpec()
    assert spec.cum_columns == ["cum_2d", "cum_7d", "cum_14d", "cum_28d", "cum_56d"]
    assert spec.diff_columns == ["diff_7d_2d", "diff_14d_7d", "diff_28d_14d", "diff_56d_28d"]


def test_thresholds_must_increase():
    with pytest.raises(ValueError, match="strictly increasing"):
        AsOfFeatureSpec(thresholds=(pd.Timedelta(days=7), pd.Timedelta(days=2)))


# --- randomized oracle + leakage suite ---------------------------------------


def _random_case(rng):
    n_hours = int(rng.integers(2, 6))
    base = pd.Timestamp("2024-05-01 06:00")
    hours = [base + pd.Timedelta(hours=int(h)) for h in rng.choice(72, n_hours, replace=False)]
    stations = ["YRK", "KGX"]
    panel = pd.concat([_panel(hours, st) for st in stations], ignore_index=True)
    n_bookings = int(rng.integers(0, 40))
    rows = []
    for _ in range(n_bookings):
        hour = hours[int(rng.integers(0, len(hours)))]
        lead_minutes = int(rng.integers(0, 60 * 24 * 70))
        rows.append(
            {
                "station": stations[int(rng.integers(0, 2))],
                "scheduled_time": hour + pd.Timedelta(minutes=int(rng.integers(0, 60))),
                "booking_created": hour - pd.Timedelta(minutes=lead_minutes),
            }
        )
    bookings = pd.DataFrame(rows, columns=["station", "scheduled_time", "booking_created"])
    return panel, bookings


def test_cum_matches_brute_force_on_random_sets():
    rng = np.random.default_rng(17)
    spec = AsOfFeatureSpec(
        thresholds=(pd.Timedelta(days=2), pd.Timedelta(days=7), pd.Timedelta(days=28))
    )
    for _ in range(200):
        panel, bookings = _random_case(rng)
        got = compute_asof_features(panel, bookings, spec)
        for tau, col in zip(spec.thresholds, spec.cum_columns):
            expected = brute_force_cum(panel, bookings, tau)
            assert list(got[col]) == expected


def test_leakage_freedom_late_bookings_change_nothing():
    """Bookings created after t - tau must be invisible to cum_tau at (s, t)."""
    rng = np.random.default_rng(23)
    spec = AsOfFeatureSpec(thresholds=(pd.Timedelta(days=2), pd.Timedelta(days=7)))
    for _ in range(200):
        panel, bookings = _random_case(rng)
        baseline = compute_asof_features(panel, bookings, spec)
        # inject bookings created strictly inside every row's exclusion window
        injected = []
        for _, row in panel.iterrows():
            injected.append(
                {
                    "station": row["station"],
                    "scheduled_time": row["hour_start"] + pd.Timedelta(minutes=30),
                    "booking_created": row["hour_start"] - pd.Timedelta(days=2) + pd.Timedelta(minutes=1),
                }
            )
        frames = [f for f in (bookings, pd.DataFrame(injected)) if len(f)]
        polluted = pd.concat(frames, ignore_index=True)
        got = compute_asof_features(panel, polluted, spec)
        assert list(got["cum_2d"]) == list(baseline["cum_2d"])
        assert list(got["cum_7d"]) == list(baseline["cum_7d"])


def test_cumulative_monotonicity_property():
    rng = np.random.default_rng(31)
    spec = AsOfFeatureSpec()
    for _ in range(50):
        panel, bookings = _random_case(rng)
        got = compute_asof_features(panel, bookings, spec)
        cums = got[spec.cum_columns].to_numpy()
        assert (np.diff(cums, axis=1) <= 0).all()  # wider threshold, fewer bookings


@given(
    leads=st.lists(st.integers(min_value=0, max_value=60 * 24 * 80), min_size=0, max_size=30),
    tau_days=st.integers(min_value=1, max_value=60),
)
@settings(max_examples=60, deadline=None)
def test_cum_equals_lead_threshold_count(leads, tau_days):
    """cum_tau == number of bookings with lead time >= tau (single row case)."""
    tau = pd.Timedelta(days=tau_days)
    bookings = _bookings([pd.Timedelta(minutes=m) for m in leads])
    spec = AsOfFeatureSpec(thresholds=(tau,))
    got = compute_asof_features(_panel([HOUR]), bookings, spec)
    expected = sum(1 for m in leads if pd.Timedelta(minutes=m) >= tau)
    assert got[spec.cum_columns[0]].iloc[0] == expected
