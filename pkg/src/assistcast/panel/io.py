"""File formats: events.csv, weather.csv, roster.csv, panel CSV + JSON sidecar.

All timestamps are ISO-8601 UTC; internally they are handled as naive UTC.
The panel sidecar records everything needed to reproduce inference features:
scaler statistics, the lead-time threshold set, imputation means and the
per-station split boundary.
"""

from __future__ import annotations

import json
from pathlib import Path

import pandas as pd

from assistcast.panel.asof import AsOfFeatureSpec, format_duration
from assistcast.panel.build import TRAIN, WEATHER_COLUMNS
from assistcast.panel.events import EVENT_COLUMNS
from assistcast.panel.scaling import Scaler

ROSTER_COLUMNS = ["station", "hour_start", "role_code", "headcount"]

_TS_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def _parse_ts(series: pd.Series) -> pd.Series:
    return pd.to_datetime(series, utc=True).dt.tz_localize(None)


def _format_ts(series: pd.Series) -> pd.Series:
    return series.dt.strftime(_TS_FORMAT)


def read_events_csv(path: str | Path) -> pd.DataFrame:
    df = pd.read_csv(path, dtype={"journey_id": str, "station": str})
    missing = [c for c in EVENT_COLUMNS if c not in df.columns]
    if missing:
        raise ValueError(f"{path}: events file missing columns {missing}")
    for col in ("scheduled_time", "booking_created"):
        df[col] = _parse_ts(df[col])
    return df[EVENT_COLUMNS]


def write_events_csv(events: pd.DataFrame, path: str | Path) -> None:
    out = events.loc[:, EVENT_COLUMNS].copy()
    for col in ("scheduled_time", "booking_created"):
        out[col] = _format_ts(out[col])
    out.to_csv(path, index=False)


def read_weather_csv(path: str | Path) -> pd.DataFrame:
    df = pd.read_csv(path, dtype={"station": str})
    expected = ["station", "hour_start", *WEATHER_COLUMNS]
    missing = [c for c in expected if c not in df.columns]
    if missing:
        raise ValueError(f"{path}: weather file missing columns {missing}")
    df["hour_start"] = _parse_ts(df["hour_start"])
    return df[expected]


def write_weather_csv(weather: pd.DataFrame, path: str | Path) -> None:
    out = weather.copy()
    out["hour_start"] = _format_ts(out["hour_start"])
    out.to_csv(path, index=False, float_format="%.3f")


def read_roster_csv(path: str | Path) -> pd.DataFrame:
    df = pd.read_csv(path, dtype={"station": str, "role_code": str})
    missing = [c for c in ROSTER_COLUMNS if c not in df.columns]
    if missing:
        raise ValueError(f"{path}: roster file missing columns {missing}")
    df["hour_start"] = _parse_ts(df["hour_start"])
    df["headcount"] = df["headcount"].astype(int)
    return df[ROSTER_COLUMNS]


def write_roster_csv(roster: pd.DataFrame, path: str | Path) -> None:
    out = roster.loc[:, ROSTER_COLUMNS].copy()
    out["hour_start"] = _format_ts(out["hour_start"])
    out.to_csv(path, index=False)


def save_panel(
    panel: pd.DataFrame,
    directory: str | Path,
    *,
    scaler: Scaler,
    asof_spec: AsOfFeatureSpec,
    impute_means: dict[str, float],
    train_fraction: float,
) -> None:
    """Persist the panel CSV plus the sidecar that makes inference reproducible."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    out = panel.copy()
    out["hour_start"] = _format_ts(out["hour_start"])
    out.to_csv(directory / "panel.csv", index=False)

    boundaries = {}
    for station, grp in panel.groupby("station"):
        train_rows = grp[grp["split_tag"] == TRAIN]
        boundaries[station] = train_rows["hour_start"].max().strftime(_TS_FORMAT)

    sidecar = {
        "scaler": scaler.to_dict(),
        "thresholds": [format_duration(t) for t in asof_spec.thresholds],
        "include_adjacent_diffs": asof_spec.include_adjacent_diffs,
        "impute_means": impute_means,
        "train_fraction": train_fraction,
        "split_boundary": boundaries,
        "stations": sorted(panel["station"].unique()),
        "span": {
            "start": panel["hour_start"].min().strftime(_TS_FORMAT),
            "end": (panel["hour_start"].max() + pd.Timedelta(hours=1)).strftime(_TS_FORMAT),
        },
    }
    (directory / "panel_sidecar.json").write_text(json.dumps(sidecar, indent=2, sort_keys=True))


def load_panel(directory: str | Path) -> tuple[pd.DataFrame, dict]:
    """Load a persisted panel and its sidecar."""
    directory = Path(directory)
    panel = pd.read_csv(directory / "panel.csv", dtype={"station": str})
    panel["hour_start"] = _parse_ts(panel["hour_start"])
    sidecar = json.loads((directory / "panel_sidecar.json").read_text())
    return panel, sidecar
