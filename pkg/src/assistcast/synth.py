"""Synthetic assistance bookings, weather and rosters with retained truth.

Hourly demand rates are built additively in a latent space (trend, daily /
weekly / yearly shapes, a Christmas-centred holiday profile, a weather
effect and a day-level shock), mapped through softplus and realised as
Poisson counts.  Every realised event receives a booking lead time from a
mixture of an exponential-decay body and a same-week spike, calibrated so
the expected share of bookings made within the final week hits a target
(default 44%).  The outputs conform exactly to the ingestion file schemas,
and the per-hour component values are retained for recovery checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from assistcast.gam.spec import england_wales_bank_holidays
from assistcast.panel.io import write_events_csv, write_roster_csv, write_weather_csv

TRUTH_COMPONENTS = ["trend", "daily", "weekly", "yearly", "holiday", "regressor_effect", "shock"]

# fitted-component column -> truth column
FITTED_TO_TRUTH = {
    "trend": "trend",
    "daily": "daily",
    "weekly": "weekly",
    "yearly": "yearly",
    "holidays": "holiday",
    "regressors": "regressor_effect",
}

# Latent uplift per day-offset around each Christmas anchor (Dec 24-26);
# a date collects the contributions of every anchor whose window covers it.
# Net date-level shape: build-up to a Dec 23 peak, a deep Dec 24-26 dip
# (little UK rail service), a Dec 27-29 rebound, then a taper into January.
_XMAS_OFFSET_PROFILE = {
    -5: 0.15, -4: 0.25, -3: 0.30, -2: 0.70, -1: 0.45, 0: -1.35,
    1: -0.60, 2: 0.75, 3: 0.55, 4: 0.45, 5: 0.30, 6: 0.25, 7: 0.15,
}
_XMAS_ANCHOR_DAYS = (24, 25, 26)
_BANK_PROFILE = {-1: 0.25, 0: 0.55, 1: 0.35}


def softplus(x: np.ndarray | float) -> np.ndarray | float:
    return np.where(np.asarray(x) > 30.0, x, np.log1p(np.exp(np.minimum(x, 30.0))))


@dataclass(frozen=True)
class StationProfile:
    """Latent-space demand shape for one synthetic station."""

    code: str
    base_level: float
    trend_per_year: float = 0.15
    daily_amplitude: float = 1.2
    weekly_amplitude: float = 0.3
    yearly_amplitude: float = 0.25
    holiday_scale: float = 1.0
    weather_sensitivity: float = -0.03  # latent units per mm of rainfall
    day_shock_sigma: float = 0.10
    tuag_rate: float = 0.3

    def __post_init__(self) -> None:
        for name in ("daily_amplitude", "weekly_amplitude", "yearly_amplitude", "holiday_scale"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class SynthSpec:
    """Full generator configuration; a fixed seed gives byte-identical files."""

    stations: tuple[StationProfile, ...]
    start: pd.Timestamp
    end: pd.Timestamp  # exclusive
    seed: int = 7
    final_week_mass: float = 0.44
    lead_max_days: float = 84.0
    lead_body_mean_days: float = 21.0
    roster_extra_days: int = 90

    def __post_init__(self) -> None:
        if not self.stations:
            raise ValueError("at least one station profile required")
        if pd.Timestamp(self.end) <= pd.Timestamp(self.start):
            raise ValueError("span must be positive")
        if not 0 < self.final_week_mass < 1:
            raise ValueError("final_week_mass must be in (0, 1)")

    def to_dict(self) -> dict:
        return {
            "stations": [vars(s) for s in self.stations],
            "start": pd.Timestamp(self.start).isoformat(),
            "end": pd.Timestamp(self.end).isoformat(),
            "seed": self.seed,
            "final_week_mass": self.final_week_mass,
            "lead_max_days": self.lead_max_days,
            "lead_body_mean_days": self.lead_body_mean_days,
            "roster_extra_days": self.roster_extra_days,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SynthSpec":
        return cls(
            stations=tuple(StationProfile(**s) for s in d["stations"]),
            start=pd.Timestamp(d["start"]),
            end=pd.Timestamp(d["end"]),
            seed=int(d.get("seed", 7)),
            final_week_mass=float(d.get("final_week_mass", 0.44)),
            lead_max_days=float(d.get("lead_max_days", 84.0)),
            lead_body_mean_days=float(d.get("lead_body_mean_days", 21.0)),
            roster_extra_days=int(d.get("roster_extra_days", 90)),
        )


def default_spec(
    start: str = "2023-01-02", end: str = "2025-01-02", seed: int = 7
) -> SynthSpec:
    """Three archetypes: high-volume terminal, interchange hub, sparse local."""
    return SynthSpec(
        stations=(
            StationProfile("KGX", base_level=1.9, trend_per_year=0.25, daily_amplitude=1.5,
                           weekly_amplitude=0.35, yearly_amplitude=0.30, holiday_scale=2.0,
                           day_shock_sigma=0.12, tuag_rate=0.25),
            StationProfile("YRK", base_level=0.9, trend_per_year=0.15, daily_amplitude=1.2,
                           weekly_amplitude=0.30, yearly_amplitude=0.25, holiday_scale=1.5,
                           day_shock_sigma=0.12, tuag_rate=0.30),
            StationProfile("BWK", base_level=-1.2, trend_per_year=0.05, daily_amplitude=0.8,
                           weekly_amplitude=0.25, yearly_amplitude=0.20, holiday_scale=0.8,
                           day_shock_sigma=0.10, tuag_rate=0.35),
        ),
        start=pd.Timestamp(start),
        end=pd.Timestamp(end),
        seed=seed,
    )


@dataclass
class SynthResult:
    """Generated file paths plus the retained ground truth table."""

    events_path: Path
    weather_path: Path
    roster_path: Path
    truth_path: Path
    truth: pd.DataFrame
    paths: dict[str, Path] = field(init=False)

    def __post_init__(self) -> None:
        self.paths = {
            "events": self.events_path,
            "weather": self.weather_path,
            "roster": self.roster_path,
            "truth": self.truth_path,
        }


def _holiday_uplift(dates: pd.DatetimeIndex, scale: float) -> np.ndarray:
    """Per-date latent uplift from the Christmas profile and bank holidays."""
    uplift = np.zeros(len(dates))
    if scale == 0:
        return uplift
    years = sorted(set(dates.year))
    date_pos = {d: i for i, d in enumerate(dates)}

    def add(day: pd.Timestamp, value: float) -> None:
        i = date_pos.get(day)
        if i is not None:
            uplift[i] += value

    for year in years:
        for day in _XMAS_ANCHOR_DAYS:
            anchor = pd.Timestamp(year=year, month=12, day=day)
            for offset, value in _XMAS_OFFSET_PROFILE.items():
                add(anchor + pd.Timedelta(days=offset), scale * value)
        for _, days in england_wales_bank_holidays(year).items():
            for day in days:
                anchor = pd.Timestamp(day)
                for offset, value in _BANK_PROFILE.items():
                    add(anchor + pd.Timedelta(days=offset), scale * value)
    return uplift


def _lead_time_days(rng: np.random.Generator, n: int, spec: SynthSpec) -> np.ndarray:
    """Sample booking lead times (days) from the calibrated mixture."""
    mean, cap = spec.lead_body_mean_days, spec.lead_max_days
    body_cdf_7 = (1.0 - math.exp(-7.0 / mean)) / (1.0 - math.exp(-cap / mean))
    p_spike = (spec.final_week_mass - body_cdf_7) / (1.0 - body_cdf_7)
    p_spike = min(max(p_spike, 0.0), 1.0)

    spike = rng.random(n) < p_spike
    out = np.empty(n)
    out[spike] = rng.uniform(0.0, 7.0, size=int(spike.sum()))
    n_body = int((~spike).sum())
    # inverse-CDF sample of the truncated exponential body
    u = rng.random(n_body)
    out[~spike] = -mean * np.log1p(-u * (1.0 - math.exp(-cap / mean)))
    return out


def _station_truth(profile: StationProfile, hours: pd.DatetimeIndex, rainfall: np.ndarray,
                   day_shock: np.ndarray) -> pd.DataFrame:
    """Latent components and the resulting Poisson rate for one station."""
    n = len(hours)
    years_elapsed = (hours - hours[0]).total_seconds().to_numpy() / (365.25 * 86400.0)
    hod = hours.hour.to_numpy() + hours.minute.to_numpy() / 60.0
    dow = hours.dayofweek.to_numpy() + hod / 24.0
    doy = hours.dayofyear.to_numpy() + hod / 24.0

    trend = profile.base_level + profile.trend_per_year * years_elapsed
    daily = profile.daily_amplitude * (
        0.75 * np.sin(2 * np.pi * (hod - 9.0) / 24.0)
        + 0.35 * np.sin(4 * np.pi * (hod - 7.0) / 24.0)
    )
    weekly = profile.weekly_amplitude * (
        0.8 * np.sin(2 * np.pi * (dow - 1.5) / 7.0) + 0.2 * np.sin(4 * np.pi * dow / 7.0)
    )
    yearly = profile.yearly_amplitude * np.sin(2 * np.pi * (doy - 105.0) / 365.25)

    dates = hours.normalize()
    unique_dates = pd.DatetimeIndex(sorted(dates.unique()))
    uplift_by_date = _holiday_uplift(unique_dates, profile.holiday_scale)
    date_idx = unique_dates.get_indexer(dates)
    holiday = uplift_by_date[date_idx]
    shock = day_shock[date_idx]

    regressor_effect = profile.weather_sensitivity * rainfall

    latent = trend + daily + weekly + yearly + holiday + regressor_effect + shock
    lam = np.asarray(softplus(latent), dtype=float)
    return pd.DataFrame(
        {
            "station": profile.code,
            "hour_start": hours,
            "trend": trend,
            "daily": daily,
            "weekly": weekly,
            "yearly": yearly,
            "holiday": holiday,
            "regressor_effect": regressor_effect,
            "shock": shock,
            "latent": latent,
            "lam": lam,
        }
    )


def _station_weather(code: str, hours: pd.DatetimeIndex, rng: np.random.Generator) -> pd.DataFrame:
    n = len(hours)
    hod = hours.hour.to_numpy().astype(float)
    doy = hours.dayofyear.to_numpy().astype(float)
    temp = (
        9.0 + 7.0 * np.sin(2 * np.pi * (doy - 105.0) / 365.25)
        + 2.5 * np.sin(2 * np.pi * (hod - 15.0) / 24.0) + rng.normal(0.0, 1.2, n)
    )
    wet = rng.random(n) < 0.25
    rain = np.where(wet, rng.exponential(1.2, n), 0.0)
    humidity = np.clip(
        78.0 + 8.0 * np.sin(2 * np.pi * (doy - 330.0) / 365.25)
        - 6.0 * np.sin(2 * np.pi * (hod - 15.0) / 24.0) + rng.normal(0.0, 4.0, n),
        30.0, 100.0,
    )
    return pd.DataFrame(
        {
            "station": code,
            "hour_start": hours,
            "temperature_c": np.round(temp, 3),
            "rainfall_mm": np.round(rain, 3),
            "humidity_pct": np.round(humidity, 3),
        }
    )


def _station_events(profile: StationProfile, truth: pd.DataFrame, spec: SynthSpec,
                    rng: np.random.Generator) -> pd.DataFrame:
    """Realise Poisson counts and dress them as booked assistance events."""
    lam = truth["lam"].to_numpy()
    counts = rng.poisson(lam)
    total = int(counts.sum())

    hour_starts = truth["hour_start"].to_numpy().repeat(counts)
    minutes = rng.integers(0, 60, total)
    scheduled = pd.DatetimeIndex(hour_starts) + pd.to_timedelta(minutes, unit="m")

    lead_days = _lead_time_days(rng, total, spec)
    created = scheduled - pd.to_timedelta(np.round(lead_days * 1440.0), unit="m")

    kinds = np.where(rng.random(total) < 0.55, "DEP", "ARR")
    seq = np.arange(total)
    events = pd.DataFrame(
        {
            "journey_id": [f"{profile.code}{i:08d}" for i in seq],
            "station": profile.code,
            "event_kind": kinds,
            "scheduled_time": scheduled,
            "booking_created": created,
            "channel": "PREBOOKED",
        }
    )

    month = truth["hour_start"].dt.month.to_numpy()
    season_mult = 1.0 + 0.3 * np.sin(2 * np.pi * (month - 1) / 12.0)
    tuag_counts = rng.poisson(lam * profile.tuag_rate * season_mult)
    t_total = int(tuag_counts.sum())
    t_hours = truth["hour_start"].to_numpy().repeat(tuag_counts)
    t_sched = pd.DatetimeIndex(t_hours) + pd.to_timedelta(rng.integers(0, 60, t_total), unit="m")
    tuag = pd.DataFrame(
        {
            "journey_id": [f"{profile.code}T{i:07d}" for i in range(t_total)],
            "station": profile.code,
            "event_kind": np.where(rng.random(t_total) < 0.55, "DEP", "ARR"),
            "scheduled_time": t_sched,
            "booking_created": t_sched,  # turn-up-and-go: no advance booking
            "channel": "TUAG",
        }
    )
    return pd.concat([events, tuag], ignore_index=True)


def _station_roster(profile: StationProfile, truth: pd.DataFrame, spec: SynthSpec) -> pd.DataFrame:
    """Hourly roster sized against the typical demand shape (so the RAG grid
    shows a realistic mix), staffed 05:00-22:00 over the span plus a future
    margin for forecast-period heatmaps."""
    shape = truth.copy()
    shape["dow"] = shape["hour_start"].dt.dayofweek
    shape["hod"] = shape["hour_start"].dt.hour
    typical = shape.groupby(["dow", "hod"])["lam"].mean()

    capacity_per_head = 4.0 * 0.9  # nominal effective rate used only for sizing
    start = pd.Timestamp(spec.start).normalize()
    end = pd.Timestamp(spec.end).normalize() + pd.Timedelta(days=spec.roster_extra_days)
    hours = pd.date_range(start, end, freq="h", inclusive="left")
    hours = hours[(hours.hour >= 5) & (hours.hour <= 22)]

    lam_typ = typical.reindex(
        pd.MultiIndex.from_arrays([hours.dayofweek, hours.hour])
    ).fillna(0.0).to_numpy()
    # deliberately lean: typical hours sit near primary capacity, so trend
    # growth and holiday peaks produce a realistic Amber/Red mix
    psa = np.maximum(1, np.floor(lam_typ / capacity_per_head + 0.25)).astype(int)
    scsc = (lam_typ > np.quantile(lam_typ, 0.97)).astype(int)
    scsa = 1 + (psa >= 6).astype(int)
    rows = []
    for role, counts in (("PSA", psa), ("SCSC", scsc), ("SCSA", scsa)):
        rows.append(pd.DataFrame(
            {"station": profile.code, "hour_start": hours, "role_code": role, "headcount": counts}
        ))
    rows.append(pd.DataFrame(
        {"station": profile.code, "hour_start": hours, "role_code": "SSA", "headcount": 1}
    ))
    rows.append(pd.DataFrame(
        {"station": profile.code, "hour_start": hours, "role_code": "IC", "headcount": 1}
    ))
    roster = pd.concat(rows, ignore_index=True)
    return roster[roster["headcount"] > 0].reset_index(drop=True)


def generate(spec: SynthSpec, out_dir: str | Path) -> SynthResult:
    """Generate events.csv, weather.csv, roster.csv and truth.csv."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    hours = pd.date_range(pd.Timestamp(spec.start).floor("h"),
                          pd.Timestamp(spec.end).floor("h"), freq="h", inclusive="left")
    if len(hours) == 0:
        raise ValueError("span contains no hours")
    n_days = len(pd.DatetimeIndex(hours.normalize().unique()))

    children = np.random.SeedSequence(spec.seed).spawn(len(spec.stations))
    truth_frames, event_frames, weather_frames, roster_frames = [], [], [], []
    for profile, child in zip(spec.stations, children):
        rng = np.random.default_rng(child)
        weather = _station_weather(profile.code, hours, rng)
        day_shock = rng.normal(0.0, profile.day_shock_sigma, n_days)
        truth = _station_truth(profile, hours, weather["rainfall_mm"].to_numpy(), day_shock)
        events = _station_events(profile, truth, spec, rng)
        roster = _station_roster(profile, truth, spec)
        truth_frames.append(truth)
        event_frames.append(events)
        weather_frames.append(weather)
        roster_frames.append(roster)

    events = pd.concat(event_frames, ignore_index=True)
    events = events.sort_values(["scheduled_time", "station", "journey_id"], kind="stable")
    weather = pd.concat(weather_frames, ignore_index=True)
    roster = pd.concat(roster_frames, ignore_index=True)
    truth = pd.concat(truth_frames, ignore_index=True)

    events_path = out_dir / "events.csv"
    weather_path = out_dir / "weather.csv"
    roster_path = out_dir / "roster.csv"
    truth_path = out_dir / "truth.csv"
    write_events_csv(events, events_path)
    write_weather_csv(weather, weather_path)
    write_roster_csv(roster, roster_path)

    truth_out = truth.copy()
    truth_out["hour_start"] = truth_out["hour_start"].dt.strftime("%Y-%m-%dT%H:%M:%SZ")
    float_cols = [c for c in truth_out.columns if c not in ("station", "hour_start")]
    truth_out[float_cols] = truth_out[float_cols].round(6)
    truth_out.to_csv(truth_path, index=False)

    return SynthResult(events_path, weather_path, roster_path, truth_path, truth)


def load_truth(path: str | Path) -> pd.DataFrame:
    truth = pd.read_csv(path, dtype={"station": str})
    truth["hour_start"] = pd.to_datetime(truth["hour_start"], utc=True).dt.tz_localize(None)
    return truth


def truth_report(truth: pd.DataFrame, fitted_components: pd.DataFrame, station: str) -> pd.DataFrame:
    """Pearson correlation between fitted components and retained truth.

    ``fitted_components`` is a breakdown frame indexed by hour_start.  A
    constant series on either side has undefined correlation, reported as
    NaN.  Keys must align exactly.
    """
    t = truth[truth["station"] == station].set_index("hour_start")
    idx = fitted_components.index
    missing = idx.difference(t.index)
    if len(missing):
        raise ValueError(f"truth does not cover {len(missing)} fitted hours, first {missing[0]}")
    t = t.loc[idx]

    records = []
    for fitted_col, truth_col in FITTED_TO_TRUTH.items():
        if fitted_col not in fitted_components.columns:
            continue
        a = fitted_components[fitted_col].to_numpy(dtype=float)
        b = t[truth_col].to_numpy(dtype=float)
        if np.std(a) == 0 or np.std(b) == 0:
            corr = float("nan")
        else:
            corr = float(np.corrcoef(a, b)[0, 1])
        records.append({"component": fitted_col, "truth_component": truth_col, "correlation": corr})
    return pd.DataFrame.from_records(records)
