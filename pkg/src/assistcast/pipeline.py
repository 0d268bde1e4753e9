"""Shared orchestration between the CLI and the HTTP service.

Covers the full operational path: ingest files -> leakage-safe panel ->
per-(station, bucket) training -> as-of inference features -> trajectory /
evaluation / heatmap assembly.  Nothing here mutates shared state; the
service layer swaps whole bundles atomically.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import pandas as pd

from assistcast import evalx
from assistcast.config import AppConfig
from assistcast.gam.model import FittedModel, predict
from assistcast.gam.spec import ModelSpec, default_holiday_windows
from assistcast.gam.tuning import expand_grid
from assistcast.horizon import BucketSet, forecast_trajectory, train_bucketed
from assistcast.panel.asof import compute_asof_features
from assistcast.panel.build import (
    TEST,
    TRAIN,
    WEATHER_COLUMNS,
    build_panel,
    hourly_grid,
    impute_missing,
    join_weather,
    tag_split,
)
from assistcast.panel.events import IngestResult, ingest_events
from assistcast.panel.io import (
    load_panel,
    read_events_csv,
    read_roster_csv,
    read_weather_csv,
    save_panel,
)
from assistcast.panel.scaling import Scaler, apply_scaler, fit_scaler
from assistcast.store import ModelStore, scaler_hash, sha256_of_file
from assistcast.workforce import RagHeatmap, Roster, build_heatmap

logger = logging.getLogger(__name__)


def parse_ts(value: str | pd.Timestamp) -> pd.Timestamp:
    """User-supplied timestamp -> naive UTC (ISO strings may carry Z/offset)."""
    ts = pd.Timestamp(value)
    return ts.tz_convert("UTC").tz_localize(None) if ts.tzinfo is not None else ts


@dataclass
class PanelBundle:
    """A built panel plus everything needed to reproduce its transforms."""

    panel: pd.DataFrame  # tagged, imputed, scaled
    scaler: Scaler
    impute_means: dict[str, float]
    ingest: IngestResult
    weather: pd.DataFrame
    span: tuple[pd.Timestamp, pd.Timestamp]

    @property
    def train(self) -> pd.DataFrame:
        return self.panel[self.panel["split_tag"] == TRAIN]

    @property
    def test(self) -> pd.DataFrame:
        return self.panel[self.panel["split_tag"] == TEST]

    def station_rows(self, station: str, split: str | None = None) -> pd.DataFrame:
        rows = self.panel[self.panel["station"] == station]
        if split is not None:
            rows = rows[rows["split_tag"] == split]
        return rows.reset_index(drop=True)

    @property
    def data_end(self) -> pd.Timestamp:
        """The first instant after the observed data (natural forecast origin)."""
        return self.panel["hour_start"].max() + pd.Timedelta(hours=1)


def regressor_columns(config: AppConfig) -> list[str]:
    return config.asof.feature_columns + WEATHER_COLUMNS


def build_bundle(config: AppConfig) -> PanelBundle:
    """Files -> ingested events -> feature-complete, scaled panel."""
    config.require_inputs("events", "weather")
    raw = read_events_csv(config.events_path)
    weather = read_weather_csv(config.weather_path)
    ingest = ingest_events(raw, config.stations)
    for line in ingest.diagnostics:
        logger.warning("ingest: %s", line)

    first = ingest.events["scheduled_time"].min().floor("h")
    last = ingest.events["scheduled_time"].max().floor("h") + pd.Timedelta(hours=1)
    span = (first, last)

    panel = build_panel(ingest.events, config.stations, span)
    panel = compute_asof_features(panel, ingest.events, config.asof)
    panel = join_weather(panel, weather)
    panel = tag_split(panel, config.train_fraction)
    panel, means = impute_missing(panel)
    scaler = fit_scaler(panel[panel["split_tag"] == TRAIN], regressor_columns(config))
    panel = apply_scaler(scaler, panel)
    return PanelBundle(panel, scaler, means, ingest, weather, span)


def persist_bundle(bundle: PanelBundle, config: AppConfig) -> None:
    save_panel(
        bundle.panel,
        config.panel_dir,
        scaler=bundle.scaler,
        asof_spec=config.asof,
        impute_means=bundle.impute_means,
        train_fraction=config.train_fraction,
    )


def load_bundle(config: AppConfig) -> PanelBundle:
    """Rehydrate a persisted panel; raw events/weather reload from data files."""
    panel, sidecar = load_panel(config.panel_dir)
    config.require_inputs("events", "weather")
    raw = read_events_csv(config.events_path)
    weather = read_weather_csv(config.weather_path)
    ingest = ingest_events(raw, config.stations)
    scaler = Scaler.from_dict(sidecar["scaler"])
    span = (parse_ts(sidecar["span"]["start"]), parse_ts(sidecar["span"]["end"]))
    return PanelBundle(panel, scaler, sidecar["impute_means"], ingest, weather, span)


def holiday_years(span: tuple[pd.Timestamp, pd.Timestamp], margin_years: int = 1) -> list[int]:
    """Calendar years whose holiday anchors the models should know about."""
    return list(range(span[0].year - 1, span[1].year + margin_years + 1))


def _template_with_holidays(config: AppConfig, years: list[int]) -> ModelSpec:
    return replace(config.model_template, holiday_windows=default_holiday_windows(years))


def train_all(
    config: AppConfig, bundle: PanelBundle
) -> dict[str, dict[str, FittedModel]]:
    """Grid-search and fit every (station, bucket) model."""
    years = holiday_years(bundle.span)
    template = _template_with_holidays(config, years)
    grid = expand_grid(
        template,
        seasonality_scales=config.grid_seasonality_scales,
        holiday_scales=config.grid_holiday_scales,
        modes=config.grid_modes,
    )
    models: dict[str, dict[str, FittedModel]] = {}
    for station in config.stations:
        train_rows = bundle.station_rows(station, TRAIN)
        logger.info("training %s: %d rows x %d buckets (grid %d)",
                    station, len(train_rows), len(config.buckets), len(grid))
        models[station] = train_bucketed(
            train_rows,
            config.buckets,
            template,
            spec_grid=grid,
            validation_split=config.validation_split,
        )
    return models


def save_models(
    config: AppConfig, models: dict[str, dict[str, FittedModel]], bundle: PanelBundle
) -> None:
    store = ModelStore(config.model_dir)
    data_hash = sha256_of_file(config.events_path)
    store.save(models, bundle.scaler, data_hash=data_hash,
               extra={"scaler_ref": scaler_hash(bundle.scaler)})


def load_models(config: AppConfig) -> tuple[dict[str, dict[str, FittedModel]], Scaler, dict]:
    store = ModelStore(config.model_dir)
    if not store.exists():
        raise FileNotFoundError(f"no trained models under {config.model_dir}; run train first")
    return store.load()


def future_regressor_frame(
    config: AppConfig,
    bundle: PanelBundle,
    station: str,
    origin: pd.Timestamp,
    start: pd.Timestamp,
    end: pd.Timestamp,
) -> pd.DataFrame:
    """As-of-origin features for future hours, scaled like the training panel.

    Booking features count only bookings created by ``min(origin, t - tau)``;
    weather comes from the observation file where present and falls back to
    the TRAIN-period means recorded at panel build time.
    """
    grid = hourly_grid(start, end + pd.Timedelta(hours=1))
    frame = pd.DataFrame({"station": station, "hour_start": grid})
    events = bundle.ingest.events
    events = events[events["station"] == station]
    frame = compute_asof_features(frame, events, config.asof, as_of_origin=origin)

    weather = bundle.weather[bundle.weather["station"] == station]
    frame = join_weather(frame, weather)
    for col in WEATHER_COLUMNS:
        frame[col] = frame[col].fillna(bundle.impute_means[col])

    frame = apply_scaler(bundle.scaler, frame)
    return frame.set_index("hour_start")


def forecast_station(
    config: AppConfig,
    bundle: PanelBundle,
    models: dict[str, FittedModel],
    station: str,
    origin: pd.Timestamp,
    start: pd.Timestamp,
    end: pd.Timestamp,
) -> pd.DataFrame:
    """Bucket-routed hourly trajectory with station and origin columns."""
    future = future_regressor_frame(config, bundle, station, origin, start, end)
    traj = forecast_trajectory(models, config.buckets, origin, start, end, future)
    traj.insert(0, "station", station)
    return traj


def representative_horizon(bucket_name: str, buckets: BucketSet) -> int:
    """The evaluation lead time for a bucket: its h_max, or h_min + 7 when unbounded."""
    bucket = buckets.by_name(bucket_name)
    return bucket.h_max if bucket.h_max is not None else bucket.h_min + 7


def backtest_forecasts(
    config: AppConfig,
    bundle: PanelBundle,
    models: dict[str, dict[str, FittedModel]],
) -> pd.DataFrame:
    """Held-out forecasts for every bucket plus the YoY baseline.

    Each bucket is evaluated at its representative horizon (h_max, or
    h_min + 7 for the unbounded bucket).  Because every bucket's booking
    thresholds are at least as long as that horizon, the self-relative
    panel features equal the as-of-origin features, so TEST rows can be
    scored directly.
    """
    pieces = []
    for station in config.stations:
        test_rows = bundle.station_rows(station, TEST)
        if len(test_rows) == 0:
            continue
        for bucket in config.buckets:
            model = models[station][bucket.name]
            yhat, _ = predict(model, test_rows)
            pieces.append(
                pd.DataFrame(
                    {
                        "station": station,
                        "hour_start": test_rows["hour_start"].to_numpy(),
                        "bucket": bucket.name,
                        "yhat": yhat,
                    }
                )
            )
        baseline = evalx.yoy_baseline(
            bundle.station_rows(station),
            test_rows[["station", "hour_start"]],
            config.yoy_growth_factor,
        )
        pieces.append(baseline[["station", "hour_start", "bucket", "yhat"]])
    return pd.concat(pieces, ignore_index=True)


def evaluation_report(
    config: AppConfig,
    bundle: PanelBundle,
    models: dict[str, dict[str, FittedModel]],
) -> pd.DataFrame:
    forecasts = backtest_forecasts(config, bundle, models)
    observations = bundle.panel[["station", "hour_start", "y"]]
    tolerances = config.tolerances or evalx.default_tolerances(bundle.panel)
    eval_config = evalx.EvalConfig(
        tolerances=tolerances, under_prediction_weight=config.under_prediction_weight
    )
    return evalx.evaluate_by_bucket(forecasts, observations, config.buckets.names, eval_config)


def heatmap_window(
    origin: pd.Timestamp, days: int, display_hours: tuple[int, int]
) -> tuple[pd.Timestamp, pd.Timestamp]:
    """Forecast span covering the display hours of the next ``days`` full days."""
    first_day = pd.Timestamp(origin).normalize()
    if first_day < origin:
        first_day += pd.Timedelta(days=1)
    lo, hi = display_hours
    start = first_day + pd.Timedelta(hours=lo)
    end = first_day + pd.Timedelta(days=days - 1, hours=hi)
    return start, end


def heatmap_for_station(
    config: AppConfig,
    bundle: PanelBundle,
    models: dict[str, FittedModel],
    roster: Roster,
    station: str,
    days: int | None = None,
    origin: pd.Timestamp | None = None,
) -> RagHeatmap:
    days = days or config.heatmap_days
    origin = origin or bundle.data_end
    start, end = heatmap_window(origin, days, config.display_hours)
    traj = forecast_station(config, bundle, models, station, origin, start, end)
    return build_heatmap(
        traj, roster, config.roles, config.capacity, station, config.display_hours
    )


def load_roster(config: AppConfig) -> Roster:
    config.require_inputs("roster")
    return Roster(read_roster_csv(config.roster_path))
