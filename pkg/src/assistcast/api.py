"""HTTP service for the planner UI: forecasts, heatmaps, what-if evaluation.

All reads are served from an immutable snapshot (panel bundle + model set +
roster); reload builds a fresh snapshot and swaps it in with a single
attribute rebind, so concurrent readers never observe partial state.
What-if deltas are session-scoped: they never touch the stored roster.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import pandas as pd
from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel, Field

from assistcast import pipeline
from assistcast.config import AppConfig
from assistcast.gam.diagnostics import residual_diagnostics
from assistcast.gam.model import FittedModel, predict
from assistcast.workforce import Roster, whatif

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Snapshot:
    """One consistent view of data and models; replaced wholesale on reload."""

    bundle: pipeline.PanelBundle
    models: dict[str, dict[str, FittedModel]]
    roster: Roster


class ServiceState:
    def __init__(self, config: AppConfig, snapshot: Snapshot):
        self.config = config
        self.snapshot = snapshot  # reads copy this reference once per request

    def reload(self) -> None:
        self.snapshot = load_snapshot(self.config)  # atomic rebind


def load_snapshot(config: AppConfig) -> Snapshot:
    bundle = pipeline.load_bundle(config)
    models, _, _ = pipeline.load_models(config)
    roster = pipeline.load_roster(config)
    return Snapshot(bundle=bundle, models=models, roster=roster)


class WhatIfDelta(BaseModel):
    hour: str
    role: str
    change: int


class WhatIfRequest(BaseModel):
    station: str
    days: int | None = Field(default=None, ge=1)
    deltas: list[WhatIfDelta] = Field(default_factory=list)


def _station_models(state: ServiceState, station: str) -> dict[str, FittedModel]:
    snap = state.snapshot
    known = set(state.config.stations) | set(snap.models)
    if station not in known:
        raise HTTPException(status_code=404, detail=f"unknown station {station!r}")
    if station not in snap.models or not snap.models[station]:
        raise HTTPException(status_code=409, detail=f"station {station!r} has no trained models")
    return snap.models[station]


def _parse_ts(value: str, name: str) -> pd.Timestamp:
    try:
        return pipeline.parse_ts(value)
    except Exception:
        raise HTTPException(status_code=422, detail=f"cannot parse {name}={value!r} as a timestamp")


def create_app(config: AppConfig, snapshot: Snapshot | None = None) -> FastAPI:
    state = ServiceState(config, snapshot or load_snapshot(config))
    app = FastAPI(title="assistcast", version="0.1.0")
    app.state.service = state

    @app.get("/stations")
    def stations() -> dict:
        snap = state.snapshot
        return {"stations": sorted(set(state.config.stations) & set(snap.models))}

    @app.get("/forecast")
    def forecast(
        station: str,
        origin: str,
        start: str = Query(alias="from"),
        end: str = Query(alias="to"),
    ) -> dict:
        models = _station_models(state, station)
        snap = state.snapshot
        origin_ts = _parse_ts(origin, "origin")
        start_ts, end_ts = _parse_ts(start, "from"), _parse_ts(end, "to")
        if start_ts <= origin_ts:
            raise HTTPException(status_code=422, detail="span must start after the origin")
        try:
            traj = pipeline.forecast_station(
                state.config, snap.bundle, models, station, origin_ts, start_ts, end_ts
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {
            "station": station,
            "origin": origin_ts.isoformat(),
            "rows": [
                {
                    "hour_start": row.hour_start.isoformat(),
                    "horizon_days": int(row.horizon_days),
                    "bucket": row.bucket,
                    "yhat": float(row.yhat),
                }
                for row in traj.itertuples()
            ],
        }

    @app.get("/components")
    def components(
        station: str,
        bucket: str,
        start: str = Query(alias="from"),
        end: str = Query(alias="to"),
        origin: str | None = None,
    ) -> dict:
        models = _station_models(state, station)
        snap = state.snapshot
        if bucket not in models:
            raise HTTPException(status_code=404, detail=f"unknown bucket {bucket!r}")
        start_ts, end_ts = _parse_ts(start, "from"), _parse_ts(end, "to")
        origin_ts = _parse_ts(origin, "origin") if origin else snap.bundle.data_end
        try:
            future = pipeline.future_regressor_frame(
                state.config, snap.bundle, station, origin_ts, start_ts, end_ts
            )
            rows = future.reset_index()
            _, breakdown = predict(models[bucket], rows)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        frame = breakdown.frame.reset_index()
        return {
            "station": station,
            "bucket": bucket,
            "mode": breakdown.mode,
            "rows": frame.assign(hour_start=frame["hour_start"].map(lambda t: t.isoformat()))
            .to_dict(orient="records"),
        }

    @app.get("/heatmap")
    def heatmap(station: str, days: int | None = None) -> dict:
        models = _station_models(state, station)
        snap = state.snapshot
        try:
            hm = pipeline.heatmap_for_station(
                state.config, snap.bundle, models, snap.roster, station, days=days
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return hm.to_json_dict()

    @app.post("/whatif")
    def whatif_endpoint(request: WhatIfRequest) -> dict:
        models = _station_models(state, request.station)
        snap = state.snapshot
        config = state.config
        deltas = []
        for d in request.deltas:
            if d.role not in config.roles:
                raise HTTPException(status_code=422, detail=f"unknown role {d.role!r}")
            try:
                hour = pd.Timestamp(d.hour)
            except Exception:
                raise HTTPException(status_code=422, detail=f"cannot parse hour {d.hour!r}")
            deltas.append((request.station, hour, d.role, d.change))

        days = request.days or config.heatmap_days
        origin = snap.bundle.data_end
        start, end = pipeline.heatmap_window(origin, days, config.display_hours)
        try:
            traj = pipeline.forecast_station(
                config, snap.bundle, models, request.station, origin, start, end
            )
            new_heatmap, diff = whatif(
                traj, snap.roster, config.roles, config.capacity,
                request.station, deltas, config.display_hours,
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"heatmap": new_heatmap.to_json_dict(), "diff": diff, "changed": len(diff)}

    @app.get("/diagnostics")
    def diagnostics(station: str, bucket: str) -> dict:
        models = _station_models(state, station)
        snap = state.snapshot
        if bucket not in models:
            raise HTTPException(status_code=404, detail=f"unknown bucket {bucket!r}")
        holdout = snap.bundle.station_rows(station, "TEST")
        if len(holdout) == 0:
            raise HTTPException(status_code=409, detail="no held-out rows available")
        diag = residual_diagnostics(models[bucket], holdout)
        payload = diag.to_dict()
        payload.update({"station": station, "bucket": bucket})
        return payload

    @app.post("/reload")
    def reload() -> dict:
        state.reload()
        snap = state.snapshot
        return {"stations": sorted(snap.models), "reloaded": True}

    _mount_planner_ui(app)
    return app


def _mount_planner_ui(app: FastAPI) -> None:
    """Serve the built planner console at /ui when frontend/dist exists."""
    from pathlib import Path

    frontend = Path(__file__).resolve().parents[2] / "frontend"
    if not (frontend / "dist").is_dir():
        return
    from fastapi.staticfiles import StaticFiles

    app.mount("/ui", StaticFiles(directory=frontend, html=True), name="planner-ui")
