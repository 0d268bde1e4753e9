"""Application configuration: data paths, feature spec, buckets, grids.

Loaded from a single JSON file (``--config``); every field has a default so
a bare config pointing at a data directory works.  The service port may be
overridden through the ASSISTCAST_PORT environment variable (the only env
override).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from assistcast.gam.spec import ModelSpec
from assistcast.horizon import BucketSet, default_buckets
from assistcast.panel.asof import AsOfFeatureSpec
from assistcast.workforce import DEFAULT_DISPLAY_HOURS, CapacityParams, RoleConfig, default_roles

DEFAULT_STATIONS = ["KGX", "YRK", "BWK"]


@dataclass
class AppConfig:
    data_dir: Path = Path("data")
    output_dir: Path = Path("output")
    panel_dir: Path = Path("output/panel")
    model_dir: Path = Path("output/models")
    stations: list[str] = field(default_factory=lambda: list(DEFAULT_STATIONS))
    asof: AsOfFeatureSpec = field(default_factory=AsOfFeatureSpec)
    train_fraction: float = 0.8
    buckets: BucketSet = field(default_factory=default_buckets)
    model_template: ModelSpec = field(default_factory=ModelSpec)
    grid_seasonality_scales: list[float] = field(default_factory=lambda: [0.1, 1.0, 10.0])
    grid_holiday_scales: list[float] = field(default_factory=lambda: [1.0, 10.0])
    grid_modes: list[str] = field(default_factory=lambda: ["ADDITIVE", "MULTIPLICATIVE"])
    validation_split: float = 0.2
    under_prediction_weight: float = 2.0
    tolerances: dict[str, float] = field(default_factory=dict)  # empty = derive defaults
    yoy_growth_factor: float = 1.0
    capacity: CapacityParams = field(default_factory=CapacityParams)
    roles: dict[str, RoleConfig] = field(default_factory=default_roles)
    display_hours: tuple[int, int] = DEFAULT_DISPLAY_HOURS
    heatmap_days: int = 50
    service_port: int = 8321
    figures: bool = True

    @property
    def events_path(self) -> Path:
        return self.data_dir / "events.csv"

    @property
    def weather_path(self) -> Path:
        return self.data_dir / "weather.csv"

    @property
    def roster_path(self) -> Path:
        return self.data_dir / "roster.csv"

    def require_inputs(self, *names: str) -> None:
        """Fail early if the files a command depends on are absent."""
        paths = {"events": self.events_path, "weather": self.weather_path, "roster": self.roster_path}
        for name in names:
            if not paths[name].exists():
                raise FileNotFoundError(f"required input {name} file not found: {paths[name]}")


def _roles_from_config(items: list[dict]) -> dict[str, RoleConfig]:
    roles = {}
    for d in items:
        roles[d["role_code"]] = RoleConfig(
            role_code=d["role_code"], category=d["category"], availability=d.get("alpha")
        )
    return roles


def load_config(path: str | Path | None = None) -> AppConfig:
    """Build an AppConfig from a JSON file, filling defaults for absent keys."""
    cfg = AppConfig()
    if path is None:
        return _apply_env(cfg)
    raw = json.loads(Path(path).read_text())
    base = Path(path).parent

    def respath(key: str, default: Path) -> Path:
        p = Path(raw[key]) if key in raw else default
        return p if p.is_absolute() else base / p

    cfg.data_dir = respath("data_dir", cfg.data_dir)
    cfg.output_dir = respath("output_dir", cfg.output_dir)
    cfg.panel_dir = respath("panel_dir", cfg.output_dir / "panel")
    cfg.model_dir = respath("model_dir", cfg.output_dir / "models")
    cfg.stations = list(raw.get("stations", cfg.stations))
    if "asof_thresholds" in raw:
        cfg.asof = AsOfFeatureSpec.from_labels(
            raw["asof_thresholds"], raw.get("include_adjacent_diffs", True)
        )
    cfg.train_fraction = float(raw.get("train_fraction", cfg.train_fraction))
    if "buckets" in raw:
        cfg.buckets = BucketSet.from_list(raw["buckets"])
    if "model" in raw:
        m = raw["model"]
        cfg.model_template = ModelSpec(
            n_changepoints=int(m.get("n_changepoints", 25)),
            changepoint_range=float(m.get("changepoint_range", 0.8)),
            fourier_orders={k: int(v) for k, v in m.get(
                "fourier_orders", {"daily": 4, "weekly": 3, "yearly": 10}).items()},
            seasonality_mode=m.get("seasonality_mode", "ADDITIVE"),
            penalty_scales={k: float(v) for k, v in m.get(
                "penalty_scales",
                {"trend": 0.05, "seasonality": 10.0, "holidays": 10.0, "regressors": 10.0}).items()},
        )
    if "grid" in raw:
        g = raw["grid"]
        cfg.grid_seasonality_scales = [float(x) for x in g.get("seasonality_scales", cfg.grid_seasonality_scales)]
        cfg.grid_holiday_scales = [float(x) for x in g.get("holiday_scales", cfg.grid_holiday_scales)]
        cfg.grid_modes = list(g.get("modes", cfg.grid_modes))
        cfg.validation_split = float(g.get("validation_split", cfg.validation_split))
    if "eval" in raw:
        e = raw["eval"]
        cfg.under_prediction_weight = float(e.get("under_prediction_weight", 2.0))
        cfg.tolerances = {k: float(v) for k, v in e.get("tolerances", {}).items()}
        cfg.yoy_growth_factor = float(e.get("yoy_growth_factor", 1.0))
    if "capacity" in raw:
        c = raw["capacity"]
        cfg.capacity = CapacityParams(
            assists_per_hour=float(c.get("assists_per_hour", 4.0)),
            margin=float(c.get("margin", 0.10)),
        )
        if "display_hours" in c:
            lo, hi = c["display_hours"]
            cfg.display_hours = (int(lo), int(hi))
        cfg.heatmap_days = int(c.get("heatmap_days", cfg.heatmap_days))
    if "roles" in raw:
        cfg.roles = _roles_from_config(raw["roles"])
    cfg.service_port = int(raw.get("service_port", cfg.service_port))
    cfg.figures = bool(raw.get("figures", cfg.figures))
    return _apply_env(cfg)


def _apply_env(cfg: AppConfig) -> AppConfig:
    port = os.environ.get("ASSISTCAST_PORT")
    if port:
        cfg.service_port = int(port)
    return cfg
