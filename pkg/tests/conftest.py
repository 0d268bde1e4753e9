"""Shared fixtures: a small synthetic two-station system, built and trained once."""

from __future__ import annotations

import json

import pandas as pd
import pytest

from assistcast import pipeline, synth
from assistcast.config import load_config

SPAN_START = "2023-09-04"  # a Monday
SPAN_END = "2025-01-06"  # 16 months: enough history for the 364-day baseline


@pytest.fixture(scope="session")
def system_dir(tmp_path_factory):
    """Generated data + config + persisted panel and models."""
    root = tmp_path_factory.mktemp("system")
    spec = synth.SynthSpec(
        stations=(
            synth.StationProfile("KGX", base_level=1.9, trend_per_year=0.25,
                                 daily_amplitude=1.5, day_shock_sigma=0.12, tuag_rate=0.25),
            synth.StationProfile("BWK", base_level=-1.0, trend_per_year=0.05,
                                 daily_amplitude=0.8, holiday_scale=0.5, tuag_rate=0.35),
        ),
        start=pd.Timestamp(SPAN_START),
        end=pd.Timestamp(SPAN_END),
        seed=42,
    )
    synth.generate(spec, root / "data")
    config_payload = {
        "data_dir": "data",
        "output_dir": "out",
        "stations": ["KGX", "BWK"],
        "model": {
            "n_changepoints": 8,
            "fourier_orders": {"daily": 3, "weekly": 2, "yearly": 4},
        },
        "grid": {
            "seasonality_scales": [10.0],
            "holiday_scales": [10.0],
            "modes": ["ADDITIVE"],
        },
        "capacity": {"heatmap_days": 10},
    }
    (root / "config.json").write_text(json.dumps(config_payload))
    return root


@pytest.fixture(scope="session")
def app_config(system_dir):
    return load_config(system_dir / "config.json")


@pytest.fixture(scope="session")
def bundle(app_config):
    return pipeline.build_bundle(app_config)


@pytest.fixture(scope="session")
def trained_models(app_config, bundle):
    return pipeline.train_all(app_config, bundle)


@pytest.fixture(scope="session")
def persisted_system(app_config, bundle, trained_models):
    """Panel and models written to disk, as the CLI and service expect."""
    pipeline.persist_bundle(bundle, app_config)
    pipeline.save_models(app_config, trained_models, bundle)
    return app_config
