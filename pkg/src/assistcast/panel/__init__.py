"""Leakage-safe station-hour panel construction from raw assistance records."""

from assistcast.panel.asof import AsOfFeatureSpec, compute_asof_features
from assistcast.panel.build import (
    build_panel,
    impute_missing,
    join_weather,
    split_time_ordered,
    tag_split,
)
from assistcast.panel.events import (
    AssistanceEvent,
    IngestResult,
    Journey,
    JourneyLeg,
    decompose_journey,
    ingest_events,
)
from assistcast.panel.scaling import Scaler, apply_scaler, fit_scaler
from assistcast.panel.tuag import TuagRate, estimate_tuag_rate, indicative_tuag_volume

__all__ = [
    "AsOfFeatureSpec",
    "AssistanceEvent",
    "IngestResult",
    "Journey",
    "JourneyLeg",
    "Scaler",
    "TuagRate",
    "apply_scaler",
    "build_panel",
    "compute_asof_features",
    "decompose_journey",
    "estimate_tuag_rate",
    "fit_scaler",
    "impute_missing",
    "indicative_tuag_volume",
    "ingest_events",
    "join_weather",
    "split_time_ordered",
    "tag_split",
]
