"""Assistance event ingestion: journey decomposition, dedup, station filtering.

A journey-level request is represented station-side as one departure assist
(DEP) at each leg's origin and one arrival assist (ARR) at each leg's
destination.  Ingestion keeps pre-booked events for modelling and turn-up-
and-go (TUAG) events separately for rate estimation; rejected rows are
reported as row-level diagnostics rather than hard failures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import pandas as pd

EVENT_KINDS = ("DEP", "ARR")
CHANNELS = ("PREBOOKED", "TUAG")

EVENT_COLUMNS = [
    "journey_id",
    "station",
    "event_kind",
    "scheduled_time",
    "booking_created",
    "channel",
]

# Dedup key: channel deliberately excluded, a re-keyed duplicate row is still
# the same physical event.
_DEDUP_KEY = ["station", "event_kind", "scheduled_time", "booking_created", "journey_id"]


@dataclass(frozen=True)
class AssistanceEvent:
    """One station-level assistance event (already journey-decomposed)."""

    station: str
    event_kind: str
    scheduled_time: pd.Timestamp
    booking_created: pd.Timestamp
    channel: str
    journey_id: str

    def __post_init__(self) -> None:
        if self.event_kind not in EVENT_KINDS:
            raise ValueError(f"event_kind must be one of {EVENT_KINDS}, got {self.event_kind!r}")
        if self.channel not in CHANNELS:
            raise ValueError(f"channel must be one of {CHANNELS}, got {self.channel!r}")
        if self.channel == "PREBOOKED" and self.booking_created > self.scheduled_time:
            raise ValueError(
                f"booking_created {self.booking_created} after scheduled_time "
                f"{self.scheduled_time} for PREBOOKED event {self.journey_id}"
            )


@dataclass(frozen=True)
class JourneyLeg:
    origin: str
    destination: str
    departs: pd.Timestamp
    arrives: pd.Timestamp


@dataclass(frozen=True)
class Journey:
    journey_id: str
    booking_created: pd.Timestamp
    channel: str
    legs: Sequence[JourneyLeg]


@dataclass
class IngestResult:
    """Outcome of ingestion: modelling events, TUAG events, row diagnostics."""

    events: pd.DataFrame
    tuag_events: pd.DataFrame
    diagnostics: list[str] = field(default_factory=list)

    @property
    def n_retained(self) -> int:
        return len(self.events)


def decompose_journey(journey: Journey) -> list[AssistanceEvent]:
    """Expand a journey into its per-leg DEP/ARR assistance events.

    Returns 2 x len(legs) events: a DEP at each leg's origin timed at the
    scheduled departure and an ARR at each leg's destination timed at the
    scheduled arrival.
    """
    if not journey.legs:
        raise ValueError(f"journey {journey.journey_id!r} has no legs")
    events: list[AssistanceEvent] = []
    for i, leg in enumerate(journey.legs):
        if leg.arrives < leg.departs:
            raise ValueError(
                f"journey {journey.journey_id!r} leg {i}: arrival {leg.arrives} "
                f"before departure {leg.departs}"
            )
        events.append(
            AssistanceEvent(
                station=leg.origin,
                event_kind="DEP",
                scheduled_time=leg.departs,
                booking_created=journey.booking_created,
                channel=journey.channel,
                journey_id=journey.journey_id,
            )
        )
        events.append(
            AssistanceEvent(
                station=leg.destination,
                event_kind="ARR",
                scheduled_time=leg.arrives,
                booking_created=journey.booking_created,
                channel=journey.channel,
                journey_id=journey.journey_id,
            )
        )
    return events


def events_to_frame(events: Iterable[AssistanceEvent]) -> pd.DataFrame:
    """AssistanceEvent list -> raw record table (same schema as events.csv)."""
    rows = [
        {
            "journey_id": e.journey_id,
            "station": e.station,
            "event_kind": e.event_kind,
            "scheduled_time": e.scheduled_time,
            "booking_created": e.booking_created,
            "channel": e.channel,
        }
        for e in events
    ]
    return pd.DataFrame(rows, columns=EVENT_COLUMNS)


def ingest_events(raw_records: pd.DataFrame, stations: Sequence[str]) -> IngestResult:
    """Validate, filter and deduplicate raw assistance records.

    Keeps records at in-scope stations only, drops exact duplicates on the
    dedup key, orders chronologically by effective (scheduled) timestamp and
    splits pre-booked events (the modelling target) from TUAG events (kept
    for seasonal rate estimation).  Rows with missing timestamps or unknown
    station codes are rejected with a per-row diagnostic.
    """
    stations = list(stations)
    if not stations:
        raise ValueError("station filter list must not be empty")

    missing_cols = [c for c in EVENT_COLUMNS if c not in raw_records.columns]
    if missing_cols:
        raise ValueError(f"raw records missing columns: {missing_cols}")

    df = raw_records.loc[:, EVENT_COLUMNS].copy()
    diagnostics: list[str] = []

    for col in ("scheduled_time", "booking_created"):
        df[col] = pd.to_datetime(df[col], errors="coerce", utc=True).dt.tz_localize(None)

    bad_ts = df["scheduled_time"].isna() | df["booking_created"].isna()
    for idx in df.index[bad_ts]:
        diagnostics.append(f"row {idx}: missing or unparseable timestamp, rejected")
    df = df.loc[~bad_ts]

    in_scope = df["station"].isin(stations)
    for idx, code in df.loc[~in_scope, "station"].items():
        diagnostics.append(f"row {idx}: station {code!r} not in scope, rejected")
    df = df.loc[in_scope]

    bad_kind = ~df["event_kind"].isin(EVENT_KINDS)
    for idx, kind in df.loc[bad_kind, "event_kind"].items():
        diagnostics.append(f"row {idx}: unknown event_kind {kind!r}, rejected")
    df = df.loc[~bad_kind]

    bad_channel = ~df["channel"].isin(CHANNELS)
    for idx, chan in df.loc[bad_channel, "channel"].items():
        diagnostics.append(f"row {idx}: unknown channel {chan!r}, rejected")
    df = df.loc[~bad_channel]

    n_before = len(df)
    df = df.drop_duplicates(subset=_DEDUP_KEY, keep="first")
    n_dupes = n_before - len(df)
    if n_dupes:
        diagnostics.append(f"{n_dupes} duplicate rows removed")

    df = df.sort_values(["scheduled_time", "station", "journey_id"], kind="stable")
    df = df.reset_index(drop=True)

    prebooked = df[df["channel"] == "PREBOOKED"].reset_index(drop=True)
    tuag = df[df["channel"] == "TUAG"].reset_index(drop=True)
    return IngestResult(events=prebooked, tuag_events=tuag, diagnostics=diagnostics)
