"""Capacity and Red-Amber-Green staffing classification.

Effective capacity per fully available staff member is
``assists_per_hour * (1 - margin)``; primary roles contribute it in full,
secondary roles are discounted by their availability fraction, excluded
roles contribute nothing.  A station-hour is GREEN when forecast demand fits
within primary capacity, AMBER when secondary capacity is also needed, RED
when total capacity is exceeded (both boundaries inclusive on the safe
side).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import pandas as pd

GREEN, AMBER, RED = "GREEN", "AMBER", "RED"
_RAG_ORDER = {GREEN: 0, AMBER: 1, RED: 2}

PRIMARY, SECONDARY, EXCLUDED = "PRIMARY", "SECONDARY", "EXCLUDED"
ROLE_CATEGORIES = (PRIMARY, SECONDARY, EXCLUDED)

DEFAULT_DISPLAY_HOURS = (6, 21)  # inclusive hour-of-day bounds

HEATMAP_CSV_COLUMNS = ["station", "hour_start", "yhat", "c_p", "c_s", "c_total", "rag"]


@dataclass(frozen=True)
class RoleConfig:
    """A staff role and how it contributes to assistance capacity."""

    role_code: str
    category: str
    availability: float | None = None  # SECONDARY only

    def __post_init__(self) -> None:
        if self.category not in ROLE_CATEGORIES:
            raise ValueError(f"role {self.role_code!r}: unknown category {self.category!r}")
        if self.category == SECONDARY:
            if self.availability is None or not 0 <= self.availability <= 1:
                raise ValueError(
                    f"secondary role {self.role_code!r} needs availability in [0, 1]"
                )
        elif self.availability is not None:
            raise ValueError(f"role {self.role_code!r}: availability only applies to SECONDARY")


def default_roles() -> dict[str, RoleConfig]:
    """Standard role table: assistance-first roles primary, dispatch/kiosk
    roles secondary at 0.30 availability, last-resort roles excluded."""
    roles = [
        RoleConfig("PSA", PRIMARY),
        RoleConfig("SCSC", PRIMARY),
        RoleConfig("SCSA", SECONDARY, availability=0.30),
        RoleConfig("SSA", SECONDARY, availability=0.30),
        RoleConfig("IC", EXCLUDED),
        RoleConfig("DTL", EXCLUDED),
    ]
    return {r.role_code: r for r in roles}


def roles_to_json(roles: Mapping[str, RoleConfig], path: str | Path) -> None:
    items = [
        {"role_code": r.role_code, "category": r.category, "alpha": r.availability}
        for r in roles.values()
    ]
    Path(path).write_text(json.dumps(items, indent=2))


def roles_from_json(path: str | Path) -> dict[str, RoleConfig]:
    items = json.loads(Path(path).read_text())
    roles = {}
    for d in items:
        roles[d["role_code"]] = RoleConfig(
            role_code=d["role_code"],
            category=d["category"],
            availability=d.get("alpha"),
        )
    return roles


@dataclass(frozen=True)
class CapacityParams:
    """Hourly handling rate and the operational resilience margin."""

    assists_per_hour: float = 4.0
    margin: float = 0.10

    def __post_init__(self) -> None:
        if self.assists_per_hour <= 0:
            raise ValueError("assists_per_hour must be positive")
        if not 0 <= self.margin < 1:
            raise ValueError("margin must be in [0, 1)")


def capacity_factor(params: CapacityParams) -> float:
    """Effective safe assists per hour per fully available staff member."""
    return params.assists_per_hour * (1.0 - params.margin)


class Roster:
    """Headcount by (station, hour_start, role_code); absent rows mean zero."""

    def __init__(self, frame: pd.DataFrame):
        required = ["station", "hour_start", "role_code", "headcount"]
        missing = [c for c in required if c not in frame.columns]
        if missing:
            raise ValueError(f"roster missing columns: {missing}")
        if (frame["headcount"] < 0).any():
            raise ValueError("headcounts must be non-negative")
        if (frame["headcount"] != frame["headcount"].astype(int)).any():
            raise ValueError("headcounts must be integers")
        frame = frame.copy()
        frame["headcount"] = frame["headcount"].astype(int)
        # collapse duplicate keys by summing, a role split over entries is one pool
        self.frame = (
            frame.groupby(["station", "hour_start", "role_code"], as_index=False)["headcount"]
            .sum()
            .sort_values(["station", "hour_start", "role_code"], kind="stable")
            .reset_index(drop=True)
        )

    def headcount(self, station: str, hour: pd.Timestamp, role_code: str) -> int:
        f = self.frame
        rows = f[
            (f["station"] == station)
            & (f["hour_start"] == pd.Timestamp(hour))
            & (f["role_code"] == role_code)
        ]
        return int(rows["headcount"].sum())

    def with_deltas(self, deltas: Iterable[tuple[str, pd.Timestamp, str, int]]) -> "Roster":
        """A new roster with per (station, hour, role) headcount changes applied."""
        frame = self.frame.copy()
        extra = []
        for station, hour, role, change in deltas:
            hour = pd.Timestamp(hour)
            mask = (
                (frame["station"] == station)
                & (frame["hour_start"] == hour)
                & (frame["role_code"] == role)
            )
            if mask.any():
                frame.loc[mask, "headcount"] += int(change)
            else:
                extra.append(
                    {"station": station, "hour_start": hour, "role_code": role, "headcount": int(change)}
                )
        if extra:
            frame = pd.concat([frame, pd.DataFrame(extra)], ignore_index=True)
        if (frame["headcount"] < 0).any():
            bad = frame.loc[frame["headcount"] < 0].iloc[0]
            raise ValueError(
                f"delta drives headcount negative: {bad['role_code']} at "
                f"{bad['station']} {bad['hour_start']}"
            )
        return Roster(frame)


def hourly_capacity(
    roster: Roster,
    roles: Mapping[str, RoleConfig],
    params: CapacityParams,
    station: str,
    hour: pd.Timestamp,
) -> tuple[float, float, float]:
    """(primary, secondary, total) effective capacity for one station-hour."""
    f = roster.frame
    rows = f[(f["station"] == station) & (f["hour_start"] == pd.Timestamp(hour))]
    cf = capacity_factor(params)
    c_p = c_s = 0.0
    for _, row in rows.iterrows():
        role = roles.get(row["role_code"])
        if role is None:
            raise ValueError(f"no role configuration for code {row['role_code']!r}")
        if role.category == PRIMARY:
            c_p += row["headcount"] * cf
        elif role.category == SECONDARY:
            c_s += row["headcount"] * role.availability * cf
    return c_p, c_s, c_p + c_s


def classify_rag(yhat: float, c_p: float, c_total: float) -> str:
    """GREEN iff yhat <= primary capacity; AMBER iff within total; else RED."""
    if yhat < 0:
        raise ValueError(f"forecast demand must be non-negative, got {yhat}")
    if c_total < c_p:
        raise ValueError("total capacity cannot be below primary capacity")
    if yhat <= c_p:
        return GREEN
    if yhat <= c_total:
        return AMBER
    return RED


@dataclass(frozen=True)
class RagHeatmap:
    """Classified station-hour cells over a day x display-hour grid."""

    station: str
    cells: pd.DataFrame  # hour_start, yhat, c_p, c_s, c_total, rag
    display_hours: tuple[int, int]

    @property
    def days(self) -> pd.DatetimeIndex:
        return pd.DatetimeIndex(sorted(self.cells["hour_start"].dt.normalize().unique()))

    @property
    def hours_of_day(self) -> list[int]:
        lo, hi = self.display_hours
        return list(range(lo, hi + 1))

    def grid(self, column: str = "rag") -> pd.DataFrame:
        """day x hour-of-day pivot of one cell column."""
        c = self.cells
        return c.pivot_table(
            index=c["hour_start"].dt.normalize(),
            columns=c["hour_start"].dt.hour,
            values=column,
            aggfunc="first",
        )

    def class_counts(self) -> dict[str, int]:
        counts = self.cells["rag"].value_counts()
        return {k: int(counts.get(k, 0)) for k in (GREEN, AMBER, RED)}

    def to_json_dict(self) -> dict:
        return {
            "station": self.station,
            "cells": [
                {
                    "hour": row["hour_start"].isoformat(),
                    "yhat": float(row["yhat"]),
                    "c_p": float(row["c_p"]),
                    "c_s": float(row["c_s"]),
                    "c_total": float(row["c_total"]),
                    "rag": row["rag"],
                }
                for _, row in self.cells.iterrows()
            ],
        }

    def to_csv_frame(self) -> pd.DataFrame:
        out = self.cells.copy()
        out.insert(0, "station", self.station)
        return out[HEATMAP_CSV_COLUMNS]


def build_heatmap(
    forecast: pd.DataFrame,
    roster: Roster,
    roles: Mapping[str, RoleConfig],
    params: CapacityParams,
    station: str,
    display_hours: tuple[int, int] = DEFAULT_DISPLAY_HOURS,
) -> RagHeatmap:
    """Classify every display-window hour covered by the forecast.

    ``forecast`` rows carry (hour_start, yhat) for the station; all display
    hours of every calendar day in the forecast span must be present,
    otherwise the gap is reported.
    """
    lo, hi = display_hours
    if not (0 <= lo <= hi <= 23):
        raise ValueError(f"invalid display hours {display_hours}")

    fc = forecast.loc[:, ["hour_start", "yhat"]].copy()
    in_window = fc["hour_start"].dt.hour.between(lo, hi)
    fc = fc[in_window].sort_values("hour_start").reset_index(drop=True)
    if len(fc) == 0:
        raise ValueError("forecast covers no display-window hours")

    days = sorted(fc["hour_start"].dt.normalize().unique())
    expected = pd.DatetimeIndex(
        [d + pd.Timedelta(hours=h) for d in days for h in range(lo, hi + 1)]
    )
    missing = expected.difference(pd.DatetimeIndex(fc["hour_start"]))
    if len(missing):
        shown = ", ".join(str(t) for t in missing[:5]) + ("..." if len(missing) > 5 else "")
        raise ValueError(f"forecast has gaps in the display window: {shown}")

    # vectorised capacity: pivot roster to per-hour headcounts by role
    rf = roster.frame[roster.frame["station"] == station]
    unknown = set(rf["role_code"].unique()) - set(roles.keys())
    if unknown:
        raise ValueError(f"no role configuration for codes {sorted(unknown)}")
    cf = capacity_factor(params)
    weight_p = {code: cf for code, r in roles.items() if r.category == PRIMARY}
    weight_s = {code: r.availability * cf for code, r in roles.items() if r.category == SECONDARY}

    by_role = rf.pivot_table(
        index="hour_start", columns="role_code", values="headcount", aggfunc="sum"
    ).reindex(pd.DatetimeIndex(fc["hour_start"])).fillna(0)

    c_p = sum(
        (by_role[code] * w for code, w in weight_p.items() if code in by_role.columns),
        start=pd.Series(0.0, index=by_role.index),
    )
    c_s = sum(
        (by_role[code] * w for code, w in weight_s.items() if code in by_role.columns),
        start=pd.Series(0.0, index=by_role.index),
    )

    cells = fc.copy()
    cells["c_p"] = c_p.to_numpy(dtype=float)
    cells["c_s"] = c_s.to_numpy(dtype=float)
    cells["c_total"] = cells["c_p"] + cells["c_s"]
    cells["rag"] = [
        classify_rag(row.yhat, row.c_p, row.c_total) for row in cells.itertuples()
    ]
    return RagHeatmap(station=station, cells=cells, display_hours=(lo, hi))


def whatif(
    forecast: pd.DataFrame,
    roster: Roster,
    roles: Mapping[str, RoleConfig],
    params: CapacityParams,
    station: str,
    deltas: Iterable[tuple[str, pd.Timestamp, str, int]],
    display_hours: tuple[int, int] = DEFAULT_DISPLAY_HOURS,
) -> tuple[RagHeatmap, list[dict]]:
    """Re-evaluate the heatmap under a roster perturbation.

    The base roster is untouched; the returned diff lists cells whose class
    changed, as ``{hour, before, after}``.
    """
    before = build_heatmap(forecast, roster, roles, params, station, display_hours)
    after = build_heatmap(
        forecast, roster.with_deltas(deltas), roles, params, station, display_hours
    )
    diff = []
    for (_, b), (_, a) in zip(before.cells.iterrows(), after.cells.iterrows()):
        if b["rag"] != a["rag"]:
            diff.append({"hour": b["hour_start"].isoformat(), "before": b["rag"], "after": a["rag"]})
    return after, diff
