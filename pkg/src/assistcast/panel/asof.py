"""As-of booking lead-time features.

For a station-hour (s, t) and a lead-time threshold tau, ``cum_<tau>`` counts
the bookings for that station-hour created on or before ``t - tau`` - i.e.
the demand already visible tau ahead of the hour.  Differences between
adjacent thresholds measure the pace of late-booking accumulation.

Two reference modes exist: in training mode each row is self-relative (its
own t is the reference), while in inference mode bookings created after the
forecast origin must additionally be invisible, so the cutoff becomes
``min(origin, t - tau)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import pandas as pd

_DURATION_RE = re.compile(r"^(\d+)([dh])$")


def parse_duration(text: str) -> pd.Timedelta:
    """Parse a compact duration label such as '2d' or '12h'."""
    m = _DURATION_RE.match(text.strip())
    if not m:
        raise ValueError(f"cannot parse duration {text!r} (expected e.g. '2d', '12h')")
    value, unit = int(m.group(1)), m.group(2)
    return pd.Timedelta(days=value) if unit == "d" else pd.Timedelta(hours=value)


def format_duration(delta: pd.Timedelta) -> str:
    """Inverse of :func:`parse_duration`; whole days preferred."""
    if delta <= pd.Timedelta(0):
        raise ValueError(f"duration must be positive, got {delta}")
    if delta % pd.Timedelta(days=1) == pd.Timedelta(0):
        return f"{delta.days}d"
    hours = delta / pd.Timedelta(hours=1)
    if hours != int(hours):
        raise ValueError(f"duration {delta} is not a whole number of hours")
    return f"{int(hours)}h"


@dataclass(frozen=True)
class AsOfFeatureSpec:
    """Ordered lead-time thresholds and whether to emit adjacent differences."""

    thresholds: tuple[pd.Timedelta, ...] = field(
        default=(
            pd.Timedelta(days=2),
            pd.Timedelta(days=7),
            pd.Timedelta(days=14),
            pd.Timedelta(days=28),
            pd.Timedelta(days=56),
        )
    )
    include_adjacent_diffs: bool = True

    def __post_init__(self) -> None:
        if not self.thresholds:
            raise ValueError("at least one lead-time threshold required")
        for tau in self.thresholds:
            if tau <= pd.Timedelta(0):
                raise ValueError(f"thresholds must be positive, got {tau}")
        for a, b in zip(self.thresholds, self.thresholds[1:]):
            if b <= a:
                raise ValueError("thresholds must be strictly increasing")

    @classmethod
    def from_labels(cls, labels: list[str], include_adjacent_diffs: bool = True) -> "AsOfFeatureSpec":
        return cls(tuple(parse_duration(x) for x in labels), include_adjacent_diffs)

    @property
    def cum_columns(self) -> list[str]:
        return [f"cum_{format_duration(tau)}" for tau in self.thresholds]

    @property
    def diff_columns(self) -> list[str]:
        if not self.include_adjacent_diffs:
            return []
        # diff_<tau_a>_<tau_b> with tau_a > tau_b: bookings created in (t-a, t-b].
        return [
            f"diff_{format_duration(a)}_{format_duration(b)}"
            for b, a in zip(self.thresholds, self.thresholds[1:])
        ]

    @property
    def feature_columns(self) -> list[str]:
        return self.cum_columns + self.diff_columns


def compute_asof_features(
    panel: pd.DataFrame,
    bookings: pd.DataFrame,
    spec: AsOfFeatureSpec,
    as_of_origin: pd.Timestamp | str = "training",
) -> pd.DataFrame:
    """Attach cumulative as-of booking counts (and adjacent diffs) to a panel.

    ``bookings`` carries one row per retained pre-booked event with columns
    ``station``, ``scheduled_time`` and ``booking_created``; an event belongs
    to the station-hour containing its scheduled time.  With
    ``as_of_origin="training"`` each row counts bookings created by its own
    ``hour_start - tau``; with a timestamp origin the cutoff is additionally
    capped at the origin so nothing created later can leak in.
    """
    required = {"station", "scheduled_time", "booking_created"}
    missing = required - set(bookings.columns)
    if missing:
        raise ValueError(f"bookings table missing columns: {sorted(missing)}")
    if bookings["booking_created"].isna().any():
        raise ValueError("bookings with missing booking_created are not allowed")

    training_mode = isinstance(as_of_origin, str)
    if training_mode and as_of_origin != "training":
        raise ValueError(f"as_of_origin must be a timestamp or 'training', got {as_of_origin!r}")
    origin = None if training_mode else pd.Timestamp(as_of_origin)

    out = panel.copy()
    if len(bookings) == 0:
        for col in spec.cum_columns:
            out[col] = 0.0
    else:
        ev = bookings[["station", "scheduled_time", "booking_created"]].copy()
        ev["hour_start"] = ev["scheduled_time"].dt.floor("h")
        key = ["station", "hour_start"]
        for tau, col in zip(spec.thresholds, spec.cum_columns):
            cutoff = ev["hour_start"] - tau
            if origin is not None:
                cutoff = cutoff.clip(upper=origin)
            counted = ev.loc[ev["booking_created"] <= cutoff]
            counts = counted.groupby(key).size().rename(col)
            out = out.merge(counts, how="left", left_on=key, right_index=True)
            out[col] = out[col].fillna(0).astype(float)

    for (tau_b, tau_a), col in zip(zip(spec.thresholds, spec.thresholds[1:]), spec.diff_columns):
        narrow = out[f"cum_{format_duration(tau_b)}"]
        wide = out[f"cum_{format_duration(tau_a)}"]
        if (wide > narrow).any():
            raise RuntimeError(
                f"cumulative monotonicity violated: cum_{format_duration(tau_a)} exceeds "
                f"cum_{format_duration(tau_b)}"
            )
        out[col] = narrow - wide

    return out
