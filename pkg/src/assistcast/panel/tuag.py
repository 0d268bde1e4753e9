"""Station-level seasonal turn-up-and-go (TUAG) rate estimation.

TUAG demand is excluded from the forecast target; a historical ratio of TUAG
to pre-booked volume per (station, calendar month) gives delivery managers an
indicative TUAG volume on top of the pre-booked forecast.
"""

from __future__ import annotations

from dataclasses import dataclass

import pandas as pd


@dataclass(frozen=True)
class TuagRate:
    """A TUAG/pre-booked ratio and where it came from."""

    station: str
    season_key: int  # calendar month 1..12
    rate: float | None
    source: str  # "month", "station_annual" or "missing"

    @property
    def is_missing(self) -> bool:
        return self.rate is None


def estimate_tuag_rate(
    prebooked: pd.DataFrame,
    tuag: pd.DataFrame,
    station: str,
    season_key: int,
) -> TuagRate:
    """TUAG count / pre-booked count for (station, month), with fallback.

    A month with zero pre-booked events has an undefined rate; the station's
    annual rate is used instead (source = "station_annual").  If the station
    has no pre-booked events at all the result is marked missing.
    """
    if not 1 <= season_key <= 12:
        raise ValueError(f"season_key must be a calendar month 1..12, got {season_key}")

    def month_count(df: pd.DataFrame) -> int:
        if len(df) == 0:
            return 0
        return int((df["scheduled_time"].dt.month == season_key).sum())

    pre_station = prebooked[prebooked["station"] == station]
    tuag_station = tuag[tuag["station"] == station]

    pre_month = month_count(pre_station)
    tuag_month = month_count(tuag_station)

    if pre_month > 0:
        return TuagRate(station, season_key, float(tuag_month) / float(pre_month), "month")
    if len(pre_station) > 0:
        annual = float(len(tuag_station)) / float(len(pre_station))
        return TuagRate(station, season_key, annual, "station_annual")
    return TuagRate(station, season_key, None, "missing")


def indicative_tuag_volume(rate: TuagRate, forecast_prebooked: float) -> float | None:
    """Expected TUAG volume implied by a pre-booked forecast."""
    if rate.is_missing:
        return None
    return rate.rate * forecast_prebooked
