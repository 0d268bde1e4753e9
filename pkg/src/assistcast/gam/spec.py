"""Model configuration: seasonality orders, penalties, holiday windows.

Penalty scales act like prior scales: the fitting objective adds
``(1 / scale) * ||coefficients||^2`` per group, so larger scales mean weaker
shrinkage.  The grid-search range of interest is 0.01-10.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field, replace

from dateutil import easter

ADDITIVE = "ADDITIVE"
MULTIPLICATIVE = "MULTIPLICATIVE"
SEASONALITY_MODES = (ADDITIVE, MULTIPLICATIVE)

SEASONALITY_PERIODS_DAYS = {"daily": 1.0, "weekly": 7.0, "yearly": 365.25}


@dataclass(frozen=True)
class HolidayWindow:
    """A named special period: anchor dates plus lead/lag days around each.

    One indicator column is created per offset day in
    [lower_window, upper_window]; a date covered by several anchors activates
    several offset columns, which lets overlapping windows (e.g. a multi-day
    Christmas anchor block) shape a whole peak period.
    """

    name: str
    anchor_dates: tuple[dt.date, ...]
    lower_window: int = 0
    upper_window: int = 0

    def __post_init__(self) -> None:
        if not (self.lower_window <= 0 <= self.upper_window):
            raise ValueError(
                f"holiday {self.name!r}: window must satisfy lower <= 0 <= upper, "
                f"got [{self.lower_window}, {self.upper_window}]"
            )
        if not self.anchor_dates:
            raise ValueError(f"holiday {self.name!r} has no anchor dates")

    @property
    def offsets(self) -> range:
        return range(self.lower_window, self.upper_window + 1)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor_dates": [d.isoformat() for d in self.anchor_dates],
            "lower_window": self.lower_window,
            "upper_window": self.upper_window,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HolidayWindow":
        return cls(
            name=d["name"],
            anchor_dates=tuple(dt.date.fromisoformat(x) for x in d["anchor_dates"]),
            lower_window=int(d["lower_window"]),
            upper_window=int(d["upper_window"]),
        )


def _observed(day: dt.date) -> dt.date:
    """Shift a bank holiday falling on a weekend to the following Monday(s)."""
    while day.weekday() >= 5:
        day += dt.timedelta(days=1)
    return day


def _nth_weekday(year: int, month: int, weekday: int, n: int) -> dt.date:
    """n-th (1-based) given weekday of a month; n = -1 for the last one."""
    if n > 0:
        day = dt.date(year, month, 1)
        offset = (weekday - day.weekday()) % 7
        return day + dt.timedelta(days=offset + 7 * (n - 1))
    day = dt.date(year + (month == 12), (month % 12) + 1, 1) - dt.timedelta(days=1)
    offset = (day.weekday() - weekday) % 7
    return day - dt.timedelta(days=offset)


def england_wales_bank_holidays(year: int) -> dict[str, list[dt.date]]:
    """Standard England & Wales bank holidays for one year, grouped by name."""
    easter_sunday = easter.easter(year)
    return {
        "new_year": [_observed(dt.date(year, 1, 1))],
        "easter": [easter_sunday - dt.timedelta(days=2), easter_sunday + dt.timedelta(days=1)],
        "early_may": [_nth_weekday(year, 5, 0, 1)],
        "spring_bank": [_nth_weekday(year, 5, 0, -1)],
        "summer_bank": [_nth_weekday(year, 8, 0, -1)],
    }


def default_holiday_windows(years: list[int]) -> tuple[HolidayWindow, ...]:
    """Default calendar: a wide Christmas block plus bank holidays at [-1, +1].

    Christmas anchors Dec 24-26 with window [-5, +7] span Dec 19 through
    Jan 2, letting per-offset coefficients capture the pre- and post-peak
    travel spread that shifts with the day of week Christmas falls on.
    """
    xmas = tuple(dt.date(y, 12, d) for y in years for d in (24, 25, 26))
    windows = [HolidayWindow("christmas", xmas, lower_window=-5, upper_window=7)]
    grouped: dict[str, list[dt.date]] = {}
    for y in years:
        for name, dates in england_wales_bank_holidays(y).items():
            grouped.setdefault(name, []).extend(dates)
    for name in sorted(grouped):
        windows.append(HolidayWindow(name, tuple(sorted(grouped[name])), -1, 1))
    return tuple(windows)


@dataclass(frozen=True)
class ModelSpec:
    """Everything the fit needs except the data itself."""

    n_changepoints: int = 25
    changepoint_range: float = 0.8
    fourier_orders: dict[str, int] = field(
        default_factory=lambda: {"daily": 4, "weekly": 3, "yearly": 10}
    )
    seasonality_mode: str = ADDITIVE
    holiday_windows: tuple[HolidayWindow, ...] = ()
    regressor_names: tuple[str, ...] = ()
    penalty_scales: dict[str, float] = field(
        default_factory=lambda: {"trend": 0.05, "seasonality": 10.0, "holidays": 10.0, "regressors": 10.0}
    )

    def __post_init__(self) -> None:
        if self.n_changepoints < 0:
            raise ValueError("n_changepoints must be >= 0")
        if not 0 < self.changepoint_range <= 1:
            raise ValueError("changepoint_range must be in (0, 1]")
        if self.seasonality_mode not in SEASONALITY_MODES:
            raise ValueError(f"seasonality_mode must be one of {SEASONALITY_MODES}")
        for name, order in self.fourier_orders.items():
            if name not in SEASONALITY_PERIODS_DAYS:
                raise ValueError(f"unknown seasonality {name!r}")
            if order < 1:
                raise ValueError(f"Fourier order for {name} must be >= 1 (omit to disable)")
        for group, scale in self.penalty_scales.items():
            if scale <= 0:
                raise ValueError(f"penalty scale for {group!r} must be > 0")

    def with_regressors(self, names: tuple[str, ...]) -> "ModelSpec":
        return replace(self, regressor_names=tuple(names))

    def to_dict(self) -> dict:
        return {
            "n_changepoints": self.n_changepoints,
            "changepoint_range": self.changepoint_range,
            "fourier_orders": dict(self.fourier_orders),
            "seasonality_mode": self.seasonality_mode,
            "holiday_windows": [w.to_dict() for w in self.holiday_windows],
            "regressor_names": list(self.regressor_names),
            "penalty_scales": dict(self.penalty_scales),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpec":
        return cls(
            n_changepoints=int(d["n_changepoints"]),
            changepoint_range=float(d["changepoint_range"]),
            fourier_orders={k: int(v) for k, v in d["fourier_orders"].items()},
            seasonality_mode=d["seasonality_mode"],
            holiday_windows=tuple(HolidayWindow.from_dict(w) for w in d["holiday_windows"]),
            regressor_names=tuple(d["regressor_names"]),
            penalty_scales={k: float(v) for k, v in d["penalty_scales"].items()},
        )
