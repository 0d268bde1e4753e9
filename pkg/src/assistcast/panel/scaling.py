"""Column scaling fitted on TRAIN rows only and applied unchanged thereafter."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

SCALING_METHODS = ("STANDARDISE", "MINMAX", "NONE")


@dataclass(frozen=True)
class Scaler:
    """Immutable per-column (center, spread) statistics.

    STANDARDISE maps x to (x - mean) / std with population std; MINMAX maps
    to (x - min) / (max - min).  Columns whose spread is zero pass through
    unscaled (their center is recorded as 0 / spread 1).
    """

    method: str
    columns: tuple[str, ...]
    center: dict[str, float] = field(default_factory=dict)
    spread: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.method not in SCALING_METHODS:
            raise ValueError(f"unknown scaling method {self.method!r}")
        for col in self.columns:
            if col not in self.center or col not in self.spread:
                raise ValueError(f"scaler missing statistics for column {col!r}")
            if not self.spread[col] > 0:
                raise ValueError(f"scaler spread for {col!r} must be positive")

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "columns": list(self.columns),
            "center": dict(self.center),
            "spread": dict(self.spread),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Scaler":
        return cls(
            method=d["method"],
            columns=tuple(d["columns"]),
            center={k: float(v) for k, v in d["center"].items()},
            spread={k: float(v) for k, v in d["spread"].items()},
        )


def fit_scaler(train_rows: pd.DataFrame, columns: list[str], method: str = "STANDARDISE") -> Scaler:
    """Learn scaling statistics from TRAIN rows for the given columns."""
    if method not in SCALING_METHODS:
        raise ValueError(f"unknown scaling method {method!r}")
    if len(train_rows) == 0:
        raise ValueError("cannot fit scaler on empty training data")
    missing = [c for c in columns if c not in train_rows.columns]
    if missing:
        raise ValueError(f"training rows missing columns: {missing}")

    center: dict[str, float] = {}
    spread: dict[str, float] = {}
    for col in columns:
        x = train_rows[col].to_numpy(dtype=float)
        if not np.isfinite(x).all():
            raise ValueError(f"non-finite values in column {col!r}; impute before scaling")
        if method == "STANDARDISE":
            c, s = float(x.mean()), float(x.std())  # population std
        elif method == "MINMAX":
            c, s = float(x.min()), float(x.max() - x.min())
        else:
            c, s = 0.0, 1.0
        if s <= 0:  # constant column passes through unscaled
            c, s = 0.0, 1.0
        center[col], spread[col] = c, s
    return Scaler(method=method, columns=tuple(columns), center=center, spread=spread)


def apply_scaler(scaler: Scaler, rows: pd.DataFrame) -> pd.DataFrame:
    """Transform rows with TRAIN-fitted statistics; never refits."""
    missing = [c for c in scaler.columns if c not in rows.columns]
    if missing:
        raise ValueError(f"rows missing scaled columns: {missing}")
    out = rows.copy()
    for col in scaler.columns:
        out[col] = (out[col].to_numpy(dtype=float) - scaler.center[col]) / scaler.spread[col]
    return out
