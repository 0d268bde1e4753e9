"""Penalized least-squares fitting and prediction with component breakdown.

The objective is ``||y - X theta||^2 + sum_g (1/scale_g) ||theta_g||^2``
with the trend offset and base rate left unpenalized; changepoint
adjustments take the trend scale (a small-scale ridge standing in for
Laplace shrinkage).  Fitting is a deterministic direct solve: no random
initialization, so identical inputs give bitwise-identical coefficients.

In MULTIPLICATIVE mode seasonality and holidays scale the trend while
regressors stay additive::

    yhat = trend * (1 + seasonal + holiday fractions) + regressor terms

estimated by a fixed number of alternating least-squares passes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from assistcast.gam.design import (
    GROUP_HOLIDAYS,
    GROUP_REGRESSORS,
    GROUP_TREND_BASE,
    GROUP_TREND_DELTA,
    TrendBasis,
    build_design_matrix,
)
from assistcast.gam.spec import ADDITIVE, MULTIPLICATIVE, ModelSpec

SEASONAL_COMPONENT_GROUPS = ("daily", "weekly", "yearly", GROUP_HOLIDAYS)
COMPONENT_ORDER = ("trend", "daily", "weekly", "yearly", "holidays", "regressors")

_MULT_ALS_PASSES = 3


def penalized_lstsq(X: np.ndarray, y: np.ndarray, penalties: np.ndarray) -> np.ndarray:
    """Minimise ||y - X theta||^2 + theta' diag(penalties) theta.

    Solved through the augmented system [X; sqrt(D)] so zero-penalty columns
    are allowed; lstsq returns the minimum-norm solution deterministically.
    """
    penalized = np.flatnonzero(penalties > 0)
    if len(penalized):
        extra = np.zeros((len(penalized), X.shape[1]))
        extra[np.arange(len(penalized)), penalized] = np.sqrt(penalties[penalized])
        A = np.vstack([X, extra])
        b = np.concatenate([y, np.zeros(len(penalized))])
    else:
        A, b = X, y
    coef, *_ = np.linalg.lstsq(A, b, rcond=None)
    return coef


def _penalty_vector(groups: list[str], spec: ModelSpec) -> np.ndarray:
    scale_of = {
        GROUP_TREND_BASE: None,  # unpenalized
        GROUP_TREND_DELTA: spec.penalty_scales["trend"],
        "daily": spec.penalty_scales["seasonality"],
        "weekly": spec.penalty_scales["seasonality"],
        "yearly": spec.penalty_scales["seasonality"],
        GROUP_HOLIDAYS: spec.penalty_scales["holidays"],
        GROUP_REGRESSORS: spec.penalty_scales["regressors"],
    }
    out = np.zeros(len(groups))
    for i, g in enumerate(groups):
        scale = scale_of[g]
        out[i] = 0.0 if scale is None else 1.0 / scale
    return out


@dataclass(frozen=True)
class FittedModel:
    """Immutable estimated model; safe to share across threads."""

    spec: ModelSpec
    trend_basis: TrendBasis
    columns: tuple[str, ...]
    groups: tuple[str, ...]
    coef: np.ndarray
    y_scale: float
    residual_summary: dict
    scaler_hash: str | None = None

    def __post_init__(self) -> None:
        if len(self.coef) != len(self.columns):
            raise ValueError("coefficient vector length must equal design width")
        self.coef.setflags(write=False)

    def coef_for_group(self, group: str) -> np.ndarray:
        mask = np.array([g == group for g in self.groups])
        return self.coef[mask]

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "trend_basis": self.trend_basis.to_dict(),
            "columns": list(self.columns),
            "groups": list(self.groups),
            "coef": [float(c) for c in self.coef],
            "y_scale": self.y_scale,
            "residual_summary": self.residual_summary,
            "scaler_hash": self.scaler_hash,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FittedModel":
        return cls(
            spec=ModelSpec.from_dict(d["spec"]),
            trend_basis=TrendBasis.from_dict(d["trend_basis"]),
            columns=tuple(d["columns"]),
            groups=tuple(d["groups"]),
            coef=np.asarray(d["coef"], dtype=float),
            y_scale=float(d["y_scale"]),
            residual_summary=d["residual_summary"],
            scaler_hash=d.get("scaler_hash"),
        )


@dataclass(frozen=True)
class ComponentBreakdown:
    """Per-row contributions of each model component.

    ADDITIVE mode: all components are in count units and
    ``trend + daily + weekly + yearly + holidays + regressors == yhat_raw``.
    MULTIPLICATIVE mode: seasonal/holiday columns are dimensionless fractions
    and ``trend * (1 + fractions) + regressors == yhat_raw``.  ``yhat`` is
    ``yhat_raw`` clamped at the floor; clamping never alters the components.
    """

    mode: str
    frame: pd.DataFrame  # columns COMPONENT_ORDER + yhat_raw + yhat, indexed by hour

    def reconstruct(self) -> np.ndarray:
        f = self.frame
        if self.mode == ADDITIVE:
            return sum(f[c].to_numpy() for c in COMPONENT_ORDER)
        fractions = f["daily"] + f["weekly"] + f["yearly"] + f["holidays"]
        return (f["trend"] * (1.0 + fractions) + f["regressors"]).to_numpy()


def _component_name(group: str) -> str:
    if group in (GROUP_TREND_BASE, GROUP_TREND_DELTA):
        return "trend"
    if group == GROUP_REGRESSORS:
        return "regressors"
    return group  # daily / weekly / yearly / holidays


def _group_contributions(X: np.ndarray, groups: list[str], coef: np.ndarray) -> dict[str, np.ndarray]:
    out = {name: np.zeros(X.shape[0]) for name in COMPONENT_ORDER}
    for name in COMPONENT_ORDER:
        mask = np.array([_component_name(g) == name for g in groups])
        if mask.any():
            out[name] = X[:, mask] @ coef[mask]
    return out


def fit(train_panel: pd.DataFrame, spec: ModelSpec, *, scaler_hash: str | None = None) -> FittedModel:
    """Estimate the model on a single station's training rows.

    ``train_panel`` needs ``hour_start``, ``y`` and every regressor named in
    the spec (already scaled).  Requires at least 2x the design width in
    rows; non-finite values anywhere are an error.
    """
    timestamps = pd.DatetimeIndex(train_panel["hour_start"])
    y = train_panel["y"].to_numpy(dtype=float)
    if not np.isfinite(y).all():
        raise ValueError("non-finite values in y")

    trend_basis = TrendBasis.from_history(timestamps, spec)
    X, labels, groups = build_design_matrix(timestamps, spec, train_panel, trend_basis)
    if not np.isfinite(X).all():
        raise ValueError("non-finite values in design matrix")
    if len(y) < 2 * X.shape[1]:
        raise ValueError(
            f"need at least {2 * X.shape[1]} training rows for design width {X.shape[1]}, "
            f"got {len(y)}"
        )

    y_scale = float(np.abs(y).max()) or 1.0
    ys = y / y_scale
    penalties = _penalty_vector(groups, spec)

    if spec.seasonality_mode == ADDITIVE:
        coef = penalized_lstsq(X, ys, penalties)
    else:
        coef = _fit_multiplicative(X, ys, groups, penalties)

    yhat_raw = _raw_prediction(X, coef, groups, spec.seasonality_mode) * y_scale
    resid = yhat_raw - y
    summary = {
        "n": int(len(resid)),
        "mean": float(resid.mean()),
        "std": float(resid.std()),
        "mae": float(np.abs(resid).mean()),
    }
    return FittedModel(
        spec=spec,
        trend_basis=trend_basis,
        columns=tuple(labels),
        groups=tuple(groups),
        coef=coef,
        y_scale=y_scale,
        residual_summary=summary,
        scaler_hash=scaler_hash,
    )


def _split_masks(groups: list[str] | tuple[str, ...]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    trend = np.array([g in (GROUP_TREND_BASE, GROUP_TREND_DELTA) for g in groups])
    seasonal = np.array([g in SEASONAL_COMPONENT_GROUPS for g in groups])
    regress = np.array([g == GROUP_REGRESSORS for g in groups])
    return trend, seasonal, regress


def _fit_multiplicative(
    X: np.ndarray, ys: np.ndarray, groups: list[str], penalties: np.ndarray
) -> np.ndarray:
    """Alternating least squares for trend-scaling seasonality.

    A fixed pass count keeps the estimate deterministic; the additive solve
    provides the starting trend.
    """
    trend_m, seas_m, reg_m = _split_masks(groups)
    coef = penalized_lstsq(X, ys, penalties)

    X_t, X_s, X_r = X[:, trend_m], X[:, seas_m], X[:, reg_m]
    p_t, p_s, p_r = penalties[trend_m], penalties[seas_m], penalties[reg_m]
    theta_t = coef[trend_m]

    theta_s = np.zeros(X_s.shape[1])
    theta_r = np.zeros(X_r.shape[1])
    for _ in range(_MULT_ALS_PASSES):
        trend = X_t @ theta_t
        # seasonal fractions scale the trend; regressors stay additive
        design = np.hstack([trend[:, None] * X_s, X_r])
        theta_sr = penalized_lstsq(design, ys - trend, np.concatenate([p_s, p_r]))
        theta_s, theta_r = theta_sr[: X_s.shape[1]], theta_sr[X_s.shape[1]:]

        fractions = X_s @ theta_s
        design_t = X_t * (1.0 + fractions)[:, None]
        theta_t = penalized_lstsq(design_t, ys - X_r @ theta_r, p_t)

    out = np.zeros(X.shape[1])
    out[trend_m], out[seas_m], out[reg_m] = theta_t, theta_s, theta_r
    return out


def _raw_prediction(
    X: np.ndarray, coef: np.ndarray, groups: list[str] | tuple[str, ...], mode: str
) -> np.ndarray:
    """Unclamped prediction in scaled-y units from a prebuilt design matrix."""
    if mode == ADDITIVE:
        return X @ coef
    trend_m, seas_m, reg_m = _split_masks(groups)
    trend = X[:, trend_m] @ coef[trend_m]
    fractions = X[:, seas_m] @ coef[seas_m]
    regress = X[:, reg_m] @ coef[reg_m]
    return trend * (1.0 + fractions) + regress


def predict(
    model: FittedModel, rows: pd.DataFrame, floor: float | None = 0.0
) -> tuple[np.ndarray, ComponentBreakdown]:
    """Predict rows (hour_start + scaled regressors) with full decomposition.

    The trend extrapolates its final piecewise-linear segment beyond the
    training span.  ``floor`` clamps the returned yhat (demand is a count);
    pass None to disable.  Components are stored unclamped.
    """
    timestamps = pd.DatetimeIndex(rows["hour_start"])
    X, _, groups = build_design_matrix(timestamps, model.spec, rows, model.trend_basis)
    if list(groups) != list(model.groups):
        raise ValueError("design groups do not match the fitted model")
    if not np.isfinite(X).all():
        raise ValueError("non-finite values in prediction design matrix")

    contrib = _group_contributions(X, list(groups), model.coef)
    frame = pd.DataFrame(index=timestamps)
    if model.spec.seasonality_mode == ADDITIVE:
        for name in COMPONENT_ORDER:
            frame[name] = contrib[name] * model.y_scale
        yhat_raw = sum(frame[c].to_numpy() for c in COMPONENT_ORDER)
    else:
        frame["trend"] = contrib["trend"] * model.y_scale
        for name in ("daily", "weekly", "yearly", "holidays"):
            frame[name] = contrib[name]  # dimensionless fractions
        frame["regressors"] = contrib["regressors"] * model.y_scale
        fractions = (frame["daily"] + frame["weekly"] + frame["yearly"] + frame["holidays"]).to_numpy()
        yhat_raw = frame["trend"].to_numpy() * (1.0 + fractions) + frame["regressors"].to_numpy()

    frame["yhat_raw"] = yhat_raw
    yhat = yhat_raw if floor is None else np.maximum(yhat_raw, floor)
    frame["yhat"] = yhat
    frame.index.name = "hour_start"
    return yhat, ComponentBreakdown(mode=model.spec.seasonality_mode, frame=frame)
