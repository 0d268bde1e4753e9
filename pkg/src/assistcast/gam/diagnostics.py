"""Residual diagnostics on held-out data: distribution, Q-Q, outliers."""

from __future__ import annotations

from dataclasses import dataclass
from statistics import NormalDist

import numpy as np
import pandas as pd

from assistcast.gam.model import FittedModel, predict

_MAD_TO_STD = 1.4826  # normal-consistency factor
_HIST_BINS = 20
_THRESHOLD_FLOOR = 1e-8  # solver noise on near-perfect fits is not an outlier


@dataclass(frozen=True)
class ResidualDiagnostics:
    """Residual series e_t = yhat_t - y_t plus derived diagnostic views."""

    residuals: pd.Series  # indexed by hour_start
    hist_counts: np.ndarray
    hist_edges: np.ndarray
    qq_theoretical: np.ndarray
    qq_sample: np.ndarray
    outlier_mask: np.ndarray
    robust_std: float
    outlier_threshold: float

    @property
    def outlier_hours(self) -> pd.DatetimeIndex:
        return pd.DatetimeIndex(self.residuals.index[self.outlier_mask])

    def to_dict(self) -> dict:
        return {
            "hours": [ts.isoformat() for ts in self.residuals.index],
            "residuals": [float(v) for v in self.residuals],
            "hist_counts": [int(c) for c in self.hist_counts],
            "hist_edges": [float(e) for e in self.hist_edges],
            "qq_theoretical": [float(v) for v in self.qq_theoretical],
            "qq_sample": [float(v) for v in self.qq_sample],
            "outlier_hours": [ts.isoformat() for ts in self.outlier_hours],
            "robust_std": self.robust_std,
            "outlier_threshold": self.outlier_threshold,
        }


def residual_diagnostics(
    model: FittedModel, holdout: pd.DataFrame, outlier_factor: float = 4.0
) -> ResidualDiagnostics:
    """Compute residual diagnostics of a model on observed holdout rows.

    Q-Q pairs compare sorted residuals against a normal reference fitted to
    the residual mean/std.  Outliers are hours where |e_t| exceeds
    ``outlier_factor`` times the robust (MAD-based) std.
    """
    if len(holdout) == 0:
        raise ValueError("holdout must not be empty")
    if "y" not in holdout.columns:
        raise ValueError("holdout rows must carry observed y")

    yhat, _ = predict(model, holdout)
    y = holdout["y"].to_numpy(dtype=float)
    e = yhat - y
    index = pd.DatetimeIndex(holdout["hour_start"])
    residuals = pd.Series(e, index=index, name="residual")

    hist_counts, hist_edges = np.histogram(e, bins=_HIST_BINS)

    n = len(e)
    mean, std = float(e.mean()), float(e.std())
    probs = (np.arange(1, n + 1) - 0.5) / n
    nd = NormalDist(mu=mean, sigma=std if std > 0 else 1.0)
    qq_theoretical = np.array([nd.inv_cdf(p) for p in probs])
    qq_sample = np.sort(e)

    mad = float(np.median(np.abs(e - np.median(e))))
    robust_std = _MAD_TO_STD * mad
    threshold = max(outlier_factor * robust_std, _THRESHOLD_FLOOR)
    outliers = np.abs(e) > threshold

    return ResidualDiagnostics(
        residuals=residuals,
        hist_counts=hist_counts,
        hist_edges=hist_edges,
        qq_theoretical=qq_theoretical,
        qq_sample=qq_sample,
        outlier_mask=outliers,
        robust_std=robust_std,
        outlier_threshold=threshold,
    )
