"""Figure rendering for report outputs: written next to the CSV exports.

All renderers return a Figure; :func:`save_figure` writes PNG.  matplotlib
is forced onto the Agg backend so reports render identically headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
from matplotlib.colors import ListedColormap
from matplotlib.patches import Patch

from assistcast.evalx import BASELINE_LABEL
from assistcast.gam.diagnostics import ResidualDiagnostics
from assistcast.gam.model import ComponentBreakdown
from assistcast.workforce import AMBER, GREEN, RED, RagHeatmap

RAG_COLORS = {GREEN: "#2e7d32", AMBER: "#f9a825", RED: "#c62828"}

_COMPONENT_PANELS = ["trend", "daily", "weekly", "yearly", "holidays", "regressors"]


def save_figure(fig: plt.Figure, path: str | Path, dpi: int = 150) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=dpi, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_error_by_horizon(report: pd.DataFrame, bucket_order: list[str]) -> plt.Figure:
    """Hourly/daily error panels: aRMSE solid, MAE dashed, one line set per station."""
    order = [BASELINE_LABEL] + [b for b in bucket_order if b != BASELINE_LABEL]
    fig, axes = plt.subplots(1, 2, figsize=(11, 4.2), sharex=True)
    for ax, resolution in zip(axes, ("hourly", "daily")):
        sub = report[report["resolution"] == resolution]
        for station, grp in sub.groupby("station"):
            grp = grp.set_index("horizon").reindex(order)
            x = np.arange(len(order))
            line, = ax.plot(x, grp["armse"], marker="o", label=f"{station} aRMSE")
            ax.plot(x, grp["mae"], marker="s", linestyle="--",
                    color=line.get_color(), alpha=0.7, label=f"{station} MAE")
        ax.set_xticks(np.arange(len(order)))
        ax.set_xticklabels(order, rotation=30, ha="right")
        ax.set_title(f"{resolution} resolution")
        ax.set_ylabel("error")
        ax.grid(alpha=0.3)
    axes[0].legend(fontsize=7)
    fig.suptitle("Forecast error by horizon bucket")
    fig.tight_layout()
    return fig


def plot_components(breakdown: ComponentBreakdown, title: str = "") -> plt.Figure:
    """Stacked per-component panels plus the total forecast."""
    frame = breakdown.frame
    panels = [c for c in _COMPONENT_PANELS if c in frame.columns]
    fig, axes = plt.subplots(len(panels) + 1, 1, figsize=(10, 1.8 * (len(panels) + 1)), sharex=True)
    axes[0].plot(frame.index, frame["yhat"], lw=0.8, color="tab:blue")
    axes[0].set_ylabel("forecast")
    for ax, name in zip(axes[1:], panels):
        ax.plot(frame.index, frame[name], lw=0.8, color="tab:gray")
        ax.set_ylabel(name)
    for ax in axes:
        ax.grid(alpha=0.3)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    return fig


def plot_residual_diagnostics(diag: ResidualDiagnostics, title: str = "") -> plt.Figure:
    """Histogram, Q-Q against the fitted normal, residuals over time with
    outliers circled."""
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.6))

    centers = 0.5 * (diag.hist_edges[:-1] + diag.hist_edges[1:])
    axes[0].bar(centers, diag.hist_counts, width=np.diff(diag.hist_edges), color="tab:blue", alpha=0.8)
    axes[0].set_title("residual distribution")

    axes[1].scatter(diag.qq_theoretical, diag.qq_sample, s=6, alpha=0.6)
    lims = [min(diag.qq_theoretical.min(), diag.qq_sample.min()),
            max(diag.qq_theoretical.max(), diag.qq_sample.max())]
    axes[1].plot(lims, lims, color="tab:red", lw=1)
    axes[1].set_title("Q-Q plot")

    r = diag.residuals
    axes[2].plot(r.index, r.values, lw=0.5, color="tab:gray")
    out = r[diag.outlier_mask]
    axes[2].scatter(out.index, out.values, s=60, facecolors="none",
                    edgecolors="tab:red", label=f"outliers ({len(out)})")
    axes[2].legend(fontsize=7)
    axes[2].set_title("residuals over time")

    for ax in axes:
        ax.grid(alpha=0.3)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    return fig


def plot_heatmap(heatmap: RagHeatmap) -> plt.Figure:
    """Day x hour grid of Green/Amber/Red staffing classifications."""
    grid = heatmap.grid("rag")
    code_of = {GREEN: 0.0, AMBER: 1.0, RED: 2.0}
    coded = grid.apply(lambda s: s.map(code_of)).to_numpy(dtype=float)
    fig, ax = plt.subplots(figsize=(max(6, 0.22 * len(grid)), 4.5))
    cmap = ListedColormap([RAG_COLORS[GREEN], RAG_COLORS[AMBER], RAG_COLORS[RED]])
    ax.imshow(coded.T, aspect="auto", cmap=cmap, vmin=0, vmax=2, origin="lower")
    ax.set_yticks(np.arange(len(grid.columns)))
    ax.set_yticklabels([f"{h:02d}:00" for h in grid.columns], fontsize=6)
    step = max(1, len(grid.index) // 12)
    ax.set_xticks(np.arange(0, len(grid.index), step))
    ax.set_xticklabels([d.strftime("%d %b") for d in grid.index[::step]], rotation=45,
                       ha="right", fontsize=6)
    ax.set_title(f"Staffing RAG heatmap: {heatmap.station}")
    legend = [Patch(color=RAG_COLORS[k], label=k.title()) for k in (GREEN, AMBER, RED)]
    ax.legend(handles=legend, loc="upper right", fontsize=6)
    fig.tight_layout()
    return fig


def plot_trajectory(trajectory: pd.DataFrame, title: str = "") -> plt.Figure:
    """Hourly forecast line, coloured by serving bucket."""
    fig, ax = plt.subplots(figsize=(11, 3.6))
    for bucket, grp in trajectory.groupby("bucket", sort=False):
        ax.plot(grp["hour_start"], grp["yhat"], lw=0.8, label=bucket)
    ax.set_ylabel("forecast assists / hour")
    ax.legend(fontsize=7)
    ax.grid(alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return fig
