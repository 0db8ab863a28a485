"""Figure rendering for report emission."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def render_model_histograms(hist_rows: list, path) -> Path:
    """Renders per-coefficient model histograms with their Gaussian references."""
    path = Path(path)
    coefficients = sorted({row["coefficient"] for row in hist_rows})
    ncols = min(4, len(coefficients))
    nrows = int(np.ceil(len(coefficients) / ncols))
    fig, axes = plt.subplots(nrows, ncols, figsize=(3.2 * ncols, 2.6 * nrows), squeeze=False)
    for idx, coef in enumerate(coefficients):
        ax = axes[idx // ncols][idx % ncols]
        rows = [r for r in hist_rows if r["coefficient"] == coef]
        lefts = [r["bin_left"] for r in rows]
        widths = [r["bin_right"] - r["bin_left"] for r in rows]
        ax.bar(lefts, [r["count"] for r in rows], width=widths, align="edge", alpha=0.6)
        centers = [r["bin_left"] + w / 2 for r, w in zip(rows, widths)]
        ax.plot(centers, [r["gaussian_reference"] for r in rows], color="red", lw=1.2)
        ax.set_title(f"coefficient {coef}", fontsize=9)
    for idx in range(len(coefficients), nrows * ncols):
        axes[idx // ncols][idx % ncols].axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_trial_scores(report, path) -> Path:
    """Renders per-trial R^2 with the median as a horizontal line."""
    path = Path(path)
    passed = [t for t in report.trials if t["passed"]]
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.scatter([t["trial"] for t in passed], [t["r_squared"] for t in passed], s=18)
    median = report.aggregates.get("median_r_squared")
    if median is not None:
        ax.axhline(median, color="red", lw=1, label=f"median = {median:.3f}")
        ax.legend(fontsize=8)
    ax.set_xlabel("trial")
    ax.set_ylabel("$R^2$")
    ax.set_title(report.config.get("method", ""), fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
