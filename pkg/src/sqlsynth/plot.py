"""Histogram figures for calibration reports (optional matplotlib dependency)."""
from __future__ import annotations


def plot_calibration(result, path):
    import logging

    import matplotlib

    logging.getLogger("matplotlib").setLevel(logging.WARNING)

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    edges = result.shared_edges()
    fig, ax = plt.subplots(figsize=(6, 3.5))
    series = [("real", result.reference)] + [(f"γ={g:g}", r) for g, r in result.candidates.items()]
    if result.baseline is not None:
        series.append(("uniform", result.baseline))
    for label, report in series:
        ax.hist(report.means, bins=edges, alpha=0.5, label=label)
    ax.set_xlabel("mean table count per resample")
    ax.set_ylabel("resamples")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
