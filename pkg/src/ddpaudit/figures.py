"""Matplotlib figure rendering for the CLI report path.

Figures are written next to the delimited/JSON outputs. Rendering is
deterministic for identical inputs: fixed geometry, no wall-clock text,
Agg backend only.
"""

from __future__ import annotations

from typing import Mapping

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .reliability import DurationStats

_FIGSIZE = (6.4, 4.0)
_DPI = 120


def save_cdf_figure(stats_by_label: Mapping[str, DurationStats], path) -> None:
    """Step plot of duration CDFs, one line per group label."""
    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    for label in sorted(stats_by_label):
        stats = stats_by_label[label]
        if stats.status != "ok" or not stats.cdf_points:
            continue
        xs = [p[0] for p in stats.cdf_points]
        ys = [p[1] for p in stats.cdf_points]
        # anchor the step at zero probability before the first duration
        ax.step([xs[0]] + xs, [0.0] + ys, where="post", label=label)
    ax.set_xlabel("history duration (days)")
    ax.set_ylabel("fraction of users")
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_metrics_figure(sections: Mapping, path) -> None:
    """Bar chart of the scalar reliability metrics present in a report."""
    labels = []
    values = []
    comp = sections.get("completeness")
    if comp and comp.get("fraction") is not None:
        labels.append("completeness")
        values.append(comp["fraction"])
    jac = sections.get("jaccard")
    if jac:
        for aspect in ("date", "context", "overall"):
            labels.append(f"jaccard {aspect}")
            values.append(jac[aspect])
    ret = sections.get("retention")
    if ret and ret.get("overall") is not None:
        for aspect in ("date", "context", "overall"):
            if ret.get(aspect) is not None:
                labels.append(f"retention {aspect}")
                values.append(ret[aspect])
    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    if labels:
        ax.bar(range(len(labels)), values, color="#30688c")
        ax.set_xticks(range(len(labels)))
        ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
        ax.set_ylim(0.0, 1.05)
        for i, v in enumerate(values):
            ax.annotate(f"{v:.3f}", (i, v), ha="center", va="bottom", fontsize=7)
    else:
        ax.text(0.5, 0.5, "no metrics", ha="center", va="center")
    ax.set_ylabel("score")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
