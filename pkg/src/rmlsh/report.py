"""Figure rendering for sweep, evaluation, and bucket inspection outputs."""
from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .evaluation import RECALL_POINTS, SweepRow
from .retrieval import parse_label

_STYLE = {
    "lm": ("#7f7f7f", "D"),
    "rm": ("#1f77b4", "o"),
    "rrm": ("#d62728", "s"),
    "mp-rrm": ("#2ca02c", "^"),
}


def save_tradeoff_figure(rows: Sequence[SweepRow], path: str | Path) -> Path:
    """Mean P@5 against total scored postings entries, one series per system."""
    groups: dict[str, list[SweepRow]] = {}
    for row in rows:
        if row.error is not None:
            continue
        system = parse_label(row.label)["system"]
        groups.setdefault(system, []).append(row)
    fig, ax = plt.subplots(figsize=(7.2, 4.8))
    for system, got in groups.items():
        got = sorted(got, key=lambda r: r.postings_ops)
        color, marker = _STYLE.get(system, ("#333333", "x"))
        ax.plot(
            [r.postings_ops for r in got],
            [r.p_at_5 for r in got],
            marker=marker,
            color=color,
            linewidth=1.2,
            markersize=5,
            label=system.upper(),
        )
    ax.set_xscale("log")
    ax.set_xlabel("scored postings entries (total)")
    ax.set_ylabel("mean P@5")
    ax.grid(True, which="both", alpha=0.3)
    if ax.get_legend_handles_labels()[0]:
        ax.legend()
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def save_rp_figure(curves: Mapping[str, np.ndarray], path: str | Path) -> Path:
    """11-point interpolated recall-precision curves, one per run."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for label, curve in curves.items():
        ax.plot(RECALL_POINTS, curve, marker="o", markersize=4, linewidth=1.2, label=label)
    ax.set_xlabel("recall")
    ax.set_ylabel("interpolated precision")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def save_bucket_histogram(
    sizes_per_table: Sequence[np.ndarray], path: str | Path
) -> Path:
    """Histogram of bucket occupancies pooled over tables."""
    pooled = np.concatenate([np.asarray(s) for s in sizes_per_table])
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ax.hist(pooled, bins=min(50, max(5, int(pooled.max()))), color="#1f77b4", alpha=0.85)
    ax.set_xlabel("documents per bucket")
    ax.set_ylabel("buckets")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out
