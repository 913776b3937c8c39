"""Figures for benchmark summaries.

Only the Agg backend is used so figures render headless, and PNG metadata
is stripped so identical data gives byte-identical files.
"""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
from matplotlib import pyplot as plt  # noqa: E402

from .bench import REFERENCE_AVERAGES  # noqa: E402

SERIES = (
    ("obdd_nodes", "OBDD nodes", 0, "tab:blue"),
    ("cnf_clauses", "CNF clauses", 1, "tab:orange"),
    ("mcs_count", "MCS per instance", 2, "tab:green"),
)


def plot_bench_summary(rows: Sequence[dict], path, reference: bool = True) -> Path:
    """Log-scale averages per feature count, optionally with the published ones."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4), dpi=100)
    sizes = [row["n"] for row in rows]
    for key, label, ref_idx, color in SERIES:
        pts = [(n, row[key]) for n, row in zip(sizes, rows) if row[key]]
        if pts:
            xs, ys = zip(*pts)
            ax.plot(xs, ys, marker="o", color=color, label=label)
        if reference:
            ref = [(n, REFERENCE_AVERAGES[n][ref_idx]) for n in sizes if n in REFERENCE_AVERAGES]
            if ref:
                xs, ys = zip(*ref)
                ax.plot(xs, ys, linestyle="none", marker="x", color=color,
                        label=f"{label} (reference)")
    ax.set_yscale("log")
    ax.set_xlabel("features")
    ax.set_ylabel("average")
    ax.set_xticks(sizes)
    ax.grid(True, which="major", alpha=0.3)
    ax.legend(fontsize="small", frameon=False)
    fig.tight_layout()
    fig.savefig(path, format="png", metadata={"Software": None})
    plt.close(fig)
    return path


def plot_mcs_scatter(records, path) -> Path:
    """CNF size against MCS count, one point per benchmarked instance."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(5, 4), dpi=100)
    pts = [(r.cnf_clauses, r.mcs_count, r.n) for r in records if r.mcs_count]
    if pts:
        xs, ys, ns = zip(*pts)
        sc = ax.scatter(xs, ys, c=ns, cmap="viridis", s=18)
        fig.colorbar(sc, ax=ax, label="features")
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel("CNF clauses")
    ax.set_ylabel("MCS count")
    fig.tight_layout()
    fig.savefig(path, format="png", metadata={"Software": None})
    plt.close(fig)
    return path
