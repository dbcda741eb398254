"""Render summary tables to PNG figures.

Rendering is headless (Agg backend, selected before pyplot import) and file
oriented: each function takes summary rows and writes one figure. The same
numbers also ship as ``.dat`` files for users who prefer gnuplot; these
figures are the zero-setup view.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bench import SummaryRow

_STYLE = {"l1": ("tab:blue", "o"), "l21": ("tab:red", "s")}
_DPI = 150


def _series(rows: list[SummaryRow], norm_choice: str, attr: str):
    pts = [
        (row.sampling_pct, getattr(row, attr))
        for row in rows
        if row.norm == norm_choice and not math.isnan(getattr(row, attr))
    ]
    pts.sort()
    return [p[0] for p in pts], [p[1] for p in pts]


def _plot_metric(rows: list[SummaryRow], path: str | Path, attr: str,
                 ylabel: str, title: str, logy: bool) -> Path:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    plotted = False
    for norm_choice, (color, marker) in _STYLE.items():
        x, y = _series(rows, norm_choice, attr)
        if not x:
            continue
        plotted = True
        ax.plot(x, y, color=color, marker=marker, linestyle="-", label=norm_choice)
    if not plotted:
        plt.close(fig)
        raise ValueError("no finite data points to plot")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel("sampling percentage")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=_DPI)
    plt.close(fig)
    return out


def plot_mse_vs_sampling(rows: list[SummaryRow], path: str | Path) -> Path:
    """Median relative MSE against sampling percentage, one curve per norm."""
    return _plot_metric(
        rows, path, "median_mse",
        ylabel="median relative MSE",
        title="Channel estimation error vs sampling",
        logy=True,
    )


def plot_runtime_vs_sampling(rows: list[SummaryRow], path: str | Path) -> Path:
    """Median solver runtime against sampling percentage, one curve per norm."""
    return _plot_metric(
        rows, path, "median_runtime_seconds",
        ylabel="median runtime (s)",
        title="Solver runtime vs sampling",
        logy=False,
    )
