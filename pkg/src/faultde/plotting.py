"""Matplotlib renderings of curves, trajectories, and DE-vs-MC comparisons.

The CSV files carry the raw values; these helpers turn them into figures
on disk (log-scale gamma axes, arrow fields) for quick inspection.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .threshold import CurvePoint

_LOG_FLOOR = 1e-16


def _clipped(gammas: Sequence[float]) -> list[float]:
    # zero gammas would vanish from a log axis; pin them at the floor
    return [max(g, _LOG_FLOOR) for g in gammas]


def save_curve_figure(
    series: Sequence[tuple[str, Sequence[CurvePoint]]],
    path: str | Path,
    title: str | None = None,
) -> None:
    fig, ax = plt.subplots(figsize=(7, 5))
    for label, points in series:
        ax.semilogy(
            [p.epsilon for p in points],
            _clipped([p.gamma for p in points]),
            marker=".",
            linewidth=1.0,
            label=label,
        )
    ax.set_xlabel("erasure probability")
    ax.set_ylabel("asymptotic error probability")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_trajectory_figure(
    field: Sequence[tuple[float, Sequence[tuple[float, float]]]],
    path: str | Path,
    title: str | None = None,
) -> None:
    """Arrow field of (p(0), p(1)) per iteration, one polyline per epsilon."""
    fig, ax = plt.subplots(figsize=(7, 5))
    for _, pairs in field:
        xs = [p0 for p0, _ in pairs]
        ys = [p1 for _, p1 in pairs]
        ax.plot(xs, ys, linewidth=0.8, alpha=0.7)
        for (x0, y0), (x1, y1) in zip(pairs, pairs[1:]):
            ax.annotate(
                "",
                xy=(x1, y1),
                xytext=(x0, y0),
                arrowprops=dict(arrowstyle="->", lw=0.6, alpha=0.6),
            )
    ax.set_xlabel("p(0)")
    ax.set_ylabel("p(1)")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_compare_figure(
    rows: Sequence[tuple[float, float, float, float | None]],
    path: str | Path,
    title: str | None = None,
) -> None:
    """DE curve with MC means and error bars; rows are (eps, de, mc, stddev)."""
    fig, ax = plt.subplots(figsize=(7, 5))
    eps = [r[0] for r in rows]
    ax.semilogy(eps, _clipped([r[1] for r in rows]), "-", label="density evolution")
    errs = [r[3] if r[3] is not None else 0.0 for r in rows]
    ax.errorbar(
        eps,
        _clipped([r[2] for r in rows]),
        yerr=errs,
        fmt="o",
        markersize=4,
        capsize=3,
        label="Monte Carlo",
    )
    ax.set_xlabel("erasure probability")
    ax.set_ylabel("error probability")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
