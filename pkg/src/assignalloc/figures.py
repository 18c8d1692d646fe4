"""Render sweep and solution figures to image files.

File output only (Agg backend): the CLI drops these next to the CSVs so a
sweep directory is self-describing.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .bench import AggregateRecord
from .model import Instance, SolveReport

_CURVE_STYLE = {
    "alg2": dict(color="tab:blue", marker="o"),
    "alg1": dict(color="tab:cyan", marker="P"),
    "uu": dict(color="tab:orange", marker="s"),
    "ur": dict(color="tab:green", marker="^"),
    "ru": dict(color="tab:red", marker="v"),
    "rr": dict(color="tab:purple", marker="d"),
    "oracle": dict(color="tab:gray", marker="x"),
}


def render_ratio_figures(
    aggregates: Sequence[AggregateRecord], out_dir: str | os.PathLike
) -> list[Path]:
    """One figure per distribution: utility ratios of the fast solver against
    the pooled upper bound and each competitor, as a function of load."""
    out_dir = Path(out_dir)
    paths: list[Path] = []
    for dist in sorted({a.dist for a in aggregates}):
        rows = [a for a in aggregates if a.dist == dist]
        betas = sorted({a.beta for a in rows})
        fig, ax = plt.subplots(figsize=(6.0, 4.0))

        so_curve = [
            next((a.mean_ratio_to_so for a in rows if a.beta == b and a.algorithm == "alg2"), None)
            for b in betas
        ]
        if all(v is not None for v in so_curve):
            ax.plot(betas, so_curve, label="alg2 / SO", **_CURVE_STYLE["alg2"])

        for alg in ("alg1", "uu", "ur", "ru", "rr", "oracle"):
            curve = [
                next(
                    (a.mean_alg2_over_this for a in rows if a.beta == b and a.algorithm == alg),
                    None,
                )
                for b in betas
            ]
            if any(v is None for v in curve):
                continue
            ax.plot(betas, curve, label=f"alg2 / {alg}", **_CURVE_STYLE[alg])

        ax.set_xlabel("threads per server")
        ax.set_ylabel("utility ratio")
        ax.set_title(f"{dist} utility curves")
        ax.grid(True, alpha=0.3)
        ax.legend()
        fig.tight_layout()
        path = out_dir / f"ratio_vs_beta_{dist}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    return paths


def render_solution_figure(
    inst: Instance, report: SolveReport, out_path: str | os.PathLike
) -> Path:
    """Utility curves with each thread's chosen allocation marked."""
    out_path = Path(out_path)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    alpha = max(0.15, min(1.0, 8.0 / inst.n))
    for i, f in enumerate(inst.threads):
        xs = [x for x, _ in f.breakpoints]
        ys = [y for _, y in f.breakpoints]
        (line,) = ax.plot(xs, ys, alpha=alpha, linewidth=1.0)
        c = report.assignment.entries[i][1]
        ax.plot([c], [f.value(c)], marker="o", color=line.get_color(), markersize=4)
    ax.set_xlabel("allocated units")
    ax.set_ylabel("utility")
    ax.set_title(
        f"{report.algorithm or 'solution'}: F={report.total_utility:.6g}, "
        f"SO={report.super_optimal_value:.6g}"
    )
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
