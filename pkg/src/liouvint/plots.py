"""Figure rendering for the report paths: every CSV the CLI writes can be
accompanied by matplotlib figures saved next to it."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_trajectory_figures(traj, title: str, csv_path) -> list[Path]:
    """Energy-drift and phase-portrait figures next to a trajectory CSV."""
    base = Path(csv_path).with_suffix("")
    paths = []

    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    drift = np.asarray(traj.energies) - traj.energies[0]
    ax.plot(traj.times, drift, lw=0.9)
    ax.set_xlabel("t")
    ax.set_ylabel("H(t) - H(0)")
    ax.set_title(f"{title}: energy drift")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    p = base.parent / (base.name + "_energy.png")
    fig.savefig(p, dpi=130)
    plt.close(fig)
    paths.append(p)

    states = np.asarray(traj.states)
    n = states.shape[1] // 2
    fig, ax = plt.subplots(figsize=(4.6, 4.2))
    ax.plot(states[:, 0], states[:, n], lw=0.7)
    ax.set_xlabel("q1")
    ax.set_ylabel("p1")
    ax.set_title(f"{title}: phase portrait")
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    p = base.parent / (base.name + "_phase.png")
    fig.savefig(p, dpi=130)
    plt.close(fig)
    paths.append(p)
    return paths


def save_report_figure(reports, csv_path) -> Path:
    """Residual scatter (log scale) with per-point tolerances next to a
    report CSV."""
    base = Path(csv_path).with_suffix("")
    finite_floor = 1e-18
    values = [max(r.value, finite_floor) if np.isfinite(r.value) else np.nan
              for r in reports]
    tols = [r.tolerance for r in reports]
    x = np.arange(len(reports))

    fig, ax = plt.subplots(figsize=(max(5.0, 0.55 * len(reports) + 2.0), 3.8))
    colors = ["tab:blue" if r.passed else "tab:red" for r in reports]
    ax.scatter(x, values, c=colors, s=26, zorder=3)
    ax.plot(x, tols, ls="--", c="gray", lw=1.0, label="tolerance")
    ax.set_yscale("log")
    ax.set_ylabel("residual")
    ax.set_xticks(x)
    ax.set_xticklabels([r.subject for r in reports], rotation=60, ha="right",
                       fontsize=7)
    ax.grid(alpha=0.3, which="both")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    p = base.parent / (base.name + "_residuals.png")
    fig.savefig(p, dpi=130)
    plt.close(fig)
    return p
