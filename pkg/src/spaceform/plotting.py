"""PNG figures for the command line: ODE phase portraits and residual overviews.

Uses the non-interactive Agg backend so it runs headless.
"""
from __future__ import annotations

import os
import tempfile

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .residuals import ResidualReport  # noqa: E402


def _save_atomic(fig, path):
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(suffix=".png", dir=folder)
    os.close(fd)
    try:
        fig.savefig(tmp, format="png", dpi=120)
        os.replace(tmp, path)
    finally:
        plt.close(fig)
        if os.path.exists(tmp):
            os.unlink(tmp)
    return path


def phase_portrait(solution, path, samples=2000):
    """Plot κ' against κ for a profile solution, with the admissible band shaded.

    Parameters
    ----------
    solution : spaceform.profile_ode.ProfileSolution
    path : str
        Target PNG file, written atomically.
    samples : int
        Uniform samples of the dense output along the integrated span.
    """
    u = np.linspace(0.0, solution.u_end, samples)
    k, kp = solution.kappa_at(u)
    kmin, kmax = solution.band
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(10, 4.2))
    ax0.axvspan(kmin, kmax, color="0.92", label="admissible band")
    ax0.plot(k, kp, lw=1.0, color="C0")
    ax0.plot([kmax], [0.0], "o", color="C3", ms=4, label="start (κ max, κ' = 0)")
    ax0.set_xlabel("κ")
    ax0.set_ylabel("κ'")
    ax0.set_title(f"phase portrait, C̃₁ = {solution.c1_tilde:.10g}")
    ax0.legend(loc="best", fontsize=8)
    ax1.plot(u, k, lw=1.0, color="C0")
    for c in solution.crossings:
        ax1.axvline(c, color="0.7", lw=0.6)
    ax1.set_xlabel("u")
    ax1.set_ylabel("κ")
    title = "curvature profile"
    if solution.period is not None:
        title += f", period ≈ {solution.period:.10g}"
    ax1.set_title(title)
    fig.tight_layout()
    return _save_atomic(fig, path)


def residual_overview(report: ResidualReport, path):
    """Bar chart of ``max_rel`` per report entry (log scale) with claim tolerances marked."""
    names = [e.name for e in report.entries]
    vals = np.array([max(e.max_rel, 1e-18) for e in report.entries])
    colors = ["C0"] * len(names)
    tol_marks = []
    status = {}
    for v in report.verdicts:
        if v.entry in names and v.tolerance is not None:
            i = names.index(v.entry)
            tol_marks.append((i, v.tolerance))
            status[i] = "fail" if v.status == "fail" or status.get(i) == "fail" else v.status
    for i, s in status.items():
        colors[i] = "C3" if s == "fail" else "C2"
    fig, ax = plt.subplots(figsize=(max(6.0, 0.35 * len(names) + 2), 4.5))
    ax.bar(range(len(names)), vals, color=colors)
    if tol_marks:
        xi, tv = zip(*tol_marks)
        ax.scatter(xi, tv, marker="_", s=300, color="k", label="claim tolerance", zorder=3)
        ax.legend(loc="best", fontsize=8)
    ax.set_yscale("log")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=70, ha="right", fontsize=7)
    ax.set_ylabel("max relative residual")
    ax.set_title(f"{report.surface_id}: green = claim holds, red = claim fails")
    fig.tight_layout()
    return _save_atomic(fig, path)
