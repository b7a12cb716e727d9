"""Static figures written next to the textual reports."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

from .report import RigidityReport  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
}


def plot_rounds(report: RigidityReport, path: str | Path, name: str = "") -> Path:
    """Observed ranks per round against the thresholds ``t`` and ``s``."""
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, (ax_l, ax_g) = plt.subplots(1, 2, figsize=(7, 2.8))
        local = report.round_records["local"]
        ax_l.plot([r.index for r in local], [r.rigidity_rank for r in local], "o-", ms=3, label="rank R")
        if report.t is not None:
            ax_l.axhline(report.t, color="k", ls="--", lw=0.8, label=f"t = {report.t}")
        ax_l.set_title(f"local: {report.verdicts['local'].kind}")
        ax_l.set_xlabel("round")
        ax_l.set_ylabel("rank")

        glob = report.round_records["global"]
        kept = [r for r in glob if not r.rejected]
        ax_g.plot([r.index for r in kept], [r.stress_rank for r in kept], "o-", ms=3, label="rank of stress")
        rejected = [r.index for r in glob if r.rejected]
        if rejected:
            ax_g.plot(rejected, [0] * len(rejected), "x", color="tab:red", label="rejected")
        if report.s is not None:
            ax_g.axhline(report.s, color="k", ls="--", lw=0.8, label=f"s = {report.s}")
        ax_g.set_title(f"global: {report.verdicts['global'].kind}")
        ax_g.set_xlabel("round")
        for ax in (ax_l, ax_g):
            ax.set_ylim(bottom=0)
            ax.xaxis.set_major_locator(MaxNLocator(integer=True))
            ax.yaxis.set_major_locator(MaxNLocator(integer=True))
            if ax.lines:
                ax.legend(loc="best")
        if name:
            fig.suptitle(f"{name} (d={report.dim})")
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path


def plot_batch(names: Sequence[str], reports: Sequence[RigidityReport | None], path: str | Path) -> Path:
    """Stress-kernel dimensions per graph, with the ``d + 1`` floor marked."""
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(max(4.0, 0.6 * len(names) + 1.5), 3.0))
        xs = range(len(names))
        width = 0.38
        kmin = [r.diagnostics.k_min if r and r.diagnostics.k_min is not None else 0 for r in reports]
        ksh = [r.diagnostics.k_sh if r and r.diagnostics.k_sh is not None else 0 for r in reports]
        ax.bar([x - width / 2 for x in xs], kmin, width, label="k_min")
        ax.bar([x + width / 2 for x in xs], ksh, width, label="k_sh")
        for x, r in zip(xs, reports):
            if r is None:
                ax.text(x, 0.2, "error", ha="center", rotation=90, color="tab:red")
                continue
            ax.hlines(r.dim + 1, x - 0.45, x + 0.45, colors="k", lw=0.8)
            mark = "GR" if r.globally_rigid else "not GR"
            ax.text(x, max(kmin[x], ksh[x]) + 0.2, mark, ha="center", fontsize=7)
        ax.set_xticks(list(xs))
        ax.set_xticklabels(names, rotation=30, ha="right")
        ax.set_ylabel("kernel dimension")
        if names:
            ax.legend()
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
    return path
