"""Figure of per-check wall times coloured by verdict."""
from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402

from .checks import CheckReport  # noqa: E402

VERDICT_COLORS = {"pass": "#2b8a3e", "fail": "#c92a2a", "error": "#e67700", "unverified": "#868e96"}


def plot_reports(reports: Sequence[CheckReport], path: str, title: str = "") -> None:
    """Horizontal bars, one per report, on a log time axis."""
    labels = [f"{r.check} {r.family}" for r in reports]
    times = [max(r.millis, 1e-3) for r in reports]
    colors = [VERDICT_COLORS.get(r.verdict, "#000000") for r in reports]
    height = max(2.5, 0.22 * len(reports) + 1.2)
    fig, ax = plt.subplots(figsize=(9, height))
    ypos = range(len(reports))
    ax.barh(list(ypos), times, color=colors)
    ax.set_yticks(list(ypos))
    ax.set_yticklabels(labels, fontsize=6)
    ax.invert_yaxis()
    ax.set_xscale("log")
    ax.set_xlabel("wall time (ms)")
    if title:
        ax.set_title(title)
    present = sorted({r.verdict for r in reports})
    ax.legend(handles=[Patch(color=VERDICT_COLORS[v], label=v) for v in present], loc="lower right", fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
