"""Render comparison-report figures to image files."""
from __future__ import annotations

from pathlib import Path as FilePath
from typing import Any

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_METRICS = (
    ("energy_cost_usd", "Energy cost ($)", "energy"),
    ("travel_time_h", "Travel time (h)", "time"),
)

_COLORS = {
    "crptc": "#2a6fbb",
    "cdf": "#d95f02",
    "mintime": "#1b9e77",
    "actual": "#7570b3",
}


def render_comparison_figures(report: dict[str, Any], out_dir: str | FilePath) -> list[FilePath]:
    """One bar chart per O-D pair and metric; returns the written file paths."""
    out_dir = FilePath(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[FilePath] = []
    for pair in report["pairs"]:
        od = f"{pair['origin']}_{pair['dest']}"
        for key, label, suffix in _METRICS:
            names = [n for n in ("crptc", "cdf", "mintime", "actual") if n in pair["algorithms"]]
            values = [pair["algorithms"][n][key] for n in names]
            fig, ax = plt.subplots(figsize=(5, 3.2))
            ax.bar(names, values, color=[_COLORS[n] for n in names])
            ax.set_ylabel(label)
            ax.set_title(f"O-D {pair['origin']} → {pair['dest']}")
            for i, v in enumerate(values):
                ax.annotate(f"{v:.3f}", (i, v), ha="center", va="bottom", fontsize=8)
            fig.tight_layout()
            target = out_dir / f"{suffix}_{od}.png"
            fig.savefig(target, dpi=150)
            plt.close(fig)
            written.append(target)
    return written
