"""
CC-Bench Visualizer Module

Creates the benchmark plots: winning-rate ranking bars and score-vs-parameter sweep curves.

author: ccbench maintainers
date: 2024
"""

import os
from typing import Optional

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from scoring import Ranking


class CcBenchVisualizer:
    """
    Visualizes benchmark results.

    Example:
        visualizer = CcBenchVisualizer(output_dir="output/")
        visualizer.plot_ranking(bundle.ranking)
        visualizer.plot_sweep(series, kind="buffer")
    """

    SWEEP_LABELS = {"buffer": "Buffer size (kB)",
                    "min_rtt": "Minimum RTT (ms)"}

    def __init__(self, output_dir: str = "output"):
        self.output_dir = output_dir
        os.makedirs(output_dir, exist_ok=True)

    def plot_ranking(self, ranking: Ranking, title: str = "Winning rates", save_path: Optional[str] = None) -> str:
        fig, ax = plt.subplots(figsize=(8, 0.5 * len(ranking.entries) + 2))

        y_pos = np.arange(len(ranking.entries))
        rates = [rate for _, rate in ranking.entries]
        colors = plt.cm.tab10(np.linspace(0, 1, max(len(rates), 1)))

        ax.barh(y_pos, rates, color=colors[:len(rates)])
        ax.set_yticks(y_pos)
        ax.set_yticklabels(ranking.schemes)
        ax.invert_yaxis()
        ax.set_xlim(0, 100)
        ax.set_xlabel('Winning rate (%)')
        ax.set_title(title)

        for i, rate in enumerate(rates):
            ax.text(rate + 1.0, i, "%.1f%%" % rate, va='center')

        plt.tight_layout()

        save_path = save_path or os.path.join(self.output_dir, "ranking.png")
        plt.savefig(save_path, dpi=150)
        plt.close()

        return save_path

    def plot_sweep(self, series: pd.DataFrame, kind: str, save_path: Optional[str] = None) -> str:
        """One power-score curve per scheme over the swept parameter (columns x, scheme, score)."""

        fig, ax = plt.subplots(figsize=(10, 6))

        for scheme, group in series.groupby("scheme", sort=True):
            group = group.sort_values("x")
            ax.plot(group["x"], group["score"], 'o-', linewidth=2, label=scheme)

        if kind == "buffer":
            ax.set_xscale('log', base=2)

        ax.set_xlabel(self.SWEEP_LABELS.get(kind, kind))
        ax.set_ylabel('Power score')
        ax.set_title('Power score vs. %s' % self.SWEEP_LABELS.get(kind, kind).lower())
        ax.legend()
        ax.grid(True, alpha=0.3)

        plt.tight_layout()

        save_path = save_path or os.path.join(self.output_dir, "sweep_%s.png" % kind)
        plt.savefig(save_path, dpi=150)
        plt.close()

        return save_path
