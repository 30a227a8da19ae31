"""
SVG line and scatter plots for solver and experiment reports.

Output bytes depend only on the data: fixed hash salt, no date metadata.
"""

import io
from typing import Dict, List, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from utils.io import atomic_write  # noqa: E402

plt.rcParams['svg.hashsalt'] = 'hql'
plt.rcParams['svg.fonttype'] = 'none'


def _save_svg(fig, path: str) -> str:
    buffer = io.StringIO()
    fig.savefig(buffer, format='svg', metadata={'Date': None, 'Creator': None})
    plt.close(fig)
    return atomic_write(path, buffer.getvalue())


def plot_residual_history(residuals: Sequence[float], path: str, title: str = "Newton residual") -> str:
    fig, ax = plt.subplots(figsize=(6, 4))
    positive = [max(r, 1e-300) for r in residuals]
    ax.semilogy(range(len(positive)), positive, marker='o')
    ax.set_xlabel("iteration (all continuation stages)")
    ax.set_ylabel("residual sup-norm")
    ax.set_title(title)
    ax.grid(True, which='both', alpha=0.3)
    return _save_svg(fig, path)


def plot_family_scatter(series: Dict[str, List[Tuple[float, float]]], path: str,
                        xlabel: str, ylabel: str, title: str) -> str:
    """One polyline with markers per family, in insertion order"""
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, points in series.items():
        if not points:
            continue
        xs, ys = zip(*points)
        ax.plot(xs, ys, marker='o', label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    if series:
        ax.legend()
    return _save_svg(fig, path)
