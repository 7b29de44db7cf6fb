"""Figures written next to the delimited report files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # fixed metadata keeps repeated runs byte-stable
    fig.savefig(path, dpi=120, bbox_inches="tight", metadata={"Software": None})
    plt.close(fig)
    return path


def plot_spectrum(label: str, N: int, row, entries, path) -> Path:
    """Y_m dimensions as bars beside a log-scaled heat map of T."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ms = np.arange(len(row))
    ax1.bar(ms, row, color="tab:blue")
    ax1.set_xticks(ms)
    ax1.set_xlabel("m")
    ax1.set_ylabel(r"dim $Y_m$")
    ax1.yaxis.set_major_locator(MaxNLocator(integer=True))
    ax1.set_title(f"{label}, N={N}: eigenspace dimensions")
    M = np.asarray(entries, dtype=float)
    im = ax2.imshow(np.log1p(M), cmap="viridis", interpolation="nearest")
    ax2.set_xlabel("source class")
    ax2.set_ylabel("target class")
    ax2.set_title("log(1 + T[D][C])")
    fig.colorbar(im, ax=ax2, shrink=0.8)
    return _save(fig, path)


def plot_molien(grid: dict[int, list[int]], path) -> Path:
    """One line per length N: a_N(m) against m."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for N in sorted(grid):
        vals = grid[N]
        ax.plot(range(1, len(vals) + 1), vals, marker="o", label=f"N={N}")
    ax.set_xlabel("m")
    ax.set_ylabel(r"$a_N(m)$")
    ax.xaxis.set_major_locator(MaxNLocator(integer=True))
    ax.yaxis.set_major_locator(MaxNLocator(integer=True))
    ax.legend(fontsize=7, ncol=2)
    ax.set_title("Molien coefficients from cumulative eigenspace dimensions")
    return _save(fig, path)
