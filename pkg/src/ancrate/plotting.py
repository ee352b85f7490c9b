"""Figures rendered to files next to the CSV output (Agg backend, no display)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# fixed metadata keeps PNG bytes stable across runs
_META = {"Software": None}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_META)
    plt.close(fig)


def plot_table(header, rows, path, title="", ylabel="rate (bits/use)"):
    """Plot every column after the first against the first."""
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [r[0] for r in rows]
    for i, name in enumerate(header[1:], start=1):
        ax.plot(xs, [r[i] for r in rows], label=name)
    ax.set_xlabel(header[0])
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    _save(fig, path)


def plot_regions(polylines, path, title=""):
    """Plot rate-region boundaries, each closed down to the axes."""
    fig, ax = plt.subplots(figsize=(5, 5))
    for poly in polylines:
        a = poly.array
        xs = [0.0] + list(a[:, 0]) + [a[-1, 0]]
        ys = [a[0, 1]] + list(a[:, 1]) + [0.0]
        ax.plot(xs, ys, label=poly.label)
    ax.set_xlabel("R1 (bits/use)")
    ax.set_ylabel("R2 (bits/use)")
    ax.set_xlim(left=0)
    ax.set_ylim(bottom=0)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    _save(fig, path)
