"""Matplotlib companions to the deterministic SVG plots.

Each report directory gets a PNG rendering next to the CSV/SVG artifacts;
these are for human eyes only and carry no determinism guarantee.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def save_scatter(path, points, title="", xlabel="x", ylabel="y"):
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    if points:
        xs, ys = zip(*points)
        ax.plot(xs, ys, "o", ms=4, color="#1f6fb4")
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_stems(path, stems, title="", xlabel="x", ylabel="weight"):
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    if stems:
        xs, hs = zip(*stems)
        ax.stem(xs, hs, basefmt="C7-")
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_heatmap(path, x, y, z, title="", xlabel="Re s", ylabel="Im s"):
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    mesh = ax.pcolormesh(x, y, z, shading="auto", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="log10 |zeta|")
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
