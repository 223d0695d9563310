"""Matplotlib figures for the report command (PNG, Agg backend)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from . import algebra  # noqa: E402

colors = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]

params = {
    "axes.prop_cycle": matplotlib.cycler(color=colors),
    "axes.labelsize": 9,
    "font.size": 8,
    "legend.fontsize": 7,
    "xtick.labelsize": 7,
    "ytick.labelsize": 7,
    "figure.figsize": [5.0, 5.0],
    "figure.dpi": 150,
    "savefig.dpi": 150,
    "lines.linewidth": 0.8,
}

# no timestamps or version strings in the files
_META = {"Software": None}


def _new(title):
    with plt.rc_context(params):
        fig, ax = plt.subplots()
    ax.set_aspect("equal")
    ax.set_title(title)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    return fig, ax


def _save(fig, path):
    path = Path(path)
    fig.savefig(path, metadata=_META)
    plt.close(fig)
    return path


def _scatter(ax, z, color, label=None, size=0.05):
    z = np.asarray(z)
    ax.scatter(z.real, z.imag, s=size, c=color, marker=".", linewidths=0, label=label)


def tiling_figure(base, neighbors, path):
    """The tile and its neighbouring lattice translates."""
    ring = algebra.ring_new(base.a)
    fig, ax = _new(f"tile and neighbours, a={base.a}, {base.system}")
    _scatter(ax, base.points, "black")
    for i, v in enumerate(sorted(neighbors)):
        _scatter(ax, base.points + algebra.embed(v, ring), colors[i % len(colors)], label=str(v))
    ax.legend(markerscale=60, loc="upper right", frameon=False)
    return _save(fig, path)


def boundary_figure(base, pieces, path):
    """The tile in grey with each boundary piece in its own colour."""
    fig, ax = _new(f"boundary pieces, a={base.a}, {base.system}")
    _scatter(ax, base.points, "0.8")
    for i, p in enumerate(pieces):
        _scatter(ax, p.points, colors[i % len(colors)], label=str(p.translate), size=0.5)
    ax.legend(markerscale=10, loc="upper right", frameon=False)
    return _save(fig, path)


def curve_figure(samples, contacts, path):
    """The parametrised boundary piece, coloured by the parameter."""
    t = np.array([float(s[0]) for s in samples])
    z = np.array([s[1] for s in samples])
    fig, ax = _new("parametrised boundary piece, a=2")
    sc = ax.scatter(z.real, z.imag, c=t, s=0.5, cmap="viridis", linewidths=0)
    ax.plot(z.real, z.imag, color="0.6", linewidth=0.2)
    for label, p in contacts:
        ax.plot([p.real], [p.imag], "r+", markersize=6)
        ax.annotate(label, (p.real, p.imag), fontsize=6, xytext=(3, 3), textcoords="offset points")
    fig.colorbar(sc, ax=ax, shrink=0.7, label="t")
    return _save(fig, path)


def ifs_figure(piece, images, path):
    """One boundary piece and its three contracted copies."""
    fig, ax = _new("boundary piece and its three images, a=2")
    _scatter(ax, piece.points, "0.75", size=2)
    for i, (name, z) in enumerate(images):
        _scatter(ax, z, colors[i], label=name, size=0.6)
    ax.legend(markerscale=8, loc="upper right", frameon=False)
    return _save(fig, path)
