"""SVG figures for distributions and exponent sweeps.

Output is byte-stable across runs: fixed hash salt, no date metadata, text
kept as ``<text>`` elements.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.ticker import LogLocator  # noqa: E402

from .stats_fit import ccdf_counts  # noqa: E402

SCALES = ("linear", "log")
RC = {
    "svg.hashsalt": "dagtopo",
    "svg.fonttype": "none",
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def parse_scales(spec):
    """``"log-log"``, ``"lin-log"`` ... -> ``(xscale, yscale)``."""
    names = {"lin": "linear", "linear": "linear", "log": "log"}
    try:
        x, y = spec.split("-")
        return names[x], names[y]
    except (ValueError, KeyError):
        raise ValueError(f"scale spec must look like 'log-log' or 'lin-log', got {spec!r}") from None


def _apply_scale(ax, xscale, yscale):
    for axis, scale in (("x", xscale), ("y", yscale)):
        if scale not in SCALES:
            raise ValueError(f"unknown axis scale {scale!r}")
        getattr(ax, f"set_{axis}scale")(scale)
        if scale == "log":
            getattr(ax, f"{axis}axis").set_major_locator(LogLocator(base=10, numticks=15))


def distribution_figure(h, xscale="log", yscale="log", title=None, xlabel="value"):
    values = h.values.astype(float)
    counts = h.counts.astype(float)
    tail = ccdf_counts(h).astype(float)
    if xscale == "log":
        keep = values > 0
        values, counts, tail = values[keep], counts[keep], tail[keep]
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot(values, counts, "o", ms=3, label="count", color="tab:blue")
        ax.step(values, tail, where="post", label="count >= value", color="tab:red")
        _apply_scale(ax, xscale, yscale)
        ax.set_xlabel(xlabel)
        ax.set_ylabel("nodes")
        if title:
            ax.set_title(title)
        ax.legend(frameon=False)
        fig.tight_layout()
    return fig


def sweep_figure(sweep, xscale="log", yscale="linear", title=None):
    d = np.array([r.d_min for r in sweep], dtype=float)
    a = np.array([np.nan if r.alpha is None else r.alpha for r in sweep])
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot(d, a, "o-", ms=3, color="tab:green")
        _apply_scale(ax, xscale, yscale)
        ax.set_xlabel("d_min")
        ax.set_ylabel("alpha")
        if title:
            ax.set_title(title)
        fig.tight_layout()
    return fig


def _save(fig, path):
    with plt.rc_context(RC):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def plot_distribution(h, path, xscale="log", yscale="log", title=None, xlabel="value"):
    """Raw counts and the ``>= value`` cumulative curve on one set of axes."""
    return _save(distribution_figure(h, xscale, yscale, title, xlabel), path)


def plot_sweep(sweep, path, xscale="log", yscale="linear", title=None):
    return _save(sweep_figure(sweep, xscale, yscale, title), path)
