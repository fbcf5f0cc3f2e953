"""Contour and sweep-line rendering.

Intensity is drawn on a log color scale by default: the ridge dominates
by orders of magnitude and a linear map shows a featureless frame. Maps
with no positive samples fall back to a linear scale so an all-zero map
still renders. A sha256 of the input CSV bytes goes into the PNG text
metadata ("input-sha256") so a figure can be matched to its data.
"""

import hashlib
import warnings
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import LogNorm  # noqa: E402

from .reader import (RenderError, column, load_manifest, map_grid, numeric,
                     read_table)

_KINDS = ("contour", "ridge-overlay", "sweep-line")


@dataclass
class PlotSpec:
    csv_path: str
    kind: str
    out_path: str
    xlabel: str = ""
    ylabel: str = ""
    column: str = "theta_rad"  # y column of a sweep-line plot

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise RenderError("kind must be one of %s" % (_KINDS,))


def _digest(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _save(fig, spec):
    fig.savefig(spec.out_path, format="png", dpi=150,
                metadata={"input-sha256": _digest(spec.csv_path)})
    plt.close(fig)
    return spec.out_path


def ridge_line(manifest, x_perp):
    """z(x_perp) = w t - (w/v_r) x_perp from the manifest's ridge constants."""
    d = manifest.get("derived", {})
    missing = [key for key in ("w", "v_r", "t") if key not in d]
    if missing:
        raise RenderError("manifest carries no ridge constants "
                          "(derived.%s)" % "/".join(missing))
    x_perp = np.asarray(x_perp, dtype=float)
    return d["w"] * d["t"] - (d["w"] / d["v_r"]) * x_perp


def render_contour(spec):
    table = read_table(spec.csv_path)
    x, z, values, mask = map_grid(table)
    values = np.where(mask, np.nan, values)
    if np.all(mask):
        warnings.warn("every cell of %s is masked; rendering a blank frame"
                      % spec.csv_path)

    finite = values[np.isfinite(values)]
    positive = finite[finite > 0]
    norm = None
    if positive.size and positive.max() > positive.min():
        # cap the span: gaussian tails underflow through hundreds of
        # decades and would wash the ridge out of the colormap
        vmax = positive.max()
        norm = LogNorm(vmin=max(positive.min(), vmax * 1e-12), vmax=vmax)

    fig, ax = plt.subplots(figsize=(6.4, 4.2), layout="constrained")
    cmap = matplotlib.colormaps["viridis"].with_extremes(bad="white")
    art = ax.pcolormesh(z, x, values, norm=norm, cmap=cmap,
                        shading="nearest")
    fig.colorbar(art, ax=ax, label="intensity")
    if spec.kind == "ridge-overlay":
        manifest = load_manifest(spec.csv_path, table)
        ax.plot(ridge_line(manifest, x), x, "w--", lw=1.0, label="ridge")
        ax.legend(loc="upper right")
        ax.set_xlim(z[0], z[-1])
    ax.set_xlabel(spec.xlabel or "z [cm]")
    ax.set_ylabel(spec.ylabel or "x_perp [cm]")
    return _save(fig, spec)


def _sweep_xy(table, name):
    """Sweep axis and y column, failed rows replaced by NaN gaps."""
    x = numeric(column(table, "value"))
    y = numeric(column(table, name))
    if "status" in table.header:
        bad = np.array([s != "ok" for s in column(table, "status")])
        y = np.where(bad, np.nan, y)
    return x, y


def render_sweep(spec):
    table = read_table(spec.csv_path)
    if not table.rows:
        raise RenderError("empty sweep: no rows to plot")
    x, y = _sweep_xy(table, spec.column)

    fig, ax = plt.subplots(figsize=(6.4, 4.2), layout="constrained")
    ax.plot(x, y, marker="o", ms=3.5, lw=1.0)
    axis = column(table, "param")[0] if "param" in table.header else "value"
    ax.set_xlabel(spec.xlabel or axis)
    ax.set_ylabel(spec.ylabel or spec.column)
    ax.grid(True, alpha=0.3)
    return _save(fig, spec)
