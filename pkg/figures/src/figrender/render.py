"""Render figures from lossybloch CSV datasets.

All panels are drawn with a fixed style so that identical inputs give
identical image files.  Heatmaps show the renormalised density with each
time slice scaled by its own maximum, matching the renormalisation of the
underlying data rather than a global colour scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from .recipes import RECIPES, FigureRecipe

__all__ = ["RenderResult", "render", "load_csv"]

_FIGSIZE_UNIT = 3.2
_DPI = 110


@dataclass
class RenderResult:
    path: Path
    n_panels: int


def load_csv(path, required_columns) -> pd.DataFrame:
    """Read one dataset CSV, insisting on the columns a panel needs."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"input CSV not found: {path}")
    try:
        df = pd.read_csv(path, comment="#")
    except pd.errors.EmptyDataError:
        df = pd.DataFrame()
    for col in required_columns:
        if col not in df.columns:
            raise ValueError(f"column '{col}' absent in {path}")
    if df.empty:
        raise ValueError(f"no data rows in {path} (columns {list(required_columns)})")
    return df


def _density_frame(path):
    """Accept both the single-particle and the few-particle column sets."""
    df = load_csv(path, ["t", "j"])
    for cand in ("renorm_density", "renorm"):
        if cand in df.columns:
            return df, cand
    raise ValueError(f"column 'renorm_density' absent in {path}")


def _norm_frame(path):
    df = load_csv(path, ["t"])
    for cand in ("total_norm", "N_total"):
        if cand in df.columns:
            return df, cand
    raise ValueError(f"column 'total_norm' absent in {path}")


def _draw_heatmap(ax, path):
    df, col = _density_frame(path)
    pivot = df.pivot(index="j", columns="t", values=col)
    mat = pivot.to_numpy()
    peaks = mat.max(axis=0)
    peaks[peaks == 0] = 1.0
    mat = mat / peaks[None, :]  # per-time-slice colour normalisation
    t = pivot.columns.to_numpy()
    j = pivot.index.to_numpy()
    ax.imshow(mat, origin="lower", aspect="auto",
              extent=(t[0], t[-1], j[0], j[-1]), cmap="magma")
    ax.set_xlabel("t")
    ax.set_ylabel("j")


def _draw_norms(ax, spec):
    styles = [dict(color="k", ls="-"), dict(color="r", ls="--")]
    for name, style in zip(spec.split("|"), styles):
        df, col = _norm_frame(name)
        ax.plot(df["t"], df[col], **style)
    ax.set_xlabel("t")
    ax.set_ylabel("remaining number")
    ax.set_ylim(bottom=0)


def _render_heatmap_grid(recipe, data_dir, axes):
    for ax, name in zip(axes.ravel(), recipe.inputs):
        if "norms" in name:
            _draw_norms(ax, "|".join(str(Path(data_dir) / p)
                                     for p in name.split("|")))
        else:
            _draw_heatmap(ax, Path(data_dir) / name)


def _render_spectrum_scatter(recipe, data_dir, axes):
    for row, name in enumerate(recipe.inputs):
        df = load_csv(Path(data_dir) / name,
                      ["gamma", "re_E", "im_E", "ladder_index"])
        for coln, part in enumerate(("re_E", "im_E")):
            ax = axes[row, coln]
            for ladder, mark in ((0, "."), (1, ".")):
                sub = df[df["ladder_index"] == ladder]
                ax.plot(sub["gamma"], sub[part], mark, ms=1.5,
                        color="C0" if ladder == 0 else "C3")
            ax.set_xlabel("gamma")
            ax.set_ylabel(part.replace("_", " "))


def _render_band_lines(recipe, data_dir, axes):
    df = load_csv(Path(data_dir) / recipe.inputs[0],
                  ["k", "re_E_plus", "im_E_plus", "re_E_minus", "im_E_minus"])
    for ax, part in zip(axes.ravel(), ("re", "im")):
        ax.plot(df["k"], df[f"{part}_E_plus"], "C0.", ms=1.5)
        ax.plot(df["k"], df[f"{part}_E_minus"], "C3.", ms=1.5)
        ax.set_xlabel("k")
        ax.set_ylabel(f"{part} E")


def _render_nl_bands(recipe, data_dir, axes):
    colors = {"balanced": "k", "imbalanced": "C0"}
    for row, name in enumerate(recipe.inputs):
        df = load_csv(Path(data_dir) / name,
                      ["k", "family", "z", "v", "re_mu", "im_mu", "ep_class"])
        for coln, part in enumerate(("re_mu", "im_mu")):
            ax = axes[row, coln]
            for family, sub in df.groupby("family"):
                ax.plot(sub["k"], sub[part], ".", ms=1.5,
                        color=colors.get(family, "C2"))
            eps = df[df["ep_class"] != "none"]
            ax.plot(eps["k"], eps[part], "o", ms=4, mfc="none", color="C3")
            ax.set_xlabel("k")
            ax.set_ylabel(part.replace("_", " "))


def _render_omega_scatter(recipe, data_dir, axes):
    for ax, name in zip(axes.ravel(), recipe.inputs):
        df = load_csv(Path(data_dir) / name,
                      ["k", "family", "z", "omega_index", "re_omega", "im_omega"])
        for family, sub in df.groupby("family"):
            ax.plot(sub["re_omega"], sub["im_omega"], "o", ms=5,
                    mfc="none", color="k" if family == "balanced" else "C0")
        ax.axhline(0.0, color="0.8", lw=0.6, zorder=0)
        ax.set_xlabel("Re omega")
        ax.set_ylabel("Im omega")


def _render_stability_bands(recipe, data_dir, axes):
    for coln, name in enumerate(recipe.inputs):
        df = load_csv(Path(data_dir) / name,
                      ["k", "family", "z", "re_mu", "im_mu", "max_im_omega",
                       "stable"])
        panels = ((0, df[df["family"] == "balanced"], "re_mu"),
                  (1, df[df["family"] == "imbalanced"], "im_mu"))
        for row, sub, part in panels:
            ax = axes[row, coln]
            sc = ax.scatter(sub["k"], sub[part], c=sub["max_im_omega"], s=4,
                            cmap="viridis")
            ax.set_xlabel("k")
            ax.set_ylabel(part.replace("_", " "))
        axes[0, coln].set_title(Path(name).stem.split("_")[-1])


_KIND_RENDERERS = {
    "heatmap-grid": _render_heatmap_grid,
    "spectrum-scatter": _render_spectrum_scatter,
    "band-lines": _render_band_lines,
    "nl-bands": _render_nl_bands,
    "omega-scatter": _render_omega_scatter,
    "stability-bands": _render_stability_bands,
}


def render(recipe, data_dir, out_path) -> RenderResult:
    """Draw one figure from its CSV inputs and write the image file."""
    if isinstance(recipe, str):
        if recipe not in RECIPES:
            raise ValueError(f"unknown figure id {recipe!r}")
        recipe = RECIPES[recipe]
    rows, cols = recipe.layout
    fig, axes = plt.subplots(rows, cols, squeeze=False,
                             figsize=(_FIGSIZE_UNIT * cols, _FIGSIZE_UNIT * rows))
    try:
        _KIND_RENDERERS[recipe.kind](recipe, data_dir, axes)
        fig.suptitle(recipe.title)
        fig.tight_layout()
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out_path, dpi=_DPI)
    finally:
        plt.close(fig)
    return RenderResult(path=Path(out_path), n_panels=rows * cols)
