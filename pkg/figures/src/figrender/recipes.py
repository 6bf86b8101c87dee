"""Figure recipes: which CSVs feed which panels, and how they are drawn.

Each recipe names the CSV files produced by exactly one entry of the
lossybloch figure manifest, the plot kind, and the panel layout.  Panel
counts follow the source figures.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["FigureRecipe", "RECIPES"]


@dataclass(frozen=True)
class FigureRecipe:
    figure_id: str
    kind: str  # heatmap-grid | spectrum-scatter | band-lines | nl-bands |
    #            omega-scatter | stability-bands
    inputs: tuple  # CSV filenames (relative to the data dir)
    layout: tuple  # (rows, cols)
    title: str = ""


def _norms(name: str) -> str:
    stem, dot, ext = name.rpartition(".")
    return f"{stem}_norms.{ext}"


RECIPES = {
    "fig1": FigureRecipe(
        "fig1", "spectrum-scatter",
        ("fig1_spectrum_F0.3.csv", "fig1_spectrum_F1.csv"),
        (2, 2), "eigenvalue ladders vs decay rate"),
    "fig2": FigureRecipe(
        "fig2", "heatmap-grid",
        ("fig2_unitary_F0.3.csv", "fig2_lossy_F0.3.csv", _norms("fig2_lossy_F0.3.csv"),
         "fig2_unitary_F1.csv", "fig2_lossy_F1.csv", _norms("fig2_lossy_F1.csv")),
        (2, 3), "breathing dynamics and frequency doubling"),
    "fig3": FigureRecipe(
        "fig3", "band-lines", ("fig3_bands.csv",), (1, 2),
        "complex dispersion"),
    "fig4": FigureRecipe(
        "fig4", "heatmap-grid",
        ("fig4_uniform.csv", "fig4_random.csv",
         _norms("fig4_uniform.csv") + "|" + _norms("fig4_random.csv")),
        (1, 3), "beam oscillation, uniform vs randomised losses"),
    "fig5": FigureRecipe(
        "fig5", "nl-bands",
        ("fig5_nlbands_g0.csv", "fig5_nlbands_g2.csv", "fig5_nlbands_g7.csv"),
        (3, 2), "nonlinear Bloch bands"),
    "fig6": FigureRecipe(
        "fig6", "omega-scatter",
        ("fig6_omegas_g2_k0.csv", "fig6_omegas_g2_km04pi.csv",
         "fig6_omegas_g7_k0.csv", "fig6_omegas_g7_km04pi.csv"),
        (2, 2), "perturbation frequencies of the stationary states"),
    "fig7": FigureRecipe(
        "fig7", "stability-bands", ("fig7_bdg_g2.csv", "fig7_bdg_g7.csv"),
        (2, 2), "band stability maps"),
    "fig8": FigureRecipe(
        "fig8", "heatmap-grid",
        ("fig8_g2_lower.csv", "fig8_g2_upper.csv",
         _norms("fig8_g2_lower.csv") + "|" + _norms("fig8_g2_upper.csv"),
         "fig8_g7_lower.csv", "fig8_g7_upper.csv",
         _norms("fig8_g7_lower.csv") + "|" + _norms("fig8_g7_upper.csv")),
        (2, 3), "mean-field beam dynamics"),
    "fig9": FigureRecipe(
        "fig9", "heatmap-grid",
        ("fig9_U1_lower.csv", "fig9_U1_upper.csv",
         _norms("fig9_U1_lower.csv") + "|" + _norms("fig9_U1_upper.csv"),
         "fig9_U7_lower.csv", "fig9_U7_upper.csv",
         _norms("fig9_U7_lower.csv") + "|" + _norms("fig9_U7_upper.csv")),
        (2, 3), "two-particle beam dynamics"),
}
