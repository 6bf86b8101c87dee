import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from figrender import RECIPES, render
from figrender.cli import main

EXPECTED_PANELS = {"fig1": 4, "fig2": 6, "fig3": 2, "fig4": 3, "fig5": 6,
                   "fig6": 4, "fig7": 4, "fig8": 6, "fig9": 6}


def test_recipe_table_is_complete():
    assert sorted(RECIPES) == [f"fig{i}" for i in range(1, 10)]
    for fid, recipe in RECIPES.items():
        rows, cols = recipe.layout
        assert rows * cols == EXPECTED_PANELS[fid]


@pytest.mark.parametrize("fid", sorted(RECIPES))
def test_render_each_figure_from_small_data(fid, small_data, tmp_path):
    result = render(fid, small_data, tmp_path / f"{fid}.png")
    assert result.path.exists() and result.path.stat().st_size > 0
    assert result.n_panels == EXPECTED_PANELS[fid]


def test_rendering_is_deterministic(small_data, tmp_path):
    a = render("fig3", small_data, tmp_path / "a.png")
    b = render("fig3", small_data, tmp_path / "b.png")
    assert a.path.read_bytes() == b.path.read_bytes()


def test_missing_csv_is_reported(tmp_path):
    with pytest.raises(FileNotFoundError, match="fig3_bands.csv"):
        render("fig3", tmp_path, tmp_path / "x.png")


def test_empty_csv_names_absent_column(small_data, tmp_path):
    broken = tmp_path / "data"
    broken.mkdir()
    (broken / "fig3_bands.csv").write_text("")
    with pytest.raises(ValueError, match="column 'k' absent"):
        render("fig3", broken, tmp_path / "x.png")


def test_wrong_columns_named(small_data, tmp_path):
    broken = tmp_path / "data"
    broken.mkdir()
    (broken / "fig3_bands.csv").write_text("k,nonsense\n0.0,1.0\n")
    with pytest.raises(ValueError, match="column 're_E_plus' absent"):
        render("fig3", broken, tmp_path / "x.png")


def test_unknown_figure_id_rejected(tmp_path):
    with pytest.raises(ValueError, match="unknown figure id"):
        render("fig10", tmp_path, tmp_path / "x.png")


def test_cli_renders_and_reports(small_data, tmp_path, capsys):
    rc = main(["--figure", "fig5", "--data-dir", str(small_data),
               "--out", str(tmp_path / "fig5.png")])
    assert rc == 0
    assert "6 panels" in capsys.readouterr().out
    assert (tmp_path / "fig5.png").exists()


def test_cli_failure_is_descriptive(tmp_path, capsys):
    rc = main(["--figure", "fig1", "--data-dir", str(tmp_path),
               "--out", str(tmp_path / "no.png")])
    assert rc == 1
    assert "fig1_spectrum_F0.3.csv" in capsys.readouterr().err


def test_cli_entrypoint_subprocess(small_data, tmp_path):
    proc = subprocess.run([sys.executable, "-m", "figrender", "--figure", "fig6",
                           "--data-dir", str(small_data),
                           "--out", str(tmp_path / "f6.png")],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr


def test_acceptance_all_figures_from_regenerated_datasets(full_data, tmp_path):
    # [SECONDARY] gate: every recipe renders from CSVs regenerated through
    # the manifest, with the caption panel counts
    for fid in sorted(RECIPES):
        result = render(fid, full_data, tmp_path / f"{fid}.png")
        ok = result.path.exists() and result.n_panels == EXPECTED_PANELS[fid]
        print(f"[acceptance] figure-render {fid}: {'PASS' if ok else 'FAIL'} "
              f"({result.n_panels} panels)")
        assert ok
