"""
Tests d'intégration: analyse complète de bout en bout.
"""

import json
import sys
import time
from pathlib import Path
from unittest.mock import patch

import pandas as pd
import pytest

from volclust.cli import main
from volclust.config import EXPERIMENTS


def _analyze(csv_path, outdir):
    argv = ["volclust", "analyze", "-i", f"REGIME={csv_path}", "--experiment", "all", "-o", str(outdir), "-q"]
    with patch.object(sys, "argv", argv):
        main()
    run_dirs = [d for d in Path(outdir).iterdir() if d.is_dir()]
    assert len(run_dirs) == 1
    return run_dirs[0]


class TestFullAnalysis:
    """Analyse de toutes les expériences sur 10 000 rendements."""

    def test_all_experiments_reproducible(self, temp_dir, regime_csv_file):
        """Deux exécutions, deux dossiers: mêmes fichiers, mêmes empreintes."""
        start = time.monotonic()
        first = _analyze(regime_csv_file, Path(temp_dir) / "a")
        elapsed = time.monotonic() - start
        second = _analyze(regime_csv_file, Path(temp_dir) / "b")

        assert elapsed < 5.0
        assert first.name == second.name
        assert (first / "manifest.json").read_bytes() == (second / "manifest.json").read_bytes()

        manifest = json.loads((first / "manifest.json").read_text())
        assert manifest["failures"] == []
        for record in manifest["artifacts"]:
            assert (first / record["path"]).read_bytes() == (second / record["path"]).read_bytes()

    def test_every_experiment_reported(self, temp_dir, regime_csv_file):
        """Chaque expérience produit ses artefacts et son résumé."""
        run_dir = _analyze(regime_csv_file, temp_dir)
        summary = json.loads((run_dir / "summary.json").read_text())
        experiments = summary["series"]["REGIME"]["experiments"]
        assert sorted(experiments) == sorted(EXPERIMENTS)

        names = {p.stem for p in run_dir.glob("*.csv")}
        for p in ("p5", "p10", "p15", "p20", "p30"):
            assert f"regime_index_{p}" in names
            assert f"regime_smallest_index_{p}" in names
            assert f"regime_signed_transitions_{p}_paired" in names

        profile = pd.read_csv(run_dir / "regime_index_p20.csv")
        assert list(profile.columns) == ["n", "sigma_e", "sigma_g", "r_n", "r_lim"]
        assert len(profile) == 240
        assert profile["r_n"].iloc[0] == pytest.approx(1.0, abs=1e-12)

    def test_clustering_signatures(self, temp_dir, regime_csv_file):
        """Volatilité regroupée détectée, séries de contrôle sans mémoire."""
        run_dir = _analyze(regime_csv_file, temp_dir)
        experiments = json.loads((run_dir / "summary.json").read_text())["series"]["REGIME"]["experiments"]

        assert experiments["index"]["p20"]["r_n"]["60"] > 1.5
        assert experiments["rearranged"]["inside_band"]["shuffled"] >= 0.85
        assert experiments["rearranged"]["inside_band"]["empirical"] < 0.7
        assert experiments["rearranged"]["rank_correlation"] > 0.5
        assert experiments["pdf"]["mass"] == pytest.approx(1.0, abs=1e-9)
