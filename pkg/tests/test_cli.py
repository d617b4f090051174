"""
Tests pour le module CLI.
"""

import json
import sys
from pathlib import Path
from unittest.mock import patch

import pytest

from volclust.cli import EXIT_CONFIG, EXIT_PARTIAL, main


def _run(argv):
    with patch.object(sys, "argv", ["volclust", *argv]):
        main()


def _exit_code(argv) -> int:
    with pytest.raises(SystemExit) as exc_info:
        _run(argv)
    return exc_info.value.code


class TestCliBasics:
    """Tests d'aide et d'arguments."""

    def test_help(self):
        """Test de l'aide."""
        assert _exit_code(["--help"]) == 0

    def test_no_command(self, capsys):
        """Sans commande: aide et code 0."""
        assert _exit_code([]) == 0
        assert "analyze" in capsys.readouterr().out

    def test_bad_argument(self):
        """Argument mal typé: code 2 (argparse)."""
        assert _exit_code(["analyze", "--tau", "abc"]) == 2

    def test_bad_percentages(self):
        """Liste de pourcentages illisible."""
        assert _exit_code(["analyze", "--p", "5,dix"]) == 2


class TestAnalyzeCommand:
    """Tests pour la commande analyze."""

    def test_success(self, temp_dir, sample_csv_file, capsys):
        """Analyse réussie: ✓ sur stdout, pas de sortie d'erreur."""
        _run([
            "analyze", "-i", f"NASDAQ={sample_csv_file}",
            "-e", "pdf", "--bins", "2", "-o", temp_dir, "--run-id", "cli-test",
        ])
        captured = capsys.readouterr()
        assert "✓" in captured.out
        assert "cli-test" in captured.out
        assert (Path(temp_dir) / "cli-test" / "manifest.json").exists()

    def test_partial_failure(self, temp_dir, sample_csv_file, capsys):
        """Une série invalide: code 1 et cellule listée sur stderr."""
        bad = Path(temp_dir) / "bad.csv"
        bad.write_text("date,close\n2020-01-02,abc\n2020-01-03,1\n", encoding="utf-8")
        code = _exit_code([
            "analyze", "-i", f"OK={sample_csv_file}", "-i", f"BAD={bad}",
            "-e", "pdf", "--bins", "2", "-o", str(Path(temp_dir) / "out"),
        ])
        assert code == EXIT_PARTIAL
        captured = capsys.readouterr()
        assert "✗ BAD/ingest" in captured.err
        assert "1 cellule(s) en échec" in captured.err

    def test_missing_input(self, temp_dir, capsys):
        """Fichier d'entrée absent: code 2."""
        code = _exit_code(["analyze", "-i", f"X={temp_dir}/absent.csv", "-o", temp_dir])
        assert code == EXIT_CONFIG
        assert "✗" in capsys.readouterr().err

    def test_no_input(self, temp_dir):
        """Aucune entrée: code 2."""
        assert _exit_code(["analyze", "-o", temp_dir]) == EXIT_CONFIG

    def test_unknown_experiment(self, temp_dir, sample_csv_file):
        """Expérience inconnue: code 2."""
        code = _exit_code(["analyze", "-i", f"X={sample_csv_file}", "-e", "fft", "-o", temp_dir])
        assert code == EXIT_CONFIG

    def test_existing_run(self, temp_dir, sample_csv_file):
        """run_id déjà présent: code 2, puis succès avec --overwrite."""
        argv = [
            "analyze", "-i", f"X={sample_csv_file}", "-e", "pdf", "--bins", "2",
            "-o", str(Path(temp_dir) / "out"), "--run-id", "twice",
        ]
        _run(argv)
        assert _exit_code(argv) == EXIT_CONFIG
        _run(argv + ["--overwrite"])

    def test_config_file_and_override(self, temp_dir, sample_csv_file):
        """Fichier de configuration, les options le remplacent."""
        config = Path(temp_dir) / "run.json"
        config.write_text(json.dumps({
            "inputs": {"X": sample_csv_file},
            "experiments": ["pdf"],
            "bins": 2,
            "run_id": "from-file",
        }), encoding="utf-8")
        _run(["analyze", "-c", str(config), "-o", temp_dir, "--run-id", "from-cli"])
        assert (Path(temp_dir) / "from-cli").is_dir()
        assert not (Path(temp_dir) / "from-file").exists()

    def test_log_file(self, temp_dir, sample_csv_file):
        """--log-file: une ligne JSON par événement."""
        log_path = Path(temp_dir) / "logs" / "run.jsonl"
        _run([
            "analyze", "-i", f"X={sample_csv_file}", "-e", "pdf", "--bins", "2",
            "-o", temp_dir, "--run-id", "logged", "--log-file", str(log_path), "-q",
        ])
        records = [json.loads(line) for line in log_path.read_text(encoding="utf-8").splitlines()]
        assert records
        assert all("level" in r and "message" in r for r in records)
        assert any(r.get("run_id") == "logged" for r in records)


class TestTemplateCommand:
    """Tests pour la commande template."""

    def test_stdout(self, capsys):
        """Le modèle s'affiche en JSON."""
        _run(["template"])
        document = json.loads(capsys.readouterr().out)
        assert document["n_max"] == 240
        assert document["experiments"] == ["all"]

    def test_output_file(self, temp_dir, capsys):
        """-o sauvegarde le modèle."""
        target = Path(temp_dir) / "configs" / "repro.json"
        _run(["template", "-o", str(target)])
        assert json.loads(target.read_text(encoding="utf-8"))["seed"] == 0
        assert "✓" in capsys.readouterr().out
