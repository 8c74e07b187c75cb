"""Tests for the report command."""

from __future__ import annotations

import json
from pathlib import Path

from click.testing import CliRunner

from sharp_bench.cli.main import cli
from sharp_bench.models.config import ScoreConfig


def run_eval(cli_runner: CliRunner, gt: Path, recon: Path, config: Path, out: Path) -> Path:
    result = cli_runner.invoke(
        cli, ["eval", str(gt), str(recon), "--config", str(config), "-o", str(out)]
    )
    assert result.exit_code == 0, result.output
    return out.with_suffix(".json")


class TestReportCommand:
    """Test suite for method comparison from the command line."""

    def test_compares_methods(
        self, cli_runner: CliRunner, mesh_dir: Path, config_file: Path, tmp_path: Path
    ) -> None:
        """Test the better method is listed first and plot data is written."""
        good = run_eval(cli_runner, mesh_dir, mesh_dir, config_file, tmp_path / "good")
        worse = json.loads(good.read_text())
        worse["method"] = "worse"
        worse["mean"]["overall_score"] = 0.25
        worse_path = tmp_path / "worse.json"
        worse_path.write_text(json.dumps(worse))

        out = tmp_path / "report"
        result = cli_runner.invoke(cli, ["report", str(worse_path), str(good), "-o", str(out)])

        assert result.exit_code == 0, result.output
        lines = (out / "comparison.txt").read_text().splitlines()
        assert lines[2].startswith("gt ")
        assert lines[3].startswith("worse ")
        assert (out / "gt_histogram.csv").exists()
        assert (out / "worse_correlation.csv").exists()

    def test_incompatible_config_marked(
        self, cli_runner: CliRunner, mesh_dir: Path, config_file: Path, tmp_path: Path
    ) -> None:
        """Test methods scored with other sigmas carry a warning mark."""
        first = run_eval(cli_runner, mesh_dir, mesh_dir, config_file, tmp_path / "a")
        other_config = tmp_path / "other.yaml"
        ScoreConfig(sigma_shape=0.2, sigma_texture=0.1, n_samples=500, seed=3).save(other_config)
        second = run_eval(cli_runner, mesh_dir, mesh_dir, other_config, tmp_path / "b")
        data = json.loads(second.read_text())
        data["method"] = "loose"
        second.write_text(json.dumps(data))

        result = cli_runner.invoke(cli, ["report", str(first), str(second), "-o", str(tmp_path / "r")])

        assert result.exit_code == 0, result.output
        assert "⚠ loose: sigma_shape" in result.output

    def test_invalid_file(self, cli_runner: CliRunner, tmp_path: Path) -> None:
        """Test a malformed aggregate fails the report."""
        path = tmp_path / "bad.json"
        path.write_text("[]")
        result = cli_runner.invoke(cli, ["report", str(path), "-o", str(tmp_path / "r")])

        assert result.exit_code == 1
        assert "Report failed" in result.output

    def test_requires_a_file(self, cli_runner: CliRunner) -> None:
        """Test at least one aggregate path is required."""
        result = cli_runner.invoke(cli, ["report"])

        assert result.exit_code == 2
