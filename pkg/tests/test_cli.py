"""Test the command line interface."""
import json

import pandas as pd
import pytest
from click.testing import CliRunner

from liveproof.cli import main
from liveproof.io import load_chunks, load_motion_csv, load_samples, save_accel_csv, write_frames
from liveproof.model import Label, Source

CONFIG = """\
folds: 2
model:
  kind: bagging
  n_trees: 3
  min_leaf: 1
fusion:
  vote_thresholds: [0.5]
  prob_thresholds: [0.7]
"""

CORPUS = {"1": {"count": 3, "duration": 12}, "6": {"count": 3, "duration": 12}}


def _run(folder, *args):
    """Invoke the CLI with the workspace configuration and check that it succeeded."""
    result = CliRunner().invoke(main, ["--config", str(folder / "config.yml"), *map(str, args)])
    assert result.exit_code == 0, result.output
    return result


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """Return a folder holding the artifacts of a small genuine plus mirror pipeline."""
    folder = tmp_path_factory.mktemp("workspace")
    (folder / "config.yml").write_text(CONFIG)
    (folder / "corpus.json").write_text(json.dumps(CORPUS))
    _run(folder, "synth", "--spec", folder / "corpus.json", "--seed", 0, "--out", folder / "samples")
    _run(folder, "chunk", "--samples", folder / "samples", "--out", folder / "chunks")
    _run(folder, "attack", "--type", "mirror", "--chunks", folder / "chunks", "--out", folder / "mirror")
    _run(folder, "features", "--chunks", folder / "chunks", "--chunks", folder / "mirror", "--out", folder / "features.csv")  # fmt: skip
    _run(folder, "train", "--features", folder / "features.csv", "--priors", folder / "priors.json", "--out", folder / "model.json")  # fmt: skip
    return folder


class TestPipeline:
    """Test the artifacts of the pipeline commands."""

    def test_synth(self, workspace):
        samples = load_samples(workspace / "samples")
        assert len(samples) == 6
        assert all(s.label is Label.GENUINE for s in samples)

    def test_chunks(self, workspace):
        genuine = load_chunks(workspace / "chunks")
        mirror = load_chunks(workspace / "mirror")
        assert len(genuine) == 12
        assert len(mirror) == len(genuine)
        assert all(c.label is Label.FAKE for c in mirror)

    def test_features(self, workspace):
        frame = pd.read_csv(workspace / "features.csv")
        assert len(frame) == 24
        assert sorted(frame["label"].unique()) == ["fake", "genuine"]

    def test_artifacts(self, workspace):
        assert json.loads((workspace / "model.json").read_text())
        assert json.loads((workspace / "priors.json").read_text())

    def test_predict(self, workspace):
        out = workspace / "predictions.csv"
        _run(workspace, "predict", "--model", workspace / "model.json", "--features", workspace / "features.csv", "--out", out)  # fmt: skip
        table = pd.read_csv(out)
        assert list(table.columns) == ["id", "label", "score"]
        assert len(table) == 24
        assert table["score"].between(0, 1).all()

    def test_predict_to_stdout(self, workspace):
        result = _run(workspace, "predict", "--model", workspace / "model.json", "--features", workspace / "features.csv")  # fmt: skip
        assert "score" in result.output


class TestVerdict:
    """Test the sample level decisions."""

    @pytest.mark.parametrize("method", ["vote", "prob"])
    def test_genuine_samples(self, workspace, method):
        result = _run(
            workspace, "verdict", "--samples", workspace / "samples", "--model", workspace / "model.json",
            "--method", method, "--thr", 0.5, "--priors", workspace / "priors.json",
        )  # fmt: skip
        report = json.loads(result.output)
        assert report["method"] == method
        assert report["threshold"] == 0.5
        assert len(report["samples"]) == 6
        assert all(s["truth"] == "genuine" for s in report["samples"])
        assert all(len(s["chunk_labels"]) == 2 for s in report["samples"])

    def test_stitched_samples(self, workspace):
        stitched = workspace / "stitched"
        _run(workspace, "attack", "--type", "stitch", "--samples", workspace / "samples", "--pool", workspace / "mirror", "--out", stitched)  # fmt: skip
        fakes = load_samples(stitched)
        assert fakes
        assert all(s.label is Label.FAKE and s.provenance == "stitch" for s in fakes)
        out = workspace / "verdicts.json"
        _run(workspace, "verdict", "--samples", stitched, "--model", workspace / "model.json", "--thr", 0.3, "--out", out)  # fmt: skip
        report = json.loads(out.read_text())
        assert len(report["samples"]) == len(fakes)
        assert report["rates"]["fp"] == 0

    def test_missing_threshold(self, workspace):
        result = CliRunner().invoke(
            main, ["verdict", "--samples", str(workspace / "samples"), "--model", str(workspace / "model.json")]
        )
        assert result.exit_code != 0
        assert "--thr" in result.output

    def test_missing_priors(self, workspace):
        result = CliRunner().invoke(
            main,
            ["verdict", "--samples", str(workspace / "samples"), "--model", str(workspace / "model.json"),
             "--method", "prob", "--thr", "0.7"],
        )  # fmt: skip
        assert result.exit_code != 0
        assert "--priors" in result.output


class TestEval:
    """Test the experiment commands."""

    def test_mixed(self, workspace):
        out = workspace / "reports"
        result = _run(workspace, "eval", "--experiment", "mixed", "--attack", "mirror", "--features", workspace / "features.csv", "--out", out)  # fmt: skip
        assert "Category" in result.output
        for name in ["mixed.csv", "mixed.json", "mixed.txt", "mixed_contingency.csv"]:
            assert (out / name).exists()
        printed = _run(workspace, "report", "--input", out / "mixed.csv")
        assert printed.output.strip() == (out / "mixed.txt").read_text().strip()

    def test_plot(self, workspace):
        plot = workspace / "rates.png"
        _run(workspace, "eval", "--experiment", "mixattack", "--features", workspace / "features.csv", "--plot", plot, "--out", workspace / "mixattack")  # fmt: skip
        assert plot.stat().st_size > 0

    def test_needs_attack(self, workspace):
        result = CliRunner().invoke(main, ["eval", "--experiment", "cat", "--features", str(workspace / "features.csv"), "--out", str(workspace)])  # fmt: skip
        assert result.exit_code != 0
        assert "--attack" in result.output

    def test_unknown_experiment(self, workspace):
        result = CliRunner().invoke(main, ["eval", "--experiment", "tuning", "--out", str(workspace)])
        assert result.exit_code != 0


class TestExtract:
    """Test the motion extraction commands."""

    def test_vma(self, panning_frames, tmp_path):
        write_frames(panning_frames, tmp_path / "frames")
        out = tmp_path / "video.csv"
        result = CliRunner().invoke(main, ["extract-vma", "--frames", str(tmp_path / "frames"), "--stride", "5", "--out", str(out)])  # fmt: skip
        assert result.exit_code == 0, result.output
        trace = load_motion_csv(out)
        assert trace.source is Source.VIDEO
        assert trace.t.size == 3

    def test_ima(self, sample, tmp_path):
        save_accel_csv(sample.accel, tmp_path / "accel.csv")
        out = tmp_path / "accel_motion.csv"
        result = CliRunner().invoke(main, ["extract-ima", "--accel", str(tmp_path / "accel.csv"), "--out", str(out)])
        assert result.exit_code == 0, result.output
        trace = load_motion_csv(out)
        assert trace.source is Source.ACCEL
        assert trace.t.size == len(sample.accel)
