"""Test the configuration objects."""
import pytest

from liveproof.config import ChunkConfig, ExperimentConfig, ModelConfig, MotionConfig, load_config, save_config


class TestDefaults:
    """Test the default values."""

    def test_defaults(self):
        config = load_config()
        assert config.motion.stride == 5
        assert config.motion.alpha == 0.8
        assert config.features.rate_hz == 10.0
        assert config.chunking.length == 6.0
        assert config.fusion.vote_thresholds == [0.1, 0.3, 0.5, 0.7]
        assert config.fusion.prob_thresholds == [0.6, 0.7, 0.8]

    def test_ranges(self):
        with pytest.raises(ValueError):
            MotionConfig(alpha=1.0)
        with pytest.raises(ValueError):
            ChunkConfig(strategy="sliding")
        with pytest.raises(ValueError):
            ModelConfig(kind="svm")


class TestLoadSave:
    """Test the configuration files."""

    @pytest.mark.parametrize("suffix", [".json", ".yml"])
    def test_round_trip(self, tmp_path, suffix):
        config = ExperimentConfig(seed=3, folds=4, model=ModelConfig(kind="bagging", n_trees=7))
        loaded = load_config(save_config(config, tmp_path / f"config{suffix}"))
        assert loaded == config

    def test_partial_yaml(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text("seed: 5\nchunking:\n  length: 4.0\n")
        config = load_config(path)
        assert config.seed == 5
        assert config.chunking.length == 4.0
        assert config.chunking.strategy == "segment"

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text('{"model": {"trees": 3}}')
        with pytest.raises(ValueError, match="trees"):
            load_config(path)

    def test_unsupported_format(self, tmp_path):
        path = tmp_path / "config.toml"
        path.write_text("")
        with pytest.raises(ValueError):
            load_config(path)
        with pytest.raises(ValueError):
            save_config(ExperimentConfig(), path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_config(tmp_path / "nope.yml")
