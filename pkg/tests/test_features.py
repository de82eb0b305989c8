"""Test the chunk descriptor."""
import numpy as np
import pytest

from liveproof.config import FeatureConfig
from liveproof.features import FEATURE_NAMES, ChunkFeatures, chunk_features, common_grid, features_matrix


@pytest.fixture
def walk() -> np.ndarray:
    """Return a 37 point x/y random walk starting at 0."""
    steps = np.random.default_rng(7).normal(size=(36, 2))
    return np.vstack([[0.0, 0.0], np.cumsum(steps, axis=0)])


class TestChunkFeatures:
    """Test the chunk_features function."""

    def test_mirror(self, chunk_factory, walk):
        features = chunk_features(chunk_factory(walk))
        for axis in (features.x, features.y):
            assert axis.dtw_distance == 0
            assert axis.penalized_cost == 0
            assert axis.match_ratio == 1
            assert axis.overlap_ratio == 1
            assert axis.expansion_ratio == axis.contraction_ratio == 0
            assert axis.calibration_factor == pytest.approx(1.0)
            assert axis.video_shift == pytest.approx(axis.accel_shift)

    def test_shifts(self, chunk_factory, walk):
        features = chunk_features(chunk_factory(walk))
        assert features.x.video_shift == pytest.approx(walk[-1, 0])
        assert features.y.video_shift == pytest.approx(walk[-1, 1])

    def test_zero_motion(self, chunk_factory):
        features = chunk_features(chunk_factory(np.zeros((36, 2))))
        assert features.x.dtw_distance == 0
        assert features.x.calibration_factor == 1.0
        assert features.y.video_shift == 0

    def test_scaled_accelerometer(self, chunk_factory, walk):
        features = chunk_features(chunk_factory(walk, 2 * walk))
        assert features.x.calibration_factor == pytest.approx(2.0)
        assert features.y.calibration_factor == pytest.approx(2.0)
        assert features.x.dtw_distance > 0

    def test_ratios(self, genuine_chunks):
        for chunk in genuine_chunks[:4]:
            features = chunk.liveproof.features()
            for axis in (features.x, features.y):
                moves = axis.match_ratio + axis.expansion_ratio + axis.contraction_ratio
                assert moves == pytest.approx(1.0)
                assert 0 <= axis.overlap_ratio <= 1
                assert axis.penalized_cost >= axis.dtw_distance
                assert axis.calibration_factor > 0

    def test_penalty(self, genuine_chunks):
        chunk = genuine_chunks[0]
        base = chunk_features(chunk, FeatureConfig(penalty=1.0)).x
        assert base.penalized_cost == pytest.approx(base.dtw_distance)


class TestLayout:
    """Test the descriptor layout."""

    def test_names(self, chunk_factory, walk):
        values = chunk_features(chunk_factory(walk)).as_dict()
        assert list(values) == list(FEATURE_NAMES)
        assert len(FEATURE_NAMES) == 18
        assert FEATURE_NAMES[0] == "dtw_distance_x"
        assert FEATURE_NAMES[9] == "dtw_distance_y"

    def test_from_array(self, chunk_factory, walk):
        features = chunk_features(chunk_factory(walk, 2 * walk))
        assert ChunkFeatures.from_array(features.as_array()) == features

    def test_from_array_shape(self):
        with pytest.raises(ValueError):
            ChunkFeatures.from_array(np.zeros(17))

    def test_matrix(self, genuine_chunks):
        matrix = features_matrix(genuine_chunks[:3])
        assert matrix.shape == (3, 18)
        assert features_matrix([]).shape == (0, 18)


class TestCommonGrid:
    """Test the common time grid."""

    def test_grid(self, chunk_factory, walk):
        chunk = chunk_factory(walk)
        t, video, accel = common_grid(chunk.video_motion, chunk.accel_motion, 10.0)
        assert t[0] == 0
        assert np.diff(t) == pytest.approx(0.1)
        assert video.shape == accel.shape == (t.size, 2)
        assert np.all(video[0] == 0)

    def test_rate(self, chunk_factory, walk):
        chunk = chunk_factory(walk)
        with pytest.raises(ValueError):
            common_grid(chunk.video_motion, chunk.accel_motion, 0)
