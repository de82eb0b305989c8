"""Test the domain types."""
import numpy as np
import pytest

from liveproof.model import (
    MERGED_ID,
    TRANSITION,
    AccelStream,
    Annotation,
    CameraMotion,
    Chunk,
    Label,
    MotionCategory,
    MotionTrace,
    ParseError,
    Sample,
    Source,
    ValidationError,
    category_name,
    parse_category,
)


class TestMotionCategory:
    """Test the motion category taxonomy."""

    def test_taxonomy(self, data_regression):
        taxonomy = {
            str(c.id): {
                "distance": c.distance.value,
                "user_motion": c.user_motion.value,
                "camera_motion": c.camera_motion.value,
            }
            for c in MotionCategory.all()
        }
        data_regression.check(taxonomy)

    def test_bijection(self):
        for category in MotionCategory.all():
            triple = (category.distance, category.user_motion, category.camera_motion)
            assert MotionCategory.from_triple(*triple) == category

    def test_merged(self):
        merged = MotionCategory.from_id("3 & 7")
        assert merged.id == MERGED_ID
        assert merged.camera_motion is None
        assert [str(c) for c in MotionCategory.all(merged=True)][2] == MERGED_ID
        assert len(MotionCategory.all(merged=True)) == 11

    def test_from_string(self):
        assert MotionCategory.from_id("7").camera_motion is CameraMotion.SCANNING

    def test_unknown(self):
        with pytest.raises(ValidationError):
            MotionCategory.from_id(13)
        with pytest.raises(ValidationError):
            MotionCategory.from_id("walking")

    def test_names(self):
        assert category_name(None) == "none"
        assert parse_category("none") is None
        assert parse_category(TRANSITION) == TRANSITION
        assert parse_category("3&7").id == MERGED_ID


class TestLabel:
    """Test the label coercion."""

    def test_of(self):
        assert Label.of("FAKE") is Label.FAKE
        assert Label.of(1) is Label.FAKE
        assert Label.of(False) is Label.GENUINE
        assert Label.of(Label.GENUINE) is Label.GENUINE


class TestAccelStream:
    """Test the accelerometer stream."""

    def test_duplicate_timestamp(self):
        with pytest.raises(ValidationError, match="index 1"):
            AccelStream([0.0, 0.0, 0.1], np.zeros((3, 3)))

    def test_single_reading(self):
        with pytest.raises(ValidationError):
            AccelStream([0.0], np.zeros((1, 3)))

    def test_immutable(self):
        stream = AccelStream([0.0, 0.1], np.zeros((2, 3)))
        with pytest.raises(ValueError):
            stream.values[0, 0] = 1.0

    def test_slice(self):
        stream = AccelStream(np.arange(10) * 0.1, np.ones((10, 3)))
        assert len(stream.slice(0.2, 0.5)) == 3
        assert stream.slice(0.2, 0.25) is None

    def test_from_readings(self):
        stream = AccelStream.from_readings([(0.0, 0, 0, 9.81), (0.5, 0, 0, 9.81)])
        assert stream.nominal_rate_hz == 2.0
        assert stream.readings[1] == (0.5, 0.0, 0.0, 9.81)


class TestMotionTrace:
    """Test the motion trace."""

    def test_first_shift(self):
        with pytest.raises(ValidationError):
            MotionTrace([0.0, 1.0], [[1.0, 0.0], [2.0, 0.0]], Source.VIDEO)

    def test_axes(self):
        with pytest.raises(ValidationError):
            MotionTrace([0.0, 1.0], np.zeros((2, 1)), Source.VIDEO)
        with pytest.raises(ValidationError):
            MotionTrace([0.0, 1.0], np.zeros((2, 0)), Source.VIDEO)

    def test_slice_is_rebased(self):
        trace = MotionTrace.from_series(np.arange(5.0), np.arange(10.0).reshape(5, 2), "video")
        part = trace.slice(2.0, 4.0)
        assert part.t.tolist() == [2.0, 3.0]
        assert part.values.tolist() == [[0.0, 0.0], [2.0, 2.0]]
        assert trace.slice(10.0, 11.0) is None

    def test_with_axes(self):
        trace = MotionTrace.from_series([0.0, 1.0], [[0.0, 0.0], [1.0, 2.0]], "video")
        assert trace.with_axes(3).axes == ("x", "y", "z")
        assert trace.with_axes(3).axis("z").tolist() == [0.0, 0.0]

    def test_axis(self):
        trace = MotionTrace.from_series([0.0, 1.0], [[0.0, 0.0], [1.0, 2.0]], "video")
        with pytest.raises(ValueError):
            trace.axis("z")


class TestAnnotation:
    """Test the annotation segments."""

    def test_overlap(self):
        with pytest.raises(ValidationError):
            Annotation.from_tuples([(0, 7, 1), (6, 12, 2)])

    def test_category_of(self):
        annotation = Annotation.from_tuples([(0, 4, 1), (4, 12, 5)])
        assert annotation.category_of(0, 6) == TRANSITION
        assert annotation.category_of(6, 12).id == 5
        assert Annotation().category_of(0, 6) is None

    def test_tuples(self):
        rows = [[0.0, 7.0, 1], [7.0, 20.0, MERGED_ID]]
        assert Annotation.from_tuples(rows).to_tuples() == rows


class TestSample:
    """Test the sample invariants."""

    def test_duration(self, sample):
        assert sample.duration == pytest.approx(12.0)
        assert sample.label is Label.GENUINE

    def test_inconsistent_label(self, sample):
        with pytest.raises(ValidationError):
            sample.replace(label=Label.FAKE)

    def test_no_accelerometer(self, sample):
        with pytest.raises(ValidationError):
            Sample("x", sample.video_motion, None)

    def test_fake_windows(self, sample):
        fake = sample.replace(label=Label.FAKE, provenance="stitch", fake_windows=[(6.0, 12.0)])
        assert fake.is_fake_window(6.0, 12.0)
        assert not fake.is_fake_window(0.0, 6.0)
        assert sample.replace(label="fake", provenance="mirror").is_fake_window(0.0, 6.0)


class TestChunk:
    """Test the chunk identity."""

    def test_id(self, chunk_factory):
        chunk = chunk_factory(np.zeros((6, 2)), parent="c1-000", start=6.0)
        assert chunk.id == "c1-000@6.000"
        assert chunk.length == pytest.approx(1.0)

    def test_category_string(self, chunk_factory):
        assert chunk_factory(np.zeros((6, 2)), category="3&7").category.id == MERGED_ID

    def test_empty_bounds(self, chunk_factory):
        chunk = chunk_factory(np.zeros((6, 2)))
        with pytest.raises(ValidationError):
            Chunk("s", 1.0, 1.0, chunk.video_motion, chunk.accel_motion)


class TestParseError:
    """Test the parse error message."""

    def test_location(self):
        assert str(ParseError("bad", "a.csv", 3)) == "a.csv, line 3: bad"
