"""Domain types of the verification pipeline: sensor streams, motion traces, chunks and samples.

Every type is immutable after construction: the numpy buffers are copied and flagged read-only,
so instances can be shared between threads without synchronization.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Union

import numpy as np

DEFAULT_ACCEL_RATE_HZ = 16.67
"Nominal sampling rate of the phone accelerometer."

DEFAULT_FPS = 30.0
"Nominal frame rate of the phone camera."

TRANSITION = "transition"
"Category marker of a chunk that spans an annotation boundary."

MERGED_ID = "3&7"
"Identifier of the merged close/walking category that annotators could not separate."


class LiveproofWarning(UserWarning):
    """Warning emitted when an operation degrades to an empty or constant result."""


class ValidationError(ValueError):
    """A domain object violates one of its invariants."""


class ParseError(ValueError):
    """A file could not be parsed.

    Parameters:
        message: The description of the problem.
        path: The file that was being read.
        line: The 1-based line number of the offending row, if known.
    """

    def __init__(self, message: str, path: object = None, line: int | None = None):
        """Build the message from the location of the error."""
        self.path, self.line = path, line
        location = f"{path}" if path is not None else "<stream>"
        location += f", line {line}" if line is not None else ""
        super().__init__(f"{location}: {message}")


class Label(str, enum.Enum):
    """Ground-truth or predicted status of a chunk or sample. Fake is the positive class."""

    GENUINE = "genuine"
    FAKE = "fake"

    @classmethod
    def of(cls, value: Label | str | bool | int) -> Label:
        """Coerce a label, a label name or a positive flag into a :py:class:`Label`."""
        if isinstance(value, Label):
            return value
        if isinstance(value, str):
            return cls(value.lower())
        return cls.FAKE if bool(value) else cls.GENUINE

    @property
    def is_fake(self) -> bool:
        """``True`` for the positive class."""
        return self is Label.FAKE


class Source(str, enum.Enum):
    """The stream a motion trace was derived from."""

    VIDEO = "video"
    ACCEL = "accel"


class Distance(str, enum.Enum):
    """Distance of the camera to the subject."""

    CLOSE = "close"
    FAR = "far"


class UserMotion(str, enum.Enum):
    """Motion of the person holding the device."""

    STANDING = "standing"
    WALKING = "walking"


class CameraMotion(str, enum.Enum):
    """Motion of the camera relative to the scene."""

    STATIONARY = "stationary"
    SCANNING = "scanning"
    FOLLOWING = "following"


_TAXONOMY: dict[int, tuple[Distance, UserMotion, CameraMotion]] = {}
for _index, (_camera, _user, _distance) in enumerate(
    (c, u, d) for c in CameraMotion for u in UserMotion for d in Distance
):
    _TAXONOMY[_index + 1] = (_distance, _user, _camera)


def _finite(array: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(array)):
        raise ValidationError(f"{what} contains non finite values")


def _frozen(array: Iterable, dtype: type = float) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


def _strictly_increasing(t: np.ndarray, what: str) -> None:
    if t.size > 1 and not np.all(np.diff(t) > 0):
        bad = int(np.argmin(np.diff(t) > 0)) + 1
        raise ValidationError(f"{what} timestamps are not strictly increasing at index {bad}")


# -- categories ----------------------------------------------------------------
@dataclass(frozen=True)
class MotionCategory:
    """One of the 12 video motion categories, or the merged ``3&7`` category.

    The merged category has no single camera motion: walking close to a subject without moving
    the camera reads either as stationary (3) or as scanning (7).
    """

    id: int | str
    distance: Distance
    user_motion: UserMotion
    camera_motion: CameraMotion | None

    def __post_init__(self):
        """Check the triple against the taxonomy table."""
        if self.id == MERGED_ID:
            expected: tuple = (Distance.CLOSE, UserMotion.WALKING, None)
        elif isinstance(self.id, int) and self.id in _TAXONOMY:
            expected = _TAXONOMY[self.id]
        else:
            raise ValidationError(f"Unknown motion category {self.id!r}")
        if (self.distance, self.user_motion, self.camera_motion) != expected:
            raise ValidationError(f"Category {self.id} is not {expected}")

    def __str__(self) -> str:
        """Return the category identifier as written in annotations."""
        return str(self.id)

    @classmethod
    def from_id(cls, id: int | str) -> MotionCategory:
        """Build a category from its identifier (``1``..``12``, ``"7"`` or ``"3&7"``)."""
        if isinstance(id, str):
            id = id.strip()
            if id.replace(" ", "") == MERGED_ID:
                return cls(MERGED_ID, Distance.CLOSE, UserMotion.WALKING, None)
            if not id.isdigit():
                raise ValidationError(f"Unknown motion category {id!r}")
            id = int(id)
        if id not in _TAXONOMY:
            raise ValidationError(f"Unknown motion category {id!r}")
        return cls(id, *_TAXONOMY[id])

    @classmethod
    def from_triple(
        cls, distance: Distance | str, user_motion: UserMotion | str, camera_motion: CameraMotion | str
    ) -> MotionCategory:
        """Build a category from its (distance, user motion, camera motion) description."""
        triple = (Distance(distance), UserMotion(user_motion), CameraMotion(camera_motion))
        for id, row in _TAXONOMY.items():
            if row == triple:
                return cls(id, *row)
        raise ValidationError(f"No category matches {triple}")  # pragma: no cover

    @staticmethod
    def all(merged: bool = False) -> list[MotionCategory]:
        """Return the 12 table categories, or the 11 used once 3 and 7 are merged."""
        if not merged:
            return [MotionCategory.from_id(i) for i in _TAXONOMY]
        ids: list[int | str] = [1, 2, MERGED_ID, 4, 5, 6, 8, 9, 10, 11, 12]
        return [MotionCategory.from_id(i) for i in ids]


CategoryLike = Union[MotionCategory, str, None]
"A chunk category: a :py:class:`MotionCategory`, :py:data:`TRANSITION` or ``None``."


def category_name(category: CategoryLike) -> str:
    """Return the printable name of a chunk category."""
    return "none" if category is None else str(category)


def parse_category(value: object) -> CategoryLike:
    """Inverse of :py:func:`category_name`."""
    if value is None or value == "none":
        return None
    if value == TRANSITION:
        return TRANSITION
    if isinstance(value, MotionCategory):
        return value
    return MotionCategory.from_id(value if isinstance(value, (int, str)) else str(value))


# -- raw streams ---------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class AccelStream:
    """Timestamped 3-axis accelerometer readings (gravity included), in seconds and m/s²."""

    t: np.ndarray
    values: np.ndarray
    nominal_rate_hz: float = DEFAULT_ACCEL_RATE_HZ

    def __post_init__(self):
        """Freeze the buffers and validate the stream."""
        t, values = _frozen(self.t), _frozen(self.values)
        if t.ndim != 1 or values.shape != (t.size, 3):
            raise ValidationError(f"Expected (n,) timestamps and (n, 3) values, got {t.shape} and {values.shape}")
        if t.size < 2:
            raise ValidationError("An accelerometer stream needs at least 2 readings")
        if not self.nominal_rate_hz > 0:
            raise ValidationError(f"Sampling rate must be positive, got {self.nominal_rate_hz}")
        _finite(t, "accelerometer stream")
        _finite(values, "accelerometer stream")
        _strictly_increasing(t, "accelerometer stream")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        """Number of readings."""
        return int(self.t.size)

    def __eq__(self, other: object) -> bool:
        """Compare readings and rate."""
        if not isinstance(other, AccelStream):
            return NotImplemented
        return (
            np.array_equal(self.t, other.t)
            and np.array_equal(self.values, other.values)
            and self.nominal_rate_hz == other.nominal_rate_hz
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def readings(self) -> list[tuple[float, float, float, float]]:
        """The readings as ``(t, ax, ay, az)`` tuples."""
        return [(float(t), *map(float, v)) for t, v in zip(self.t, self.values)]

    @property
    def start(self) -> float:
        """Timestamp of the first reading."""
        return float(self.t[0])

    @property
    def end(self) -> float:
        """Timestamp of the last reading."""
        return float(self.t[-1])

    @classmethod
    def from_readings(cls, readings: Iterable[Iterable[float]], nominal_rate_hz: float | None = None) -> AccelStream:
        """Build a stream from ``(t, ax, ay, az)`` rows, estimating the rate when not given."""
        rows = np.asarray(list(readings), dtype=float).reshape(-1, 4)
        if nominal_rate_hz is None:
            nominal_rate_hz = estimate_rate(rows[:, 0])
        return cls(rows[:, 0], rows[:, 1:], nominal_rate_hz)

    def slice(self, start: float, end: float) -> AccelStream | None:
        """Return the readings in ``[start, end)``, or ``None`` when fewer than 2 remain."""
        keep = (self.t >= start) & (self.t < end)
        if keep.sum() < 2:
            return None
        return AccelStream(self.t[keep], self.values[keep], self.nominal_rate_hz)

    def shift_time(self, dt: float) -> AccelStream:
        """Translate every timestamp by ``dt`` seconds."""
        return AccelStream(self.t + dt, self.values, self.nominal_rate_hz)


def estimate_rate(t: np.ndarray) -> float:
    """Estimate a sampling rate as ``(n - 1) / (t_last - t_first)``."""
    t = np.asarray(t, dtype=float)
    span = float(t[-1] - t[0]) if t.size > 1 else 0.0
    if span <= 0:
        raise ValidationError("Cannot estimate a rate from a stream with no time span")
    return (t.size - 1) / span


@dataclass(frozen=True, eq=False)
class FrameSequence:
    """Ordered 8-bit grayscale frames of identical dimensions."""

    frames: np.ndarray
    fps: float = DEFAULT_FPS

    def __post_init__(self):
        """Freeze the frame stack and validate its shape."""
        if isinstance(self.frames, (list, tuple)):
            shapes = {np.shape(f) for f in self.frames}
            if len(shapes) > 1:
                raise ValidationError(f"Frames have different dimensions: {sorted(shapes)}")
        frames = _frozen(self.frames, np.uint8)
        if frames.ndim != 3:
            raise ValidationError(f"Expected a (n, height, width) frame stack, got {frames.shape}")
        if frames.shape[0] < 2:
            raise ValidationError("A frame sequence needs at least 2 frames")
        if not self.fps > 0:
            raise ValidationError(f"Frame rate must be positive, got {self.fps}")
        object.__setattr__(self, "frames", frames)

    def __len__(self) -> int:
        """Number of frames."""
        return int(self.frames.shape[0])

    @property
    def shape(self) -> tuple[int, int]:
        """The ``(height, width)`` of every frame."""
        return int(self.frames.shape[1]), int(self.frames.shape[2])


# -- motion traces -------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class MotionTrace:
    """Per-axis cumulative displacement series sharing one time base.

    Video traces carry the ``x`` and ``y`` axes, accelerometer traces ``x``, ``y`` and ``z``.
    Every axis starts at 0.
    """

    t: np.ndarray
    values: np.ndarray
    source: Source

    def __post_init__(self):
        """Freeze the buffers and validate the trace."""
        t, values = _frozen(self.t), _frozen(self.values)
        if values.ndim == 1 and values.size == 0:
            raise ValidationError("A motion trace needs at least one axis")
        if values.ndim != 2 or values.shape[1] == 0:
            raise ValidationError(f"Expected (n, axes) values, got {values.shape}")
        if values.shape[1] not in (2, 3):
            raise ValidationError(f"A motion trace has 2 or 3 axes, got {values.shape[1]}")
        if t.ndim != 1 or t.size != values.shape[0] or t.size == 0:
            raise ValidationError(f"Timestamps {t.shape} do not match values {values.shape}")
        _finite(t, "motion trace")
        _finite(values, "motion trace")
        _strictly_increasing(t, "motion trace")
        if np.any(values[0] != 0):
            raise ValidationError(f"The first cumulative shift must be 0 on every axis, got {values[0]}")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "source", Source(self.source))

    def __len__(self) -> int:
        """Number of points."""
        return int(self.t.size)

    def __eq__(self, other: object) -> bool:
        """Compare timestamps, values and source."""
        if not isinstance(other, MotionTrace):
            return NotImplemented
        return (
            self.source == other.source
            and np.array_equal(self.t, other.t)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def axes(self) -> tuple[str, ...]:
        """Names of the axes, ``("x", "y")`` or ``("x", "y", "z")``."""
        return ("x", "y", "z")[: self.values.shape[1]]

    @property
    def start(self) -> float:
        """Timestamp of the first point."""
        return float(self.t[0])

    @property
    def end(self) -> float:
        """Timestamp of the last point."""
        return float(self.t[-1])

    def axis(self, name: str) -> np.ndarray:
        """Return the series of one axis."""
        if name not in self.axes:
            raise ValueError(f"Axis {name!r} not in {self.axes}")
        return self.values[:, self.axes.index(name)]

    @classmethod
    def from_series(cls, t: Iterable[float], values: Iterable, source: Source | str, rebase: bool = True) -> MotionTrace:
        """Build a trace, subtracting the first value of each axis when ``rebase`` is set."""
        values = np.asarray(values, dtype=float)
        if values.ndim == 2 and values.shape[0] and rebase:
            values = values - values[0]
        return cls(np.asarray(t, dtype=float), values, Source(source))

    def slice(self, start: float, end: float) -> MotionTrace | None:
        """Return the points in ``[start, end)`` rebased to 0, or ``None`` if there are none."""
        keep = (self.t >= start) & (self.t < end)
        if not keep.any():
            return None
        return MotionTrace.from_series(self.t[keep], self.values[keep], self.source)

    def shift_time(self, dt: float) -> MotionTrace:
        """Translate every timestamp by ``dt`` seconds."""
        return MotionTrace(self.t + dt, self.values, self.source)

    def with_axes(self, n_axes: int) -> MotionTrace:
        """Drop trailing axes or pad with zero axes to reach ``n_axes``."""
        values = self.values[:, :n_axes]
        if values.shape[1] < n_axes:
            pad = np.zeros((values.shape[0], n_axes - values.shape[1]))
            values = np.hstack([values, pad])
        return MotionTrace(self.t, values, self.source)


# -- annotations ---------------------------------------------------------------
@dataclass(frozen=True)
class Segment:
    """A ``[start, end)`` part of a recording with a single motion category."""

    start: float
    end: float
    category: MotionCategory

    def __post_init__(self):
        """Check the segment bounds."""
        if not (math.isfinite(self.start) and math.isfinite(self.end) and self.start < self.end):
            raise ValidationError(f"Invalid segment bounds [{self.start}, {self.end})")

    @property
    def length(self) -> float:
        """Duration of the segment in seconds."""
        return self.end - self.start


@dataclass(frozen=True)
class Annotation:
    """Ordered, non-overlapping category segments of a recording."""

    segments: tuple[Segment, ...] = ()

    def __post_init__(self):
        """Check the segments are ordered and disjoint."""
        segments = tuple(self.segments)
        for previous, current in zip(segments, segments[1:]):
            if current.start < previous.end:
                raise ValidationError(
                    f"Segments [{previous.start}, {previous.end}) and [{current.start}, {current.end}) overlap or are unordered"
                )
        object.__setattr__(self, "segments", segments)

    def __len__(self) -> int:
        """Number of segments."""
        return len(self.segments)

    @classmethod
    def from_tuples(cls, rows: Iterable[Iterable]) -> Annotation:
        """Build an annotation from ``(start_time, end_time, category_id)`` tuples."""
        segments = []
        for start, end, category in rows:
            segments.append(Segment(float(start), float(end), MotionCategory.from_id(category)))
        return cls(tuple(segments))

    @classmethod
    def single(cls, category: MotionCategory, start: float, end: float) -> Annotation:
        """Annotate a whole recording with one category."""
        return cls((Segment(start, end, category),))

    def to_tuples(self) -> list[list]:
        """Inverse of :py:meth:`from_tuples`, categories as JSON friendly ids."""
        return [[s.start, s.end, s.category.id] for s in self.segments]

    def category_of(self, start: float, end: float, eps: float = 1e-9) -> CategoryLike:
        """Return the category covering ``[start, end)``, :py:data:`TRANSITION` if it spans a boundary."""
        if not self.segments:
            return None
        for segment in self.segments:
            if segment.start - eps <= start and end <= segment.end + eps:
                return segment.category
        return TRANSITION


# -- samples and chunks --------------------------------------------------------
def _check_label(label: Label, provenance: str) -> None:
    if (label is Label.GENUINE) != (provenance == "genuine"):
        raise ValidationError(f"Label {label.value} is inconsistent with provenance {provenance!r}")


@dataclass(frozen=True, eq=False)
class Sample:
    """A whole (video motion, accelerometer) recording.

    Fabricated recordings may carry their accelerometer side directly as a motion trace
    (``accel_motion``) instead of a raw stream. ``fake_windows`` lists the ``[start, end)``
    windows whose accelerometer side was fabricated; an empty tuple on a fake sample means the
    whole sample is fabricated.
    """

    id: str
    video_motion: MotionTrace
    accel: AccelStream | None
    annotation: Annotation = field(default_factory=Annotation)
    label: Label = Label.GENUINE
    provenance: str = "genuine"
    accel_motion: MotionTrace | None = None
    fake_windows: tuple[tuple[float, float], ...] = ()
    parent_id: str | None = None

    def __post_init__(self):
        """Validate the sample invariants."""
        object.__setattr__(self, "label", Label.of(self.label))
        object.__setattr__(self, "fake_windows", tuple((float(a), float(b)) for a, b in self.fake_windows))
        if self.accel is None and self.accel_motion is None:
            raise ValidationError(f"Sample {self.id} has neither an accelerometer stream nor motion")
        _check_label(self.label, self.provenance)
        other = self.accel if self.accel is not None else self.accel_motion
        if self.video_motion.end < other.start or other.end < self.video_motion.start:  # type: ignore[union-attr]
            raise ValidationError(f"Sample {self.id} streams do not overlap in time")

    @property
    def start(self) -> float:
        """Start of the time range covered by both streams."""
        other = self.accel if self.accel is not None else self.accel_motion
        return max(self.video_motion.start, other.start)  # type: ignore[union-attr]

    @property
    def end(self) -> float:
        """End of the time range covered by both streams."""
        other = self.accel if self.accel is not None else self.accel_motion
        return min(self.video_motion.end, other.end)  # type: ignore[union-attr]

    @property
    def duration(self) -> float:
        """Length ``L`` of the sample in seconds."""
        return self.end - self.start

    def is_fake_window(self, start: float, end: float) -> bool:
        """Return ``True`` if ``[start, end)`` overlaps a fabricated part of the sample."""
        if self.label is Label.GENUINE:
            return False
        if not self.fake_windows:
            return True
        return any(a < end and start < b for a, b in self.fake_windows)

    def replace(self, **changes) -> Sample:
        """Return a copy with some fields replaced."""
        return replace(self, **changes)


@dataclass(frozen=True, eq=False)
class Chunk:
    """A fixed-length ``[start_s, end_s)`` slice of a sample, both sides as motion traces."""

    parent_sample_id: str
    start_s: float
    end_s: float
    video_motion: MotionTrace
    accel_motion: MotionTrace
    category: CategoryLike = None
    label: Label = Label.GENUINE
    provenance: str = "genuine"
    accel: AccelStream | None = None

    def __post_init__(self):
        """Validate the chunk invariants."""
        object.__setattr__(self, "label", Label.of(self.label))
        if not self.end_s > self.start_s:
            raise ValidationError(f"Chunk bounds [{self.start_s}, {self.end_s}) are empty")
        if isinstance(self.category, str) and self.category != TRANSITION:
            object.__setattr__(self, "category", parse_category(self.category))
        _check_label(self.label, self.provenance)

    @property
    def id(self) -> str:
        """Identifier of the chunk inside its parent sample."""
        return f"{self.parent_sample_id}@{self.start_s:.3f}"

    @property
    def length(self) -> float:
        """Duration of the chunk in seconds."""
        return self.end_s - self.start_s

    def replace(self, **changes) -> Chunk:
        """Return a copy with some fields replaced."""
        return replace(self, **changes)
