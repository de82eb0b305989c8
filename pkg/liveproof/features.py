"""The 18 value chunk descriptor: DTW alignment statistics and cumulative shifts on the x and y axes."""
from __future__ import annotations

import logging
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from .accessors import register_class_accessor
from .config import FeatureConfig
from .dtw import dtw
from .model import Chunk, MotionTrace

logger = logging.getLogger(__name__)

FEATURE_AXES = ("x", "y")
"Axes the descriptor is computed on, the z axis of the accelerometer is unused."


@dataclass(frozen=True)
class AxisFeatures:
    """Descriptor values of a single axis."""

    dtw_distance: float
    penalized_cost: float
    overlap_ratio: float
    match_ratio: float
    expansion_ratio: float
    contraction_ratio: float
    calibration_factor: float
    video_shift: float
    accel_shift: float


AXIS_FEATURE_NAMES = tuple(f.name for f in fields(AxisFeatures))

FEATURE_NAMES = tuple(f"{name}_{axis}" for axis in FEATURE_AXES for name in AXIS_FEATURE_NAMES)
"Column names of the descriptor, x axis values first."


@dataclass(frozen=True)
class ChunkFeatures:
    """The chunk descriptor, 9 values per axis."""

    x: AxisFeatures
    y: AxisFeatures

    def as_array(self) -> np.ndarray:
        """The 18 values ordered as :py:data:`FEATURE_NAMES`."""
        return np.array(astuple(self.x) + astuple(self.y), dtype=float)

    def as_dict(self) -> dict[str, float]:
        """The 18 values keyed by :py:data:`FEATURE_NAMES`."""
        return dict(zip(FEATURE_NAMES, self.as_array().tolist()))

    @classmethod
    def from_array(cls, values: Sequence[float]) -> ChunkFeatures:
        """Inverse of :py:meth:`as_array`."""
        values = np.asarray(values, dtype=float)
        if values.shape != (len(FEATURE_NAMES),):
            raise ValueError(f"Expected {len(FEATURE_NAMES)} values, got shape {values.shape}")
        n = len(AXIS_FEATURE_NAMES)
        return cls(AxisFeatures(*values[:n].tolist()), AxisFeatures(*values[n:].tolist()))


def _rms(values: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.square(values))))


def common_grid(video: MotionTrace, accel: MotionTrace, rate_hz: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Interpolate both traces on one uniform grid covering their common time span.

    Returns:
        The grid and the ``(n, 2)`` x/y values of each trace, rebased to 0 at the grid start.
    """
    if rate_hz <= 0:
        raise ValueError(f"rate_hz must be positive, got {rate_hz}")
    start, end = max(video.start, accel.start), min(video.end, accel.end)
    n = int(np.floor(max(end - start, 0.0) * rate_hz + 1e-6)) + 1
    t = start + np.arange(n) / rate_hz
    out = []
    for trace in (video, accel):
        values = np.column_stack([np.interp(t, trace.t, trace.axis(a)) for a in FEATURE_AXES])
        out.append(values - values[0])
    return t, out[0], out[1]


def axis_features(
    video: np.ndarray, accel: np.ndarray, video_shift: float, accel_shift: float, config: FeatureConfig
) -> AxisFeatures:
    """Descriptor values of one axis from the two series sampled on the same grid."""
    result = dtw(video, accel, fraction=config.overlap_fraction)
    length = result.path_length
    video_rms, accel_rms = _rms(video), _rms(accel)
    calibration = 1.0 if video_rms == 0 else max(accel_rms / video_rms, 1e-9)
    return AxisFeatures(
        dtw_distance=result.distance / length,
        penalized_cost=result.penalized(config.penalty) / length,
        overlap_ratio=result.overlap_points / length,
        match_ratio=result.matches / length,
        expansion_ratio=result.expansions / length,
        contraction_ratio=result.contractions / length,
        calibration_factor=calibration,
        video_shift=video_shift,
        accel_shift=accel_shift,
    )


def chunk_features(chunk: Chunk, config: FeatureConfig | None = None) -> ChunkFeatures:
    """Compute the descriptor of a chunk.

    Both motion traces are resampled on a common grid at ``config.rate_hz`` and aligned axis by
    axis. Distances and move counts are normalized by the alignment path length. The cumulative
    shifts are read on the raw traces.

    Parameters:
        chunk: The chunk to describe.
        config: The descriptor parameters, defaults to :py:class:`~liveproof.config.FeatureConfig`.

    Returns:
        The 18 value descriptor.
    """
    config = config or FeatureConfig()
    video, accel = chunk.video_motion, chunk.accel_motion
    _, v, a = common_grid(video, accel, config.rate_hz)
    per_axis = []
    for i, axis in enumerate(FEATURE_AXES):
        video_shift = float(video.axis(axis)[-1] - video.axis(axis)[0])
        accel_shift = float(accel.axis(axis)[-1] - accel.axis(axis)[0])
        per_axis.append(axis_features(v[:, i], a[:, i], video_shift, accel_shift, config))
    return ChunkFeatures(*per_axis)


def features_matrix(chunks: Iterable[Chunk], config: FeatureConfig | None = None) -> np.ndarray:
    """Stack the descriptors of many chunks into an ``(n, 18)`` matrix."""
    rows = [chunk_features(c, config).as_array() for c in chunks]
    logger.debug(f"computed the descriptor of {len(rows)} chunks")
    return np.array(rows).reshape(len(rows), len(FEATURE_NAMES))


@register_class_accessor(Chunk, "liveproof")
class ChunkAccessor:
    """Toolbox for the :py:class:`~liveproof.model.Chunk` class."""

    def __init__(self, obj: Chunk):
        """Initialize the Chunk accessor."""
        self._obj = obj

    def features(self, config: FeatureConfig | None = None) -> ChunkFeatures:
        """The chunk descriptor, see :py:func:`chunk_features`."""
        return chunk_features(self._obj, config)
