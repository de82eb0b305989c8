"""Split samples into fixed-length chunks: sequential, segment based or randomized windows."""
from __future__ import annotations

import logging
import math
import warnings
from typing import Sequence

import numpy as np

from .accessors import register_class_accessor
from .config import ChunkConfig, MotionConfig
from .model import Chunk, Label, LiveproofWarning, MotionTrace, Sample, ValidationError
from .motion import ima

logger = logging.getLogger(__name__)

_EPS = 1e-6


def sample_accel_motion(sample: Sample, config: MotionConfig | None = None) -> MotionTrace:
    """Accelerometer motion of a whole sample: its stored trace or the IMA of its raw stream."""
    if sample.accel_motion is not None:
        return sample.accel_motion
    c = config or MotionConfig()
    return ima(sample.accel, c.alpha, c.stillness_threshold, c.stillness_window, c.unit_scale)  # type: ignore[arg-type]


def make_chunk(
    sample: Sample,
    start: float,
    end: float,
    accel_motion: MotionTrace,
    category: object = None,
) -> Chunk | None:
    """Cut the ``[start, end)`` window out of a sample.

    Both traces are sliced and rebased to 0 at their first point inside the window. The chunk is
    fake when the window overlaps a fabricated part of the sample.

    Returns:
        The chunk, or ``None`` when a trace has no point inside the window.
    """
    video = sample.video_motion.slice(start, end)
    accel = accel_motion.slice(start, end)
    if video is None or accel is None:
        return None
    fake = sample.is_fake_window(start, end)
    return Chunk(
        parent_sample_id=sample.id,
        start_s=start,
        end_s=end,
        video_motion=video,
        accel_motion=accel,
        category=sample.annotation.category_of(start, end) if category is None else category,
        label=Label.FAKE if fake else Label.GENUINE,
        provenance=sample.provenance if fake else "genuine",
        accel=sample.accel.slice(start, end) if sample.accel is not None else None,
    )


def _collect(sample: Sample, windows: Sequence[tuple[float, float, object]], accel_motion: MotionTrace) -> list[Chunk]:
    chunks = []
    for start, end, category in windows:
        chunk = make_chunk(sample, start, end, accel_motion, category)
        if chunk is None:
            logger.debug(f"{sample.id}: window [{start}, {end}) holds no motion point, skipped")
            continue
        chunks.append(chunk)
    return chunks


def chunk_count(duration: float, length: float, keep_remainder: bool = False) -> int:
    """Number of sequential chunks of ``length`` seconds in ``duration`` seconds."""
    if length <= 0:
        raise ValueError(f"Chunk length must be positive, got {length}")
    ratio = duration / length
    return max(math.ceil(ratio - _EPS), 0) if keep_remainder else max(math.floor(ratio + _EPS), 0)


def sequential_chunks(
    sample: Sample,
    length: float = 6.0,
    keep_remainder: bool = False,
    motion_config: MotionConfig | None = None,
) -> list[Chunk]:
    """Divide a sample into back to back chunks ``[0, l)``, ``[l, 2l)``, ...

    A trailing remainder shorter than ``length`` is dropped unless ``keep_remainder`` is set,
    in which case it becomes a last, shorter chunk. Chunks spanning an annotation boundary get the
    ``transition`` category.

    Parameters:
        sample: The sample to split.
        length: The chunk length in seconds.
        keep_remainder: Keep the trailing partial chunk.
        motion_config: Parameters of the accelerometer motion extraction.

    Returns:
        The chunks, empty (with a warning) when the sample is shorter than ``length``.
    """
    n = chunk_count(sample.duration, length, keep_remainder)
    if n == 0:
        msg = f"Sample {sample.id} lasts {sample.duration:.2f}s, less than a {length}s chunk"
        warnings.warn(msg, category=LiveproofWarning, stacklevel=2)
        return []
    windows = []
    for k in range(n):
        start = sample.start + k * length
        windows.append((start, min(start + length, sample.end) if keep_remainder else start + length, None))
    return _collect(sample, windows, sample_accel_motion(sample, motion_config))


def segment_chunks(sample: Sample, length: float = 6.0, motion_config: MotionConfig | None = None) -> list[Chunk]:
    """Sequential chunking inside each annotated segment of at least ``length`` seconds.

    Segments shorter than a chunk are discarded, so no transition chunk is ever produced.
    """
    windows = []
    for segment in sample.annotation.segments:
        for k in range(chunk_count(segment.length, length)):
            start = segment.start + k * length
            if start < sample.start - _EPS or start + length > sample.end + _EPS:
                continue
            windows.append((start, start + length, segment.category))
    if not windows:
        return []
    return _collect(sample, windows, sample_accel_motion(sample, motion_config))


def _valid_indices(indices: np.ndarray, length: float) -> bool:
    gaps = indices[None, :] - indices[:, None]
    return not np.any(np.abs(gaps - length) < _EPS)


def randomized_indices(duration: float, length: float, k: int, seed: int | None = None, retries: int = 100) -> list[int]:
    """Draw ``k`` distinct whole second indices in ``[0, duration]`` with ``i_s + length != i_t``.

    Raises:
        ValueError: when no valid draw is found after ``retries`` attempts.
    """
    top = int(math.floor(duration + _EPS))
    if not 0 < k <= top:
        raise ValueError(f"k must be in (0, {top}], got {k}")
    if duration < length - _EPS:
        raise ValueError(f"Sample lasts {duration:.2f}s, less than a {length}s chunk")
    rng = np.random.default_rng(seed)
    for _ in range(retries):
        indices = np.sort(rng.choice(top + 1, size=k, replace=False))
        if _valid_indices(indices.astype(float), length):
            return indices.tolist()
    raise ValueError(f"No {k} indices satisfying the spacing rule found after {retries} draws")


def randomized_chunks(
    sample: Sample,
    length: float = 6.0,
    k: int = 1,
    seed: int | None = None,
    retries: int = 100,
    motion_config: MotionConfig | None = None,
) -> list[Chunk]:
    """Chunks starting (or ending) at ``k`` random whole second indices of the sample.

    An index ``i <= L - l`` yields the chunk ``[i, i + l)``, a later index the chunk
    ``[i - l, i]``. Chunks may overlap; the same seed gives the same chunks.

    Parameters:
        sample: The sample to split.
        length: The chunk length in seconds.
        k: Number of chunks.
        seed: Seed of the index draw.
        retries: Number of draws before giving up.
        motion_config: Parameters of the accelerometer motion extraction.

    Returns:
        The chunks in index order.
    """
    duration = sample.duration
    windows = []
    for i in randomized_indices(duration, length, k, seed, retries):
        start = float(i) if i <= duration - length + _EPS else float(i) - length
        windows.append((sample.start + start, sample.start + start + length, None))
    return _collect(sample, windows, sample_accel_motion(sample, motion_config))


def chunk_sample(
    sample: Sample,
    config: ChunkConfig | None = None,
    motion_config: MotionConfig | None = None,
    seed: int | None = None,
) -> list[Chunk]:
    """Chunk a sample with the strategy named in the configuration."""
    config = config or ChunkConfig()
    if config.strategy == "sequential":
        return sequential_chunks(sample, config.length, config.keep_remainder, motion_config)
    if config.strategy == "segment":
        return segment_chunks(sample, config.length, motion_config)
    if config.k is None:
        raise ValidationError("The randomized strategy needs a number of chunks k")
    return randomized_chunks(sample, config.length, config.k, seed, config.retries, motion_config)


def chunk_samples(
    samples: Sequence[Sample],
    config: ChunkConfig | None = None,
    motion_config: MotionConfig | None = None,
    seed: int | None = None,
) -> list[Chunk]:
    """Chunk every sample of a corpus, each with its own seed derived from ``seed``."""
    seeds = np.random.SeedSequence(seed).spawn(len(samples))
    chunks = []
    for sample, child in zip(samples, seeds):
        chunks.extend(chunk_sample(sample, config, motion_config, int(child.generate_state(1)[0])))
    logger.info(f"{len(samples)} samples split into {len(chunks)} chunks")
    return chunks


@register_class_accessor(Sample, "liveproof")
class SampleAccessor:
    """Toolbox for the :py:class:`~liveproof.model.Sample` class."""

    def __init__(self, obj: Sample):
        """Initialize the Sample accessor."""
        self._obj = obj

    def accel_motion(self, config: MotionConfig | None = None) -> MotionTrace:
        """Accelerometer motion of the sample, see :py:func:`sample_accel_motion`."""
        return sample_accel_motion(self._obj, config)

    def chunks(self, strategy: str = "segment", length: float = 6.0, **kwargs) -> list[Chunk]:
        """Chunk the sample with one of the ``sequential``, ``segment`` or ``randomized`` strategies.

        Parameters:
            strategy: The chunking strategy.
            length: The chunk length in seconds.
            kwargs: The strategy specific parameters (``keep_remainder``, ``k``, ``seed``, ...).

        Returns:
            The chunks of the sample.
        """
        if strategy == "sequential":
            return sequential_chunks(self._obj, length, **kwargs)
        if strategy == "segment":
            return segment_chunks(self._obj, length, **kwargs)
        if strategy == "randomized":
            return randomized_chunks(self._obj, length, **kwargs)
        raise ValueError(f"Unknown chunking strategy {strategy!r}")
