"""Pytest session configuration."""

import numpy as np
import pytest

from liveproof.attacks import perfect_mirror
from liveproof.chunking import chunk_samples
from liveproof.config import ModelConfig
from liveproof.experiments import features_frame
from liveproof.model import Chunk, FrameSequence, MotionTrace, Source
from liveproof.synth import gen_corpus, gen_sample

CORPUS_SPEC = {1: {"count": 4, "duration": 12.0}, 6: {"count": 4, "duration": 12.0}}
"""Two categories of 4 two-chunk samples each."""


def _make_chunk(video, accel=None, parent="s", start=0.0, rate=6.0, **kwargs) -> Chunk:
    """Build a chunk from raw x/y video values and x/y(/z) accelerometer values on one time base."""
    video = np.asarray(video, dtype=float)
    t = start + np.arange(video.shape[0]) / rate
    accel = video if accel is None else np.asarray(accel, dtype=float)
    if accel.shape[1] == 2:
        accel = np.column_stack([accel, np.zeros(accel.shape[0])])
    return Chunk(
        parent_sample_id=parent,
        start_s=start,
        end_s=start + video.shape[0] / rate,
        video_motion=MotionTrace.from_series(t, video, Source.VIDEO),
        accel_motion=MotionTrace.from_series(t, accel, Source.ACCEL),
        **kwargs,
    )


# -- chunks --------------------------------------------------------------------
@pytest.fixture
def chunk_factory():
    """Return a builder of chunks from raw video and accelerometer values."""
    return _make_chunk


# -- frames --------------------------------------------------------------------
@pytest.fixture(scope="session")
def texture() -> np.ndarray:
    """Return a 64x64 random 8-bit texture."""
    return np.random.default_rng(0).integers(0, 256, (64, 64)).astype(np.uint8)


@pytest.fixture
def panning_frames(texture) -> FrameSequence:
    """Return 11 frames of a scene moving 1 pixel down and 2 pixels right per frame."""
    return FrameSequence([np.roll(texture, (k, 2 * k), axis=(0, 1)) for k in range(11)], fps=30.0)


# -- samples -------------------------------------------------------------------
@pytest.fixture(scope="session")
def sample():
    """Return a 12 s genuine sample of the far/standing/scanning category."""
    return gen_sample(6, 12.0, seed=0)


@pytest.fixture(scope="session")
def long_sample():
    """Return a 20 s genuine sample of the close/standing/stationary category."""
    return gen_sample(1, 20.0, seed=1)


@pytest.fixture(scope="session")
def corpus():
    """Return 8 genuine two-chunk samples of categories 1 and 6."""
    return gen_corpus(CORPUS_SPEC, seed=0)


@pytest.fixture(scope="session")
def genuine_chunks(corpus):
    """Return the 16 segment chunks of the corpus."""
    return chunk_samples(corpus, seed=0)


@pytest.fixture(scope="session")
def mirror_chunks(genuine_chunks):
    """Return the perfect mirror of every genuine chunk."""
    return [perfect_mirror(c) for c in genuine_chunks]


@pytest.fixture(scope="session")
def mirror_frame(genuine_chunks, mirror_chunks):
    """Return the descriptor frame of the genuine chunks and their mirrors."""
    return features_frame([*genuine_chunks, *mirror_chunks])


@pytest.fixture
def small_forest() -> ModelConfig:
    """Return a fast random forest configuration."""
    return ModelConfig(kind="random_forest", n_trees=15, min_leaf=1)


# -- toy matrices --------------------------------------------------------------
@pytest.fixture
def separable():
    """Return 200 rows of 4 features labelled fake when the first one is positive, with a 0.4 gap."""
    rng = np.random.default_rng(42)
    X = rng.normal(size=(400, 4))
    X = X[np.abs(X[:, 0]) > 0.2][:200]
    return X, (X[:, 0] > 0).astype(int)
