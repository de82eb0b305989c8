"""A toolbox to verify that a video was recorded live on the device that claims it.

The ``liveproof`` package compares the camera motion seen in a video with the motion measured by
the accelerometer of the recording device. It extracts both motions, aligns them with dynamic
time warping, learns to separate genuine recordings from fabricated ones and fuses the chunk
decisions into a sample verdict. The core types are extended with a ``liveproof`` namespace that
is friendly with method chaining.
"""
# import the accessor namespace
from .accessors import register_class_accessor

# the domain types come first as every accessor extends them
from .model import (
    AccelStream,
    Annotation,
    Chunk,
    FrameSequence,
    Label,
    LiveproofWarning,
    MotionCategory,
    MotionTrace,
    ParseError,
    Sample,
    Segment,
    Source,
    ValidationError,
)

# then we extend the domain types
from .motion import AccelStreamAccessor, FrameSequenceAccessor
from .dtw import MotionTraceAccessor
from .features import ChunkAccessor
from .chunking import SampleAccessor

__title__ = "liveproof"
__summary__ = "Video liveness verification from video and accelerometer motion"
__version__ = "0.1.0"

__author__ = "liveproof developers"

__license__ = "MIT"
__copyright__ = "2024 liveproof developers"
