"""Motion extraction from camera frames (phase correlation) and from accelerometer readings.

The frame side estimates the translation between frames and sums it into a cumulative shift
trace. The accelerometer side removes gravity with an exponential filter and integrates the
residual twice into a displacement trace.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import fft, integrate, signal

from .accessors import register_class_accessor
from .config import MotionConfig
from .model import (
    AccelStream,
    FrameSequence,
    LiveproofWarning,
    MotionTrace,
    Source,
    ValidationError,
)

logger = logging.getLogger(__name__)

MIN_FRAME_SIZE = 8
"Smallest frame side accepted by :py:func:`phase_correlate`."


@dataclass(frozen=True)
class FrameShift:
    """Translation from one frame to the next, in pixels.

    A scene moving right yields a positive ``dx``, a scene moving down a positive ``dy``.
    """

    dx: float
    dy: float
    peak_response: float
    degenerate: bool = False


# -- frame motion --------------------------------------------------------------
def _parabolic(c_minus: float, c0: float, c_plus: float) -> float:
    """Vertex offset of the parabola through three equally spaced samples."""
    denominator = c_minus - 2 * c0 + c_plus
    if denominator >= 0:
        return 0.0
    offset = 0.5 * (c_minus - c_plus) / denominator
    return float(np.clip(offset, -0.5, 0.5))


def phase_correlate(
    frame_a: np.ndarray, frame_b: np.ndarray, subpixel: bool = True, hann: bool = False
) -> FrameShift:
    """Estimate the translation between two frames with the Fourier shift property.

    The normalized cross-power spectrum of the two frames is transformed back to the spatial
    domain and the location of its maximum gives the shift.

    Parameters:
        frame_a: The reference frame.
        frame_b: The frame to register against ``frame_a``.
        subpixel: Refine the integer peak with a parabola fitted on its neighbours.
        hann: Apply a Hann window before the transform, for content that does not wrap around.

    Returns:
        The shift of ``frame_b`` relative to ``frame_a``.

    Examples:
        .. code-block:: python

            import numpy as np
            from liveproof.motion import phase_correlate

            a = np.random.default_rng(0).integers(0, 255, (64, 64))
            phase_correlate(a, np.roll(a, (-2, 3), axis=(0, 1)))  # dx=3, dy=-2
    """
    a = np.asarray(frame_a, dtype=float)
    b = np.asarray(frame_b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"Frames have different dimensions: {a.shape} and {b.shape}")
    if a.ndim != 2 or min(a.shape) < MIN_FRAME_SIZE:
        raise ValueError(f"Frames must be 2D and at least {MIN_FRAME_SIZE}x{MIN_FRAME_SIZE}, got {a.shape}")

    a, b = a - a.mean(), b - b.mean()
    if hann:
        window = np.outer(signal.windows.hann(a.shape[0]), signal.windows.hann(a.shape[1]))
        a, b = a * window, b * window

    cross_power = np.conj(fft.fft2(a)) * fft.fft2(b)
    magnitude = np.abs(cross_power)
    degenerate = bool(magnitude.max() <= 1e-12)
    if degenerate:
        return FrameShift(0.0, 0.0, 0.0, degenerate=True)
    cross_power = np.where(magnitude > 1e-12, cross_power / np.maximum(magnitude, 1e-12), 0)
    correlation = fft.ifft2(cross_power).real

    rows, cols = correlation.shape
    row, col = np.unravel_index(int(np.argmax(correlation)), correlation.shape)
    peak = float(correlation[row, col])
    dy = float(row - rows if row > rows // 2 else row)
    dx = float(col - cols if col > cols // 2 else col)
    if subpixel:
        dy += _parabolic(correlation[(row - 1) % rows, col], peak, correlation[(row + 1) % rows, col])
        dx += _parabolic(correlation[row, (col - 1) % cols], peak, correlation[row, (col + 1) % cols])
    return FrameShift(dx, dy, max(peak, 0.0))


def frame_shifts(
    frames: FrameSequence, stride: int = 5, subpixel: bool = True, hann: bool = False
) -> list[FrameShift]:
    """Shifts between the frames ``k * stride`` and ``(k + 1) * stride`` of a sequence."""
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    if len(frames) < stride + 1:
        raise ValueError(f"{len(frames)} frames are not enough for a stride of {stride}")
    stack = frames.frames
    pairs = range(0, len(frames) - stride, stride)
    return [phase_correlate(stack[i], stack[i + stride], subpixel, hann) for i in pairs]


def vma(frames: FrameSequence, stride: int = 5, subpixel: bool = True, hann: bool = False) -> MotionTrace:
    """Video motion analysis: cumulative camera shift along the x and y axes.

    Point ``k`` of the trace sits at ``t = k * stride / fps`` and holds the sum of the first
    ``k`` pair shifts. Degenerate pairs (flat frames) contribute a zero shift and raise a
    :py:class:`~liveproof.model.LiveproofWarning`.

    Parameters:
        frames: The frame sequence.
        stride: Number of frames between two correlated frames.
        subpixel: Parabolic refinement of the correlation peak.
        hann: Hann windowing before the transform.

    Returns:
        A 2-axis video motion trace.
    """
    shifts = frame_shifts(frames, stride, subpixel, hann)
    degenerate = sum(s.degenerate for s in shifts)
    if degenerate:
        msg = f"{degenerate} of {len(shifts)} frame pairs are flat, their shift is set to 0"
        warnings.warn(msg, category=LiveproofWarning, stacklevel=2)
    steps = np.array([[s.dx, s.dy] for s in shifts])
    values = np.vstack([np.zeros((1, 2)), np.cumsum(steps, axis=0)])
    t = np.arange(values.shape[0]) * stride / frames.fps
    logger.debug(f"vma: {len(frames)} frames, {len(shifts)} pairs")
    return MotionTrace(t, values, Source.VIDEO)


# -- accelerometer motion ------------------------------------------------------
def gravity_filter(accel: AccelStream, alpha: float = 0.8) -> AccelStream:
    """Remove gravity from accelerometer readings.

    The gravity estimate is the exponential average ``g_k = alpha * g_(k-1) + (1 - alpha) * a_k``
    started at ``g_0 = a_0``; the output is the high-pass residual ``a_k - g_k``.

    Parameters:
        accel: The raw accelerometer stream.
        alpha: The smoothing factor in (0, 1).

    Returns:
        The linear acceleration stream.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    a = accel.values
    gravity, _ = signal.lfilter([1 - alpha], [1, -alpha], a, axis=0, zi=(alpha * a[0])[None, :])
    return AccelStream(accel.t, a - gravity, accel.nominal_rate_hz)


def stillness_mask(t: np.ndarray, linear: np.ndarray, threshold: float, window: float) -> np.ndarray:
    """Flag the readings of every run of sub threshold magnitude lasting at least ``window`` s."""
    below = np.linalg.norm(linear, axis=1) < threshold
    mask = np.zeros(below.size, dtype=bool)
    start = None
    for k, quiet in enumerate(np.append(below, False)):
        if quiet and start is None:
            start = k
        elif not quiet and start is not None:
            if t[k - 1] - t[start] >= window - 1e-9:
                mask[start:k] = True
            start = None
    return mask


def dead_reckon(
    t: np.ndarray,
    linear: np.ndarray,
    stillness_threshold: float = 0.1,
    stillness_window: float = 0.25,
    unit_scale: float = 100.0,
) -> np.ndarray:
    """Integrate linear acceleration twice into a displacement, per axis.

    Velocity is integrated with the trapezoid rule and reset to 0 on every stillness run.

    Returns:
        The ``(n, axes)`` displacement, 0 at the first reading, multiplied by ``unit_scale``.
    """
    t = np.asarray(t, dtype=float)
    linear = np.asarray(linear, dtype=float)
    still = stillness_mask(t, linear, stillness_threshold, stillness_window)
    velocity = np.zeros_like(linear)
    for k in range(1, t.size):
        velocity[k] = velocity[k - 1] + 0.5 * (linear[k] + linear[k - 1]) * (t[k] - t[k - 1])
        if still[k]:
            velocity[k] = 0.0
    displacement = integrate.cumulative_trapezoid(velocity, t, axis=0, initial=0)
    return displacement * unit_scale


def ima(
    accel: AccelStream,
    alpha: float = 0.8,
    stillness_threshold: float = 0.1,
    stillness_window: float = 0.25,
    unit_scale: float = 100.0,
) -> MotionTrace:
    """Inertial motion analysis: cumulative device displacement along the x, y and z axes.

    Parameters:
        accel: The raw accelerometer stream.
        alpha: The gravity filter smoothing factor.
        stillness_threshold: Linear acceleration magnitude (m/s²) under which the device is
            considered still.
        stillness_window: Minimum duration (s) of a still run resetting the velocity.
        unit_scale: Multiplier from metres to motion units.

    Returns:
        A 3-axis accelerometer motion trace.
    """
    linear = gravity_filter(accel, alpha)
    displacement = dead_reckon(linear.t, linear.values, stillness_threshold, stillness_window, unit_scale)
    return MotionTrace(accel.t, displacement, Source.ACCEL)


def recovery_error(estimate: MotionTrace, reference: MotionTrace) -> float:
    """Relative RMS error of ``estimate`` against ``reference`` on the reference time base."""
    axes = min(estimate.values.shape[1], reference.values.shape[1])
    rebuilt = np.column_stack([np.interp(reference.t, estimate.t, estimate.values[:, i]) for i in range(axes)])
    target = reference.values[:, :axes]
    scale = np.sqrt(np.mean(target**2))
    if scale == 0:
        raise ValidationError("Reference trace has no motion, the relative error is undefined")
    return float(np.sqrt(np.mean((rebuilt - target) ** 2)) / scale)


# -- accessors -----------------------------------------------------------------
@register_class_accessor(FrameSequence, "liveproof")
class FrameSequenceAccessor:
    """Toolbox for the :py:class:`~liveproof.model.FrameSequence` class."""

    def __init__(self, obj: FrameSequence):
        """Initialize the FrameSequence accessor."""
        self._obj = obj

    def shifts(self, config: MotionConfig | None = None) -> list[FrameShift]:
        """Pairwise frame shifts, see :py:func:`frame_shifts`."""
        config = config or MotionConfig()
        return frame_shifts(self._obj, config.stride, config.subpixel, config.hann)

    def vma(self, config: MotionConfig | None = None) -> MotionTrace:
        """Video motion trace, see :py:func:`vma`."""
        config = config or MotionConfig()
        return vma(self._obj, config.stride, config.subpixel, config.hann)


@register_class_accessor(AccelStream, "liveproof")
class AccelStreamAccessor:
    """Toolbox for the :py:class:`~liveproof.model.AccelStream` class."""

    def __init__(self, obj: AccelStream):
        """Initialize the AccelStream accessor."""
        self._obj = obj

    def gravity_filter(self, alpha: float = 0.8) -> AccelStream:
        """Linear acceleration, see :py:func:`gravity_filter`."""
        return gravity_filter(self._obj, alpha)

    def ima(self, config: MotionConfig | None = None) -> MotionTrace:
        """Accelerometer motion trace, see :py:func:`ima`."""
        c = config or MotionConfig()
        return ima(self._obj, c.alpha, c.stillness_threshold, c.stillness_window, c.unit_scale)
