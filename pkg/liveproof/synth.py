"""Synthetic genuine recordings for every video motion category.

A latent camera path (centimetres, on a fine time grid) is built from the components implied by
the category. The oscillating part is the hand shake of every category plus a gait oscillation
when walking; the travelling part is a constant pan when scanning or a tracking path when
following. The video trace is the in-plane path scaled by a distance dependent gain. The
accelerometer stream is the second derivative of the path, with the travelling part seen through
a first order inertia lag so readings decay after the camera stops, plus gravity and sensor noise.
"""
from __future__ import annotations

import logging
from typing import Mapping, Sequence, Union

import numpy as np
from scipy import signal

from .config import SynthConfig
from .model import (
    MERGED_ID,
    AccelStream,
    Annotation,
    CameraMotion,
    Distance,
    Label,
    MotionCategory,
    MotionTrace,
    Sample,
    Source,
    UserMotion,
)

logger = logging.getLogger(__name__)

FINE_RATE_HZ = 200.0
"Rate of the latent path grid."

RAMP_S = 0.5
"Duration of the envelope that fades every motion component in from rest."

SETTLE_S = 0.05
"Stillness at the start of a recording, the first readings hold gravity only."

GRAVITY = 9.81

CAMPAIGN_CHUNKS: dict[int | str, int] = {
    1: 26, 2: 50, MERGED_ID: 82, 4: 18, 5: 44, 6: 42, 8: 28, 9: 26, 10: 35, 11: 28, 12: 22,
}  # fmt: skip
"Genuine chunk count of each category in the free-form recording campaign, 401 in total."

CorpusSpec = Mapping[Union[int, str], Union[Mapping, Sequence[Mapping]]]


# -- latent path components ----------------------------------------------------
def _envelope(t: np.ndarray) -> np.ndarray:
    u = np.clip((t - SETTLE_S) / RAMP_S, 0, 1)
    return u**3 * (u * (6 * u - 15) + 10)


def _fade_in(t: np.ndarray, component: np.ndarray) -> np.ndarray:
    """Fade a component in, so position, velocity and acceleration start at 0.

    The component keeps its mean: a zero mean oscillation stays zero mean after the ramp.
    """
    return component * _envelope(t)[:, None]


def _jitter(t: np.ndarray, params: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    """Hand shake: Gaussian noise band limited to ``params.jitter_band_hz``."""
    if params.jitter_amplitude == 0:
        return np.zeros((t.size, 3))
    low, high = params.jitter_band_hz
    # steep skirts keep the shake acceleration under the Nyquist frequency of the accelerometer
    sos = signal.butter(4, [low, high], btype="bandpass", fs=FINE_RATE_HZ, output="sos")
    noise = signal.sosfiltfilt(sos, rng.standard_normal((t.size, 3)), axis=0)
    noise /= np.maximum(noise.std(axis=0), 1e-12)
    # depth shake is weaker than the in-plane one
    return noise * params.jitter_amplitude * np.array([1.0, 1.0, 0.3])


def _pan(t: np.ndarray, params: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    """Constant speed horizontal pan, in a random direction."""
    path = np.zeros((t.size, 3))
    path[:, 0] = rng.choice([-1.0, 1.0]) * params.pan_rate * t
    return path


def _follow(t: np.ndarray, params: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    """Tracking path: piecewise constant velocity segments smoothed into a continuous path."""
    velocity = np.zeros((t.size, 3))
    start = 0.0
    while start < t[-1]:
        end = start + rng.uniform(1.5, 3.0)
        angle = rng.uniform(-np.pi / 4, np.pi / 4) + rng.choice([0.0, np.pi])
        keep = (t >= start) & (t < end)
        velocity[keep, 0] = params.follow_rate * np.cos(angle)
        velocity[keep, 1] = params.follow_rate * np.sin(angle)
        start = end
    sos = signal.butter(2, 1.0, btype="lowpass", fs=FINE_RATE_HZ, output="sos")
    velocity = signal.sosfiltfilt(sos, velocity, axis=0)
    path = np.cumsum(velocity, axis=0) / FINE_RATE_HZ
    return path - path[0]


def _gait(t: np.ndarray, params: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    """Walking: vertical bob at the step frequency, lateral sway at half of it."""
    f = params.gait_frequency_hz * rng.uniform(0.9, 1.1)
    phase = rng.uniform(0, 2 * np.pi)
    amplitude = params.gait_amplitude
    path = np.zeros((t.size, 3))
    path[:, 0] = 0.5 * amplitude * np.sin(np.pi * f * t + phase)
    path[:, 1] = amplitude * np.sin(2 * np.pi * f * t + phase)
    path[:, 2] = 0.3 * amplitude * np.sin(2 * np.pi * f * t + phase + np.pi / 2)
    return path


def latent_components(
    category: MotionCategory, t: np.ndarray, params: SynthConfig, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Oscillating and travelling parts of the camera displacement (cm) on the grid ``t``.

    Both parts are 0 at ``t[0]`` and start at rest.
    """
    camera = category.camera_motion
    if camera is None:
        # the merged close/walking category is either stationary or scanning
        camera = CameraMotion.SCANNING if rng.random() < 0.5 else CameraMotion.STATIONARY
    shake = _fade_in(t, _jitter(t, params, rng))
    travel = np.zeros_like(shake)
    if camera is CameraMotion.SCANNING:
        travel = _fade_in(t, _pan(t, params, rng))
    elif camera is CameraMotion.FOLLOWING:
        travel = _fade_in(t, _follow(t, params, rng))
    if category.user_motion is UserMotion.WALKING:
        shake = shake + _fade_in(t, _gait(t, params, rng))
    return shake, travel


def _lag(values: np.ndarray, tau: float) -> np.ndarray:
    """First order inertia lag of time constant ``tau`` on the fine grid."""
    if tau <= 0:
        return values
    beta = (1 / FINE_RATE_HZ) / (tau + 1 / FINE_RATE_HZ)
    return signal.lfilter([beta], [1, beta - 1], values, axis=0)


def _gravity(tilt_deg: float, rng: np.random.Generator) -> np.ndarray:
    tilt = np.deg2rad(tilt_deg)
    azimuth = rng.uniform(0, 2 * np.pi)
    return GRAVITY * np.array([np.sin(tilt) * np.cos(azimuth), np.sin(tilt) * np.sin(azimuth), np.cos(tilt)])


# -- samples -------------------------------------------------------------------
def _second_derivative(path: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Acceleration in m/s² of a path in centimetres."""
    return np.gradient(np.gradient(path, t, axis=0), t, axis=0) / 100


def gen_recording(
    category: MotionCategory | int | str,
    duration_s: float,
    seed: int | np.random.SeedSequence | None = None,
    params: SynthConfig | None = None,
    id: str | None = None,
    chunk_length: float = 6.0,
) -> tuple[Sample, MotionTrace]:
    """Generate a genuine sample together with the latent camera path it was recorded from.

    Parameters are those of :py:func:`gen_sample`.

    Returns:
        The sample and the 3 axis physical displacement (cm) on the accelerometer clock, the
        reference an accelerometer motion trace is expected to recover.
    """
    if not isinstance(category, MotionCategory):
        category = MotionCategory.from_id(category)
    if duration_s < chunk_length:
        raise ValueError(f"duration_s must be at least {chunk_length}s, got {duration_s}")
    params = params or SynthConfig()
    rng = np.random.default_rng(seed)

    accel_dt = 1 / params.accel_rate_hz
    t = np.arange(0, duration_s + 2 * accel_dt, 1 / FINE_RATE_HZ)
    shake, travel = latent_components(category, t, params, rng)
    path = shake + travel

    gain = params.close_gain if category.distance is Distance.CLOSE else params.far_gain
    video_dt = params.stride / params.fps
    t_video = np.arange(int(round(duration_s / video_dt)) + 1) * video_dt
    video = np.column_stack([np.interp(t_video, t, path[:, i]) for i in range(2)]) * gain
    video = video + rng.normal(0, params.video_noise, video.shape)

    # only the travelling motion stops, the inertia lag is the decay of readings after a stop
    acceleration = _second_derivative(shake, t) + _lag(_second_derivative(travel, t), params.inertia_tau)
    t_accel = np.arange(int(np.ceil(duration_s / accel_dt)) + 1) * accel_dt
    accel = np.column_stack([np.interp(t_accel, t, acceleration[:, i]) for i in range(3)])
    accel = accel + _gravity(params.tilt_deg, rng) + rng.normal(0, params.accel_noise, accel.shape)
    latent = np.column_stack([np.interp(t_accel, t, path[:, i]) for i in range(3)])

    name = str(category.id).replace("&", "_")
    sample = Sample(
        id=id or f"c{name}-{rng.integers(1_000_000):06d}",
        video_motion=MotionTrace.from_series(t_video, video, Source.VIDEO),
        accel=AccelStream(t_accel, accel, params.accel_rate_hz),
        annotation=Annotation.single(category, 0.0, float(duration_s)),
        label=Label.GENUINE,
        provenance="genuine",
    )
    return sample, MotionTrace.from_series(t_accel, latent, Source.ACCEL)


def gen_sample(
    category: MotionCategory | int | str,
    duration_s: float,
    seed: int | np.random.SeedSequence | None = None,
    params: SynthConfig | None = None,
    id: str | None = None,
    chunk_length: float = 6.0,
) -> Sample:
    """Generate a genuine sample of one motion category.

    Parameters:
        category: The motion category, or its identifier.
        duration_s: The sample duration in seconds, at least ``chunk_length``.
        seed: Seed of the generator, the same seed gives the same sample.
        params: The generator parameters.
        id: The sample identifier, derived from the category when not given.
        chunk_length: Minimum duration accepted.

    Returns:
        A genuine sample whose annotation covers the whole duration with ``category``.

    Examples:
        .. code-block:: python

            from liveproof.synth import gen_sample

            sample = gen_sample(6, 12.0, seed=0)
            sample.video_motion.axis("x")
    """
    return gen_recording(category, duration_s, seed, params, id, chunk_length)[0]


def _entries(value: Mapping | Sequence[Mapping]) -> list[Mapping]:
    return [value] if isinstance(value, Mapping) else list(value)


def gen_corpus(spec: CorpusSpec, seed: int | None = None, params: SynthConfig | None = None) -> list[Sample]:
    """Generate a corpus of genuine samples.

    Parameters:
        spec: For each category identifier, a ``{"count": n, "duration": seconds}`` entry or a
            list of such entries.
        seed: Seed of the corpus, every sample receives its own child seed.
        params: The generator parameters.

    Returns:
        The samples, in the order of ``spec``, identified as ``c<category>-<index>``.
    """
    plan = []
    for category_id, value in spec.items():
        category = MotionCategory.from_id(category_id)
        for entry in _entries(value):
            plan.extend([(category, float(entry["duration"]))] * int(entry["count"]))
    seeds = np.random.SeedSequence(seed).spawn(len(plan))
    samples = []
    counters: dict[str, int] = {}
    for (category, duration), child in zip(plan, seeds):
        name = str(category.id).replace("&", "_")
        index = counters.get(name, 0)
        counters[name] = index + 1
        samples.append(gen_sample(category, duration, child, params, id=f"c{name}-{index:03d}"))
    logger.info(f"generated {len(samples)} synthetic samples")
    return samples


def campaign_spec(chunk_length: float = 6.0) -> dict:
    """Corpus spec reproducing the per category genuine chunk counts of the recording campaign.

    Each category gets two chunk samples, plus a single chunk sample when its count is odd.
    """
    spec: dict = {}
    for category_id, count in CAMPAIGN_CHUNKS.items():
        entries = [{"count": count // 2, "duration": 2 * chunk_length}]
        if count % 2:
            entries.append({"count": 1, "duration": chunk_length})
        spec[category_id] = entries
    return spec


def corpus_spec_from_json(data: Mapping) -> dict:
    """Normalize a JSON corpus spec: string keys become category identifiers."""
    spec: dict = {}
    for key, value in data.items():
        key = str(key).strip()
        spec[int(key) if key.isdigit() else key] = value
    return spec
