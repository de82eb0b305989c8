"""Generators of fabricated chunks and samples.

Each generator keeps the video motion of its target and fabricates the accelerometer side at the
motion trace level:

- ``cluster``: borrow the accelerometer motion of a genuine chunk with similar video motion.
- ``sandwich``: a delayed, smoothed and noisy copy of the video motion, emulating a person
  imitating the on-screen motion with a second device.
- ``mirror``: copy the video motion.
- ``ipc``: mirror, insert points, perturb every value and apply a calibration factor.
- ``pfa``: mirror, then perturb each half second snippet as much as genuine snippets of similar
  motion differ from their video.
- ``stitch``: replace some chunks of a genuine sample by fabricated ones.

All generators are deterministic for a given seed.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.ndimage import uniform_filter1d
from sklearn.cluster import KMeans
from sklearn.preprocessing import StandardScaler

from .chunking import chunk_count, sample_accel_motion
from .config import AttackConfig, MotionConfig
from .dtw import dtw
from .model import Chunk, Label, LiveproofWarning, MotionTrace, Sample, Source, ValidationError

logger = logging.getLogger(__name__)

ATTACKS = ("cluster", "sandwich", "mirror", "ipc", "pfa")
"Chunk level attacks, the stitch attack works on samples."

N_BUCKETS = 10


def _seeds(seed: int | np.random.SeedSequence | None, n: int) -> list[np.random.SeedSequence]:
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return root.spawn(n)


def _fake(target: Chunk, accel_motion: MotionTrace, provenance: str) -> Chunk:
    return target.replace(accel_motion=accel_motion, label=Label.FAKE, provenance=provenance, accel=None)


# -- cluster -------------------------------------------------------------------
def motion_descriptor(trace: MotionTrace) -> np.ndarray:
    """Per axis (mean, std, total displacement, direction sign) of the x and y video motion."""
    values = trace.values[:, :2]
    total = values[-1] - values[0]
    return np.concatenate([values.mean(axis=0), values.std(axis=0), total, np.sign(total)])


def _fit_clusters(descriptors: np.ndarray, k: int, seed: int, retries: int) -> KMeans:
    for attempt in range(retries):
        model = KMeans(n_clusters=k, n_init=10, random_state=seed + attempt).fit(descriptors)
        if np.all(np.bincount(model.labels_, minlength=k) > 0):
            return model
        logger.debug(f"k-means attempt {attempt} left an empty cluster, re-seeding")
    raise ValueError(f"k-means left an empty cluster after {retries} attempts")


def cluster_attack(
    targets: Sequence[Chunk],
    pool: Sequence[Chunk],
    k: int = 6,
    seed: int | None = None,
    retries: int = 10,
) -> list[Chunk]:
    """Pair every target video with the accelerometer motion of a similar genuine chunk.

    The pool chunks are clustered with k-means on the standardized descriptors of their video
    motion. Each target is assigned to its nearest cluster and receives the accelerometer motion
    of a random member of that cluster other than itself.

    Parameters:
        targets: The chunks whose video is kept.
        pool: The genuine donor chunks, at least ``k`` of them.
        k: The number of clusters.
        seed: Seed of the clustering and of the donor draw.
        retries: Number of re-seeded k-means runs accepted when a cluster ends up empty.

    Returns:
        One fake chunk per target, in the target order.
    """
    if len(pool) < k:
        raise ValueError(f"The pool holds {len(pool)} chunks, fewer than k={k}")
    seed = 0 if seed is None else int(seed)
    scaler = StandardScaler().fit(np.array([motion_descriptor(c.video_motion) for c in pool]))
    pool_x = scaler.transform(np.array([motion_descriptor(c.video_motion) for c in pool]))
    model = _fit_clusters(pool_x, k, seed, retries)
    pool_ids = np.array([c.id for c in pool])

    fakes = []
    for target, child in zip(targets, _seeds(seed, len(targets))):
        rng = np.random.default_rng(child)
        x = scaler.transform(motion_descriptor(target.video_motion)[None, :])
        cluster = int(model.predict(x)[0])
        members = np.flatnonzero((model.labels_ == cluster) & (pool_ids != target.id))
        if members.size == 0:
            members = np.flatnonzero(pool_ids != target.id)
        if members.size == 0:
            raise ValueError(f"No donor other than {target.id} in the pool")
        donor = pool[int(rng.choice(members))]
        accel = donor.accel_motion.shift_time(target.start_s - donor.start_s)
        fakes.append(_fake(target, accel, "cluster"))
    logger.debug(f"cluster attack: {len(fakes)} fakes from a pool of {len(pool)}")
    return fakes


# -- mirrors -------------------------------------------------------------------
def mirror_trace(video: MotionTrace) -> MotionTrace:
    """The video motion copied into a 3 axis accelerometer motion, ``z`` set to 0."""
    values = np.column_stack([video.values[:, :2], np.zeros(len(video))])
    return MotionTrace(video.t, values, Source.ACCEL)


def perfect_mirror(target: Chunk) -> Chunk:
    """Fake chunk whose accelerometer motion equals the video motion exactly."""
    return _fake(target, mirror_trace(target.video_motion), "mirror")


def insert_points(t: np.ndarray, values: np.ndarray, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Insert ``i`` points between each consecutive pair, each equal to the mean of the pair.

    The inserted timestamps are evenly spaced between the two neighbours, so a series of ``n``
    points grows to ``n + i * (n - 1)``.
    """
    if i < 0:
        raise ValueError(f"i must be >= 0, got {i}")
    if i == 0 or t.size < 2:
        return t.copy(), values.copy()
    fractions = np.arange(1, i + 1) / (i + 1)
    inserted_t = t[:-1, None] + fractions[None, :] * np.diff(t)[:, None]
    means = 0.5 * (values[:-1] + values[1:])
    new_t = np.column_stack([t[:-1, None], inserted_t]).ravel()
    new_values = np.repeat(values[:-1], i + 1, axis=0)
    block = new_values.reshape(t.size - 1, i + 1, values.shape[1])
    block[:, 1:, :] = means[:, None, :]
    return np.append(new_t, t[-1]), np.vstack([block.reshape(-1, values.shape[1]), values[-1:]])


def _perturbation(shape: tuple, p: float, rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(1 - p, 1 + p, shape)


def ipc_mirror(
    target: Chunk,
    p: float = 0.1,
    c_range: Sequence[float] = (1.0, 2.0),
    i_choices: Sequence[int] = (2, 3),
    seed: int | np.random.SeedSequence | None = None,
) -> Chunk:
    """Mirror with point insertion, perturbation and calibration.

    ``i`` is drawn once from ``i_choices`` and that many points are inserted between every pair
    of mirrored points. Each value is then multiplied by its own factor drawn in
    ``[1 - p, 1 + p]`` and the whole stream by ``c`` drawn in ``c_range``.

    Parameters:
        target: The chunk to fake.
        p: The relative perturbation.
        c_range: The calibration factor range.
        i_choices: The possible numbers of inserted points.
        seed: Seed of the draws.

    Returns:
        The fake chunk.
    """
    rng = np.random.default_rng(seed)
    mirror = mirror_trace(target.video_motion)
    i = int(rng.choice(np.asarray(i_choices)))
    c = float(rng.uniform(*c_range))
    t, values = insert_points(mirror.t, mirror.values, i)
    values = values * _perturbation(values.shape, p, rng) * c
    return _fake(target, MotionTrace(t, values, Source.ACCEL), "ipc")


# -- perturbed fingerprint -----------------------------------------------------
@dataclass(frozen=True, eq=False)
class Snippet:
    """A short (video, accelerometer) motion pair on a fixed point grid."""

    video: np.ndarray
    accel: np.ndarray
    match_percent: float
    source_id: str = ""

    @property
    def bucket(self) -> int:
        """Index of the match percentage interval holding the snippet."""
        return bucket_of(self.match_percent)


def bucket_of(match_percent: float) -> int:
    """Bucket ``b`` holds the percentages in ``[10b, 10(b + 1))``, the last one is closed."""
    return min(int(match_percent // 10), N_BUCKETS - 1)


@dataclass(frozen=True, eq=False)
class SnippetDictionary:
    """Genuine snippets grouped in 10 buckets of DTW match percentage."""

    buckets: tuple[tuple[Snippet, ...], ...] = field(default_factory=lambda: tuple(() for _ in range(N_BUCKETS)))
    snippet_s: float = 0.5
    snippet_points: int = 10

    def __len__(self) -> int:
        """Total number of snippets."""
        return sum(len(b) for b in self.buckets)

    @property
    def snippets(self) -> list[Snippet]:
        """All the snippets, bucket by bucket."""
        return [s for b in self.buckets for s in b]

    def nearest(self, video: np.ndarray) -> Snippet:
        """The snippet whose video motion is closest (Euclidean) to ``video``, over all buckets."""
        snippets = self.snippets
        if not snippets:
            raise ValueError("The snippet dictionary is empty")
        stacked = np.array([s.video.ravel() for s in snippets])
        distances = np.linalg.norm(stacked - video.ravel()[None, :], axis=1)
        return snippets[int(np.argmin(distances))]


def _snippet_grid(trace: MotionTrace, start: float, snippet_s: float, points: int) -> np.ndarray:
    t = start + np.arange(points) * snippet_s / points
    values = np.column_stack([np.interp(t, trace.t, trace.axis(a)) for a in ("x", "y")])
    return values - values[0]


def snippet_windows(chunk: Chunk, snippet_s: float = 0.5) -> list[float]:
    """Start times of the consecutive snippets of a chunk."""
    n = int(round(chunk.length / snippet_s))
    return [chunk.start_s + m * snippet_s for m in range(n)]


def match_percent(video: np.ndarray, accel: np.ndarray) -> float:
    """DTW match move percentage of two ``(points, 2)`` snippets, averaged over x and y."""
    ratios = []
    for axis in range(video.shape[1]):
        result = dtw(video[:, axis], accel[:, axis])
        ratios.append(result.matches / result.path_length)
    return 100.0 * float(np.mean(ratios))


def build_pfa_dictionary(chunks: Sequence[Chunk], snippet_s: float = 0.5, snippet_points: int = 10) -> SnippetDictionary:
    """Split genuine chunks in snippets and bucket them by DTW match percentage.

    Parameters:
        chunks: The genuine chunks reserved for the dictionary.
        snippet_s: Snippet duration in seconds, 12 snippets per 6 second chunk by default.
        snippet_points: Points of the interpolation grid of each snippet.

    Returns:
        The snippet dictionary.
    """
    if not chunks:
        raise ValueError("The dictionary needs at least one chunk")
    buckets: list[list[Snippet]] = [[] for _ in range(N_BUCKETS)]
    for chunk in chunks:
        for start in snippet_windows(chunk, snippet_s):
            video = _snippet_grid(chunk.video_motion, start, snippet_s, snippet_points)
            accel = _snippet_grid(chunk.accel_motion, start, snippet_s, snippet_points)
            snippet = Snippet(video, accel, match_percent(video, accel), chunk.id)
            buckets[snippet.bucket].append(snippet)
    dictionary = SnippetDictionary(tuple(tuple(b) for b in buckets), snippet_s, snippet_points)
    logger.debug(f"PFA dictionary of {len(dictionary)} snippets, bucket sizes {[len(b) for b in buckets]}")
    return dictionary


@dataclass(frozen=True, eq=False)
class PfaTrace:
    """Fabricated accelerometer motion of the PFA attack with its bookkeeping."""

    trace: MotionTrace
    kept: np.ndarray
    "Mask of the points left equal to the (point inserted) mirror."
    snippet_of: np.ndarray
    "Index of the snippet holding each point."
    kept_percent: tuple[float, ...]
    "Percentage ``x`` drawn for each snippet."


def pfa_trace(
    target: Chunk,
    dictionary: SnippetDictionary,
    p: float = 0.1,
    c_range: Sequence[float] = (1.0, 2.0),
    i_choices: Sequence[int] = (2, 3),
    seed: int | np.random.SeedSequence | None = None,
) -> PfaTrace:
    """Build the PFA accelerometer motion of a chunk, see :py:func:`pfa_attack`."""
    if len(dictionary) == 0:
        raise ValueError("The snippet dictionary is empty")
    rng = np.random.default_rng(seed)
    mirror = mirror_trace(target.video_motion)
    i = int(rng.choice(np.asarray(i_choices)))
    c = float(rng.uniform(*c_range))
    t, values = insert_points(mirror.t, mirror.values, i)

    starts = np.array(snippet_windows(target, dictionary.snippet_s))
    snippet_of = np.clip(np.searchsorted(starts, t, side="right") - 1, 0, len(starts) - 1)
    kept = np.ones(t.size, dtype=bool)
    xs = []
    for m, start in enumerate(starts):
        video = _snippet_grid(target.video_motion, float(start), dictionary.snippet_s, dictionary.snippet_points)
        bucket = dictionary.nearest(video).bucket
        x = float(rng.uniform(10 * bucket, 10 * (bucket + 1)))
        xs.append(x)
        members = np.flatnonzero(snippet_of == m)
        n_keep = min(math.ceil(members.size * x / 100), members.size)
        changed = rng.permutation(members)[n_keep:]
        kept[changed] = False

    factors = _perturbation(values.shape, p, rng) * c
    values = np.where(kept[:, None], values, values * factors)
    return PfaTrace(MotionTrace(t, values, Source.ACCEL), kept, snippet_of, tuple(xs))


def pfa_attack(
    target: Chunk,
    dictionary: SnippetDictionary,
    p: float = 0.1,
    c_range: Sequence[float] = (1.0, 2.0),
    i_choices: Sequence[int] = (2, 3),
    seed: int | np.random.SeedSequence | None = None,
) -> Chunk:
    """Perturbed fingerprint attack.

    The target is mirrored with ``i`` inserted points. For each snippet, the dictionary snippet
    with the closest video motion gives a bucket; ``x`` is drawn uniformly in the bucket interval
    and ``x`` percent of the snippet points are kept, the others being perturbed in
    ``[1 - p, 1 + p]`` and scaled by the calibration factor ``c``.

    Parameters:
        target: The chunk to fake.
        dictionary: Snippets of genuine chunks, disjoint from the targets.
        p: The relative perturbation.
        c_range: The calibration factor range.
        i_choices: The possible numbers of inserted points.
        seed: Seed of the draws.

    Returns:
        The fake chunk.
    """
    result = pfa_trace(target, dictionary, p, c_range, i_choices, seed)
    return _fake(target, result.trace, "pfa")


# -- sandwich ------------------------------------------------------------------
def sandwich_attack(
    target: Chunk,
    window_s: float = 0.5,
    lag_range: Sequence[float] = (0.2, 0.5),
    noise: float = 0.3,
    seed: int | np.random.SeedSequence | None = None,
) -> Chunk:
    """Emulate a person reproducing the on-screen motion with a second device.

    The video motion is smoothed with a moving average of ``window_s`` seconds, delayed by a
    reaction lag drawn in ``lag_range`` and blurred with Gaussian noise of standard deviation
    ``noise``. Larger windows, lags and noise make the imitation weaker.
    """
    rng = np.random.default_rng(seed)
    video = target.video_motion
    rate = (len(video) - 1) / (video.end - video.start) if len(video) > 1 else 1.0
    size = max(int(round(window_s * rate)), 1)
    smoothed = uniform_filter1d(video.values[:, :2], size=size, axis=0, mode="nearest")
    lag = float(rng.uniform(*lag_range))
    delayed = np.column_stack(
        [np.interp(video.t - lag, video.t, smoothed[:, i], left=smoothed[0, i]) for i in range(2)]
    )
    values = np.column_stack([delayed, np.zeros(len(video))])
    values = values + rng.normal(0, noise, values.shape)
    return _fake(target, MotionTrace.from_series(video.t, values, Source.ACCEL), "sandwich")


# -- chunk level dispatch ------------------------------------------------------
def attack_chunks(
    targets: Sequence[Chunk],
    attack: str,
    config: AttackConfig | None = None,
    seed: int | None = None,
    pool: Sequence[Chunk] | None = None,
    dictionary: SnippetDictionary | None = None,
) -> list[Chunk]:
    """Apply one chunk level attack to every target.

    Parameters:
        targets: The chunks to fake.
        attack: One of :py:data:`ATTACKS`.
        config: The attack parameters.
        seed: Seed of the attack, every target receives its own child seed.
        pool: Donor chunks of the cluster attack, the targets themselves by default.
        dictionary: Snippet dictionary of the PFA attack.

    Returns:
        One fake chunk per target.
    """
    c = config or AttackConfig()
    if attack == "cluster":
        return cluster_attack(targets, pool if pool is not None else targets, c.clusters, seed, c.cluster_retries)
    if attack == "pfa" and dictionary is None:
        raise ValueError("The PFA attack needs a snippet dictionary")
    seeds = _seeds(seed, len(targets))
    if attack == "mirror":
        return [perfect_mirror(t) for t in targets]
    if attack == "ipc":
        return [ipc_mirror(t, c.p, c.c_range, c.i_choices, s) for t, s in zip(targets, seeds)]
    if attack == "pfa":
        return [pfa_attack(t, dictionary, c.p, c.c_range, c.i_choices, s) for t, s in zip(targets, seeds)]  # type: ignore[arg-type]
    if attack == "sandwich":
        return [
            sandwich_attack(t, c.sandwich_window_s, c.sandwich_lag_range, c.sandwich_noise, s)
            for t, s in zip(targets, seeds)
        ]
    raise ValueError(f"Unknown attack {attack!r}, use one of {ATTACKS}")


@dataclass(frozen=True, eq=False)
class AttackDataset:
    """Genuine and fake chunks of one attack, as used for training and evaluation."""

    attack: str
    genuine: tuple[Chunk, ...]
    fake: tuple[Chunk, ...]
    dictionary: SnippetDictionary | None = None

    @property
    def chunks(self) -> list[Chunk]:
        """Genuine chunks followed by the fake ones."""
        return [*self.genuine, *self.fake]


def build_attack_dataset(
    genuine_chunks: Sequence[Chunk],
    attack: str,
    seed: int | None = None,
    config: AttackConfig | None = None,
) -> AttackDataset:
    """Build the chunk dataset of one attack.

    Every genuine chunk is faked once, except for the PFA attack: a fraction of the chunks
    (10% by default) builds the snippet dictionary and the remaining chunks are halved, the first
    half kept genuine and the second half faked.

    Parameters:
        genuine_chunks: The genuine chunks.
        attack: One of :py:data:`ATTACKS`.
        seed: Seed of the split and of the attack.
        config: The attack parameters.

    Returns:
        The dataset.
    """
    c = config or AttackConfig()
    chunks = list(genuine_chunks)
    if attack != "pfa":
        fakes = attack_chunks(chunks, attack, c, seed)
        logger.info(f"{attack} dataset: {len(chunks)} genuine, {len(fakes)} fake chunks")
        return AttackDataset(attack, tuple(chunks), tuple(fakes))

    split_seed, attack_seed = _seeds(seed, 2)
    order = np.random.default_rng(split_seed).permutation(len(chunks))
    n_dictionary = max(int(round(c.pfa_fraction * len(chunks))), 1)
    dictionary_chunks = [chunks[i] for i in order[:n_dictionary]]
    rest = [chunks[i] for i in order[n_dictionary:]]
    n_fake = len(rest) // 2
    genuine, targets = rest[: len(rest) - n_fake], rest[len(rest) - n_fake :]
    dictionary = build_pfa_dictionary(dictionary_chunks, c.snippet_s, c.snippet_points)
    fakes = attack_chunks(targets, "pfa", c, attack_seed, dictionary=dictionary)
    logger.info(f"pfa dataset: {len(dictionary)} snippets, {len(genuine)} genuine, {len(fakes)} fake chunks")
    return AttackDataset("pfa", tuple(genuine), tuple(fakes), dictionary)


# -- stitch --------------------------------------------------------------------
def stitch_positions(n_chunks: int, count: int = 3, seed: int | np.random.SeedSequence | None = None) -> list[tuple[int, ...]]:
    """Fake chunk positions of each stitched sample.

    A 2 chunk sample gives ``{0}``, ``{1}`` and ``{0, 1}``. Longer samples give ``j`` random
    positions for the ``j``-th fake, ``j`` being capped at the chunk count.
    """
    if n_chunks < 2:
        raise ValueError(f"A stitched sample needs at least 2 chunks, got {n_chunks}")
    if n_chunks == 2 and count == 3:
        return [(0,), (1,), (0, 1)]
    rng = np.random.default_rng(seed)
    positions = []
    for j in range(1, count + 1):
        size = min(j, n_chunks)
        positions.append(tuple(sorted(int(p) for p in rng.choice(n_chunks, size=size, replace=False))))
    return positions


def _pool_index(pool: Sequence[Chunk] | Mapping) -> Mapping:
    if isinstance(pool, Mapping):
        return pool
    return {(c.parent_sample_id, round(c.start_s, 3)): c for c in pool}


def stitch_trace(
    genuine_motion: MotionTrace, windows: Sequence[tuple[float, float]], fakes: Mapping[tuple[float, float], Chunk]
) -> MotionTrace:
    """Splice fabricated chunk motions into a genuine accelerometer motion.

    Pieces are laid end to end, each continuing from the last value of the previous one.
    """
    pieces_t, pieces_v = [], []
    offset = np.zeros(genuine_motion.values.shape[1])
    cursor = genuine_motion.start
    bounds = [*windows, (windows[-1][1], math.inf)] if windows else [(cursor, math.inf)]
    for start, end in bounds:
        if (start, end) in fakes:
            fake = fakes[(start, end)]
            piece = fake.accel_motion.with_axes(genuine_motion.values.shape[1]).shift_time(start - fake.start_s)
            keep = (piece.t >= start) & (piece.t < end)
            t, v = piece.t[keep], piece.values[keep]
        else:
            keep = (genuine_motion.t >= max(start, cursor)) & (genuine_motion.t < end)
            t, v = genuine_motion.t[keep], genuine_motion.values[keep]
        if t.size == 0:
            continue
        pieces_t.append(t)
        pieces_v.append(v - v[0] + offset)
        offset = pieces_v[-1][-1]
        cursor = end
    return MotionTrace(np.concatenate(pieces_t), np.vstack(pieces_v), Source.ACCEL)


def stitch_attack(
    genuine: Sample,
    fake_pool: Sequence[Chunk] | Mapping,
    count: int = 3,
    seed: int | np.random.SeedSequence | None = None,
    chunk_length: float = 6.0,
    motion_config: MotionConfig | None = None,
    provenance: str = "stitch",
) -> list[Sample]:
    """Build fake samples mixing genuine and fabricated chunks of a genuine sample.

    Parameters:
        genuine: The genuine sample, at least 2 sequential chunks long.
        fake_pool: Fake chunks keyed by the ``(parent_sample_id, start_s)`` of the genuine
            chunk they replace. A list of fake chunks is indexed that way.
        count: Number of fake samples.
        seed: Seed of the fake positions.
        chunk_length: The chunk length in seconds.
        motion_config: Parameters of the accelerometer motion of the genuine sample.
        provenance: Provenance of the fake samples.

    Returns:
        The fake samples, each with the duration and the video motion of ``genuine``.
    """
    n = chunk_count(genuine.duration, chunk_length)
    if n < 2:
        raise ValueError(f"Sample {genuine.id} has {n} chunk(s), at least 2 are needed to stitch")
    index = _pool_index(fake_pool)
    motion = sample_accel_motion(genuine, motion_config)
    windows = [(genuine.start + k * chunk_length, genuine.start + (k + 1) * chunk_length) for k in range(n)]

    samples = []
    for j, positions in enumerate(stitch_positions(n, count, seed)):
        fakes = {}
        for position in positions:
            start, end = windows[position]
            key = (genuine.id, round(start, 3))
            if key not in index:
                raise ValidationError(f"No fake chunk for {genuine.id} at {start:.3f}s in the pool")
            fakes[(start, end)] = index[key]
        trace = stitch_trace(motion, windows, fakes)
        samples.append(
            Sample(
                id=f"{genuine.id}.{provenance}{j}",
                video_motion=genuine.video_motion,
                accel=None,
                annotation=genuine.annotation,
                label=Label.FAKE,
                provenance=provenance,
                accel_motion=trace,
                fake_windows=tuple(windows[p] for p in positions),
                parent_id=genuine.id,
            )
        )
    return samples


def stitch_dataset(
    genuine_samples: Sequence[Sample],
    fake_pool: Sequence[Chunk] | Mapping,
    count: int = 3,
    seed: int | None = None,
    chunk_length: float = 6.0,
    motion_config: MotionConfig | None = None,
    provenance: str = "stitch",
) -> list[Sample]:
    """Stitch every genuine sample of at least 2 chunks, skipping the shorter ones with a warning."""
    index = _pool_index(fake_pool)
    eligible = [s for s in genuine_samples if chunk_count(s.duration, chunk_length) >= 2]
    skipped = len(genuine_samples) - len(eligible)
    if skipped:
        msg = f"{skipped} samples have fewer than 2 chunks and cannot be stitched"
        warnings.warn(msg, category=LiveproofWarning, stacklevel=2)
    fakes = []
    for sample, child in zip(eligible, _seeds(seed, len(eligible))):
        fakes.extend(stitch_attack(sample, index, count, child, chunk_length, motion_config, provenance))
    logger.info(f"{provenance} dataset: {len(fakes)} fake samples from {len(eligible)} genuine samples")
    return fakes
