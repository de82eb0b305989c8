"""Sample level decision from the chunk verdicts: majority vote, Bayesian probability or a classifier."""
from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .features import FEATURE_NAMES, ChunkFeatures
from .learning import ConfusionRates, LabelLike, Model, Verdict, encode_labels, evaluate
from .model import Label, ValidationError

logger = logging.getLogger(__name__)

METHODS = ("vote", "prob", "model")
"Sample level decision methods."

AGGREGATES = ("min", "max", "mean", "std")

NEUTRAL = 0.5
"Padding value of the chunk label vector."


@dataclass(frozen=True)
class PriorRates:
    """Chunk priors and chunk classifier rates measured on the training folds."""

    p_fake_prior: float
    p_genuine_prior: float
    tpr: float
    fpr: float
    tnr: float
    fnr: float

    def __post_init__(self):
        """Check the priors and the rates."""
        if not math.isclose(self.p_fake_prior + self.p_genuine_prior, 1.0, abs_tol=1e-9):
            raise ValidationError(f"Priors {self.p_fake_prior} and {self.p_genuine_prior} do not sum to 1")
        for name in ("p_fake_prior", "p_genuine_prior", "tpr", "fpr", "tnr", "fnr"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ValidationError(f"{name} must be in [0, 1], got {value}")

    @classmethod
    def from_training(cls, labels: Iterable[LabelLike], rates: ConfusionRates) -> PriorRates:
        """Priors from the training chunk labels and rates from a held out (or out of bag) evaluation."""
        y = encode_labels(labels)
        if y.size == 0:
            raise ValueError("Priors need at least one training chunk")
        fake = float(y.mean())
        return cls(fake, 1.0 - fake, rates.tpr, rates.fpr, rates.tnr, rates.fnr)


def alpha_beta(priors: PriorRates) -> tuple[float, float]:
    """Probabilities that a chunk is genuine given a genuine verdict (alpha) and a fake verdict (beta).

    ``alpha = TNR.P(gen) / (TNR.P(gen) + FNR.P(fake))`` and
    ``beta = FPR.P(gen) / (FPR.P(gen) + TPR.P(fake))``.
    """
    g, f = priors.p_genuine_prior, priors.p_fake_prior
    alpha_den = priors.tnr * g + priors.fnr * f
    beta_den = priors.fpr * g + priors.tpr * f
    if alpha_den <= 0:
        raise ValueError(f"TNR={priors.tnr}, FNR={priors.fnr} with these priors never yield a genuine verdict")
    if beta_den <= 0:
        raise ValueError(f"FPR={priors.fpr}, TPR={priors.tpr} with these priors never yield a fake verdict")
    return priors.tnr * g / alpha_den, priors.fpr * g / beta_den


def p_sample_fake(f: int, g: int, alpha: float, beta: float) -> float:
    """Probability that a sample with ``f`` fake and ``g`` genuine verdicts is fake: ``1 - alpha^g . beta^f``."""
    if f < 0 or g < 0:
        raise ValueError(f"Chunk counts must be non negative, got f={f}, g={g}")
    if not (0 <= alpha <= 1 and 0 <= beta <= 1):
        raise ValueError(f"alpha and beta must be in [0, 1], got {alpha}, {beta}")
    return float(min(max(1.0 - alpha**g * beta**f, 0.0), 1.0))


def majority_vote(f: int, g: int, thr: float) -> Label:
    """Fake when strictly more than ``thr`` of the chunks are fake."""
    if f + g < 1:
        raise ValueError("A vote needs at least one chunk")
    return Label.FAKE if f / (f + g) > thr else Label.GENUINE


def _counts(verdicts: Iterable[Verdict | LabelLike]) -> tuple[int, int]:
    labels = encode_labels(v.label if isinstance(v, Verdict) else v for v in verdicts)
    return int(labels.sum()), int(labels.size - labels.sum())


def sample_probability(verdicts: Iterable[Verdict | LabelLike], priors: PriorRates) -> float:
    """Fake probability of a sample from its chunk verdicts."""
    f, g = _counts(verdicts)
    alpha, beta = alpha_beta(priors)
    return p_sample_fake(f, g, alpha, beta)


def probabilistic_verdict(verdicts: Iterable[Verdict | LabelLike], priors: PriorRates, thr: float) -> Label:
    """Fake when the sample fake probability exceeds ``thr``."""
    return Label.FAKE if sample_probability(verdicts, priors) > thr else Label.GENUINE


# -- classifier fusion ---------------------------------------------------------
def sample_feature_names(max_labels: int = 32, subset: str = "all") -> tuple[str, ...]:
    """Column names of :py:meth:`SampleFeatures.as_array`."""
    aggregates = tuple(f"{name}_{stat}" for name in FEATURE_NAMES for stat in AGGREGATES)
    if subset == "aggregates":
        return aggregates
    if subset != "all":
        raise ValueError(f"Unknown sample feature subset {subset!r}")
    labels = tuple(f"label_{i}" for i in range(max_labels))
    return ("f", "g", "p_fake", *labels, *aggregates)


@dataclass(frozen=True, eq=False)
class SampleFeatures:
    """Descriptor of a whole sample for the classifier fusion.

    ``aggregates`` holds the (min, max, mean, std) of each of the 18 chunk features over the
    chunks of the sample, 72 values.
    """

    f: int
    g: int
    chunk_labels: tuple[Label, ...]
    p_fake: float
    aggregates: np.ndarray

    def as_array(self, max_labels: int = 32, subset: str = "all") -> np.ndarray:
        """Fixed width vector, the label list padded or truncated to ``max_labels``.

        The ``aggregates`` subset does not depend on the chunk order.
        """
        if subset == "aggregates":
            return self.aggregates.copy()
        if subset != "all":
            raise ValueError(f"Unknown sample feature subset {subset!r}")
        labels = np.full(max_labels, NEUTRAL)
        coded = encode_labels(self.chunk_labels)[:max_labels]
        labels[: coded.size] = coded
        return np.concatenate([[self.f, self.g, self.p_fake], labels, self.aggregates])


def sample_features(
    chunk_features: Sequence[ChunkFeatures] | np.ndarray,
    verdicts: Sequence[Verdict | LabelLike],
    priors: PriorRates,
) -> SampleFeatures:
    """Build the sample descriptor from the chunk descriptors and verdicts of one sample."""
    if isinstance(chunk_features, np.ndarray):
        X = np.atleast_2d(chunk_features).astype(float)
    else:
        X = np.array([c.as_array() for c in chunk_features])
    if X.shape[0] == 0:
        raise ValueError("A sample descriptor needs at least one chunk")
    if X.shape[0] != len(verdicts):
        raise ValueError(f"{X.shape[0]} chunk descriptors for {len(verdicts)} verdicts")
    if X.shape[1] != len(FEATURE_NAMES):
        raise ValueError(f"Expected {len(FEATURE_NAMES)} chunk features, got {X.shape[1]}")
    labels = tuple(Label.of(v.label if isinstance(v, Verdict) else v) for v in verdicts)
    f, g = _counts(labels)
    stats = np.stack([X.min(axis=0), X.max(axis=0), X.mean(axis=0), X.std(axis=0)], axis=1)
    return SampleFeatures(f, g, labels, sample_probability(labels, priors), stats.ravel())


def classify_sample(
    model: Model, features: SampleFeatures, max_labels: int = 32, subset: str = "all"
) -> Verdict:
    """Classify a sample descriptor with a model trained on :py:func:`sample_feature_names`."""
    expected = sample_feature_names(max_labels, subset)
    if tuple(model.feature_names) != expected:
        raise ValueError(f"The model was trained on {model.n_features} features, not on the {subset} sample descriptor")
    score = float(np.clip(model.predict_proba(features.as_array(max_labels, subset)[None, :])[0], 0, 1))
    return Verdict(Label.FAKE if score > 0.5 else Label.GENUINE, score)


# -- reports -------------------------------------------------------------------
@dataclass(frozen=True)
class SampleVerdict:
    """Decision on one sample."""

    sample_id: str
    chunk_labels: tuple[Label, ...]
    chunk_scores: tuple[float, ...]
    score: float
    label: Label
    truth: Label | None = None

    def as_dict(self) -> dict:
        """JSON friendly representation."""
        return {
            "sample_id": self.sample_id,
            "chunk_labels": [v.value for v in self.chunk_labels],
            "chunk_scores": list(self.chunk_scores),
            "score": self.score,
            "label": self.label.value,
            "truth": self.truth.value if self.truth is not None else None,
        }


@dataclass(frozen=True)
class VerdictReport:
    """Sample decisions of one method and threshold, with the confusion rates when truths are known."""

    method: str
    threshold: float | None
    samples: tuple[SampleVerdict, ...] = field(default_factory=tuple)

    @property
    def rates(self) -> ConfusionRates | None:
        """Confusion rates over the samples with a known truth."""
        known = [s for s in self.samples if s.truth is not None]
        if not known:
            return None
        return evaluate([s.label for s in known], [s.truth for s in known])

    def as_dict(self) -> dict:
        """JSON friendly representation."""
        rates = self.rates
        return {
            "method": self.method,
            "threshold": self.threshold,
            "samples": [s.as_dict() for s in self.samples],
            "rates": rates.as_dict() if rates is not None else None,
        }

    def to_json(self) -> str:
        """Serialize the report."""
        return json.dumps(self.as_dict(), indent=2)


def fuse(
    method: str,
    verdicts: Sequence[Verdict],
    thr: float | None = None,
    priors: PriorRates | None = None,
    model: Model | None = None,
    chunk_features: np.ndarray | None = None,
    max_labels: int = 32,
) -> tuple[float, Label]:
    """Score and label of a sample with one of the :py:data:`METHODS`.

    Parameters:
        method: ``vote`` (score is the fake chunk fraction), ``prob`` (score is the fake
            probability) or ``model`` (score is the model vote fraction).
        verdicts: The chunk verdicts of the sample.
        thr: The decision threshold of ``vote`` and ``prob``.
        priors: The training priors, needed by ``prob`` and ``model``.
        model: The sample classifier, needed by ``model``.
        chunk_features: The ``(chunks, 18)`` descriptors, needed by ``model``.
        max_labels: Width of the label vector of ``model``.

    Returns:
        The fusion score and the sample label.
    """
    f, g = _counts(verdicts)
    if method == "vote":
        if thr is None:
            raise ValueError("The vote method needs a threshold")
        return f / (f + g), majority_vote(f, g, thr)
    if priors is None:
        raise ValueError(f"The {method} method needs training priors")
    if method == "prob":
        if thr is None:
            raise ValueError("The prob method needs a threshold")
        p = sample_probability(verdicts, priors)
        return p, Label.FAKE if p > thr else Label.GENUINE
    if method == "model":
        if model is None or chunk_features is None:
            raise ValueError("The model method needs a sample model and the chunk descriptors")
        verdict = classify_sample(model, sample_features(chunk_features, verdicts, priors), max_labels)
        return verdict.score, verdict.label
    raise ValueError(f"Unknown fusion method {method!r}, use one of {METHODS}")


def save_priors(priors: PriorRates, path: str | Path) -> Path:
    """Write the training priors and rates as JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(asdict(priors), indent=2))
    return path


def load_priors(path: str | Path) -> PriorRates:
    """Read priors written by :py:func:`save_priors`."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"No such priors file: {path}")
    return PriorRates(**json.loads(path.read_text()))
