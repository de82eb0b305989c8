"""Tree classifiers written on numpy, the chunk classification and the confusion metrics.

Fake is the positive class: labels are encoded ``1`` for fake and ``0`` for genuine.
"""
from __future__ import annotations

import json
import logging
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

import numpy as np
from joblib import Parallel, delayed

from .config import ModelConfig
from .features import FEATURE_NAMES, ChunkFeatures
from .model import Label, LiveproofWarning

logger = logging.getLogger(__name__)

MODEL_FORMAT = "liveproof-model"
MODEL_VERSION = 1

LabelLike = Union[Label, str, bool, int]


def encode_labels(labels: Iterable[LabelLike]) -> np.ndarray:
    """Encode labels as integers, ``1`` for fake."""
    return np.array([int(Label.of(v).is_fake) for v in labels], dtype=int)


def _entropy(fake: np.ndarray, total: np.ndarray) -> np.ndarray:
    p = np.divide(fake, total, out=np.zeros_like(fake, dtype=float), where=total > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(np.where(p > 0, p * np.log2(p), 0.0) + np.where(p < 1, (1 - p) * np.log2(1 - p), 0.0))
    return h


# -- decision tree -------------------------------------------------------------
class DecisionTree:
    """Binary classification tree grown greedily on entropy information gain.

    Nodes are stored in flat arrays: ``feature`` is ``-1`` on leaves and ``value`` holds the
    fraction of fake training rows reaching the node.

    Parameters:
        max_depth: The maximum depth, unlimited when ``None``.
        min_leaf: The minimum number of rows in a leaf.
        n_feats: Number of features drawn at random for each split, all of them when ``None``.
        seed: Seed of the feature draw.
    """

    def __init__(
        self,
        max_depth: int | None = None,
        min_leaf: int = 2,
        n_feats: int | None = None,
        seed: int | np.random.SeedSequence | None = None,
    ):
        """Set the tree parameters."""
        if min_leaf < 1:
            raise ValueError(f"min_leaf must be >= 1, got {min_leaf}")
        self.max_depth, self.min_leaf, self.n_feats = max_depth, min_leaf, n_feats
        self._rng = np.random.default_rng(seed)
        self.feature = np.zeros(0, dtype=int)
        self.threshold = np.zeros(0)
        self.left = np.zeros(0, dtype=int)
        self.right = np.zeros(0, dtype=int)
        self.value = np.zeros(0)
        self.feature_names: tuple[str, ...] = ()

    @property
    def n_features(self) -> int:
        """Number of input features."""
        return len(self.feature_names)

    @property
    def node_count(self) -> int:
        """Number of nodes."""
        return int(self.feature.size)

    def _best_split(self, X: np.ndarray, y: np.ndarray) -> tuple[int, float] | None:
        n, d = X.shape
        features = np.arange(d)
        if self.n_feats is not None and self.n_feats < d:
            features = np.sort(self._rng.choice(d, self.n_feats, replace=False))
        parent = _entropy(np.array([y.sum()]), np.array([n]))[0]
        best: tuple[float, int, float] | None = None
        for f in features:
            order = np.argsort(X[:, f], kind="stable")
            x, labels = X[order, f], y[order]
            # candidate cut k puts rows [0, k) on the left
            k = np.arange(self.min_leaf, n - self.min_leaf + 1)
            k = k[(k > 0) & (k < n)]
            k = k[x[k - 1] < x[k]] if k.size else k
            if k.size == 0:
                continue
            fake_left = np.cumsum(labels)[k - 1]
            fake_right = labels.sum() - fake_left
            children = (k * _entropy(fake_left, k) + (n - k) * _entropy(fake_right, n - k)) / n
            gain = parent - children
            j = int(np.argmax(gain))
            if best is None or gain[j] > best[0] + 1e-12:
                low, high = x[k[j] - 1], x[k[j]]
                # the midpoint of two adjacent floats rounds to the upper one
                mid = 0.5 * (low + high)
                best = (float(gain[j]), int(f), float(mid if mid < high else low))
        if best is None or best[0] < -1e-12:
            return None
        return best[1], best[2]

    def fit(
        self,
        X: np.ndarray,
        y: Iterable[LabelLike],
        feature_names: Sequence[str] | None = None,
        quiet: bool = False,
    ) -> DecisionTree:
        """Grow the tree on the rows of ``X``.

        Single class data yields a one leaf tree and a warning, unless ``quiet`` is set.
        """
        X = np.asarray(X, dtype=float)
        y = encode_labels(y) if not isinstance(y, np.ndarray) or y.dtype.kind not in "iub" else y.astype(int)
        if X.ndim != 2 or X.shape[0] != y.size or y.size == 0:
            raise ValueError(f"Expected a (n, d) matrix and n labels, got {X.shape} and {y.size}")
        self.feature_names = tuple(feature_names) if feature_names is not None else tuple(f"f{i}" for i in range(X.shape[1]))
        if len(self.feature_names) != X.shape[1]:
            raise ValueError(f"{len(self.feature_names)} feature names for {X.shape[1]} features")
        if np.unique(y).size < 2 and not quiet:
            msg = f"Training data holds a single class ({'fake' if y[0] else 'genuine'}), the model is constant"
            warnings.warn(msg, category=LiveproofWarning, stacklevel=2)

        feature, threshold, left, right, value = [], [], [], [], []

        def grow(rows: np.ndarray, depth: int) -> int:
            node = len(feature)
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            value.append(float(y[rows].mean()))
            pure = y[rows].min() == y[rows].max()
            if pure or (self.max_depth is not None and depth >= self.max_depth) or rows.size < 2 * self.min_leaf:
                return node
            split = self._best_split(X[rows], y[rows])
            if split is None:
                return node
            f, t = split
            go_left = X[rows, f] <= t
            if go_left.all() or not go_left.any():
                return node
            feature[node], threshold[node] = f, t
            left[node] = grow(rows[go_left], depth + 1)
            right[node] = grow(rows[~go_left], depth + 1)
            return node

        grow(np.arange(y.size), 0)
        self.feature = np.array(feature, dtype=int)
        self.threshold = np.array(threshold)
        self.left = np.array(left, dtype=int)
        self.right = np.array(right, dtype=int)
        self.value = np.array(value)
        return self

    def _check(self, X: np.ndarray) -> np.ndarray:
        if self.node_count == 0:
            raise ValueError("The tree is not trained")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_features:
            raise ValueError(f"Expected {self.n_features} features, got {X.shape[1]}")
        return X

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Fraction of fake training rows in the leaf reached by each row."""
        X = self._check(X)
        node = np.zeros(X.shape[0], dtype=int)
        active = self.feature[node] >= 0
        while active.any():
            rows = np.flatnonzero(active)
            current = node[rows]
            go_left = X[rows, self.feature[current]] <= self.threshold[current]
            node[rows] = np.where(go_left, self.left[current], self.right[current])
            active = self.feature[node] >= 0
        return self.value[node]

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Predicted labels, ``1`` for fake."""
        return (self.predict_proba(X) > 0.5).astype(int)

    def to_dict(self) -> dict:
        """JSON friendly representation of the tree."""
        return {
            "max_depth": self.max_depth,
            "min_leaf": self.min_leaf,
            "n_feats": self.n_feats,
            "feature_names": list(self.feature_names),
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> DecisionTree:
        """Inverse of :py:meth:`to_dict`."""
        tree = cls(data.get("max_depth"), data.get("min_leaf", 2), data.get("n_feats"))
        tree.feature_names = tuple(data["feature_names"])
        tree.feature = np.array(data["feature"], dtype=int)
        tree.threshold = np.array(data["threshold"], dtype=float)
        tree.left = np.array(data["left"], dtype=int)
        tree.right = np.array(data["right"], dtype=int)
        tree.value = np.array(data["value"], dtype=float)
        return tree


# -- ensembles -----------------------------------------------------------------
def weighted_bootstrap(
    y: np.ndarray, class_weights: Mapping | None, rng: np.random.Generator, size: int | None = None
) -> np.ndarray:
    """Draw row indices with replacement, each row weighted by the weight of its class.

    Parameters:
        y: The encoded labels.
        class_weights: Weight of each class keyed by label (``"fake"``/``"genuine"``, a
            :py:class:`~liveproof.model.Label` or ``1``/``0``). Uniform draw when ``None``.
        rng: The random generator.
        size: Number of draws, ``len(y)`` by default.
    """
    size = y.size if size is None else size
    if not class_weights:
        return rng.integers(0, y.size, size)
    weights = {int(Label.of(k).is_fake): float(v) for k, v in class_weights.items()}
    p = np.array([weights.get(int(label), 0.0) for label in y])
    if p.sum() <= 0:
        raise ValueError(f"Class weights {class_weights} give a zero total weight")
    return rng.choice(y.size, size=size, replace=True, p=p / p.sum())


class TreeEnsemble:
    """Random forest or bagging of :py:class:`DecisionTree`.

    Every tree is grown on a bootstrap draw of the rows (class weighted when ``class_weights`` is
    given). A random forest additionally draws ``sqrt(d)`` candidate features at each split. The
    score of a row is the fraction of trees voting fake.

    Parameters:
        kind: ``"random_forest"`` or ``"bagging"``.
        n_trees: The number of trees.
        max_depth: The maximum depth of the trees.
        min_leaf: The minimum number of rows in a leaf.
        class_weights: Resampling weight of each class.
        bootstrap: Draw the rows of each tree, all rows are used otherwise.
        seed: Seed of the ensemble, every tree receives its own child seed.
        n_jobs: Number of threads growing the trees.
    """

    def __init__(
        self,
        kind: str = "random_forest",
        n_trees: int = 100,
        max_depth: int | None = None,
        min_leaf: int = 2,
        class_weights: Mapping | None = None,
        bootstrap: bool = True,
        seed: int | None = None,
        n_jobs: int = 1,
    ):
        """Set the ensemble parameters."""
        if kind not in ("random_forest", "bagging"):
            raise ValueError(f"Unknown ensemble kind {kind!r}")
        if n_trees < 1:
            raise ValueError(f"n_trees must be >= 1, got {n_trees}")
        self.kind, self.n_trees, self.max_depth, self.min_leaf = kind, n_trees, max_depth, min_leaf
        self.class_weights = dict(class_weights) if class_weights else None
        self.bootstrap, self.seed, self.n_jobs = bootstrap, seed, n_jobs
        self.trees: list[DecisionTree] = []
        self.oob_score: float | None = None
        self.oob_votes: np.ndarray | None = None
        self.feature_names: tuple[str, ...] = ()

    @property
    def n_features(self) -> int:
        """Number of input features."""
        return len(self.feature_names)

    def fit(self, X: np.ndarray, y: Iterable[LabelLike], feature_names: Sequence[str] | None = None) -> TreeEnsemble:
        """Grow the trees and compute the out of bag votes."""
        X = np.asarray(X, dtype=float)
        y = encode_labels(y) if not isinstance(y, np.ndarray) or y.dtype.kind not in "iub" else y.astype(int)
        if X.ndim != 2 or X.shape[0] != y.size or y.size == 0:
            raise ValueError(f"Expected a (n, d) matrix and n labels, got {X.shape} and {y.size}")
        self.feature_names = tuple(feature_names) if feature_names is not None else tuple(f"f{i}" for i in range(X.shape[1]))
        n, d = X.shape
        n_feats = max(1, int(math.sqrt(d))) if self.kind == "random_forest" else None

        def grow(child: np.random.SeedSequence) -> tuple[DecisionTree, np.ndarray]:
            draw_seed, tree_seed = child.spawn(2)
            rows = np.arange(n)
            if self.bootstrap:
                rows = weighted_bootstrap(y, self.class_weights, np.random.default_rng(draw_seed))
            tree = DecisionTree(self.max_depth, self.min_leaf, n_feats, tree_seed)
            tree.fit(X[rows], y[rows], self.feature_names, quiet=True)
            in_bag = np.zeros(n, dtype=bool)
            in_bag[rows] = True
            return tree, in_bag

        if np.unique(y).size < 2:
            msg = f"Training data holds a single class ({'fake' if y[0] else 'genuine'}), the model is constant"
            warnings.warn(msg, category=LiveproofWarning, stacklevel=2)
        children = np.random.SeedSequence(self.seed).spawn(self.n_trees)
        grown = Parallel(n_jobs=self.n_jobs, prefer="threads")(delayed(grow)(c) for c in children)
        self.trees = [tree for tree, _ in grown]

        votes, counts = np.zeros(n), np.zeros(n)
        for tree, in_bag in grown:
            out = ~in_bag
            if out.any():
                votes[out] += tree.predict(X[out])
                counts[out] += 1
        has_vote = counts > 0
        self.oob_votes = np.divide(votes, counts, out=np.full(n, np.nan), where=has_vote)
        self.oob_score = float(np.mean((self.oob_votes[has_vote] > 0.5) == y[has_vote])) if has_vote.any() else None
        logger.debug(f"{self.kind}: {self.n_trees} trees on {n} rows, oob score {self.oob_score}")
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Fraction of trees voting fake for each row."""
        if not self.trees:
            raise ValueError("The ensemble is not trained")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.mean([tree.predict(X) for tree in self.trees], axis=0)

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Majority vote of the trees, ``1`` for fake."""
        return (self.predict_proba(X) > 0.5).astype(int)

    def to_dict(self) -> dict:
        """JSON friendly representation of the ensemble."""
        return {
            "kind": self.kind,
            "n_trees": self.n_trees,
            "max_depth": self.max_depth,
            "min_leaf": self.min_leaf,
            "class_weights": self.class_weights,
            "bootstrap": self.bootstrap,
            "seed": self.seed,
            "feature_names": list(self.feature_names),
            "oob_score": self.oob_score,
            "trees": [tree.to_dict() for tree in self.trees],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> TreeEnsemble:
        """Inverse of :py:meth:`to_dict`."""
        ensemble = cls(
            data["kind"],
            data["n_trees"],
            data.get("max_depth"),
            data.get("min_leaf", 2),
            data.get("class_weights"),
            data.get("bootstrap", True),
            data.get("seed"),
        )
        ensemble.feature_names = tuple(data["feature_names"])
        ensemble.oob_score = data.get("oob_score")
        ensemble.trees = [DecisionTree.from_dict(t) for t in data["trees"]]
        return ensemble


Model = Union[DecisionTree, TreeEnsemble]


def train_tree(
    X: np.ndarray,
    y: Iterable[LabelLike],
    max_depth: int | None = None,
    min_leaf: int = 2,
    seed: int | None = None,
    feature_names: Sequence[str] | None = FEATURE_NAMES,
) -> DecisionTree:
    """Train a single decision tree on chunk descriptors.

    Parameters:
        X: The ``(n, d)`` descriptor matrix.
        y: The ``n`` labels.
        max_depth: The maximum depth, unlimited when ``None``.
        min_leaf: The minimum number of rows in a leaf.
        seed: Seed of the tree.
        feature_names: Names of the ``d`` columns, the chunk descriptor by default. Generic names
            are used when ``None`` or when the width differs.

    Returns:
        The trained tree.
    """
    X = np.asarray(X, dtype=float)
    names = feature_names if feature_names is not None and len(feature_names) == X.shape[1] else None
    return DecisionTree(max_depth, min_leaf, None, seed).fit(X, y, names)


def train_ensemble(
    X: np.ndarray,
    y: Iterable[LabelLike],
    kind: str = "random_forest",
    n_trees: int = 100,
    seed: int | None = None,
    class_weights: Mapping | None = None,
    max_depth: int | None = None,
    min_leaf: int = 2,
    bootstrap: bool = True,
    n_jobs: int = 1,
    feature_names: Sequence[str] | None = FEATURE_NAMES,
) -> TreeEnsemble:
    """Train a random forest or a bagging ensemble, see :py:class:`TreeEnsemble`."""
    X = np.asarray(X, dtype=float)
    names = feature_names if feature_names is not None and len(feature_names) == X.shape[1] else None
    ensemble = TreeEnsemble(kind, n_trees, max_depth, min_leaf, class_weights, bootstrap, seed, n_jobs)
    return ensemble.fit(X, y, names)


def train_model(
    X: np.ndarray,
    y: Iterable[LabelLike],
    config: ModelConfig | None = None,
    seed: int | None = None,
    class_weights: Mapping | None = None,
    feature_names: Sequence[str] | None = FEATURE_NAMES,
) -> Model:
    """Train the classifier described by a :py:class:`~liveproof.config.ModelConfig`."""
    c = config or ModelConfig()
    weights = class_weights if class_weights is not None else c.class_weights
    if c.kind == "tree":
        return train_tree(X, y, c.max_depth, c.min_leaf, seed, feature_names)
    return train_ensemble(
        X, y, c.kind, c.n_trees, seed, weights, c.max_depth, c.min_leaf, n_jobs=c.n_jobs, feature_names=feature_names
    )


# -- chunk classification ------------------------------------------------------
@dataclass(frozen=True)
class Verdict:
    """Predicted label with the fake score in [0, 1]."""

    label: Label
    score: float


def classify_chunk(model: Model, features: ChunkFeatures | Sequence[float]) -> Verdict:
    """Classify one chunk descriptor.

    Raises:
        ValueError: when the model was not trained on the chunk descriptor.
    """
    if tuple(model.feature_names) != FEATURE_NAMES:
        raise ValueError(f"The model was trained on {list(model.feature_names)[:3]}..., not on the chunk descriptor")
    row = features.as_array() if isinstance(features, ChunkFeatures) else np.asarray(features, dtype=float)
    if row.shape != (len(FEATURE_NAMES),):
        raise ValueError(f"Expected {len(FEATURE_NAMES)} features, got shape {row.shape}")
    score = float(np.clip(model.predict_proba(row[None, :])[0], 0, 1))
    return Verdict(Label.FAKE if score > 0.5 else Label.GENUINE, score)


def classify_chunks(model: Model, X: np.ndarray) -> list[Verdict]:
    """Classify the rows of a descriptor matrix."""
    scores = np.clip(model.predict_proba(np.asarray(X, dtype=float)), 0, 1)
    return [Verdict(Label.FAKE if s > 0.5 else Label.GENUINE, float(s)) for s in scores]


def training_verdicts(model: Model, X: np.ndarray) -> list[Verdict]:
    """Verdicts of the training rows of a model: out of bag for an ensemble, in-sample otherwise.

    Rows that every tree of the ensemble saw fall back to the in-sample verdict.
    """
    verdicts = classify_chunks(model, X)
    if isinstance(model, TreeEnsemble) and model.oob_votes is not None:
        for i, vote in enumerate(model.oob_votes):
            if not np.isnan(vote):
                verdicts[i] = Verdict(Label.FAKE if vote > 0.5 else Label.GENUINE, float(vote))
    return verdicts


# -- metrics -------------------------------------------------------------------
@dataclass(frozen=True)
class ConfusionRates:
    """Confusion counts with the derived rates, fake being the positive class.

    Rates of a class absent from the evaluated set are 0.
    """

    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def __add__(self, other: ConfusionRates) -> ConfusionRates:
        """Pool the counts of two evaluations."""
        return ConfusionRates(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn, self.tn + other.tn)

    @property
    def total(self) -> int:
        """Number of evaluated items."""
        return self.tp + self.fp + self.fn + self.tn

    @staticmethod
    def _ratio(a: int, b: int) -> float:
        return a / b if b else 0.0

    @property
    def tpr(self) -> float:
        """Fraction of fakes detected."""
        return self._ratio(self.tp, self.tp + self.fn)

    @property
    def fnr(self) -> float:
        """Fraction of fakes missed."""
        return self._ratio(self.fn, self.tp + self.fn)

    @property
    def fpr(self) -> float:
        """Fraction of genuine items flagged."""
        return self._ratio(self.fp, self.fp + self.tn)

    @property
    def tnr(self) -> float:
        """Fraction of genuine items accepted."""
        return self._ratio(self.tn, self.fp + self.tn)

    @property
    def accuracy(self) -> float:
        """Fraction of items correctly classified."""
        return self._ratio(self.tp + self.tn, self.total)

    def as_dict(self) -> dict:
        """Counts and rates."""
        return {
            "tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn,
            "tpr": self.tpr, "fpr": self.fpr, "fnr": self.fnr, "tnr": self.tnr, "accuracy": self.accuracy,
        }  # fmt: skip


def evaluate(predictions: Iterable[LabelLike], truths: Iterable[LabelLike]) -> ConfusionRates:
    """Confusion counts of predictions against the ground truth.

    Examples:
        .. code-block:: python

            from liveproof.learning import evaluate

            evaluate(["fake", "genuine"], ["fake", "fake"]).tpr  # 0.5
    """
    p, t = encode_labels(predictions), encode_labels(truths)
    if p.size != t.size:
        raise ValueError(f"{p.size} predictions for {t.size} truths")
    if p.size == 0:
        raise ValueError("Cannot evaluate an empty prediction set")
    return ConfusionRates(
        tp=int(np.sum((p == 1) & (t == 1))),
        fp=int(np.sum((p == 1) & (t == 0))),
        fn=int(np.sum((p == 0) & (t == 1))),
        tn=int(np.sum((p == 0) & (t == 0))),
    )


def pool_rates(rates: Iterable[ConfusionRates]) -> ConfusionRates:
    """Sum the counts of many evaluations; the order does not matter."""
    total = ConfusionRates()
    for r in rates:
        total = total + r
    return total


# -- persistence ---------------------------------------------------------------
def save_model(model: Model, path: str | Path) -> Path:
    """Write a model as versioned JSON."""
    path = Path(path)
    kind = "tree" if isinstance(model, DecisionTree) else "ensemble"
    payload = {"format": MODEL_FORMAT, "version": MODEL_VERSION, "type": kind, "model": model.to_dict()}
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload))
    return path


def load_model(path: str | Path) -> Model:
    """Read a model written by :py:func:`save_model`."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"No such model file: {path}")
    payload = json.loads(path.read_text())
    if payload.get("format") != MODEL_FORMAT:
        raise ValueError(f"{path} is not a {MODEL_FORMAT} file")
    if payload.get("version") != MODEL_VERSION:
        raise ValueError(f"Unsupported model version {payload.get('version')}, expected {MODEL_VERSION}")
    if payload["type"] == "tree":
        return DecisionTree.from_dict(payload["model"])
    return TreeEnsemble.from_dict(payload["model"])
