"""Experiment designs of the liveness classifier and their metric tables.

Chunk level experiments work on a descriptor frame (one row per chunk, see
:py:func:`features_frame`); results are mappings from a category, attack or algorithm name to
:py:class:`~liveproof.learning.ConfusionRates`, turned into tables by :py:func:`rates_table`.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
import pandas as pd

from .attacks import build_attack_dataset
from .chunking import sequential_chunks
from .config import ExperimentConfig, ModelConfig
from .features import FEATURE_NAMES, features_matrix
from .fusion import PriorRates, SampleVerdict, VerdictReport, fuse, sample_feature_names, sample_features
from .learning import (
    ConfusionRates,
    classify_chunks,
    encode_labels,
    evaluate,
    pool_rates,
    train_model,
    training_verdicts,
)
from .model import (
    MERGED_ID,
    Annotation,
    Chunk,
    Label,
    LiveproofWarning,
    Sample,
    ValidationError,
    category_name,
)

logger = logging.getLogger(__name__)

EXPERIMENTS = ("cat", "mixed", "novelty", "mixattack", "newattack", "sample")
"Experiment names of the command line."

RATE_COLUMNS = ("TPR", "FPR", "FNR", "Acc")

MIXED_ATTACK_WEIGHTS = {"fake": 1 / 8, "genuine": 7 / 8}
"Class weights of the mixed attack training set."


def _int_seeds(seed: int | None, n: int) -> list[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(n)]


def _category_key(name: str) -> tuple:
    if name.isdigit():
        return (0, int(name), "")
    if name == MERGED_ID:
        return (0, 3, name)
    return (1, 0, name)


def _warn(msg: str):
    warnings.warn(msg, category=LiveproofWarning, stacklevel=3)


# -- descriptor frames ---------------------------------------------------------
def features_frame(chunks: Sequence[Chunk], config=None, X: np.ndarray | None = None) -> pd.DataFrame:
    """One row per chunk: its identifiers, category, label, provenance and the 18 descriptors.

    Parameters:
        chunks: The chunks.
        config: The :py:class:`~liveproof.config.FeatureConfig` of the descriptors.
        X: Precomputed ``(n, 18)`` descriptors of ``chunks``.

    Returns:
        The frame, indexed from 0.
    """
    X = features_matrix(chunks, config) if X is None else np.asarray(X, dtype=float)
    if X.shape != (len(chunks), len(FEATURE_NAMES)):
        raise ValueError(f"Expected a ({len(chunks)}, {len(FEATURE_NAMES)}) descriptor matrix, got {X.shape}")
    meta = pd.DataFrame(
        {
            "id": [c.id for c in chunks],
            "sample_id": [c.parent_sample_id for c in chunks],
            "category": [category_name(c.category) for c in chunks],
            "label": [c.label.value for c in chunks],
            "provenance": [c.provenance for c in chunks],
        }
    )
    return pd.concat([meta, pd.DataFrame(X, columns=list(FEATURE_NAMES))], axis=1)


def attack_frames(frame: pd.DataFrame) -> dict[str, pd.DataFrame]:
    """Split a frame into one dataset per attack: all the genuine rows plus the fakes of the attack."""
    genuine = frame["label"] == Label.GENUINE.value
    attacks = sorted(frame.loc[~genuine, "provenance"].unique())
    return {a: frame[genuine | (frame["provenance"] == a)] for a in attacks}


def categories(frame: pd.DataFrame) -> list[str]:
    """Categories of a frame in taxonomy order."""
    return sorted(frame["category"].unique(), key=_category_key)


def _xy(frame: pd.DataFrame) -> tuple[np.ndarray, np.ndarray]:
    return frame[list(FEATURE_NAMES)].to_numpy(dtype=float), encode_labels(frame["label"])


def _fit_evaluate(
    train: pd.DataFrame,
    test: pd.DataFrame,
    model_config: ModelConfig | None,
    seed: int | None,
    class_weights: Mapping | None = None,
) -> ConfusionRates:
    X, y = _xy(train)
    model = train_model(X, y, model_config, seed, class_weights)
    Xt, yt = _xy(test)
    return evaluate(model.predict(Xt), yt)


def holdout_split(
    frame: pd.DataFrame, test_fraction: float, seed: int | None = None, by: Sequence[str] = ("label",)
) -> tuple[pd.DataFrame, pd.DataFrame]:
    """Stratified train/test split.

    Each group of ``by`` sends ``round(test_fraction * size)`` random rows to the test set,
    keeping at least one row on each side of groups of 2 rows or more.
    """
    if not 0 < test_fraction < 1:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    rng = np.random.default_rng(seed)
    test_index: list = []
    for _, group in frame.groupby(list(by), sort=True):
        n = len(group)
        n_test = min(max(int(round(test_fraction * n)), 1), n - 1) if n > 1 else 0
        test_index.extend(rng.permutation(group.index.to_numpy())[:n_test])
    in_test = frame.index.isin(test_index)
    return frame[~in_test], frame[in_test]


def assign_folds(
    frame: pd.DataFrame, folds: int = 10, seed: int | None = None, by: Sequence[str] = ("category", "label")
) -> pd.Series:
    """Stratified fold number of every row: each ``by`` group is dealt round robin over the folds."""
    if folds < 2:
        raise ValueError(f"folds must be >= 2, got {folds}")
    rng = np.random.default_rng(seed)
    fold = pd.Series(-1, index=frame.index, dtype=int)
    for _, group in frame.groupby(list(by), sort=True):
        order = rng.permutation(group.index.to_numpy())
        fold.loc[order] = (np.arange(order.size) + rng.integers(folds)) % folds
    return fold


def _undersized(frame: pd.DataFrame, minimum: int) -> bool:
    counts = frame["label"].value_counts()
    return any(counts.get(label.value, 0) < minimum for label in Label)


# -- category experiments ------------------------------------------------------
def experiment_category_centric(
    frame: pd.DataFrame,
    seed: int | None = None,
    model_config: ModelConfig | None = None,
    test_fraction: float = 0.2,
    min_chunks: int = 5,
) -> dict[str, ConfusionRates]:
    """Train and test inside each category on a random 80/20 split of its chunks.

    Parameters:
        frame: Genuine and fake chunks of one attack, see :py:func:`features_frame`.
        seed: Seed of the splits and of the models.
        model_config: The classifier.
        test_fraction: Fraction of each category (and label) held out.
        min_chunks: Categories with fewer chunks of a label are skipped with a warning.

    Returns:
        The rates of each category.
    """
    names = categories(frame)
    results = {}
    for name, (split_seed, model_seed) in zip(names, np.array(_int_seeds(seed, 2 * len(names))).reshape(-1, 2)):
        subset = frame[frame["category"] == name]
        if _undersized(subset, min_chunks):
            _warn(f"Category {name} has fewer than {min_chunks} chunks of a label, skipped")
            continue
        train, test = holdout_split(subset, test_fraction, int(split_seed))
        results[name] = _fit_evaluate(train, test, model_config, int(model_seed))
        logger.debug(f"category-centric {name}: accuracy {results[name].accuracy:.3f}")
    return results


def experiment_mixed(
    frame: pd.DataFrame,
    folds: int = 10,
    seed: int | None = None,
    model_config: ModelConfig | None = None,
) -> dict[str, ConfusionRates]:
    """Stratified k-fold over all categories, each test fold scored per category.

    Every chunk is tested exactly once. Categories with fewer than ``folds`` chunks of a label
    are trained on but not reported.
    """
    fold_seed, *model_seeds = _int_seeds(seed, folds + 1)
    fold = assign_folds(frame, folds, fold_seed)
    names = [n for n in categories(frame) if not _undersized(frame[frame["category"] == n], folds)]
    for name in sorted(set(categories(frame)) - set(names), key=_category_key):
        _warn(f"Category {name} has fewer than {folds} chunks of a label, not reported")
    per_fold: dict[str, list[ConfusionRates]] = {n: [] for n in names}
    for k in range(folds):
        train, test = frame[fold != k], frame[fold == k]
        X, y = _xy(train)
        model = train_model(X, y, model_config, model_seeds[k])
        predictions = pd.Series(model.predict(_xy(test)[0]), index=test.index)
        for name in names:
            rows = test["category"] == name
            if rows.any():
                per_fold[name].append(evaluate(predictions[rows], test.loc[rows, "label"]))
        logger.debug(f"mixed fold {k + 1}/{folds} done")
    return {name: pool_rates(per_fold[name]) for name in names}


def experiment_novelty(
    frame: pd.DataFrame,
    seed: int | None = None,
    model_config: ModelConfig | None = None,
    min_chunks: int = 5,
) -> dict[str, ConfusionRates]:
    """Leave one category out: train on every other category, test on the held out one."""
    names = categories(frame)
    results = {}
    for name, model_seed in zip(names, _int_seeds(seed, len(names))):
        held_out = frame["category"] == name
        if _undersized(frame[held_out], min_chunks):
            _warn(f"Category {name} has fewer than {min_chunks} chunks of a label, skipped")
            continue
        results[name] = _fit_evaluate(frame[~held_out], frame[held_out], model_config, model_seed)
        logger.debug(f"novelty {name}: accuracy {results[name].accuracy:.3f}")
    return results


# -- attack experiments --------------------------------------------------------
def _genuine_pool(datasets: Mapping[str, pd.DataFrame]) -> pd.DataFrame:
    frames = [d[d["label"] == Label.GENUINE.value] for d in datasets.values()]
    if not frames:
        raise ValueError("No attack dataset given")
    return pd.concat(frames).drop_duplicates("id").reset_index(drop=True)


def _fakes(datasets: Mapping[str, pd.DataFrame], attack: str) -> pd.DataFrame:
    d = datasets[attack]
    return d[d["label"] == Label.FAKE.value].reset_index(drop=True)


def experiment_mixed_attack(
    datasets: Mapping[str, pd.DataFrame],
    seed: int | None = None,
    model_config: ModelConfig | None = None,
    test_fraction: float = 0.1,
    class_weights: Mapping | None = MIXED_ATTACK_WEIGHTS,
) -> dict[str, ConfusionRates]:
    """One classifier trained on 90% of every attack dataset, tested on the rest of each attack.

    The genuine chunks shared by the datasets are split once; each attack is tested on its held
    out fakes together with the held out genuine chunks. Training rows are drawn with the class
    weights (1/8 fake, 7/8 genuine by default) to offset the fake majority.
    """
    attacks = sorted(datasets)
    split_seed, model_seed, *attack_seeds = _int_seeds(seed, len(attacks) + 2)
    genuine_train, genuine_test = holdout_split(_genuine_pool(datasets), test_fraction, split_seed)
    fake_train, fake_test = {}, {}
    for attack, attack_seed in zip(attacks, attack_seeds):
        fake_train[attack], fake_test[attack] = holdout_split(_fakes(datasets, attack), test_fraction, attack_seed)
    train = pd.concat([genuine_train, *fake_train.values()], ignore_index=True)
    X, y = _xy(train)
    model = train_model(X, y, model_config, model_seed, class_weights)
    results = {}
    for attack in attacks:
        test = pd.concat([genuine_test, fake_test[attack]], ignore_index=True)
        Xt, yt = _xy(test)
        results[attack] = evaluate(model.predict(Xt), yt)
    logger.info(f"mixed attack: trained on {len(train)} chunks, tested {len(attacks)} attacks")
    return results


def experiment_new_attack(
    datasets: Mapping[str, pd.DataFrame],
    seed: int | None = None,
    model_config: ModelConfig | None = None,
    test_fraction: float = 0.2,
    class_weights: Mapping | None = None,
) -> dict[str, ConfusionRates]:
    """Leave one attack out: train on the fakes of every other attack, test on the unseen one.

    The genuine chunks are split 80/20 once per held out attack.
    """
    attacks = sorted(datasets)
    if len(attacks) < 2:
        raise ValueError("The new attack experiment needs at least 2 attack datasets")
    pool = _genuine_pool(datasets)
    results = {}
    for attack, (split_seed, model_seed) in zip(attacks, np.array(_int_seeds(seed, 2 * len(attacks))).reshape(-1, 2)):
        genuine_train, genuine_test = holdout_split(pool, test_fraction, int(split_seed))
        others = [_fakes(datasets, a) for a in attacks if a != attack]
        train = pd.concat([genuine_train, *others], ignore_index=True)
        test = pd.concat([genuine_test, _fakes(datasets, attack)], ignore_index=True)
        results[attack] = _fit_evaluate(train, test, model_config, int(model_seed), class_weights)
        logger.debug(f"new attack {attack}: accuracy {results[attack].accuracy:.3f}")
    return results


def cross_validate(
    frame: pd.DataFrame,
    folds: int = 10,
    seed: int | None = None,
    model_config: ModelConfig | None = None,
    class_weights: Mapping | None = None,
) -> ConfusionRates:
    """Label stratified k-fold cross validation, rates pooled over the folds."""
    fold_seed, *model_seeds = _int_seeds(seed, folds + 1)
    fold = assign_folds(frame, folds, fold_seed, by=("label",))
    return pool_rates(
        _fit_evaluate(frame[fold != k], frame[fold == k], model_config, model_seeds[k], class_weights)
        for k in range(folds)
        if (fold == k).any()
    )


def experiment_pfa_repeated(
    genuine_chunks: Sequence[Chunk],
    runs: int = 10,
    folds: int = 10,
    seed: int | None = None,
    config: ExperimentConfig | None = None,
) -> ConfusionRates:
    """Rebuild the PFA dataset ``runs`` times, each with a fresh dictionary, and cross validate each.

    Returns:
        The rates pooled over the runs, which for equal sized runs is their average.
    """
    c = config or ExperimentConfig()
    rates = []
    for run, (attack_seed, cv_seed) in enumerate(np.array(_int_seeds(seed, 2 * runs)).reshape(-1, 2)):
        dataset = build_attack_dataset(genuine_chunks, "pfa", int(attack_seed), c.attacks)
        frame = features_frame(dataset.chunks, c.features)
        rates.append(cross_validate(frame, folds, int(cv_seed), c.model))
        logger.info(f"pfa run {run + 1}/{runs}: accuracy {rates[-1].accuracy:.3f}")
    return pool_rates(rates)


def compare_algorithms(
    frame: pd.DataFrame,
    kinds: Iterable[str] = ("tree", "random_forest", "bagging"),
    folds: int = 10,
    seed: int | None = None,
    model_config: ModelConfig | None = None,
) -> dict[str, ConfusionRates]:
    """Cross validate the same frame with each learner kind."""
    base = model_config or ModelConfig()
    results = {}
    for kind in kinds:
        config = ModelConfig.from_dict({**base.to_dict(), "kind": kind})
        results[kind] = cross_validate(frame, folds, seed, config)
    return results


# -- category weights ----------------------------------------------------------
def annotation_tally(annotations: Iterable[Annotation]) -> dict[str, float]:
    """Annotated seconds of each category, in taxonomy order."""
    tally: dict[str, float] = {}
    for annotation in annotations:
        for segment in annotation.segments:
            name = category_name(segment.category)
            tally[name] = tally.get(name, 0.0) + segment.length
    return {name: tally[name] for name in sorted(tally, key=_category_key)}


def category_weights(tally: Mapping[str, float], categories: Iterable[str] | None = None) -> dict[str, float]:
    """Normalize a tally into weights summing to 1, optionally restricted to some categories."""
    keep = list(tally) if categories is None else [c for c in categories if c in tally]
    total = sum(tally[c] for c in keep)
    if total <= 0:
        raise ValueError("The tally holds no time for the requested categories")
    return {c: tally[c] / total for c in keep}


def predict_weighted_accuracy(
    per_category_acc: Mapping[str, float | ConfusionRates], category_weights: Mapping[str, float]
) -> float:
    """Weighted sum of the per category accuracies.

    Raises:
        ValueError: when the categories differ or the weights do not sum to 1.
    """
    if set(per_category_acc) != set(category_weights):
        missing = set(per_category_acc) ^ set(category_weights)
        raise ValueError(f"Accuracies and weights cover different categories: {sorted(missing)}")
    total = sum(category_weights.values())
    if not math.isclose(total, 1.0, abs_tol=1e-6):
        raise ValueError(f"Category weights sum to {total}, not 1")
    accuracy = {k: v.accuracy if isinstance(v, ConfusionRates) else float(v) for k, v in per_category_acc.items()}
    return float(sum(category_weights[k] * accuracy[k] for k in accuracy))


def contingency_table(results: Mapping[str, ConfusionRates]) -> pd.DataFrame:
    """Correct and incorrect decision counts of each entry, the input of independence tests."""
    return pd.DataFrame(
        {
            "correct": [r.tp + r.tn for r in results.values()],
            "incorrect": [r.fp + r.fn for r in results.values()],
        },
        index=pd.Index(list(results), name="category"),
    )


# -- sample level --------------------------------------------------------------
@dataclass
class SampleLevelResult:
    """Sample decisions of every fusion method and threshold over the paired folds."""

    reports: dict[tuple[str, float | None], VerdictReport]
    folds: dict[str, int]
    splits: list[tuple[frozenset[str], frozenset[str]]] = field(default_factory=list)

    @property
    def rates(self) -> dict[tuple[str, float | None], ConfusionRates]:
        """Pooled rates of each method and threshold."""
        return {key: report.rates for key, report in self.reports.items()}  # type: ignore[misc]

    def named(self) -> dict[str, ConfusionRates]:
        """Rates keyed by a printable method name such as ``vote>0.3``."""
        return {
            (method if thr is None else f"{method}>{thr:g}"): rates
            for (method, thr), rates in self.rates.items()
        }


def pair_folds(genuine: Sequence[Sample], fakes: Sequence[Sample], k: int = 10, seed: int | None = None) -> dict[str, int]:
    """Deal the genuine samples over ``k`` folds; every fake sample joins the fold of its parent.

    Raises:
        ValidationError: when a fake sample has no parent among the genuine samples.
    """
    if len(genuine) < k:
        raise ValueError(f"{len(genuine)} genuine samples cannot fill {k} folds")
    order = np.random.default_rng(seed).permutation(len(genuine))
    folds = {genuine[i].id: int(position % k) for position, i in enumerate(order)}
    for fake in fakes:
        if fake.parent_id not in folds:
            raise ValidationError(f"Fake sample {fake.id} has no genuine parent in the folds ({fake.parent_id})")
        folds[fake.id] = folds[fake.parent_id]
    return folds


def experiment_sample_level(
    genuine: Sequence[Sample],
    fakes: Sequence[Sample],
    k: int = 10,
    seed: int | None = None,
    config: ExperimentConfig | None = None,
) -> SampleLevelResult:
    """Paired k-fold evaluation of the sample fusion methods on stitched samples.

    Fold ``i`` tests the genuine samples of fold ``i`` and the fakes stitched from them. The chunk
    classifier is trained on the chunks of the other folds; its out of bag rates and the training
    chunk labels give the priors of the probabilistic method, and the sample classifier is trained
    on the descriptors of the training samples.

    Parameters:
        genuine: The genuine samples.
        fakes: The stitched samples, each with a ``parent_id`` among ``genuine``.
        k: The number of folds.
        seed: Seed of the folds and of the models.
        config: Chunk length, descriptor, classifier and threshold settings.

    Returns:
        The reports of the vote and prob methods for every configured threshold, and of the
        model method.
    """
    c = config or ExperimentConfig()
    fold_seed, *model_seeds = _int_seeds(seed, 2 * k + 1)
    folds = pair_folds(genuine, fakes, k, fold_seed)
    samples = [*genuine, *fakes]

    chunks = {s.id: sequential_chunks(s, c.chunking.length, motion_config=c.motion) for s in samples}
    samples = [s for s in samples if chunks[s.id]]
    all_chunks = [ch for s in samples for ch in chunks[s.id]]
    X_all = features_matrix(all_chunks, c.features)
    rows, start = {}, 0
    for s in samples:
        rows[s.id] = np.arange(start, start + len(chunks[s.id]))
        start += len(chunks[s.id])
    labels = np.array([ch.label.value for ch in all_chunks])

    keys: list[tuple[str, float | None]] = [("vote", t) for t in c.fusion.vote_thresholds]
    keys += [("prob", t) for t in c.fusion.prob_thresholds]
    keys.append(("model", None))
    decided: dict[tuple[str, float | None], list[SampleVerdict]] = {key: [] for key in keys}
    splits = []
    names = sample_feature_names(c.fusion.max_labels)

    for i in range(k):
        train_samples = [s for s in samples if folds[s.id] != i]
        test_samples = [s for s in samples if folds[s.id] == i]
        train_rows = np.concatenate([rows[s.id] for s in train_samples])
        splits.append(
            (
                frozenset(all_chunks[r].id for r in train_rows),
                frozenset(all_chunks[r].id for s in test_samples for r in rows[s.id]),
            )
        )
        chunk_model = train_model(X_all[train_rows], labels[train_rows], c.model, model_seeds[2 * i])
        train_verdicts = training_verdicts(chunk_model, X_all[train_rows])
        priors = PriorRates.from_training(labels[train_rows], evaluate([v.label for v in train_verdicts], labels[train_rows]))

        position = {r: j for j, r in enumerate(train_rows)}
        SX = np.array(
            [
                sample_features(X_all[rows[s.id]], [train_verdicts[position[r]] for r in rows[s.id]], priors).as_array(
                    c.fusion.max_labels
                )
                for s in train_samples
            ]
        )
        sy = [s.label for s in train_samples]
        sample_model = train_model(SX, sy, c.model, model_seeds[2 * i + 1], feature_names=names)

        for s in test_samples:
            X = X_all[rows[s.id]]
            verdicts = classify_chunks(chunk_model, X)
            for method, thr in keys:
                score, label = fuse(method, verdicts, thr, priors, sample_model, X, c.fusion.max_labels)
                decided[(method, thr)].append(
                    SampleVerdict(
                        s.id,
                        tuple(v.label for v in verdicts),
                        tuple(v.score for v in verdicts),
                        score,
                        label,
                        s.label,
                    )
                )
        logger.info(f"sample level fold {i + 1}/{k}: {len(train_samples)} train, {len(test_samples)} test samples")

    reports = {key: VerdictReport(key[0], key[1], tuple(decided[key])) for key in keys}
    return SampleLevelResult(reports, folds, splits)


# -- reports -------------------------------------------------------------------
def rates_table(results: Mapping[str, ConfusionRates], key: str = "Category") -> pd.DataFrame:
    """Table of percentages with 2 decimals, one row per entry in the order of ``results``."""
    records = [
        {
            key: str(name),
            "TPR": round(100 * r.tpr, 2),
            "FPR": round(100 * r.fpr, 2),
            "FNR": round(100 * r.fnr, 2),
            "Acc": round(100 * r.accuracy, 2),
        }
        for name, r in results.items()
    ]
    return pd.DataFrame.from_records(records, columns=[key, *RATE_COLUMNS])


def format_table(table: pd.DataFrame) -> str:
    """Plain text rendering of a rates table."""
    if table.empty:
        return "  ".join(table.columns)
    return table.to_string(index=False, float_format="{:.2f}".format)


def report(
    results: Mapping[str, ConfusionRates],
    key: str = "Category",
    out_dir: str | Path | None = None,
    name: str = "report",
) -> str:
    """Format results as a text table, and write ``<name>.csv``, ``.json`` and ``.txt`` to ``out_dir``.

    Parameters:
        results: Rates keyed by category, attack or algorithm.
        key: Name of the first column: ``Category``, ``Attack`` or ``Algo``.
        out_dir: Destination folder, nothing is written when ``None``.
        name: Base name of the written files.

    Returns:
        The text table.

    Examples:
        .. code-block:: python

            from liveproof.experiments import report
            from liveproof.learning import ConfusionRates

            print(report({"1": ConfusionRates(tp=9, fp=1, fn=1, tn=9)}))
    """
    table = rates_table(results, key)
    text = format_table(table)
    if out_dir is not None:
        folder = Path(out_dir)
        folder.mkdir(parents=True, exist_ok=True)
        table.to_csv(folder / f"{name}.csv", index=False, float_format=None)
        (folder / f"{name}.json").write_text(table.to_json(orient="records", indent=2))
        (folder / f"{name}.txt").write_text(text + "\n")
        logger.info(f"report written to {folder / name}.*")
    return text


def read_report(path: str | Path, key: str = "Category") -> pd.DataFrame:
    """Load a table written by :py:func:`report` from its CSV or JSON file."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"{path} does not exist")
    if path.suffix == ".json":
        table = pd.read_json(path, orient="records", dtype={key: str})
    elif path.suffix == ".csv":
        table = pd.read_csv(path, dtype={key: str}, float_precision="round_trip")
    else:
        raise ValueError(f"Unsupported report format {path.suffix!r}")
    table = table.reindex(columns=[key, *RATE_COLUMNS])
    return table.astype({column: float for column in RATE_COLUMNS}).astype({key: str})


def run_experiment(
    name: str,
    frame: pd.DataFrame | None = None,
    attack: str | None = None,
    config: ExperimentConfig | None = None,
    genuine: Sequence[Sample] = (),
    fakes: Sequence[Sample] = (),
) -> tuple[dict[str, ConfusionRates], str]:
    """Dispatch one of the :py:data:`EXPERIMENTS` and return its results and the table key."""
    c = config or ExperimentConfig()
    if name == "sample":
        return experiment_sample_level(genuine, fakes, c.folds, c.seed, c).named(), "Algo"
    if frame is None:
        raise ValueError(f"The {name} experiment needs a chunk descriptor frame")
    datasets = attack_frames(frame)
    if name in ("mixattack", "newattack"):
        run = experiment_mixed_attack if name == "mixattack" else experiment_new_attack
        return run(datasets, c.seed, c.model), "Attack"
    if attack not in datasets:
        raise ValueError(f"No fake chunk of attack {attack!r}, the frame holds {sorted(datasets)}")
    data = datasets[attack].reset_index(drop=True)
    if name == "cat":
        return experiment_category_centric(data, c.seed, c.model), "Category"
    if name == "mixed":
        return experiment_mixed(data, c.folds, c.seed, c.model), "Category"
    if name == "novelty":
        return experiment_novelty(data, c.seed, c.model), "Category"
    raise ValueError(f"Unknown experiment {name!r}, use one of {EXPERIMENTS}")
