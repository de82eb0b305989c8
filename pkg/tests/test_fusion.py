"""Test the sample level fusion of the chunk verdicts."""
import json

import numpy as np
import pytest

from liveproof.config import ModelConfig
from liveproof.features import FEATURE_NAMES
from liveproof.fusion import (
    PriorRates,
    SampleVerdict,
    VerdictReport,
    alpha_beta,
    classify_sample,
    fuse,
    load_priors,
    majority_vote,
    p_sample_fake,
    probabilistic_verdict,
    sample_feature_names,
    sample_features,
    save_priors,
)
from liveproof.learning import ConfusionRates, Verdict, train_model
from liveproof.model import Label, ValidationError

PERFECT = PriorRates(0.5, 0.5, tpr=1.0, fpr=0.0, tnr=1.0, fnr=0.0)
USUAL = PriorRates(0.5, 0.5, tpr=0.8, fpr=0.2, tnr=0.9, fnr=0.1)


def _verdicts(labels):
    return [Verdict(Label.of(v), 1.0 if Label.of(v).is_fake else 0.0) for v in labels]


@pytest.fixture
def stitched_toy():
    """Return sample descriptors of 60 genuine samples and 60 samples holding fake chunks, with their labels."""
    rng = np.random.default_rng(11)
    descriptors, labels = [], []
    for k in range(120):
        fake = k % 2 == 1
        n = int(rng.integers(2, 6))
        truth = rng.random(n) < (0.6 if fake else 0.0)
        truth[0] = truth[0] or fake
        X = rng.normal(size=(n, len(FEATURE_NAMES))) + 3.0 * truth[:, None]
        descriptors.append(sample_features(X, ["fake" if t else "genuine" for t in truth], USUAL))
        labels.append(Label.FAKE if fake else Label.GENUINE)
    return descriptors, labels


class TestAlphaBeta:
    """Test the Bayesian chunk reliabilities."""

    def test_perfect(self):
        assert alpha_beta(PERFECT) == (1.0, 0.0)

    def test_uninformative(self):
        priors = PriorRates(0.5, 0.5, 0.5, 0.5, 0.5, 0.5)
        assert alpha_beta(priors) == pytest.approx((0.5, 0.5))

    def test_usual(self):
        assert alpha_beta(USUAL) == pytest.approx((0.9, 0.2))

    def test_degenerate(self):
        with pytest.raises(ValueError):
            alpha_beta(PriorRates(1.0, 0.0, tpr=0.0, fpr=0.0, tnr=1.0, fnr=1.0))

    @pytest.mark.parametrize("seed", range(10))
    def test_monte_carlo(self, seed):
        rng = np.random.default_rng(seed)
        p_fake, tpr, fpr = rng.uniform(0.2, 0.8), rng.uniform(0.6, 0.95), rng.uniform(0.05, 0.4)
        priors = PriorRates(p_fake, 1 - p_fake, tpr=tpr, fpr=fpr, tnr=1 - fpr, fnr=1 - tpr)
        trials, n = 200_000, 4
        fake = rng.random((trials, n)) < p_fake
        flagged = np.where(fake, rng.random((trials, n)) < tpr, rng.random((trials, n)) < fpr)
        f_counts = flagged.sum(axis=1)
        assert all((f_counts == f).sum() >= 500 for f in range(1, n))
        for f in range(n + 1):
            rows = f_counts == f
            if rows.sum() < 500:
                continue
            empirical = fake[rows].any(axis=1).mean()
            expected = p_sample_fake(f, n - f, *alpha_beta(priors))
            assert empirical == pytest.approx(expected, abs=4 * np.sqrt(0.25 / rows.sum()) + 1e-3)


class TestSampleProbability:
    """Test the sample fake probability."""

    def test_examples(self):
        assert p_sample_fake(0, 0, 0.9, 0.2) == 0
        assert p_sample_fake(1, 4, 0.9, 0.0) == 1
        assert p_sample_fake(1, 3, 0.9, 0.2) == pytest.approx(0.8542)

    def test_monotone(self):
        for f in range(5):
            for g in range(5):
                assert p_sample_fake(f + 1, g, 0.9, 0.2) >= p_sample_fake(f, g, 0.9, 0.2)
                assert p_sample_fake(f, g + 1, 0.9, 0.2) >= p_sample_fake(f, g, 0.9, 0.2)

    def test_ranges(self):
        with pytest.raises(ValueError):
            p_sample_fake(-1, 0, 0.9, 0.2)
        with pytest.raises(ValueError):
            p_sample_fake(0, 1, 1.2, 0.2)

    def test_perfect_classifier(self):
        assert probabilistic_verdict(["genuine"] * 4, PERFECT, 0.5) is Label.GENUINE
        assert probabilistic_verdict(["genuine"] * 3 + ["fake"], PERFECT, 0.5) is Label.FAKE


class TestMajorityVote:
    """Test the majority vote."""

    def test_strict(self):
        assert majority_vote(1, 9, 0.1) is Label.GENUINE
        assert majority_vote(2, 8, 0.1) is Label.FAKE
        with pytest.raises(ValueError):
            majority_vote(0, 0, 0.5)

    def test_threshold_sweep(self):
        rng = np.random.default_rng(3)
        counts = [(int(f), int(n - f)) for n in rng.integers(1, 8, 200) for f in [rng.integers(0, n + 1)]]
        tprs = [np.mean([majority_vote(f, g, thr).is_fake for f, g in counts]) for thr in (0.1, 0.3, 0.5, 0.7)]
        assert all(a >= b for a, b in zip(tprs, tprs[1:]))

    def test_limits(self):
        for f in range(1, 4):
            for g in range(4):
                labels = ["fake"] * f + ["genuine"] * g
                assert majority_vote(f, g, 0.0) is probabilistic_verdict(labels, USUAL, 0.0) is Label.FAKE
                assert majority_vote(f, g, 1.0) is probabilistic_verdict(labels, USUAL, 1.0) is Label.GENUINE


class TestSampleFeatures:
    """Test the sample descriptor."""

    def test_single_chunk(self):
        features = sample_features(np.arange(18.0)[None, :], ["genuine"], USUAL)
        stats = features.aggregates.reshape(18, 4)
        assert np.all(stats[:, 0] == stats[:, 1])
        assert np.all(stats[:, 0] == stats[:, 2])
        assert np.all(stats[:, 3] == 0)

    def test_opposite_chunks(self):
        v = np.linspace(-2, 5, 18)
        features = sample_features(np.vstack([v, -v]), ["genuine", "fake"], USUAL)
        assert features.aggregates.reshape(18, 4)[:, 2] == pytest.approx(np.zeros(18))
        assert (features.f, features.g) == (1, 1)

    def test_probability(self):
        labels = ["fake", "genuine", "genuine", "genuine"]
        features = sample_features(np.zeros((4, 18)), _verdicts(labels), USUAL)
        assert features.p_fake == pytest.approx(p_sample_fake(1, 3, *alpha_beta(USUAL)))

    def test_width(self):
        features = sample_features(np.zeros((40, 18)), ["fake"] * 40, USUAL)
        assert features.as_array().shape == (len(sample_feature_names()),) == (107,)
        assert features.as_array(subset="aggregates").shape == (72,)
        padded = sample_features(np.zeros((2, 18)), ["fake", "genuine"], USUAL).as_array(max_labels=4)
        assert padded[3:7].tolist() == [1.0, 0.0, 0.5, 0.5]

    def test_order(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(5, 18))
        labels = ["fake", "genuine", "genuine", "fake", "genuine"]
        first = sample_features(X, labels, USUAL).as_array(subset="aggregates")
        second = sample_features(X[::-1], labels[::-1], USUAL).as_array(subset="aggregates")
        assert first == pytest.approx(second)
        stats = first.reshape(18, 4)
        assert np.all(stats[:, 0] <= stats[:, 2]) and np.all(stats[:, 2] <= stats[:, 1])

    def test_errors(self):
        with pytest.raises(ValueError):
            sample_features(np.zeros((0, 18)), [], USUAL)
        with pytest.raises(ValueError):
            sample_features(np.zeros((2, 18)), ["fake"], USUAL)
        with pytest.raises(ValueError):
            sample_feature_names(subset="labels")


class TestClassifySample:
    """Test the classifier fusion."""

    def test_held_out(self, stitched_toy):
        descriptors, labels = stitched_toy
        SX = np.array([d.as_array() for d in descriptors])
        model = train_model(SX[:80], labels[:80], ModelConfig(kind="tree"), feature_names=sample_feature_names())
        predictions = [classify_sample(model, d).label for d in descriptors[80:]]
        assert np.mean([p is t for p, t in zip(predictions, labels[80:])]) >= 0.9

    def test_reordering(self, stitched_toy, small_forest):
        descriptors, labels = stitched_toy
        names = sample_feature_names(subset="aggregates")
        SX = np.array([d.as_array(subset="aggregates") for d in descriptors])
        model = train_model(SX, labels, small_forest, seed=0, feature_names=names)
        rng = np.random.default_rng(0)
        X = rng.normal(size=(4, 18))
        chunk_labels = np.array(["genuine", "fake", "genuine", "genuine"])
        order = [2, 0, 3, 1]
        first = sample_features(X, list(chunk_labels), USUAL)
        second = sample_features(X[order], list(chunk_labels[order]), USUAL)
        assert classify_sample(model, first, subset="aggregates") == classify_sample(
            model, second, subset="aggregates"
        )

    def test_wrong_model(self, stitched_toy):
        descriptors, labels = stitched_toy
        SX = np.array([d.as_array() for d in descriptors])
        model = train_model(SX, labels, ModelConfig(kind="tree"), feature_names=sample_feature_names())
        with pytest.raises(ValueError):
            classify_sample(model, descriptors[0], subset="aggregates")


class TestFuse:
    """Test the fusion dispatch."""

    def test_vote(self):
        score, label = fuse("vote", _verdicts(["fake", "genuine", "genuine", "genuine"]), thr=0.2)
        assert (score, label) == (0.25, Label.FAKE)

    def test_prob(self):
        score, label = fuse("prob", _verdicts(["fake", "genuine", "genuine", "genuine"]), thr=0.8, priors=USUAL)
        assert score == pytest.approx(0.8542)
        assert label is Label.FAKE

    def test_model(self, stitched_toy):
        descriptors, labels = stitched_toy
        SX = np.array([d.as_array() for d in descriptors])
        model = train_model(SX, labels, ModelConfig(kind="tree"), feature_names=sample_feature_names())
        X = np.full((3, 18), 3.0)
        score, label = fuse("model", _verdicts(["fake"] * 3), priors=USUAL, model=model, chunk_features=X)
        assert 0 <= score <= 1
        assert label in (Label.FAKE, Label.GENUINE)

    def test_errors(self):
        verdicts = _verdicts(["fake"])
        with pytest.raises(ValueError):
            fuse("vote", verdicts)
        with pytest.raises(ValueError):
            fuse("prob", verdicts, thr=0.5)
        with pytest.raises(ValueError):
            fuse("model", verdicts, priors=USUAL)
        with pytest.raises(ValueError):
            fuse("average", verdicts, priors=USUAL)


class TestReports:
    """Test the verdict reports and the priors files."""

    def test_report(self):
        samples = (
            SampleVerdict("a", (Label.FAKE,), (0.9,), 1.0, Label.FAKE, Label.FAKE),
            SampleVerdict("b", (Label.GENUINE,), (0.1,), 0.0, Label.GENUINE, Label.FAKE),
            SampleVerdict("c", (Label.GENUINE,), (0.2,), 0.0, Label.GENUINE),
        )
        report = VerdictReport("vote", 0.1, samples)
        assert report.rates == ConfusionRates(tp=1, fn=1)
        data = json.loads(report.to_json())
        assert data["rates"]["tpr"] == 0.5
        assert data["samples"][2]["truth"] is None
        assert VerdictReport("vote", 0.1).rates is None

    def test_priors_file(self, tmp_path):
        assert load_priors(save_priors(USUAL, tmp_path / "priors.json")) == USUAL
        with pytest.raises(FileNotFoundError):
            load_priors(tmp_path / "nope.json")

    def test_priors_validation(self):
        with pytest.raises(ValidationError):
            PriorRates(0.6, 0.6, 0.5, 0.5, 0.5, 0.5)
        with pytest.raises(ValidationError):
            PriorRates(0.5, 0.5, 1.5, 0.5, 0.5, 0.5)

    def test_from_training(self):
        priors = PriorRates.from_training(["fake", "genuine", "genuine", "genuine"], ConfusionRates(1, 0, 0, 3))
        assert (priors.p_fake_prior, priors.p_genuine_prior) == (0.25, 0.75)
        assert (priors.tpr, priors.tnr) == (1.0, 1.0)
