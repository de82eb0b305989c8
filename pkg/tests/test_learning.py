"""Test the tree classifiers, the chunk verdicts and the confusion metrics."""
import numpy as np
import pytest

from liveproof.attacks import perfect_mirror
from liveproof.config import ModelConfig
from liveproof.features import FEATURE_NAMES, chunk_features
from liveproof.learning import (
    ConfusionRates,
    DecisionTree,
    TreeEnsemble,
    classify_chunk,
    classify_chunks,
    encode_labels,
    evaluate,
    load_model,
    pool_rates,
    save_model,
    train_model,
    train_tree,
    training_verdicts,
    weighted_bootstrap,
)
from liveproof.model import Label, LiveproofWarning
from liveproof.synth import gen_sample


@pytest.fixture
def mirror_xy(mirror_frame):
    """Return the descriptor matrix and the encoded labels of the genuine and mirror chunks."""
    return mirror_frame[list(FEATURE_NAMES)].to_numpy(), encode_labels(mirror_frame["label"])


class TestDecisionTree:
    """Test the DecisionTree class."""

    def test_single_cut(self):
        tree = DecisionTree().fit([[0.0], [1.0], [2.0], [3.0]], [0, 0, 1, 1])
        assert tree.node_count == 3
        assert tree.threshold[0] == pytest.approx(1.5)
        assert tree.predict([[0.5], [2.5]]).tolist() == [0, 1]

    def test_adjacent_floats(self):
        a = 0.1
        b = np.nextafter(a, 1.0)
        tree = DecisionTree().fit([[a], [a], [b], [b]], [0, 0, 1, 1])
        assert tree.node_count == 3
        assert tree.threshold[0] == a
        assert tree.predict([[a], [b]]).tolist() == [0, 1]

    def test_near_duplicate_rows(self):
        values = np.random.default_rng(4).normal(size=(30, 3))
        X = np.vstack([values, np.nextafter(values, np.inf)])
        y = np.array([0] * 30 + [1] * 30)
        tree = DecisionTree(min_leaf=1).fit(X, y)
        assert tree.predict(X).tolist() == y.tolist()

    def test_constant_features(self):
        tree = DecisionTree().fit(np.zeros((3, 2)), [0, 0, 1])
        assert tree.node_count == 1
        assert tree.predict_proba([[5.0, 5.0]]) == pytest.approx(np.array([1 / 3]))
        assert tree.predict([[5.0, 5.0]]).tolist() == [0]

    def test_xor(self):
        X = [[0, 0], [0, 1], [1, 0], [1, 1]]
        tree = DecisionTree(min_leaf=1).fit(X, [0, 1, 1, 0])
        assert tree.predict(X).tolist() == [0, 1, 1, 0]

    def test_max_depth(self, separable):
        X, y = separable
        assert DecisionTree(max_depth=1).fit(X, y).node_count <= 3

    def test_single_class(self):
        with pytest.warns(LiveproofWarning):
            tree = DecisionTree().fit([[0.0], [1.0]], ["fake", "fake"])
        assert tree.predict([[7.0]]).tolist() == [1]

    def test_width(self, separable):
        X, y = separable
        tree = DecisionTree().fit(X, y)
        assert tree.feature_names == ("f0", "f1", "f2", "f3")
        with pytest.raises(ValueError):
            tree.predict(X[:, :3])
        with pytest.raises(ValueError):
            DecisionTree().predict(X)

    def test_dict(self, separable):
        X, y = separable
        tree = DecisionTree(min_leaf=1).fit(X, y)
        assert np.array_equal(DecisionTree.from_dict(tree.to_dict()).predict_proba(X), tree.predict_proba(X))


class TestEnsemble:
    """Test the TreeEnsemble class."""

    def test_single_bag_is_a_tree(self, separable):
        X, y = separable
        bag = TreeEnsemble("bagging", n_trees=1, bootstrap=False, seed=0).fit(X, y)
        assert np.array_equal(bag.predict_proba(X), DecisionTree().fit(X, y).predict(X))

    def test_weighted_bootstrap(self):
        y = np.array([1] * 700 + [0] * 100)
        rows = weighted_bootstrap(y, {"fake": 1 / 8, "genuine": 7 / 8}, np.random.default_rng(0), size=20000)
        assert y[rows].mean() == pytest.approx(0.5, abs=0.03)
        assert weighted_bootstrap(y, None, np.random.default_rng(0)).size == 800
        with pytest.raises(ValueError):
            weighted_bootstrap(y, {"fake": 0, "genuine": 0}, np.random.default_rng(0))

    def test_oob(self, separable, small_forest):
        X, y = separable
        forest = train_model(X, y, small_forest, seed=0, feature_names=None)
        assert forest.oob_score >= 0.9
        assert forest.oob_votes.shape == (200,)
        assert forest.predict(X).mean() == pytest.approx(y.mean(), abs=0.05)

    def test_deterministic(self, separable):
        X, y = separable
        first = TreeEnsemble(n_trees=5, seed=3).fit(X, y)
        second = TreeEnsemble(n_trees=5, seed=3, n_jobs=2).fit(X, y)
        assert np.array_equal(first.predict_proba(X), second.predict_proba(X))

    def test_parameters(self):
        with pytest.raises(ValueError):
            TreeEnsemble("boosting")
        with pytest.raises(ValueError):
            TreeEnsemble(n_trees=0)


class TestVerdicts:
    """Test the chunk classification."""

    def test_mirror(self, mirror_xy, small_forest):
        X, y = mirror_xy
        model = train_model(X, y, small_forest, seed=0)
        chunk = gen_sample(9, 12.0, seed=99).liveproof.chunks()[0]
        verdict = classify_chunk(model, chunk_features(perfect_mirror(chunk)))
        assert verdict.label is Label.FAKE
        assert verdict.score >= 0.8

    def test_replay(self, mirror_xy):
        X, y = mirror_xy
        tree = train_tree(X, y, min_leaf=1)
        verdicts = classify_chunks(tree, X)
        assert encode_labels([v.label for v in verdicts]).tolist() == y.tolist()

    def test_scores(self, mirror_xy, small_forest):
        X, y = mirror_xy
        model = train_model(X, y, small_forest, seed=1)
        verdicts = training_verdicts(model, X)
        assert len(verdicts) == len(y)
        assert all(0 <= v.score <= 1 for v in verdicts)
        assert all(v.label is (Label.FAKE if v.score > 0.5 else Label.GENUINE) for v in verdicts)

    def test_wrong_descriptor(self, separable):
        X, y = separable
        tree = train_tree(X, y)
        with pytest.raises(ValueError):
            classify_chunk(tree, np.zeros(18))


class TestMetrics:
    """Test the confusion rates."""

    def test_all_correct(self):
        rates = evaluate(["fake", "genuine", "fake"], ["fake", "genuine", "fake"])
        assert (rates.tpr, rates.tnr, rates.accuracy) == (1.0, 1.0, 1.0)
        assert rates.fpr == rates.fnr == 0

    def test_complement(self):
        rates = evaluate(["fake", "fake", "genuine", "genuine", "fake"], ["fake", "genuine", "fake", "genuine", "genuine"])
        assert rates.tpr + rates.fnr == pytest.approx(1)
        assert rates.fpr + rates.tnr == pytest.approx(1)
        assert rates.total == 5

    def test_tpr(self):
        rates = evaluate([1] * 114 + [0] * 10, [1] * 124)
        assert rates.tpr == pytest.approx(0.9193, abs=1e-4)
        assert rates.fpr == 0

    def test_errors(self):
        with pytest.raises(ValueError):
            evaluate([], [])
        with pytest.raises(ValueError):
            evaluate(["fake"], ["fake", "genuine"])

    def test_pool(self):
        parts = [ConfusionRates(1, 2, 3, 4), ConfusionRates(5, 0, 1, 2), ConfusionRates(0, 1, 0, 9)]
        assert pool_rates(parts) == pool_rates(parts[::-1]) == ConfusionRates(6, 3, 4, 15)
        assert pool_rates([]).total == 0


class TestPersistence:
    """Test the model files."""

    @pytest.mark.parametrize("kind", ["tree", "bagging"])
    def test_round_trip(self, mirror_xy, tmp_path, kind):
        X, y = mirror_xy
        model = train_model(X, y, ModelConfig(kind=kind, n_trees=3), seed=0)
        loaded = load_model(save_model(model, tmp_path / "model.json"))
        assert type(loaded) is type(model)
        assert loaded.feature_names == FEATURE_NAMES
        assert np.array_equal(loaded.predict_proba(X), model.predict_proba(X))

    def test_bad_files(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_model(tmp_path / "nope.json")
        path = tmp_path / "other.json"
        path.write_text('{"format": "something-else"}')
        with pytest.raises(ValueError):
            load_model(path)
