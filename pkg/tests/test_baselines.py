import numpy as np
import pytest
from sklearn.exceptions import NotFittedError
from sklearn.linear_model import LogisticRegression

from banditroute import (
    MULTI_LABEL,
    SINGLE_LABEL,
    ArmBehavior,
    ArmOutcome,
    ClassSpec,
    ClassifierModel,
    ClassifierRouter,
    ClassifierTrainConfig,
    ConfigurationError,
    ConstantSteps,
    EmptyTrainingSetError,
    Query,
    ReplayDataset,
    SyntheticEnvSpec,
    default_arm_set,
    derive_multi_labels,
    derive_single_label,
    generate,
    predict_arm,
    train_classifier,
)
from banditroute.featurize import QueryFeaturizer


def hand_dataset(correct, steps):
    arms = default_arm_set()
    queries = [Query(id="q1", text="text")]
    outcomes = {
        ("q1", a): ArmOutcome(
            answer="gold" if correct[a] else "wrong",
            correct_em=correct[a],
            steps=steps[a],
        )
        for a in range(3)
    }
    return ReplayDataset(
        queries=queries, arms=arms, outcomes=outcomes, gold={"q1": "gold"}
    )


class TestLabelDerivation:
    def test_cheapest_correct_wins(self):
        ds = hand_dataset([True, True, True], [0, 1, 5])
        assert derive_single_label(ds, "q1") == 0

    def test_cheapest_by_steps_not_index(self):
        ds = hand_dataset([False, True, True], [0, 1, 5])
        assert derive_single_label(ds, "q1") == 1
        # a correct zero-step entry for arm "multiple" is impossible by the
        # step invariant, so cheapest-correct contrast uses 1 vs 5 here

    def test_step_tie_breaks_to_lowest_index(self):
        arms = default_arm_set()
        queries = [Query(id="q1", text="t")]
        outcomes = {
            ("q1", 0): ArmOutcome(answer="w", correct_em=False, steps=0),
            ("q1", 1): ArmOutcome(answer="g", correct_em=True, steps=1),
            ("q1", 2): ArmOutcome(answer="g", correct_em=True, steps=1),
        }
        ds = ReplayDataset(
            queries=queries, arms=arms, outcomes=outcomes, gold={"q1": "g"}
        )
        assert derive_single_label(ds, "q1") == 1

    def test_none_correct_gets_most_expensive(self):
        ds = hand_dataset([False, False, False], [0, 1, 6])
        assert derive_single_label(ds, "q1") == 2

    def test_none_correct_step_tie_highest_index(self):
        arms = default_arm_set()
        queries = [Query(id="q1", text="t")]
        outcomes = {
            ("q1", 0): ArmOutcome(answer="w", correct_em=False, steps=0),
            ("q1", 1): ArmOutcome(answer="w", correct_em=False, steps=1),
            ("q1", 2): ArmOutcome(answer="w", correct_em=False, steps=1),
        }
        ds = ReplayDataset(
            queries=queries, arms=arms, outcomes=outcomes, gold={"q1": "g"}
        )
        assert derive_single_label(ds, "q1") == 2

    def test_multi_labels_are_correct_set(self):
        ds = hand_dataset([True, False, True], [0, 1, 5])
        assert derive_multi_labels(ds, "q1") == {0, 2}

    def test_multi_labels_empty_when_none_correct(self):
        ds = hand_dataset([False, False, False], [0, 1, 5])
        assert derive_multi_labels(ds, "q1") == set()

    def test_single_label_always_in_multi_set_when_any_correct(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            correct = [bool(rng.integers(2)) for _ in range(3)]
            if not any(correct):
                continue
            steps = [0, 1, int(rng.integers(1, 9))]
            ds = hand_dataset(correct, steps)
            assert derive_single_label(ds, "q1") in derive_multi_labels(ds, "q1")


def separable_spec():
    """Each class answered by exactly one arm; no shared vocabulary."""
    return SyntheticEnvSpec(
        classes=(
            ClassSpec(
                name="za",
                weight=1 / 3,
                behaviors=(
                    ArmBehavior(1.0, ConstantSteps(0)),
                    ArmBehavior(0.0, ConstantSteps(1)),
                    ArmBehavior(0.0, ConstantSteps(3)),
                ),
            ),
            ClassSpec(
                name="zb",
                weight=1 / 3,
                behaviors=(
                    ArmBehavior(0.0, ConstantSteps(0)),
                    ArmBehavior(1.0, ConstantSteps(1)),
                    ArmBehavior(0.0, ConstantSteps(3)),
                ),
            ),
            ClassSpec(
                name="zc",
                weight=1 / 3,
                behaviors=(
                    ArmBehavior(0.0, ConstantSteps(0)),
                    ArmBehavior(0.0, ConstantSteps(1)),
                    ArmBehavior(1.0, ConstantSteps(3)),
                ),
            ),
        ),
        overlap=0.0,
    )


LABEL_BY_CLASS = {"za": 0, "zb": 1, "zc": 2}


class TestTrainClassifier:
    def test_separable_accuracy(self):
        """On cleanly separable classes the classifier should recover the
        class -> arm mapping almost perfectly, matching what an
        off-the-shelf logistic regression achieves on the same features."""
        train_ds = generate(separable_spec(), seed=100, n=400)
        held = generate(separable_spec(), seed=200, n=200)
        feat = QueryFeaturizer(dim=256)
        model = train_classifier(
            train_ds, feat, SINGLE_LABEL, ClassifierTrainConfig(seed=0)
        )

        x_train = np.stack([feat.vector(q) for q in train_ds.queries])
        y_train = [derive_single_label(train_ds, q.id) for q in train_ds.queries]
        x_held = np.stack([feat.vector(q) for q in held.queries])

        ours = np.array([predict_arm(model, x) for x in x_held])
        want = np.array([LABEL_BY_CLASS[q.class_label] for q in held.queries])
        assert (ours == want).mean() >= 0.95

        reference = LogisticRegression(max_iter=1000).fit(x_train, y_train)
        ref_acc = (reference.predict(x_held) == want).mean()
        assert (ours == want).mean() >= ref_acc - 0.05

    def test_deterministic(self):
        ds = generate(separable_spec(), seed=1, n=100)
        feat = QueryFeaturizer(dim=64)
        cfg = ClassifierTrainConfig(seed=5)
        m1 = train_classifier(ds, feat, SINGLE_LABEL, cfg)
        m2 = train_classifier(ds, feat, SINGLE_LABEL, cfg)
        assert np.array_equal(m1.weights, m2.weights)
        assert np.array_equal(m1.biases, m2.biases)

    def test_seed_matters(self):
        ds = generate(separable_spec(), seed=1, n=100)
        feat = QueryFeaturizer(dim=64)
        m1 = train_classifier(ds, feat, SINGLE_LABEL, ClassifierTrainConfig(seed=5))
        m2 = train_classifier(ds, feat, SINGLE_LABEL, ClassifierTrainConfig(seed=6))
        assert not np.array_equal(m1.weights, m2.weights)

    def test_multi_label_prefers_frequent_arm(self):
        """When the expensive arm is the only reliably correct one, the
        multi-label head should route most held-out queries to it."""
        spec = SyntheticEnvSpec(
            classes=(
                ClassSpec(
                    name="hardclass",
                    weight=1.0,
                    behaviors=(
                        ArmBehavior(0.05, ConstantSteps(0)),
                        ArmBehavior(0.05, ConstantSteps(1)),
                        ArmBehavior(0.9, ConstantSteps(4)),
                    ),
                ),
            ),
        )
        train_ds = generate(spec, seed=10, n=400)
        held = generate(spec, seed=20, n=200)
        feat = QueryFeaturizer(dim=128)
        model = train_classifier(
            train_ds, feat, MULTI_LABEL, ClassifierTrainConfig(seed=0)
        )
        picks = [predict_arm(model, feat.vector(q)) for q in held.queries]
        assert np.mean(np.array(picks) == 2) >= 0.8

    def test_multi_mode_drops_unanswerable_queries(self):
        # one answerable query, one with no correct arm: training succeeds
        arms = default_arm_set()
        queries = [Query(id="q1", text="good text"), Query(id="q2", text="bad text")]
        outcomes = {
            ("q1", 0): ArmOutcome(answer="g", correct_em=True, steps=0),
            ("q1", 1): ArmOutcome(answer="w", correct_em=False, steps=1),
            ("q1", 2): ArmOutcome(answer="w", correct_em=False, steps=2),
            ("q2", 0): ArmOutcome(answer="w", correct_em=False, steps=0),
            ("q2", 1): ArmOutcome(answer="w", correct_em=False, steps=1),
            ("q2", 2): ArmOutcome(answer="w", correct_em=False, steps=2),
        }
        ds = ReplayDataset(
            queries=queries, arms=arms, outcomes=outcomes,
            gold={"q1": "g", "q2": "g"},
        )
        model = train_classifier(
            ds, QueryFeaturizer(dim=32), MULTI_LABEL, ClassifierTrainConfig(seed=0)
        )
        assert model.mode == MULTI_LABEL

    def test_multi_mode_all_unanswerable_raises(self):
        ds = hand_dataset([False, False, False], [0, 1, 2])
        with pytest.raises(EmptyTrainingSetError):
            train_classifier(
                ds, QueryFeaturizer(dim=32), MULTI_LABEL, ClassifierTrainConfig(seed=0)
            )

    def test_single_mode_keeps_unanswerable_queries(self):
        ds = hand_dataset([False, False, False], [0, 1, 2])
        model = train_classifier(
            ds, QueryFeaturizer(dim=32), SINGLE_LABEL, ClassifierTrainConfig(seed=0)
        )
        assert model.arm_count == 3

    def test_unknown_mode(self):
        ds = hand_dataset([True, False, False], [0, 1, 2])
        with pytest.raises(ConfigurationError):
            train_classifier(
                ds, QueryFeaturizer(dim=32), "ordinal", ClassifierTrainConfig(seed=0)
            )

    def test_zero_epochs_zero_model(self):
        ds = hand_dataset([True, False, False], [0, 1, 2])
        model = train_classifier(
            ds,
            QueryFeaturizer(dim=32),
            SINGLE_LABEL,
            ClassifierTrainConfig(seed=0, epochs=0),
        )
        assert not model.weights.any() and not model.biases.any()


class TestPredictArm:
    def test_argmax(self):
        model = ClassifierModel(
            weights=np.zeros((3, 2)),
            biases=np.array([0.1, 0.9, 0.3]),
            mode=SINGLE_LABEL,
        )
        assert predict_arm(model, np.zeros(2)) == 1

    def test_tie_to_lowest_index(self):
        model = ClassifierModel(
            weights=np.zeros((3, 2)),
            biases=np.array([0.5, 0.5, 0.5]),
            mode=MULTI_LABEL,
        )
        assert predict_arm(model, np.ones(2)) == 0

    def test_config_validation(self):
        with pytest.raises(ConfigurationError):
            ClassifierTrainConfig(seed=0, batch_size=0)
        with pytest.raises(ConfigurationError):
            ClassifierTrainConfig(seed=0, lr=-1.0)
        with pytest.raises(ConfigurationError):
            ClassifierTrainConfig(seed=0, epochs=-1)

    def test_model_validation(self):
        with pytest.raises(ConfigurationError):
            ClassifierModel(
                weights=np.zeros((3, 2)), biases=np.zeros(2), mode=SINGLE_LABEL
            )
        with pytest.raises(ConfigurationError):
            ClassifierModel(weights=np.zeros((3, 2)), biases=np.zeros(3), mode="knn")


class TestClassifierRouter:
    def test_fit_predict(self):
        ds = generate(separable_spec(), seed=0, n=150)
        router = ClassifierRouter(featurizer=QueryFeaturizer(dim=128))
        router.fit(ds)
        picks = router.predict(ds.queries[:10])
        assert picks.shape == (10,)

    def test_unfitted_raises(self):
        with pytest.raises(NotFittedError):
            ClassifierRouter().predict([Query(id="q", text="t")])

    def test_get_params(self):
        router = ClassifierRouter(mode=MULTI_LABEL, seed=4, epochs=10)
        params = router.get_params()
        assert params["mode"] == MULTI_LABEL
        assert params["seed"] == 4
        assert params["epochs"] == 10
