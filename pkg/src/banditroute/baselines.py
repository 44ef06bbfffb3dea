"""Comparison policies: label derivation from outcome tables and the
linear classifiers trained on those labels.

Single-label mode copies the least-cost heuristic: each query is labeled
with the cheapest arm that answered it correctly. Multi-label mode marks
every correct arm as a positive target and trains independent per-arm
logistic heads. Both are linear models fit with plain mini-batch SGD so
runs are deterministic under a seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .env import ReplayDataset, execute
from .exceptions import ConfigurationError, EmptyTrainingSetError
from .featurize import QueryFeaturizer
from .types import Query
from .validation import check_positive, check_seed

SINGLE_LABEL = "single-label"
MULTI_LABEL = "multi-label"


def derive_single_label(dataset: ReplayDataset, query_id: str) -> int:
    """Cheapest correct arm by stored steps, ties to the lowest index.

    When no arm is correct the query gets the most expensive arm (most
    stored steps, ties to the highest index): the query is genuinely
    hard, so it is labeled with the heaviest strategy rather than dropped.
    """
    outcomes = [
        (arm.index, execute(dataset, query_id, arm.index)) for arm in dataset.arms
    ]
    correct = [(o.steps, i) for i, o in outcomes if o.correct_em]
    if correct:
        return min(correct)[1]
    return max((o.steps, i) for i, o in outcomes)[1]


def derive_multi_labels(dataset: ReplayDataset, query_id: str) -> set[int]:
    """Indices of every arm whose stored outcome is correct; may be empty."""
    return {
        arm.index
        for arm in dataset.arms
        if execute(dataset, query_id, arm.index).correct_em
    }


@dataclass(frozen=True)
class ClassifierModel:
    """Linear classification head over query features."""

    weights: np.ndarray
    biases: np.ndarray
    mode: str

    def __post_init__(self):
        if self.mode not in (SINGLE_LABEL, MULTI_LABEL):
            raise ConfigurationError(f"unknown classifier mode {self.mode!r}")
        if self.weights.ndim != 2 or self.biases.ndim != 1:
            raise ConfigurationError("weights must be 2-D and biases 1-D")
        if self.weights.shape[0] != self.biases.shape[0]:
            raise ConfigurationError("weights and biases disagree on arm count")
        if not (
            np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.biases))
        ):
            raise ConfigurationError("classifier parameters must be finite")

    @property
    def arm_count(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.weights.shape[1]

    def logits(self, x: np.ndarray) -> np.ndarray:
        return self.weights @ np.asarray(x, dtype=np.float64) + self.biases


def predict_arm(model: ClassifierModel, x: np.ndarray) -> int:
    """Argmax over logits; the sigmoid is monotone, so multi-label
    probability argmax equals logit argmax. Ties break to the lowest index.
    """
    return int(np.argmax(model.logits(x)))


@dataclass(frozen=True)
class ClassifierTrainConfig:
    seed: int
    batch_size: int = 32
    lr: float = 0.1
    epochs: int = 50

    def __post_init__(self):
        check_seed(self.seed)
        if self.batch_size < 1:
            raise ConfigurationError(f"batch_size must be >= 1, got {self.batch_size}")
        check_positive(self.lr, "lr")
        if self.epochs < 0:
            raise ConfigurationError(f"epochs must be >= 0, got {self.epochs}")


def _softmax_rows(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _sgd(
    x: np.ndarray, y: np.ndarray, arm_count: int, config: ClassifierTrainConfig,
    multi: bool,
) -> tuple[np.ndarray, np.ndarray]:
    """Mini-batch SGD on softmax cross-entropy (y: class indices) or
    per-arm sigmoid cross-entropy (y: 0/1 matrix). Zero init; shuffled
    every epoch from the config seed.
    """
    n, dim = x.shape
    weights = np.zeros((arm_count, dim))
    biases = np.zeros(arm_count)
    rng = np.random.default_rng(config.seed)
    for _ in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            xb = x[batch]
            logits = xb @ weights.T + biases
            if multi:
                grad = _sigmoid(logits) - y[batch]
            else:
                target = np.zeros_like(logits)
                target[np.arange(len(batch)), y[batch]] = 1.0
                grad = _softmax_rows(logits) - target
            grad /= len(batch)
            weights -= config.lr * (grad.T @ xb)
            biases -= config.lr * grad.sum(axis=0)
    return weights, biases


def train_classifier(
    dataset: ReplayDataset,
    featurizer: QueryFeaturizer,
    mode: str,
    config: ClassifierTrainConfig,
) -> ClassifierModel:
    """Fit a classifier on labels derived from the outcome table.

    Multi-label training drops queries with no correct arm (an empty
    target teaches nothing); single-label keeps every query.
    """
    if mode not in (SINGLE_LABEL, MULTI_LABEL):
        raise ConfigurationError(f"unknown classifier mode {mode!r}")
    arm_count = len(dataset.arms)
    rows: list[np.ndarray] = []
    targets: list = []
    for query in dataset.queries:
        if mode == SINGLE_LABEL:
            label = derive_single_label(dataset, query.id)
        else:
            labels = derive_multi_labels(dataset, query.id)
            if not labels:
                continue
            label = np.zeros(arm_count)
            label[sorted(labels)] = 1.0
        rows.append(featurizer.vector(query))
        targets.append(label)
    if not rows:
        raise EmptyTrainingSetError(
            "no trainable queries left after label derivation"
        )
    x = np.stack(rows)
    if mode == SINGLE_LABEL:
        y = np.asarray(targets, dtype=np.int64)
    else:
        y = np.stack(targets)
    weights, biases = _sgd(x, y, arm_count, config, multi=(mode == MULTI_LABEL))
    return ClassifierModel(weights=weights, biases=biases, mode=mode)


class ClassifierRouter(BaseEstimator):
    """sklearn-style wrapper around train_classifier / predict_arm."""

    def __init__(
        self,
        mode: str = SINGLE_LABEL,
        seed: int = 0,
        batch_size: int = 32,
        lr: float = 0.1,
        epochs: int = 50,
        featurizer: QueryFeaturizer | None = None,
    ):
        self.mode = mode
        self.seed = seed
        self.batch_size = batch_size
        self.lr = lr
        self.epochs = epochs
        self.featurizer = featurizer

    def fit(self, dataset: ReplayDataset, y=None):
        config = ClassifierTrainConfig(
            seed=self.seed,
            batch_size=self.batch_size,
            lr=self.lr,
            epochs=self.epochs,
        )
        self.featurizer_ = self.featurizer or QueryFeaturizer()
        self.arms_ = dataset.arms
        self.model_ = train_classifier(dataset, self.featurizer_, self.mode, config)
        return self

    def _check_fitted(self):
        if not hasattr(self, "model_"):
            raise NotFittedError("ClassifierRouter must be fitted before prediction")

    def decision_function(self, queries: list[Query]) -> np.ndarray:
        self._check_fitted()
        return np.stack(
            [self.model_.logits(self.featurizer_.vector(q)) for q in queries]
        )

    def predict(self, queries: list[Query]) -> np.ndarray:
        return np.argmax(self.decision_function(queries), axis=1)


__all__ = [
    "ClassifierModel",
    "ClassifierRouter",
    "ClassifierTrainConfig",
    "MULTI_LABEL",
    "SINGLE_LABEL",
    "derive_multi_labels",
    "derive_single_label",
    "predict_arm",
    "train_classifier",
]
