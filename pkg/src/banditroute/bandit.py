"""The routing policy: per-arm linear reward prediction, epsilon-greedy
selection, and the partial-feedback squared-error update.

Each arm has its own weight row and bias predicting the reward of playing
that arm for a query vector. Training regresses the chosen arm's score onto
the observed reward; unchosen arms are never touched. Selection exploits
the argmax score with probability 1 - epsilon and otherwise draws an arm
uniformly at random over all arms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .exceptions import ConfigurationError, NumericError
from .featurize import QueryFeaturizer
from .reward import RewardScheme, compute_reward, scheme_from_config
from .types import ArmSet, EpisodeRecord, Query, default_arm_set
from .validation import (
    check_feature_vector,
    check_positive,
    check_probability,
    check_rng,
    check_scores,
    check_seed,
)


class LinearPolicy:
    """Per-arm linear reward predictor: scores = W x + b."""

    def __init__(self, weights: np.ndarray, biases: np.ndarray):
        weights = np.asarray(weights, dtype=np.float64)
        biases = np.asarray(biases, dtype=np.float64)
        if weights.ndim != 2 or biases.ndim != 1:
            raise ConfigurationError("weights must be 2-D and biases 1-D")
        if weights.shape[0] != biases.shape[0]:
            raise ConfigurationError(
                f"weights rows {weights.shape[0]} != biases length {biases.shape[0]}"
            )
        if weights.shape[0] < 1:
            raise ConfigurationError("policy needs at least one arm")
        if not (np.all(np.isfinite(weights)) and np.all(np.isfinite(biases))):
            raise ConfigurationError("policy parameters must be finite")
        self.weights = weights
        self.biases = biases

    @property
    def arm_count(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.weights.shape[1]

    @classmethod
    def zeros(cls, dim: int, arm_count: int) -> "LinearPolicy":
        return cls(np.zeros((arm_count, dim)), np.zeros(arm_count))

    @classmethod
    def uniform(
        cls, dim: int, arm_count: int, scale: float, rng: np.random.Generator
    ) -> "LinearPolicy":
        return cls(
            rng.uniform(-scale, scale, size=(arm_count, dim)),
            rng.uniform(-scale, scale, size=arm_count),
        )

    def copy(self) -> "LinearPolicy":
        return LinearPolicy(self.weights.copy(), self.biases.copy())

    def predict(self, x: np.ndarray) -> np.ndarray:
        x = check_feature_vector(x, self.dim)
        return self.weights @ x + self.biases

    def update(self, x: np.ndarray, arm_index: int, reward: float, alpha: float) -> None:
        """One gradient step of (reward - score[arm])^2 on the chosen arm only.

        With residual e = reward - score[arm], this adds 2*alpha*e*x to the
        arm's weights and 2*alpha*e to its bias; every other arm's
        parameters stay bit-identical.
        """
        if not 0 <= arm_index < self.arm_count:
            raise ConfigurationError(f"arm index {arm_index} out of range")
        if not np.isfinite(reward):
            raise NumericError(f"reward is not finite: {reward}")
        check_positive(alpha, "alpha")
        x = check_feature_vector(x, self.dim)
        residual = reward - (self.weights[arm_index] @ x + self.biases[arm_index])
        step = 2.0 * alpha * residual
        if not np.isfinite(step):
            raise NumericError("update produced a non-finite step; aborting")
        new_row = self.weights[arm_index] + step * x
        new_bias = self.biases[arm_index] + step
        if not (np.all(np.isfinite(new_row)) and np.isfinite(new_bias)):
            raise NumericError("update produced non-finite parameters; aborting")
        self.weights[arm_index] = new_row
        self.biases[arm_index] = new_bias


def predict_scores(policy: LinearPolicy, x: np.ndarray) -> np.ndarray:
    """Raw predicted rewards per arm; no softmax."""
    return policy.predict(x)


def select_arm(
    scores: np.ndarray, epsilon: float, rng: np.random.Generator | int
) -> tuple[int, bool]:
    """Epsilon-greedy: argmax with probability 1 - epsilon, otherwise a
    uniformly random arm over all arms. Ties break to the lowest index.

    Returns (arm index, explored), explored True iff the random branch fired.
    """
    scores = check_scores(scores)
    check_probability(epsilon, "epsilon")
    rng = check_rng(rng)
    if rng.random() < epsilon:
        return int(rng.integers(scores.shape[0])), True
    return int(np.argmax(scores)), False


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for the online training loop.

    epsilon_schedule is "constant" or "linear-decay"; the latter moves
    epsilon from its start value to epsilon_end over epsilon_horizon
    episodes and holds it there.
    """

    episodes: int
    seed: int
    alpha: float = 5e-2
    epsilon: float = 0.1
    epsilon_schedule: str = "constant"
    epsilon_end: float | None = None
    epsilon_horizon: int | None = None
    weight_init: str = "zeros"
    init_scale: float = 0.01

    def __post_init__(self):
        if self.episodes < 0:
            raise ConfigurationError(f"episodes must be >= 0, got {self.episodes}")
        check_seed(self.seed)
        check_positive(self.alpha, "alpha")
        check_probability(self.epsilon, "epsilon")
        if self.epsilon_schedule not in ("constant", "linear-decay"):
            raise ConfigurationError(
                f"unknown epsilon schedule {self.epsilon_schedule!r}"
            )
        if self.epsilon_schedule == "linear-decay":
            if self.epsilon_end is None or self.epsilon_horizon is None:
                raise ConfigurationError(
                    "linear-decay needs epsilon_end and epsilon_horizon"
                )
            check_probability(self.epsilon_end, "epsilon_end")
            if self.epsilon_horizon < 1:
                raise ConfigurationError("epsilon_horizon must be >= 1")
        if self.weight_init not in ("zeros", "uniform"):
            raise ConfigurationError(f"unknown weight init {self.weight_init!r}")
        if self.weight_init == "uniform":
            check_positive(self.init_scale, "init_scale")

    def epsilon_at(self, episode: int) -> float:
        if self.epsilon_schedule == "constant":
            return self.epsilon
        frac = min(episode, self.epsilon_horizon) / self.epsilon_horizon
        return self.epsilon + (self.epsilon_end - self.epsilon) * frac


def init_policy(
    dim: int, arm_count: int, config: TrainConfig, rng: np.random.Generator
) -> LinearPolicy:
    if config.weight_init == "uniform":
        return LinearPolicy.uniform(dim, arm_count, config.init_scale, rng)
    return LinearPolicy.zeros(dim, arm_count)


def train(
    dataset,
    featurizer: QueryFeaturizer,
    scheme: RewardScheme,
    config: TrainConfig,
    arms: ArmSet | None = None,
) -> tuple[LinearPolicy, list[EpisodeRecord]]:
    """Run the online loop against a replay dataset.

    Per episode: sample a query uniformly, featurize, score, select an arm
    (scheduled epsilon), look up the arm's stored outcome, compute the
    reward, update the chosen arm. Strictly sequential; identical dataset
    and config seeds reproduce the history bit for bit.
    """
    from .env import execute  # local import; env builds on this module's records

    arms = arms if arms is not None else getattr(dataset, "arms", default_arm_set())
    if not dataset.queries:
        raise ConfigurationError("cannot train on a dataset with no queries")
    rng = np.random.default_rng(config.seed)
    policy = init_policy(featurizer.dim, len(arms), config, rng)
    history: list[EpisodeRecord] = []
    n = len(dataset.queries)
    for t in range(config.episodes):
        query = dataset.queries[int(rng.integers(n))]
        x = featurizer.vector(query)
        scores = policy.predict(x)
        arm_index, explored = select_arm(scores, config.epsilon_at(t), rng)
        outcome = execute(dataset, query.id, arm_index)
        reward = compute_reward(scheme, arm_index, outcome)
        policy.update(x, arm_index, reward, config.alpha)
        history.append(
            EpisodeRecord(
                query_id=query.id,
                chosen_arm=arms[arm_index],
                reward=reward,
                outcome=outcome,
                scores_at_selection=tuple(float(s) for s in scores),
                explored=explored,
            )
        )
    return policy, history


class BanditRouter(BaseEstimator):
    """sklearn-style wrapper: fit on a replay dataset, predict arm indices.

    Parameters mirror TrainConfig plus the reward scheme (a preset name, a
    config dict, or a scheme object) and an optional QueryFeaturizer.
    """

    def __init__(
        self,
        episodes: int = 5000,
        seed: int = 0,
        alpha: float = 5e-2,
        epsilon: float = 0.1,
        epsilon_schedule: str = "constant",
        epsilon_end: float | None = None,
        epsilon_horizon: int | None = None,
        weight_init: str = "zeros",
        init_scale: float = 0.01,
        reward_scheme="single-hop",
        featurizer: QueryFeaturizer | None = None,
    ):
        self.episodes = episodes
        self.seed = seed
        self.alpha = alpha
        self.epsilon = epsilon
        self.epsilon_schedule = epsilon_schedule
        self.epsilon_end = epsilon_end
        self.epsilon_horizon = epsilon_horizon
        self.weight_init = weight_init
        self.init_scale = init_scale
        self.reward_scheme = reward_scheme
        self.featurizer = featurizer

    def _scheme(self) -> RewardScheme:
        if isinstance(self.reward_scheme, (str, dict)):
            return scheme_from_config(self.reward_scheme)
        return self.reward_scheme

    def fit(self, dataset, y=None):
        config = TrainConfig(
            episodes=self.episodes,
            seed=self.seed,
            alpha=self.alpha,
            epsilon=self.epsilon,
            epsilon_schedule=self.epsilon_schedule,
            epsilon_end=self.epsilon_end,
            epsilon_horizon=self.epsilon_horizon,
            weight_init=self.weight_init,
            init_scale=self.init_scale,
        )
        self.featurizer_ = self.featurizer or QueryFeaturizer()
        self.arms_ = dataset.arms
        self.policy_, self.history_ = train(
            dataset, self.featurizer_, self._scheme(), config, self.arms_
        )
        return self

    def _check_fitted(self):
        if not hasattr(self, "policy_"):
            raise NotFittedError("BanditRouter must be fitted before prediction")

    def decision_function(self, queries: list[Query]) -> np.ndarray:
        self._check_fitted()
        return np.stack(
            [self.policy_.predict(self.featurizer_.vector(q)) for q in queries]
        )

    def predict(self, queries: list[Query]) -> np.ndarray:
        """Greedy (epsilon = 0) arm index per query."""
        return np.argmax(self.decision_function(queries), axis=1)


__all__ = [
    "BanditRouter",
    "LinearPolicy",
    "TrainConfig",
    "init_policy",
    "predict_scores",
    "select_arm",
    "train",
]
