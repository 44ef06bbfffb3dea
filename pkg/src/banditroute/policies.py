"""A uniform policy interface plus the greedy evaluation rollout.

Every comparable strategy (trained bandit, classifiers, fixed arms, the
oracle) is wrapped as a named object choosing an arm per query, so
evaluation and comparison code treat them identically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bandit import LinearPolicy
from .baselines import ClassifierModel, predict_arm
from .env import ReplayDataset, execute, oracle_best_arm
from .exceptions import ConfigurationError
from .featurize import QueryFeaturizer
from .metrics import EvalReport, aggregate
from .reward import RewardScheme, compute_reward
from .types import EpisodeRecord, Query


class GreedyBanditPolicy:
    """Trained bandit run greedily: always the argmax score."""

    def __init__(self, policy: LinearPolicy, name: str = "bandit"):
        self.policy = policy
        self.name = name

    def scores(self, query: Query, x: np.ndarray) -> np.ndarray:
        return self.policy.predict(x)

    def choose(self, query: Query, x: np.ndarray) -> int:
        return int(np.argmax(self.policy.predict(x)))


class ClassifierArmPolicy:
    """A trained classifier used as a router."""

    def __init__(self, model: ClassifierModel, name: str | None = None):
        self.model = model
        self.name = name if name is not None else model.mode

    def scores(self, query: Query, x: np.ndarray) -> np.ndarray:
        return self.model.logits(x)

    def choose(self, query: Query, x: np.ndarray) -> int:
        return predict_arm(self.model, x)


class FixedArmPolicy:
    """Always the same arm, regardless of the query."""

    def __init__(self, arm_index: int, arm_name: str):
        if arm_index < 0:
            raise ConfigurationError(f"arm index must be >= 0, got {arm_index}")
        self.arm_index = arm_index
        self.name = f"fixed-{arm_name}"

    def scores(self, query: Query, x: np.ndarray) -> None:
        return None

    def choose(self, query: Query, x: np.ndarray) -> int:
        return self.arm_index


class OracleArmPolicy:
    """Best arm by the stored outcomes; the upper bound for comparisons."""

    def __init__(self, dataset: ReplayDataset, scheme: RewardScheme):
        self.dataset = dataset
        self.scheme = scheme
        self.name = "oracle"

    def scores(self, query: Query, x: np.ndarray) -> None:
        return None

    def choose(self, query: Query, x: np.ndarray) -> int:
        return oracle_best_arm(self.dataset, query.id, self.scheme)


@dataclass(frozen=True)
class RolloutResult:
    policy_name: str
    records: tuple[EpisodeRecord, ...]
    report: EvalReport
    mean_reward: float


def rollout(
    policy,
    dataset: ReplayDataset,
    featurizer: QueryFeaturizer,
    scheme: RewardScheme,
) -> RolloutResult:
    """Deterministic pass over every dataset query in order.

    No exploration and no learning: the policy picks an arm, the stored
    outcome is looked up, and the reward is recomputed under the scheme.
    """
    if not dataset.queries:
        raise ConfigurationError("cannot evaluate on a dataset with no queries")
    records: list[EpisodeRecord] = []
    arm_count = len(dataset.arms)
    for query in dataset.queries:
        x = featurizer.vector(query)
        arm_index = policy.choose(query, x)
        if not 0 <= arm_index < arm_count:
            raise ConfigurationError(
                f"policy {policy.name!r} chose arm index {arm_index} "
                f"outside 0..{arm_count - 1}"
            )
        outcome = execute(dataset, query.id, arm_index)
        reward = compute_reward(scheme, arm_index, outcome)
        raw_scores = policy.scores(query, x)
        scores = (
            tuple(float(s) for s in raw_scores)
            if raw_scores is not None
            else tuple(0.0 for _ in range(arm_count))
        )
        records.append(
            EpisodeRecord(
                query_id=query.id,
                chosen_arm=dataset.arms[arm_index],
                reward=reward,
                outcome=outcome,
                scores_at_selection=scores,
                explored=False,
            )
        )
    report = aggregate(
        ((r, dataset.gold[r.query_id]) for r in records), dataset.arms
    )
    mean_reward = float(np.mean([r.reward for r in records]))
    return RolloutResult(
        policy_name=policy.name,
        records=tuple(records),
        report=report,
        mean_reward=mean_reward,
    )


__all__ = [
    "ClassifierArmPolicy",
    "FixedArmPolicy",
    "GreedyBanditPolicy",
    "OracleArmPolicy",
    "RolloutResult",
    "rollout",
]
