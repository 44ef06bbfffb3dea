"""Environments the router learns against.

Two worlds share one interface: a synthetic generator that fabricates
queries from a class mixture with known per-arm success rates, and a
replay dataset holding a complete (query, arm) outcome table. The
complete table is what makes the brute-force oracle, regret accounting,
and the strict failure mode possible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigurationError, MissingEntryError
from .reward import RewardScheme, TabularReward, compute_reward
from .types import (
    ArmOutcome,
    ArmSet,
    Query,
    check_outcome_steps,
    default_arm_set,
    expected_steps_for_arm,
)
from .validation import check_probability, check_seed

TOKENS_PER_QUERY = 8


@dataclass(frozen=True)
class ConstantSteps:
    """Step law that always yields k."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ConfigurationError(f"steps must be >= 0, got {self.k}")

    def bounds(self) -> tuple[int, int]:
        return self.k, self.k

    def sample(self, rng: np.random.Generator) -> int:
        return self.k


@dataclass(frozen=True)
class UniformSteps:
    """Step law uniform over the integers lo..hi inclusive."""

    lo: int
    hi: int

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi:
            raise ConfigurationError(
                f"need 0 <= lo <= hi, got lo={self.lo} hi={self.hi}"
            )

    def bounds(self) -> tuple[int, int]:
        return self.lo, self.hi

    def sample(self, rng: np.random.Generator) -> int:
        return int(rng.integers(self.lo, self.hi + 1))


StepLaw = ConstantSteps | UniformSteps


@dataclass(frozen=True)
class ArmBehavior:
    """How one arm behaves for queries of one class."""

    p_correct: float
    step_law: StepLaw

    def __post_init__(self):
        check_probability(self.p_correct, "p_correct")


@dataclass(frozen=True)
class ClassSpec:
    name: str
    weight: float
    behaviors: tuple[ArmBehavior, ...]

    def __post_init__(self):
        if not self.name or not self.name.isidentifier():
            raise ConfigurationError(
                f"class name must be a bare identifier, got {self.name!r}"
            )
        if not self.weight > 0:
            raise ConfigurationError(f"mixture weight must be > 0, got {self.weight}")
        object.__setattr__(self, "behaviors", tuple(self.behaviors))


@dataclass(frozen=True)
class SyntheticEnvSpec:
    """A mixture of query classes with per-arm success and step laws."""

    classes: tuple[ClassSpec, ...]
    vocab_size: int = 50
    step_cap: int = 8
    overlap: float = 0.2
    arms: ArmSet = field(default_factory=default_arm_set)

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        if not self.classes:
            raise ConfigurationError("need at least one query class")
        names = [c.name for c in self.classes]
        if len(set(names)) != len(names):
            raise ConfigurationError(f"duplicate class names in {names}")
        total = sum(c.weight for c in self.classes)
        if abs(total - 1.0) > 1e-9:
            raise ConfigurationError(f"mixture weights sum to {total}, expected 1")
        if self.vocab_size < 1:
            raise ConfigurationError(f"vocab_size must be >= 1, got {self.vocab_size}")
        if self.step_cap < 1:
            raise ConfigurationError(f"step_cap must be >= 1, got {self.step_cap}")
        check_probability(self.overlap, "overlap")
        for cls in self.classes:
            if len(cls.behaviors) != len(self.arms):
                raise ConfigurationError(
                    f"class {cls.name!r} has {len(cls.behaviors)} behaviors "
                    f"for {len(self.arms)} arms"
                )
            for arm, behavior in zip(self.arms, cls.behaviors):
                lo, hi = behavior.step_law.bounds()
                bounds = expected_steps_for_arm(arm.name)
                want_lo, want_hi = bounds if bounds is not None else (0, self.step_cap)
                want_hi = min(want_hi, self.step_cap)
                if lo < want_lo or hi > want_hi:
                    raise ConfigurationError(
                        f"class {cls.name!r} arm {arm.name!r}: step law range "
                        f"[{lo}, {hi}] outside allowed [{want_lo}, {want_hi}]"
                    )


@dataclass(frozen=True)
class ReplayDataset:
    """Queries plus a complete per-arm outcome table and gold answers."""

    queries: tuple[Query, ...]
    arms: ArmSet
    outcomes: dict[tuple[str, int], ArmOutcome]
    gold: dict[str, str]

    def __post_init__(self):
        object.__setattr__(self, "queries", tuple(self.queries))
        ids = [q.id for q in self.queries]
        if len(set(ids)) != len(ids):
            raise ConfigurationError("duplicate query ids in dataset")
        known = set(ids)
        for qid, arm_index in self.outcomes:
            if qid not in known:
                raise ConfigurationError(f"outcome for unknown query {qid!r}")
            if not 0 <= arm_index < len(self.arms):
                raise ConfigurationError(
                    f"outcome for query {qid!r} names arm index {arm_index}, "
                    f"but there are {len(self.arms)} arms"
                )
        for qid in ids:
            if qid not in self.gold:
                raise ConfigurationError(f"query {qid!r} has no gold answer")
            for arm in self.arms:
                key = (qid, arm.index)
                if key not in self.outcomes:
                    raise ConfigurationError(
                        f"incomplete outcome table: query {qid!r} "
                        f"missing arm {arm.name!r}"
                    )
                check_outcome_steps(arm, self.outcomes[key])

    def __len__(self) -> int:
        return len(self.queries)

    def query_by_id(self, query_id: str) -> Query:
        for q in self.queries:
            if q.id == query_id:
                return q
        raise MissingEntryError(f"no query with id {query_id!r}")


def _query_text(spec: SyntheticEnvSpec, cls: ClassSpec, rng: np.random.Generator) -> str:
    tokens = []
    for _ in range(TOKENS_PER_QUERY):
        j = int(rng.integers(spec.vocab_size))
        if rng.random() < spec.overlap:
            tokens.append(f"commonw{j}")
        else:
            tokens.append(f"{cls.name}w{j}")
    return " ".join(tokens)


def generate(spec: SyntheticEnvSpec, seed: int, n: int) -> ReplayDataset:
    """Fabricate a replay dataset of n queries from the class mixture.

    Every random draw for query index i comes from a generator keyed on
    (seed, i), so a given (spec, seed, n) always produces the identical
    dataset and extending n leaves earlier queries untouched.
    """
    check_seed(seed)
    if n < 1:
        raise ConfigurationError(f"n must be >= 1, got {n}")
    weights = np.array([c.weight for c in spec.classes])
    queries: list[Query] = []
    outcomes: dict[tuple[str, int], ArmOutcome] = {}
    gold: dict[str, str] = {}
    for i in range(n):
        rng = np.random.default_rng([seed, i])
        cls = spec.classes[int(rng.choice(len(spec.classes), p=weights))]
        qid = f"q{i:06d}"
        answer = f"ans{i:06d}"
        queries.append(
            Query(id=qid, text=_query_text(spec, cls, rng), class_label=cls.name)
        )
        gold[qid] = answer
        for arm, behavior in zip(spec.arms, cls.behaviors):
            correct = bool(rng.random() < behavior.p_correct)
            steps = behavior.step_law.sample(rng)
            outcomes[(qid, arm.index)] = ArmOutcome(
                answer=answer if correct else f"miss{i:06d}",
                correct_em=correct,
                steps=steps,
            )
    return ReplayDataset(
        queries=tuple(queries), arms=spec.arms, outcomes=outcomes, gold=gold
    )


def execute(dataset: ReplayDataset, query_id: str, arm_index: int) -> ArmOutcome:
    """Look up the stored outcome for (query, arm). Pure; never mutates."""
    try:
        return dataset.outcomes[(query_id, arm_index)]
    except KeyError:
        raise MissingEntryError(
            f"no stored outcome for query {query_id!r}, arm index {arm_index}"
        ) from None


def oracle_best_arm(
    dataset: ReplayDataset, query_id: str, scheme: RewardScheme
) -> int:
    """Best arm by stored outcomes under the scheme; ties take the lowest index."""
    best_index = 0
    best_reward = -np.inf
    for arm in dataset.arms:
        reward = compute_reward(scheme, arm.index, execute(dataset, query_id, arm.index))
        if reward > best_reward:
            best_index, best_reward = arm.index, reward
    return best_index


def regret(
    history, dataset: ReplayDataset, scheme: RewardScheme
) -> tuple[float, list[float]]:
    """Oracle reward minus chosen-arm reward per episode, and the total.

    Both sides are recomputed from the stored outcomes, so entries are
    never negative regardless of what reward the history recorded.
    """
    per_episode: list[float] = []
    for record in history:
        oracle_index = oracle_best_arm(dataset, record.query_id, scheme)
        oracle_reward = compute_reward(
            scheme, oracle_index, execute(dataset, record.query_id, oracle_index)
        )
        chosen_index = record.chosen_arm.index
        chosen_reward = compute_reward(
            scheme, chosen_index, execute(dataset, record.query_id, chosen_index)
        )
        per_episode.append(oracle_reward - chosen_reward)
    return float(sum(per_episode)), per_episode


def strict_failure_reward(
    dataset: ReplayDataset,
    query_id: str,
    arm_index: int,
    scheme: TabularReward,
) -> float:
    """Tabular reward under the literal all-arms failure reading.

    A correct chosen arm earns its table value. The failure penalty
    applies only when every arm's stored outcome is incorrect; a wrong
    choice that some other arm would have answered earns 0.
    """
    if not isinstance(scheme, TabularReward):
        raise ConfigurationError("strict failure mode is defined for tabular schemes")
    outcome = execute(dataset, query_id, arm_index)
    if outcome.correct_em:
        return compute_reward(scheme, arm_index, outcome)
    if any(
        execute(dataset, query_id, arm.index).correct_em for arm in dataset.arms
    ):
        return 0.0
    return scheme.failure_penalty


__all__ = [
    "ArmBehavior",
    "ClassSpec",
    "ConstantSteps",
    "ReplayDataset",
    "StepLaw",
    "SyntheticEnvSpec",
    "TOKENS_PER_QUERY",
    "UniformSteps",
    "execute",
    "generate",
    "oracle_best_arm",
    "regret",
    "strict_failure_reward",
]
