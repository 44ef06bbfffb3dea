"""Core domain types.

Arm / ArmSet = the routing strategies a policy can pick from.
Query = one routable unit of work.
ArmOutcome = what a strategy produced for one query.
EpisodeRecord = the audit trail of one interaction.

Everything here is immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .exceptions import ConfigurationError

#: Canonical strategy names, cheapest first: answer directly, retrieve once,
#: retrieve iteratively.
DEFAULT_ARM_NAMES = ("zero", "one", "multiple")


@dataclass(frozen=True)
class Arm:
    """One selectable strategy, identified by dense index and unique name."""

    index: int
    name: str


class ArmSet:
    """Ordered, immutable collection of arms with dense indices 0..K-1."""

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ConfigurationError("an arm set needs at least one arm")
        if len(set(names)) != len(names):
            raise ConfigurationError(f"arm names must be unique, got {names}")
        self._arms = tuple(Arm(i, n) for i, n in enumerate(names))
        self._by_name = {a.name: a for a in self._arms}

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self._arms)

    def __len__(self) -> int:
        return len(self._arms)

    def __iter__(self):
        return iter(self._arms)

    def __getitem__(self, index: int) -> Arm:
        return self._arms[index]

    def by_name(self, name: str) -> Arm:
        try:
            return self._by_name[name]
        except KeyError:
            raise ConfigurationError(f"unknown arm name {name!r}") from None

    def __eq__(self, other) -> bool:
        return isinstance(other, ArmSet) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"ArmSet({list(self.names)!r})"


def default_arm_set() -> ArmSet:
    """The three-strategy set: zero@0, one@1, multiple@2."""
    return ArmSet(DEFAULT_ARM_NAMES)


@dataclass(frozen=True)
class Query:
    """A routable query.

    ``features`` optionally carries a precomputed vector; it is excluded from
    equality so queries compare by identity and content.
    """

    id: str
    text: str
    class_label: str | None = None
    features: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.id:
            raise ConfigurationError("query id must be non-empty")


@dataclass(frozen=True)
class ArmOutcome:
    """What one strategy produced for one query."""

    answer: str
    correct_em: bool
    steps: int

    def __post_init__(self):
        if self.steps < 0:
            raise ConfigurationError(f"steps must be non-negative, got {self.steps}")


@dataclass(frozen=True)
class EpisodeRecord:
    """One training or evaluation interaction.

    ``explored`` is True iff the epsilon branch fired at selection time.
    Scores are stored as a plain tuple so records round-trip exactly through
    the JSON episode log.
    """

    query_id: str
    chosen_arm: Arm
    reward: float
    outcome: ArmOutcome
    scores_at_selection: tuple[float, ...]
    explored: bool

    def __post_init__(self):
        if not np.isfinite(self.reward):
            raise ConfigurationError(f"reward must be finite, got {self.reward}")


def expected_steps_for_arm(name: str) -> tuple[int, int] | None:
    """Step-count bounds implied by a canonical arm name, None if unconstrained."""
    if name == "zero":
        return (0, 0)
    if name == "one":
        return (1, 1)
    if name == "multiple":
        return (1, np.iinfo(np.int64).max)
    return None


def check_outcome_steps(arm: Arm, outcome: ArmOutcome) -> None:
    """Enforce the per-arm step accounting for the canonical arm names."""
    bounds = expected_steps_for_arm(arm.name)
    if bounds is None:
        return
    lo, hi = bounds
    if not lo <= outcome.steps <= hi:
        raise ConfigurationError(
            f"arm {arm.name!r} cannot consume {outcome.steps} retrieval steps"
        )


__all__ = [
    "Arm",
    "ArmSet",
    "ArmOutcome",
    "DEFAULT_ARM_NAMES",
    "EpisodeRecord",
    "Query",
    "check_outcome_steps",
    "default_arm_set",
    "expected_steps_for_arm",
]
