"""Reward computation for a chosen arm and its outcome.

Two scheme families:

* FormulaReward: quality minus a scaled cost, r = A - lambda * C(a), with
  A = 1 for an exact-match answer and 0 otherwise, and C(a) either the
  outcome's step count or a per-arm constant.
* TabularReward: per-arm rules applied when the chosen arm answered
  correctly (a constant, or 1 - steps/divisor), and a flat failure penalty
  when it did not.

Both are pure value objects; compute_reward has no state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError
from .types import ArmOutcome

PRESET_NAMES = ("single-hop", "multi-hop", "formula-default")


@dataclass(frozen=True)
class StepFraction:
    """Rule value 1 - steps/divisor."""

    divisor: float

    def __post_init__(self):
        if not self.divisor > 0:
            raise ConfigurationError(f"divisor must be positive, got {self.divisor}")

    def value(self, steps: int) -> float:
        return 1.0 - steps / self.divisor


# A tabular rule is a constant reward or a step-scaled one.
ArmRule = float | StepFraction


@dataclass(frozen=True)
class TabularReward:
    rules: tuple[ArmRule, ...]
    failure_penalty: float = -1.0

    def __post_init__(self):
        for i, rule in enumerate(self.rules):
            if isinstance(rule, StepFraction):
                continue
            if not np.isfinite(rule):
                raise ConfigurationError(f"rule for arm {i} must be finite")
        if not np.isfinite(self.failure_penalty):
            raise ConfigurationError("failure_penalty must be finite")


@dataclass(frozen=True)
class FormulaReward:
    """r = A - lam * C(a); costs=None means C(a) = outcome steps."""

    lam: float
    costs: tuple[float, ...] | None = None

    def __post_init__(self):
        if not np.isfinite(self.lam) or self.lam < 0:
            raise ConfigurationError(f"lambda must be finite and >= 0, got {self.lam}")
        if self.costs is not None and not all(np.isfinite(c) for c in self.costs):
            raise ConfigurationError("per-arm costs must be finite")


RewardScheme = TabularReward | FormulaReward


def compute_reward(scheme: RewardScheme, arm_index: int, outcome: ArmOutcome) -> float:
    """Scalar reward for choosing ``arm_index`` and observing ``outcome``."""
    if isinstance(scheme, FormulaReward):
        quality = 1.0 if outcome.correct_em else 0.0
        if scheme.costs is None:
            cost = float(outcome.steps)
        else:
            if not 0 <= arm_index < len(scheme.costs):
                raise ConfigurationError(
                    f"arm index {arm_index} outside cost table of "
                    f"size {len(scheme.costs)}"
                )
            cost = scheme.costs[arm_index]
        return quality - scheme.lam * cost
    if isinstance(scheme, TabularReward):
        if not 0 <= arm_index < len(scheme.rules):
            raise ConfigurationError(
                f"arm index {arm_index} outside rule table of size {len(scheme.rules)}"
            )
        if not outcome.correct_em:
            return scheme.failure_penalty
        rule = scheme.rules[arm_index]
        if isinstance(rule, StepFraction):
            return rule.value(outcome.steps)
        return float(rule)
    raise ConfigurationError(f"unknown reward scheme {scheme!r}")


def preset(name: str) -> RewardScheme:
    """The two stock tabular settings plus the formula default.

    single-hop: 1 / 0.9 / 1 - steps/10, failure -1. Encodes a least-cost
    preference among correct strategies.
    multi-hop: flat 4.3 / 2.3 / 1.15, failure -1.
    formula-default: lambda 0.1 with step costs, so ten steps cancel one
    correct answer, matching the single-hop slope.
    """
    if name == "single-hop":
        return TabularReward(rules=(1.0, 0.9, StepFraction(10.0)), failure_penalty=-1.0)
    if name == "multi-hop":
        return TabularReward(rules=(4.3, 2.3, 1.15), failure_penalty=-1.0)
    if name == "formula-default":
        return FormulaReward(lam=0.1, costs=None)
    raise ConfigurationError(
        f"unknown reward preset {name!r}; expected one of {PRESET_NAMES}"
    )


def scheme_to_config(scheme: RewardScheme) -> dict:
    """JSON-ready description, used in run configs and checkpoints."""
    if isinstance(scheme, FormulaReward):
        return {
            "variant": "formula",
            "lambda": scheme.lam,
            "cost": "steps" if scheme.costs is None else list(scheme.costs),
        }
    rules = []
    for rule in scheme.rules:
        if isinstance(rule, StepFraction):
            rules.append({"step_fraction": rule.divisor})
        else:
            rules.append(rule)
    return {
        "variant": "tabular",
        "rules": rules,
        "failure_penalty": scheme.failure_penalty,
    }


def scheme_from_config(obj) -> RewardScheme:
    """Inverse of scheme_to_config; also accepts a bare preset name."""
    if isinstance(obj, str):
        return preset(obj)
    if not isinstance(obj, dict) or "variant" not in obj:
        raise ConfigurationError(
            "reward config must be a preset name or an object with a 'variant'"
        )
    variant = obj["variant"]
    if variant == "formula":
        cost = obj.get("cost", "steps")
        costs = None if cost == "steps" else tuple(float(c) for c in cost)
        return FormulaReward(lam=float(obj.get("lambda", 0.1)), costs=costs)
    if variant == "tabular":
        if "rules" not in obj:
            raise ConfigurationError("tabular reward config needs a 'rules' list")
        rules: list[ArmRule] = []
        for i, rule in enumerate(obj["rules"]):
            if isinstance(rule, dict):
                if "step_fraction" not in rule:
                    raise ConfigurationError(
                        f"reward.rules[{i}]: rule object needs 'step_fraction'"
                    )
                rules.append(StepFraction(float(rule["step_fraction"])))
            else:
                rules.append(float(rule))
        return TabularReward(
            rules=tuple(rules),
            failure_penalty=float(obj.get("failure_penalty", -1.0)),
        )
    raise ConfigurationError(f"unknown reward variant {variant!r}")


__all__ = [
    "ArmRule",
    "FormulaReward",
    "PRESET_NAMES",
    "RewardScheme",
    "StepFraction",
    "TabularReward",
    "compute_reward",
    "preset",
    "scheme_from_config",
    "scheme_to_config",
]
