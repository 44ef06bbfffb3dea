"""Run configuration: one JSON file describing the environment, the
featurizer, the reward scheme, training settings, and the policies to
compare.

A run has exactly one global seed (from the file or the command line,
never the clock). Subsystems derive their own seeds from it by fixed
offsets so changing one subsystem's draws cannot perturb another's.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .bandit import TrainConfig
from .baselines import ClassifierTrainConfig
from .env import (
    ArmBehavior,
    ClassSpec,
    ConstantSteps,
    ReplayDataset,
    SyntheticEnvSpec,
    UniformSteps,
    generate,
)
from .exceptions import ConfigurationError
from .serialize import load_dataset
from .types import default_arm_set
from .validation import check_seed

ENV_SEED_OFFSET = 101
TRAIN_SEED_OFFSET = 211
CLASSIFIER_SEED_OFFSET = 307
EVAL_ENV_SEED_OFFSET = 401

_SEED_MOD = 2**64

_TOP_KEYS = {
    "seed",
    "environment",
    "featurizer",
    "reward",
    "train",
    "classifier",
    "policies",
    "checkpoint",
    "evaluate",
}
_ENV_KEYS = {"synthetic", "n", "eval_n", "replay", "eval_replay"}
_TRAIN_KEYS = {
    "episodes",
    "alpha",
    "epsilon",
    "epsilon_schedule",
    "epsilon_end",
    "epsilon_horizon",
    "weight_init",
    "init_scale",
}
_CLASSIFIER_KEYS = {"batch_size", "lr", "epochs"}
_SPEC_KEYS = {"classes", "vocab_size", "step_cap", "overlap"}
_CLASS_KEYS = {"name", "weight", "arms"}
_BEHAVIOR_KEYS = {"p_correct", "steps"}
_EVALUATE_KEYS = {"policy"}


def _check_keys(obj: dict, allowed: set, where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigurationError(f"{where}: unknown keys {sorted(unknown)}")


def derive_seed(seed: int, offset: int) -> int:
    return (seed + offset) % _SEED_MOD


@dataclass(frozen=True)
class EnvironmentConfig:
    """Either a synthetic generator or replay file paths."""

    synthetic: SyntheticEnvSpec | None
    n: int
    eval_n: int
    replay_path: str | None
    eval_replay_path: str | None


@dataclass(frozen=True)
class RunConfig:
    seed: int
    environment: EnvironmentConfig
    featurizer_config: dict
    reward_config: object
    train_section: dict
    classifier_section: dict
    policies: tuple[str, ...]
    checkpoint_path: str | None
    evaluate_policy: str

    @property
    def env_seed(self) -> int:
        return derive_seed(self.seed, ENV_SEED_OFFSET)

    @property
    def train_seed(self) -> int:
        return derive_seed(self.seed, TRAIN_SEED_OFFSET)

    @property
    def classifier_seed(self) -> int:
        return derive_seed(self.seed, CLASSIFIER_SEED_OFFSET)

    @property
    def eval_env_seed(self) -> int:
        return derive_seed(self.seed, EVAL_ENV_SEED_OFFSET)


def _parse_step_law(obj, where: str):
    if isinstance(obj, bool):
        raise ConfigurationError(f"{where}: steps must be an int or [lo, hi]")
    if isinstance(obj, int):
        return ConstantSteps(obj)
    if (
        isinstance(obj, list)
        and len(obj) == 2
        and all(isinstance(v, int) and not isinstance(v, bool) for v in obj)
    ):
        return UniformSteps(obj[0], obj[1])
    raise ConfigurationError(f"{where}: steps must be an int or [lo, hi], got {obj!r}")


def parse_synthetic_spec(obj: dict) -> SyntheticEnvSpec:
    if not isinstance(obj, dict):
        raise ConfigurationError("environment.synthetic must be an object")
    _check_keys(obj, _SPEC_KEYS, "environment.synthetic")
    if "classes" not in obj:
        raise ConfigurationError("environment.synthetic needs a 'classes' list")
    arms = default_arm_set()
    classes = []
    for i, cls_obj in enumerate(obj["classes"]):
        where = f"environment.synthetic.classes[{i}]"
        if not isinstance(cls_obj, dict):
            raise ConfigurationError(f"{where} must be an object")
        _check_keys(cls_obj, _CLASS_KEYS, where)
        for key in ("name", "weight", "arms"):
            if key not in cls_obj:
                raise ConfigurationError(f"{where} needs {key!r}")
        behaviors = []
        for j, b_obj in enumerate(cls_obj["arms"]):
            b_where = f"{where}.arms[{j}]"
            if not isinstance(b_obj, dict):
                raise ConfigurationError(f"{b_where} must be an object")
            _check_keys(b_obj, _BEHAVIOR_KEYS, b_where)
            if "p_correct" not in b_obj or "steps" not in b_obj:
                raise ConfigurationError(f"{b_where} needs 'p_correct' and 'steps'")
            behaviors.append(
                ArmBehavior(
                    p_correct=float(b_obj["p_correct"]),
                    step_law=_parse_step_law(b_obj["steps"], b_where),
                )
            )
        classes.append(
            ClassSpec(
                name=str(cls_obj["name"]),
                weight=float(cls_obj["weight"]),
                behaviors=tuple(behaviors),
            )
        )
    return SyntheticEnvSpec(
        classes=tuple(classes),
        vocab_size=int(obj.get("vocab_size", 50)),
        step_cap=int(obj.get("step_cap", 8)),
        overlap=float(obj.get("overlap", 0.2)),
        arms=arms,
    )


def _parse_environment(obj, config_dir: Path) -> EnvironmentConfig:
    if not isinstance(obj, dict):
        raise ConfigurationError("'environment' must be an object")
    _check_keys(obj, _ENV_KEYS, "environment")
    has_synthetic = "synthetic" in obj
    has_replay = "replay" in obj
    if has_synthetic == has_replay:
        raise ConfigurationError(
            "environment needs exactly one of 'synthetic' or 'replay'"
        )
    if has_synthetic:
        spec = parse_synthetic_spec(obj["synthetic"])
        n = int(obj.get("n", 2000))
        eval_n = int(obj.get("eval_n", 500))
        if n < 1 or eval_n < 1:
            raise ConfigurationError("environment.n and eval_n must be >= 1")
        return EnvironmentConfig(
            synthetic=spec,
            n=n,
            eval_n=eval_n,
            replay_path=None,
            eval_replay_path=None,
        )
    replay_path = str(
        _resolve_existing(obj["replay"], config_dir, "environment.replay")
    )
    eval_replay = obj.get("eval_replay")
    eval_replay_path = (
        str(_resolve_existing(eval_replay, config_dir, "environment.eval_replay"))
        if eval_replay is not None
        else None
    )
    return EnvironmentConfig(
        synthetic=None,
        n=0,
        eval_n=0,
        replay_path=replay_path,
        eval_replay_path=eval_replay_path,
    )


def _resolve_existing(value, config_dir: Path, where: str) -> Path:
    if not isinstance(value, str) or not value:
        raise ConfigurationError(f"{where} must be a non-empty path string")
    path = Path(value)
    if not path.is_absolute():
        path = config_dir / path
    if not path.exists():
        raise ConfigurationError(f"{where}: file not found: {path}")
    return path


def load_run_config(path: str, seed_override: int | None = None) -> RunConfig:
    """Parse a run-config file; an explicit --seed wins over the file's."""
    config_path = Path(path)
    try:
        text = config_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ConfigurationError(f"{path}: config must be a JSON object")
    _check_keys(obj, _TOP_KEYS, path)

    if seed_override is not None:
        seed = seed_override
    elif "seed" in obj:
        if isinstance(obj["seed"], bool) or not isinstance(obj["seed"], int):
            raise ConfigurationError("'seed' must be an integer")
        seed = obj["seed"]
    else:
        raise ConfigurationError(
            "no seed: set 'seed' in the config or pass --seed"
        )
    check_seed(seed)

    if "environment" not in obj:
        raise ConfigurationError("config needs an 'environment' section")
    environment = _parse_environment(obj["environment"], config_path.parent)

    featurizer_config = obj.get(
        "featurizer", {"kind": "hash", "dim": 256, "ngram_max": 2, "normalize": True}
    )
    if not isinstance(featurizer_config, dict):
        raise ConfigurationError("'featurizer' must be an object")

    train_section = obj.get("train", {})
    if not isinstance(train_section, dict):
        raise ConfigurationError("'train' must be an object")
    _check_keys(train_section, _TRAIN_KEYS, "train")

    classifier_section = obj.get("classifier", {})
    if not isinstance(classifier_section, dict):
        raise ConfigurationError("'classifier' must be an object")
    _check_keys(classifier_section, _CLASSIFIER_KEYS, "classifier")

    policies = obj.get(
        "policies",
        [
            "bandit",
            "single-label",
            "multi-label",
            "fixed-zero",
            "fixed-one",
            "fixed-multiple",
            "oracle",
        ],
    )
    if not isinstance(policies, list) or not all(
        isinstance(p, str) for p in policies
    ):
        raise ConfigurationError("'policies' must be a list of strings")
    if not policies:
        raise ConfigurationError("'policies' must name at least one policy")

    checkpoint_path = obj.get("checkpoint")
    if checkpoint_path is not None:
        checkpoint_path = str(
            _resolve_existing(checkpoint_path, config_path.parent, "checkpoint")
        )

    evaluate_section = obj.get("evaluate", {})
    if not isinstance(evaluate_section, dict):
        raise ConfigurationError("'evaluate' must be an object")
    _check_keys(evaluate_section, _EVALUATE_KEYS, "evaluate")
    evaluate_policy = evaluate_section.get("policy", "checkpoint")
    if not isinstance(evaluate_policy, str):
        raise ConfigurationError("evaluate.policy must be a string")

    return RunConfig(
        seed=seed,
        environment=environment,
        featurizer_config=featurizer_config,
        reward_config=obj.get("reward"),
        train_section=train_section,
        classifier_section=classifier_section,
        policies=tuple(policies),
        checkpoint_path=checkpoint_path,
        evaluate_policy=evaluate_policy,
    )


def train_dataset(config: RunConfig) -> ReplayDataset:
    env = config.environment
    if env.synthetic is not None:
        return generate(env.synthetic, config.env_seed, env.n)
    return load_dataset(env.replay_path)


def eval_dataset(config: RunConfig) -> ReplayDataset:
    """Held-out data: a fresh synthetic draw under the eval seed, or the
    eval replay file (falling back to the training file)."""
    env = config.environment
    if env.synthetic is not None:
        return generate(env.synthetic, config.eval_env_seed, env.eval_n)
    return load_dataset(env.eval_replay_path or env.replay_path)


def make_train_config(config: RunConfig) -> TrainConfig:
    section = config.train_section
    return TrainConfig(
        episodes=int(section.get("episodes", 5000)),
        seed=config.train_seed,
        alpha=float(section.get("alpha", 5e-2)),
        epsilon=float(section.get("epsilon", 0.1)),
        epsilon_schedule=str(section.get("epsilon_schedule", "constant")),
        epsilon_end=(
            float(section["epsilon_end"]) if "epsilon_end" in section else None
        ),
        epsilon_horizon=(
            int(section["epsilon_horizon"]) if "epsilon_horizon" in section else None
        ),
        weight_init=str(section.get("weight_init", "zeros")),
        init_scale=float(section.get("init_scale", 0.01)),
    )


def make_classifier_config(config: RunConfig) -> ClassifierTrainConfig:
    section = config.classifier_section
    return ClassifierTrainConfig(
        seed=config.classifier_seed,
        batch_size=int(section.get("batch_size", 32)),
        lr=float(section.get("lr", 0.1)),
        epochs=int(section.get("epochs", 50)),
    )


__all__ = [
    "CLASSIFIER_SEED_OFFSET",
    "ENV_SEED_OFFSET",
    "EVAL_ENV_SEED_OFFSET",
    "EnvironmentConfig",
    "RunConfig",
    "TRAIN_SEED_OFFSET",
    "derive_seed",
    "eval_dataset",
    "load_run_config",
    "make_classifier_config",
    "make_train_config",
    "parse_synthetic_spec",
    "train_dataset",
]
