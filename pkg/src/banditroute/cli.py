"""Command-line surface: simulate, train, evaluate, compare.

All inputs come from one JSON config (plus an optional --seed override);
outputs are written under --out. Runs with the same config and seed
produce byte-identical files: nothing here reads the clock, the
filesystem order, or process identity.

Exit codes: 0 success, 2 configuration error, 3 data-format error,
4 numeric error. Diagnostics go to stderr at the level set by the
MBA_LOG_LEVEL environment variable (error, info, or debug).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .bandit import train
from .baselines import MULTI_LABEL, SINGLE_LABEL, train_classifier
from .config import (
    RunConfig,
    eval_dataset,
    load_run_config,
    make_classifier_config,
    make_train_config,
    train_dataset,
)
from .env import ReplayDataset, generate, oracle_best_arm, regret
from .exceptions import ConfigurationError, DataFormatError, NumericError
from .featurize import featurizer_from_config
from .policies import (
    ClassifierArmPolicy,
    FixedArmPolicy,
    GreedyBanditPolicy,
    OracleArmPolicy,
    RolloutResult,
    rollout,
)
from .reward import scheme_from_config
from .serialize import (
    checkpoint_featurizer,
    checkpoint_scheme,
    load_checkpoint,
    make_checkpoint,
    save_checkpoint,
    save_dataset,
    save_episode_log,
)

logger = logging.getLogger("banditroute.cli")

LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def _setup_logging() -> None:
    raw = os.environ.get("MBA_LOG_LEVEL", "info")
    if raw not in LOG_LEVELS:
        raise ConfigurationError(
            f"MBA_LOG_LEVEL must be one of {sorted(LOG_LEVELS)}, got {raw!r}"
        )
    logging.basicConfig(
        stream=sys.stderr,
        level=LOG_LEVELS[raw],
        format="%(levelname)s %(name)s: %(message)s",
    )


def _scheme_for(config: RunConfig, fallback_config: object = None):
    if config.reward_config is not None:
        return scheme_from_config(config.reward_config)
    if fallback_config is not None:
        return scheme_from_config(fallback_config)
    return scheme_from_config("single-hop")


def _report_lines(name: str, result: RolloutResult, extra: dict) -> list[str]:
    report = result.report
    lines = [
        f"policy: {name}",
        f"n: {report.n}",
        f"em: {report.em:.6f}",
        f"f1: {report.f1:.6f}",
        f"acc: {report.acc:.6f}",
        f"step: {report.step:.6f}",
        f"mean reward: {result.mean_reward:.6f}",
    ]
    lines.extend(f"{key}: {value:.6f}" for key, value in extra.items())
    lines.extend(
        f"arm {arm}: {freq:.6f}"
        for arm, freq in report.per_arm_selection_freq.items()
    )
    return lines


def _result_row(result: RolloutResult) -> dict:
    report = result.report
    return {
        "policy": result.policy_name,
        "n": report.n,
        "em": report.em,
        "f1": report.f1,
        "acc": report.acc,
        "step": report.step,
        "mean_reward": result.mean_reward,
        "per_arm_selection_freq": dict(report.per_arm_selection_freq),
    }


def _write_json(obj, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def cmd_simulate(config: RunConfig, out_dir: Path) -> int:
    env = config.environment
    if env.synthetic is None:
        raise ConfigurationError(
            "simulate needs a synthetic environment section, not a replay file"
        )
    dataset = generate(env.synthetic, config.env_seed, env.n)
    out_path = out_dir / "dataset.jsonl"
    save_dataset(dataset, str(out_path))
    logger.info("simulated %d queries into %s", len(dataset), out_path)
    print(
        f"dataset.jsonl: {len(dataset)} queries, "
        f"{len(dataset.outcomes)} outcomes"
    )
    return 0


def _optimal_rate(history, dataset: ReplayDataset, scheme, window: int = 500) -> float:
    tail = history[-window:]
    if not tail:
        return float("nan")
    hits = sum(
        record.chosen_arm.index == oracle_best_arm(dataset, record.query_id, scheme)
        for record in tail
    )
    return hits / len(tail)


def cmd_train(config: RunConfig, out_dir: Path) -> int:
    dataset = train_dataset(config)
    featurizer = featurizer_from_config(config.featurizer_config)
    scheme = _scheme_for(config)
    train_config = make_train_config(config)
    logger.info(
        "training %d episodes on %d queries", train_config.episodes, len(dataset)
    )
    policy, history = train(dataset, featurizer, scheme, train_config, dataset.arms)
    save_checkpoint(
        make_checkpoint(policy, dataset.arms, featurizer, scheme),
        str(out_dir / "checkpoint.json"),
    )
    save_episode_log(history, str(out_dir / "episodes.jsonl"))
    mean_reward = (
        float(np.mean([r.reward for r in history])) if history else float("nan")
    )
    print(f"episodes: {len(history)}")
    print(f"mean reward: {mean_reward:.6f}")
    print(
        f"final-500 optimal-arm rate: "
        f"{_optimal_rate(history, dataset, scheme):.6f}"
    )
    return 0


def _evaluation_policy(config: RunConfig, dataset: ReplayDataset, scheme):
    name = config.evaluate_policy
    if name == "checkpoint":
        if config.checkpoint_path is None:
            raise ConfigurationError(
                "evaluate needs a 'checkpoint' path in the config "
                "(or an 'evaluate.policy' that needs no checkpoint)"
            )
        checkpoint = load_checkpoint(config.checkpoint_path)
        if checkpoint.arms != dataset.arms:
            raise ConfigurationError(
                f"checkpoint arms {list(checkpoint.arms.names)} do not match "
                f"dataset arms {list(dataset.arms.names)}"
            )
        featurizer = checkpoint_featurizer(checkpoint)
        scheme = _scheme_for(config, checkpoint.reward_scheme_config)
        return GreedyBanditPolicy(checkpoint.policy), featurizer, scheme
    featurizer = featurizer_from_config(config.featurizer_config)
    if name == "oracle":
        return OracleArmPolicy(dataset, scheme), featurizer, scheme
    if name.startswith("fixed-"):
        arm = dataset.arms.by_name(name.removeprefix("fixed-"))
        return FixedArmPolicy(arm.index, arm.name), featurizer, scheme
    raise ConfigurationError(
        f"unknown evaluate.policy {name!r}; "
        "expected 'checkpoint', 'oracle', or 'fixed-<arm>'"
    )


def cmd_evaluate(config: RunConfig, out_dir: Path) -> int:
    dataset = eval_dataset(config)
    scheme = _scheme_for(config)
    policy, featurizer, scheme = _evaluation_policy(config, dataset, scheme)
    result = rollout(policy, dataset, featurizer, scheme)
    regret_total, per_episode = regret(result.records, dataset, scheme)
    regret_mean = regret_total / len(per_episode)
    row = _result_row(result)
    row["regret_total"] = regret_total
    row["regret_mean"] = regret_mean
    _write_json(row, out_dir / "eval.json")
    for line in _report_lines(
        result.policy_name,
        result,
        {"regret total": regret_total, "regret mean": regret_mean},
    ):
        print(line)
    return 0


def _build_policies(config: RunConfig, train_data: ReplayDataset,
                    eval_data: ReplayDataset, featurizer, scheme):
    policies = []
    for name in config.policies:
        if name == "bandit":
            model, _ = train(
                train_data, featurizer, scheme, make_train_config(config),
                train_data.arms,
            )
            policies.append(GreedyBanditPolicy(model))
        elif name in (SINGLE_LABEL, MULTI_LABEL):
            model = train_classifier(
                train_data, featurizer, name, make_classifier_config(config)
            )
            policies.append(ClassifierArmPolicy(model, name))
        elif name.startswith("fixed-"):
            arm = train_data.arms.by_name(name.removeprefix("fixed-"))
            policies.append(FixedArmPolicy(arm.index, arm.name))
        elif name == "oracle":
            policies.append(OracleArmPolicy(eval_data, scheme))
        else:
            raise ConfigurationError(f"unknown policy name {name!r}")
    return policies


def _table(rows: list[dict]) -> str:
    header = ["policy", "n", "em", "f1", "acc", "step", "reward"]
    lines = [
        "| " + " | ".join(header) + " |",
        "| " + " | ".join("---" for _ in header) + " |",
    ]
    for row in rows:
        lines.append(
            "| "
            + " | ".join(
                [
                    row["policy"],
                    str(row["n"]),
                    f"{row['em']:.4f}",
                    f"{row['f1']:.4f}",
                    f"{row['acc']:.4f}",
                    f"{row['step']:.4f}",
                    f"{row['mean_reward']:.4f}",
                ]
            )
            + " |"
        )
    return "\n".join(lines)


def cmd_compare(config: RunConfig, out_dir: Path) -> int:
    train_data = train_dataset(config)
    eval_data = eval_dataset(config)
    if train_data.arms != eval_data.arms:
        raise ConfigurationError("training and evaluation arm sets differ")
    featurizer = featurizer_from_config(config.featurizer_config)
    scheme = _scheme_for(config)
    logger.info(
        "comparing %d policies on %d evaluation queries",
        len(config.policies),
        len(eval_data),
    )
    rows = []
    for policy in _build_policies(config, train_data, eval_data, featurizer, scheme):
        result = rollout(policy, eval_data, featurizer, scheme)
        rows.append(_result_row(result))
        logger.debug("evaluated %s", result.policy_name)
    table = _table(rows)
    _write_json({"policies": rows}, out_dir / "compare.json")
    with open(out_dir / "compare.md", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(table + "\n")
    print(table)
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "compare": cmd_compare,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="banditroute",
        description="Train and compare query-routing policies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    help_text = {
        "simulate": "generate a synthetic replay dataset file",
        "train": "run the online training loop and write a checkpoint",
        "evaluate": "score one policy on the evaluation dataset",
        "compare": "score every configured policy side by side",
    }
    for name in COMMANDS:
        cmd = sub.add_parser(name, help=help_text[name])
        cmd.add_argument("--config", required=True, help="run config JSON file")
        cmd.add_argument(
            "--seed", type=int, default=None, help="override the config seed"
        )
        cmd.add_argument("--out", required=True, help="output directory")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _setup_logging()
        config = load_run_config(args.config, seed_override=args.seed)
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](config, out_dir)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
