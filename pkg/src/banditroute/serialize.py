"""Persistence formats: dataset files, episode logs, and checkpoints.

Everything is line-oriented UTF-8 text with LF newlines so artifacts can
be diffed and parsed from any language. Writers are deterministic: the
same in-memory objects always produce byte-identical files. Checkpoint
floats are printed in scientific notation with 18 significant digits,
which round-trips IEEE doubles exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .bandit import LinearPolicy
from .env import ReplayDataset
from .exceptions import DataFormatError
from .featurize import QueryFeaturizer, featurizer_from_config
from .reward import RewardScheme, scheme_from_config, scheme_to_config
from .types import ArmOutcome, ArmSet, EpisodeRecord, Query, default_arm_set


def _format_float(value: float) -> str:
    return format(float(value), ".17e")


def _fail(path: str, line_number: int, message: str) -> DataFormatError:
    return DataFormatError(f"{path}:{line_number}: {message}")


def _record_field(record: dict, key: str, kind: type, path: str, line_number: int):
    if key not in record:
        raise _fail(path, line_number, f"missing field {key!r}")
    value = record[key]
    # bool subclasses int in Python, so keep the two JSON types distinct
    if kind is bool:
        ok = isinstance(value, bool)
    elif kind is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    else:
        ok = isinstance(value, kind)
    if not ok:
        raise _fail(path, line_number, f"field {key!r} has wrong type: {value!r}")
    return value


def save_dataset(dataset: ReplayDataset, path: str) -> None:
    """One query record then its outcome rows, per query, in dataset order."""
    lines = []
    for query in dataset.queries:
        lines.append(
            json.dumps(
                {
                    "kind": "query",
                    "id": query.id,
                    "text": query.text,
                    "class": query.class_label or "",
                    "gold": dataset.gold[query.id],
                },
                ensure_ascii=False,
            )
        )
        for arm in dataset.arms:
            outcome = dataset.outcomes[(query.id, arm.index)]
            lines.append(
                json.dumps(
                    {
                        "kind": "outcome",
                        "id": query.id,
                        "arm": arm.name,
                        "answer": outcome.answer,
                        "correct": outcome.correct_em,
                        "steps": outcome.steps,
                    },
                    ensure_ascii=False,
                )
            )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_dataset(path: str, arms: ArmSet | None = None) -> ReplayDataset:
    """Parse a dataset file back into a ReplayDataset.

    Arm names in outcome rows are resolved against ``arms`` (default
    three-strategy set); table completeness is enforced on construction.
    """
    arms = arms if arms is not None else default_arm_set()
    by_name = {arm.name: arm for arm in arms}
    queries: list[Query] = []
    outcomes: dict[tuple[str, int], ArmOutcome] = {}
    gold: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            raw_lines = fh.read().splitlines()
    except OSError as exc:
        raise DataFormatError(f"cannot read dataset file {path}: {exc}") from exc
    for line_number, line in enumerate(raw_lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise _fail(path, line_number, f"invalid JSON: {exc}") from exc
        if not isinstance(record, dict):
            raise _fail(path, line_number, "record must be a JSON object")
        kind = record.get("kind")
        if kind == "query":
            qid = _record_field(record, "id", str, path, line_number)
            text = _record_field(record, "text", str, path, line_number)
            gold_answer = _record_field(record, "gold", str, path, line_number)
            class_label = record.get("class", "")
            if not isinstance(class_label, str):
                raise _fail(path, line_number, "field 'class' must be a string")
            if qid in gold:
                raise _fail(path, line_number, f"duplicate query id {qid!r}")
            queries.append(
                Query(id=qid, text=text, class_label=class_label or None)
            )
            gold[qid] = gold_answer
        elif kind == "outcome":
            qid = _record_field(record, "id", str, path, line_number)
            arm_name = _record_field(record, "arm", str, path, line_number)
            answer = _record_field(record, "answer", str, path, line_number)
            correct = _record_field(record, "correct", bool, path, line_number)
            steps = _record_field(record, "steps", int, path, line_number)
            if arm_name not in by_name:
                raise _fail(path, line_number, f"unknown arm name {arm_name!r}")
            key = (qid, by_name[arm_name].index)
            if key in outcomes:
                raise _fail(
                    path, line_number, f"duplicate outcome for {qid!r}/{arm_name!r}"
                )
            if steps < 0:
                raise _fail(path, line_number, f"steps must be >= 0, got {steps}")
            outcomes[key] = ArmOutcome(answer=answer, correct_em=correct, steps=steps)
        else:
            raise _fail(path, line_number, f"unknown record kind {kind!r}")
    try:
        return ReplayDataset(
            queries=tuple(queries), arms=arms, outcomes=outcomes, gold=gold
        )
    except Exception as exc:
        raise DataFormatError(f"{path}: {exc}") from exc


def episode_to_json(record: EpisodeRecord) -> str:
    return json.dumps(
        {
            "query_id": record.query_id,
            "chosen_arm": record.chosen_arm.name,
            "reward": record.reward,
            "outcome": {
                "answer": record.outcome.answer,
                "correct_em": record.outcome.correct_em,
                "steps": record.outcome.steps,
            },
            "scores_at_selection": list(record.scores_at_selection),
            "explored": record.explored,
        },
        ensure_ascii=False,
    )


def save_episode_log(records, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(episode_to_json(record) + "\n")


def load_episode_log(path: str, arms: ArmSet | None = None) -> list[EpisodeRecord]:
    arms = arms if arms is not None else default_arm_set()
    by_name = {arm.name: arm for arm in arms}
    records: list[EpisodeRecord] = []
    try:
        with open(path, encoding="utf-8") as fh:
            raw_lines = fh.read().splitlines()
    except OSError as exc:
        raise DataFormatError(f"cannot read episode log {path}: {exc}") from exc
    for line_number, line in enumerate(raw_lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise _fail(path, line_number, f"invalid JSON: {exc}") from exc
        try:
            arm = by_name[obj["chosen_arm"]]
            outcome = ArmOutcome(
                answer=obj["outcome"]["answer"],
                correct_em=bool(obj["outcome"]["correct_em"]),
                steps=int(obj["outcome"]["steps"]),
            )
            records.append(
                EpisodeRecord(
                    query_id=obj["query_id"],
                    chosen_arm=arm,
                    reward=float(obj["reward"]),
                    outcome=outcome,
                    scores_at_selection=tuple(
                        float(s) for s in obj["scores_at_selection"]
                    ),
                    explored=bool(obj["explored"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise _fail(path, line_number, f"malformed episode record: {exc}") from exc
    return records


@dataclass(frozen=True)
class Checkpoint:
    """A trained policy plus everything needed to use it again."""

    policy: LinearPolicy
    arms: ArmSet
    featurizer_config: dict
    reward_scheme_config: dict


def _emit_json(obj, indent: int = 0) -> str:
    """JSON text with floats at fixed 18-significant-digit precision.

    The standard encoder prints shortest-round-trip floats; checkpoints
    instead mandate a minimum digit count, so this walks the object tree
    and formats floats itself. Output is standard JSON.
    """
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad}  {json.dumps(str(k), ensure_ascii=False)}: '
            f"{_emit_json(v, indent + 1)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}  {_emit_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return _format_float(obj)
    if obj is None:
        return "null"
    if isinstance(obj, (int, str)):
        return json.dumps(obj, ensure_ascii=False)
    raise TypeError(f"cannot serialize {type(obj).__name__} into a checkpoint")


def save_checkpoint(checkpoint: Checkpoint, path: str) -> None:
    policy = checkpoint.policy
    document = {
        "dim": policy.dim,
        "arms": list(checkpoint.arms.names),
        "weights": [[float(v) for v in row] for row in policy.weights],
        "biases": [float(v) for v in policy.biases],
        "featurizer": checkpoint.featurizer_config,
        "reward_scheme": checkpoint.reward_scheme_config,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_emit_json(document) + "\n")


def load_checkpoint(path: str) -> Checkpoint:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataFormatError(f"cannot read checkpoint {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise DataFormatError(f"{path}: checkpoint must be a JSON object")
    missing = {"dim", "arms", "weights", "biases", "featurizer", "reward_scheme"} - set(
        obj
    )
    if missing:
        raise DataFormatError(f"{path}: missing checkpoint keys {sorted(missing)}")
    try:
        arms = ArmSet(obj["arms"])
        weights = np.asarray(obj["weights"], dtype=np.float64)
        biases = np.asarray(obj["biases"], dtype=np.float64)
    except Exception as exc:
        raise DataFormatError(f"{path}: malformed checkpoint arrays: {exc}") from exc
    if weights.ndim != 2 or weights.shape != (len(arms), int(obj["dim"])):
        raise DataFormatError(
            f"{path}: weights shape {weights.shape} does not match "
            f"{len(arms)} arms x dim {obj['dim']}"
        )
    if biases.shape != (len(arms),):
        raise DataFormatError(
            f"{path}: biases shape {biases.shape} does not match {len(arms)} arms"
        )
    if not (np.all(np.isfinite(weights)) and np.all(np.isfinite(biases))):
        raise DataFormatError(f"{path}: checkpoint parameters must be finite")
    return Checkpoint(
        policy=LinearPolicy(weights, biases),
        arms=arms,
        featurizer_config=dict(obj["featurizer"]),
        reward_scheme_config=dict(obj["reward_scheme"]),
    )


def checkpoint_featurizer(checkpoint: Checkpoint) -> QueryFeaturizer:
    return featurizer_from_config(checkpoint.featurizer_config)


def checkpoint_scheme(checkpoint: Checkpoint) -> RewardScheme:
    return scheme_from_config(checkpoint.reward_scheme_config)


def make_checkpoint(
    policy: LinearPolicy,
    arms: ArmSet,
    featurizer: QueryFeaturizer,
    scheme: RewardScheme,
) -> Checkpoint:
    return Checkpoint(
        policy=policy,
        arms=arms,
        featurizer_config=featurizer.config(),
        reward_scheme_config=scheme_to_config(scheme),
    )


__all__ = [
    "Checkpoint",
    "checkpoint_featurizer",
    "checkpoint_scheme",
    "episode_to_json",
    "load_checkpoint",
    "load_dataset",
    "load_episode_log",
    "make_checkpoint",
    "save_checkpoint",
    "save_dataset",
    "save_episode_log",
]
