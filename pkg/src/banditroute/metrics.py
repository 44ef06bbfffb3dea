"""Answer scoring (EM, F1, Acc) and report aggregation.

Normalization follows the usual extractive-QA convention: lowercase, strip
punctuation, drop the articles a/an/the, collapse whitespace. F1 counts
token overlap with multiplicity.
"""

from __future__ import annotations

import re
import string
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .types import ArmSet, EpisodeRecord

_ARTICLES_RE = re.compile(r"\b(a|an|the)\b")
_PUNCT_TABLE = str.maketrans("", "", string.punctuation)


def normalize_answer(s: str) -> str:
    s = s.lower()
    s = s.translate(_PUNCT_TABLE)
    s = _ARTICLES_RE.sub(" ", s)
    return " ".join(s.split())


def em(pred: str, gold: str) -> int:
    """1 iff the normalized strings are equal."""
    return int(normalize_answer(pred) == normalize_answer(gold))


def f1(pred: str, gold: str) -> float:
    """Token-level F1 with multiset overlap. Both empty -> 1, one empty -> 0."""
    pred_tokens = normalize_answer(pred).split()
    gold_tokens = normalize_answer(gold).split()
    if not pred_tokens and not gold_tokens:
        return 1.0
    if not pred_tokens or not gold_tokens:
        return 0.0
    overlap = sum((Counter(pred_tokens) & Counter(gold_tokens)).values())
    if overlap == 0:
        return 0.0
    precision = overlap / len(pred_tokens)
    recall = overlap / len(gold_tokens)
    return 2 * precision * recall / (precision + recall)


def acc_contains(pred: str, gold: str) -> int:
    """1 iff the normalized gold is a substring of the normalized prediction."""
    return int(normalize_answer(gold) in normalize_answer(pred))


@dataclass(frozen=True)
class EvalReport:
    """Aggregate quality and efficiency over a set of episodes."""

    em: float
    f1: float
    acc: float
    step: float
    n: int
    per_arm_selection_freq: dict[str, float]


def aggregate(
    records_with_gold: Iterable[tuple[EpisodeRecord, str]],
    arms: ArmSet | None = None,
) -> EvalReport:
    """Unweighted means over records; selection frequencies from chosen arms.

    ``arms`` adds zero-frequency rows for arms that were never chosen.
    """
    records = list(records_with_gold)
    if not records:
        raise ValueError("cannot aggregate an empty record sequence")
    em_sum = f1_sum = acc_sum = step_sum = 0.0
    counts: Counter[str] = Counter()
    if arms is not None:
        counts.update({a.name: 0 for a in arms})
    for record, gold in records:
        answer = record.outcome.answer
        em_sum += em(answer, gold)
        f1_sum += f1(answer, gold)
        acc_sum += acc_contains(answer, gold)
        step_sum += record.outcome.steps
        counts[record.chosen_arm.name] += 1
    n = len(records)
    return EvalReport(
        em=em_sum / n,
        f1=f1_sum / n,
        acc=acc_sum / n,
        step=step_sum / n,
        n=n,
        per_arm_selection_freq={name: c / n for name, c in counts.items()},
    )


__all__ = ["EvalReport", "acc_contains", "aggregate", "em", "f1", "normalize_answer"]
