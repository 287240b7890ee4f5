"""Accuracy, content effect, premise F1, and the combined score.

Group accuracies live on a 0..100 percent scale and the content effect is
measured in the same percentage points; the combined score divides accuracy
by 1 + ln(1 + CE). Leaderboard-style scoring for relevance subtasks
averages accuracy with premise F1 before the discount; pass ``premise_f1``
to combined_score for that variant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from ..pipeline import Prediction, Syllogism

GROUP_KEYS = ("valid_plausible", "valid_implausible",
              "invalid_plausible", "invalid_implausible")


class MetricError(Exception):
    pass


class IdMismatchError(MetricError):
    pass


class MissingLabelsError(MetricError):
    pass


@dataclass(frozen=True)
class GroupAccuracies:
    """Accuracy cells for (valid, plausible) x (true, false), in percent."""

    a_vp: float
    a_vnp: float
    a_nvp: float
    a_nvnp: float

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if not 0.0 <= value <= 100.0:
                raise ValueError(f"{name} must be in [0, 100], got {value}")

    def as_dict(self) -> dict[str, float]:
        return {
            "valid_plausible": self.a_vp,
            "valid_implausible": self.a_vnp,
            "invalid_plausible": self.a_nvp,
            "invalid_implausible": self.a_nvnp,
        }


def content_effect(groups: GroupAccuracies) -> tuple[float, float, float]:
    """(C_intra, C_inter, CE): averaged absolute accuracy gaps."""
    c_intra = (abs(groups.a_vp - groups.a_vnp)
               + abs(groups.a_nvp - groups.a_nvnp)) / 2.0
    c_inter = (abs(groups.a_vp - groups.a_nvp)
               + abs(groups.a_vnp - groups.a_nvnp)) / 2.0
    return c_intra, c_inter, (c_intra + c_inter) / 2.0


def combined_score(accuracy: float, ce: float,
                   premise_f1: float | None = None) -> float:
    """Accuracy discounted by the content effect.

    Both inputs are in percentage points. With ``premise_f1`` given, the
    numerator is the mean of accuracy and F1, which is how the relevance
    subtasks are scored on the leaderboard.
    """
    if not 0.0 <= accuracy <= 100.0:
        raise ValueError(f"accuracy must be in [0, 100], got {accuracy}")
    if ce < 0.0:
        raise ValueError(f"content effect must be nonnegative, got {ce}")
    numerator = accuracy if premise_f1 is None else (accuracy + premise_f1) / 2.0
    return numerator / (1.0 + math.log(1.0 + ce))


def _aligned(preds: Sequence[Prediction],
             gold: Sequence[Syllogism]) -> list[tuple[Prediction, Syllogism]]:
    by_id = {p.id: p for p in preds}
    if len(by_id) != len(preds):
        raise IdMismatchError("duplicate prediction ids")
    gold_ids = [g.id for g in gold]
    if len(set(gold_ids)) != len(gold_ids):
        raise IdMismatchError("duplicate gold ids")
    if set(by_id) != set(gold_ids):
        missing = sorted(set(gold_ids) - set(by_id))[:3]
        extra = sorted(set(by_id) - set(gold_ids))[:3]
        raise IdMismatchError(
            f"prediction/gold ids do not align (missing {missing}, extra {extra})")
    return [(by_id[g.id], g) for g in gold]


def accuracy(preds: Sequence[Prediction], gold: Sequence[Syllogism]) -> float:
    pairs = _aligned(preds, gold)
    if not pairs:
        raise MetricError("cannot score an empty dataset")
    correct = 0
    for pred, sample in pairs:
        if sample.label_valid is None:
            raise MissingLabelsError(f"sample {sample.id} has no validity label")
        correct += pred.valid == sample.label_valid
    return 100.0 * correct / len(pairs)


def group_counts(gold: Sequence[Syllogism]) -> dict[str, int]:
    counts = dict.fromkeys(GROUP_KEYS, 0)
    for sample in gold:
        counts[_group_key(sample)] += 1
    return counts


def _group_key(sample: Syllogism) -> str:
    if sample.label_valid is None or sample.label_plausible is None:
        raise MissingLabelsError(
            f"sample {sample.id} lacks validity or plausibility label")
    validity = "valid" if sample.label_valid else "invalid"
    plausibility = "plausible" if sample.label_plausible else "implausible"
    return f"{validity}_{plausibility}"


def group_accuracies(preds: Sequence[Prediction],
                     gold: Sequence[Syllogism]) -> GroupAccuracies:
    pairs = _aligned(preds, gold)
    totals = dict.fromkeys(GROUP_KEYS, 0)
    hits = dict.fromkeys(GROUP_KEYS, 0)
    for pred, sample in pairs:
        key = _group_key(sample)
        totals[key] += 1
        hits[key] += pred.valid == sample.label_valid
    empty = [k for k, n in totals.items() if n == 0]
    if empty:
        raise MissingLabelsError(f"no samples in group(s): {', '.join(empty)}")
    cell = {k: 100.0 * hits[k] / totals[k] for k in GROUP_KEYS}
    return GroupAccuracies(cell["valid_plausible"], cell["valid_implausible"],
                           cell["invalid_plausible"], cell["invalid_implausible"])


def premise_f1(preds: Sequence[Prediction], gold: Sequence[Syllogism]) -> float:
    """Micro-averaged binary F1 over all (sample, premise index) decisions.

    A sample where both sides select no premises contributes nothing; a
    dataset with no selections on either side scores 100.
    """
    pairs = _aligned(preds, gold)
    tp = fp = fn = 0
    for pred, sample in pairs:
        if sample.gold_relevant is None:
            raise MissingLabelsError(f"sample {sample.id} has no relevance labels")
        predicted = set(pred.relevant)
        actual = set(sample.gold_relevant)
        tp += len(predicted & actual)
        fp += len(predicted - actual)
        fn += len(actual - predicted)
    if tp == fp == fn == 0:
        return 100.0
    return 100.0 * 2 * tp / (2 * tp + fp + fn)


@dataclass(frozen=True)
class MetricReport:
    accuracy: float
    premise_f1: float | None
    c_intra: float
    c_inter: float
    content_effect: float
    combined_score: float
    combined_score_with_f1: float | None
    ci: dict[str, tuple[float, float]]
    group_counts: dict[str, int]
    group_accuracies: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        expected = combined_score(self.accuracy, self.content_effect)
        if abs(self.combined_score - expected) > 1e-9:
            raise ValueError("combined_score inconsistent with accuracy and CE")
        for name, (lo, hi) in self.ci.items():
            if lo > hi:
                raise ValueError(f"ci for {name} is not ordered")

    def to_json_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "premise_f1": self.premise_f1,
            "c_intra": self.c_intra,
            "c_inter": self.c_inter,
            "content_effect": self.content_effect,
            "combined_score": self.combined_score,
            "combined_score_with_f1": self.combined_score_with_f1,
            "ci": {k: list(v) for k, v in self.ci.items()},
            "group_counts": dict(self.group_counts),
            "group_accuracies": dict(self.group_accuracies),
        }

    def summary_line(self) -> str:
        f1 = "-" if self.premise_f1 is None else f"{self.premise_f1:.2f}"
        return (f"acc={self.accuracy:.2f} f1={f1} "
                f"ce={self.content_effect:.2f} cs={self.combined_score:.2f}")
