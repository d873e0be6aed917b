"""Scoring of predicted expressions against single references."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import COLOR, EXPRESSION_TYPES, POSITION, SHAPE
from .realize import UngrammaticalError, normalize_whitespace, parse

PREFIX = ("Take", "the")

CORRECT = "correct"
UNGRAMMATICAL = "ungrammatical"
ERROR_CATEGORIES = (CORRECT, COLOR, SHAPE, "pos", UNGRAMMATICAL)
# attribution priority when several properties differ
_PROPERTY_PRIORITY = ((POSITION, "pos"), (SHAPE, SHAPE), (COLOR, COLOR))


def _tokens(text: str) -> list[str]:
    return normalize_whitespace(text).split()


def strip_prefix(prediction: str, reference: str) -> tuple[str, str]:
    """Drop a leading "Take the" from both strings, but only if both carry it."""
    pred, ref = _tokens(prediction), _tokens(reference)
    n = len(PREFIX)
    if tuple(pred[:n]) == PREFIX and tuple(ref[:n]) == PREFIX:
        return " ".join(pred[n:]), " ".join(ref[n:])
    return prediction, reference


def _check_corpus(predictions: Sequence[str], references: Sequence[str]) -> None:
    if len(predictions) != len(references):
        raise ValueError(f"{len(predictions)} predictions for {len(references)} references")
    if not predictions:
        raise ValueError("empty corpus")


def bleu1(predictions: Sequence[str], references: Sequence[str]) -> float:
    """Corpus-level BLEU with unigram precision only, in percent."""
    _check_corpus(predictions, references)
    matched = pred_len = ref_len = 0
    for prediction, reference in zip(predictions, references):
        pred, ref = (_tokens(s) for s in strip_prefix(prediction, reference))
        ref_counts = Counter(ref)
        matched += sum(min(c, ref_counts[w]) for w, c in Counter(pred).items())
        pred_len += len(pred)
        ref_len += len(ref)
    if pred_len == 0:
        return 0.0
    precision = matched / pred_len
    brevity = 1.0 if pred_len > ref_len else math.exp(1 - ref_len / pred_len)
    return 100.0 * precision * brevity


def sentence_accuracy(predictions: Sequence[str], references: Sequence[str]) -> float:
    _check_corpus(predictions, references)
    hits = 0
    for prediction, reference in zip(predictions, references):
        pred, ref = strip_prefix(prediction, reference)
        hits += _tokens(pred) == _tokens(ref)
    return 100.0 * hits / len(predictions)


def type_distribution(expressions: Iterable[str]) -> dict[str, int]:
    """Counts per expression type id, plus an ``ungrammatical`` bucket."""
    counts = {et.value: 0 for et in EXPRESSION_TYPES}
    counts[UNGRAMMATICAL] = 0
    for expression in expressions:
        try:
            counts[parse(expression).expression_type.value] += 1
        except UngrammaticalError:
            counts[UNGRAMMATICAL] += 1
    return counts


def differing_properties(prediction: str, reference: str) -> list[str]:
    """Properties mentioned by only one side or with different values.

    Both strings must be grammatical.
    """
    pred, ref = parse(prediction).as_dict(), parse(reference).as_dict()
    return [
        prop for prop in (COLOR, SHAPE, POSITION)
        if pred.get(prop) != ref.get(prop)
    ]


def error_labels(prediction: str, reference: str) -> list[str]:
    """Every applicable error category (multi-label view)."""
    parse(reference)
    if _tokens(prediction) == _tokens(reference):
        return [CORRECT]
    try:
        diff = set(differing_properties(prediction, reference))
    except UngrammaticalError:
        return [UNGRAMMATICAL]
    return [label for prop, label in _PROPERTY_PRIORITY if prop in diff]


def classify_error(prediction: str, reference: str) -> str:
    """Single error bucket; position beats shape beats color."""
    return error_labels(prediction, reference)[0]


@dataclass
class EvaluationReport:
    bleu1: float
    sentence_accuracy: float
    count: int
    per_split: dict[str, dict[str, float]] = field(default_factory=dict)
    type_distribution: dict[str, int] = field(default_factory=dict)
    reference_type_distribution: dict[str, int] = field(default_factory=dict)
    error_breakdown: dict[str, int] = field(default_factory=dict)
    error_labels: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "bleu1": self.bleu1,
            "sentence_accuracy": self.sentence_accuracy,
            "count": self.count,
            "per_split": self.per_split,
            "type_distribution": self.type_distribution,
            "reference_type_distribution": self.reference_type_distribution,
            "error_breakdown": self.error_breakdown,
            "error_labels": self.error_labels,
        }


def evaluate(
    predictions: Sequence[str],
    references: Sequence[str],
    splits: Sequence[str] | None = None,
) -> EvaluationReport:
    _check_corpus(predictions, references)
    if splits is None:
        splits = ["all"] * len(predictions)
    if len(splits) != len(predictions):
        raise ValueError("one split tag per prediction is required")

    per_split = {}
    for name in sorted(set(splits)):
        idx = [i for i, s in enumerate(splits) if s == name]
        p = [predictions[i] for i in idx]
        r = [references[i] for i in idx]
        per_split[name] = {
            "bleu1": bleu1(p, r),
            "sentence_accuracy": sentence_accuracy(p, r),
            "count": len(idx),
        }

    single = {c: 0 for c in ERROR_CATEGORIES}
    multi = {c: 0 for c in ERROR_CATEGORIES}
    for p, r in zip(predictions, references):
        labels = error_labels(p, r)
        single[labels[0]] += 1
        for label in labels:
            multi[label] += 1

    return EvaluationReport(
        bleu1=bleu1(predictions, references),
        sentence_accuracy=sentence_accuracy(predictions, references),
        count=len(predictions),
        per_split=per_split,
        type_distribution=type_distribution(predictions),
        reference_type_distribution=type_distribution(references),
        error_breakdown=single,
        error_labels=multi,
    )
