"""Incremental Algorithm for selecting distinguishing properties.

Properties are tested in preference order. A property is kept when the target's
value for it rules out at least one distractor that is still in play; the ruled
out distractors are then dropped. Duplicates of the target can never be ruled
out, in which case the result is flagged ambiguous.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import (
    DEFAULT_ORDER,
    ExpressionType,
    PreferenceOrder,
    SymbolicBoard,
    SymbolicPiece,
    shares_property,
)


@dataclass(frozen=True)
class DistinguishingSet:
    selections: tuple[tuple[str, str], ...]
    ambiguous: bool = False

    @property
    def properties(self) -> tuple[str, ...]:
        return tuple(p for p, _ in self.selections)

    def as_dict(self) -> dict[str, str]:
        return dict(self.selections)


def incremental_algorithm(
    target: SymbolicPiece,
    distractors: Iterable[SymbolicPiece],
    order: PreferenceOrder = DEFAULT_ORDER,
) -> DistinguishingSet:
    remaining = list(distractors)
    selections = []
    for prop in order:
        if not remaining:
            break
        kept = [m for m in remaining if shares_property(m, target, prop)]
        if len(kept) < len(remaining):
            selections.append((prop, target.value(prop)))
            remaining = kept
    if remaining:
        return DistinguishingSet(tuple((p, target.value(p)) for p in order), ambiguous=True)
    return DistinguishingSet(tuple(selections))


def run_ia(board: SymbolicBoard, order: PreferenceOrder = DEFAULT_ORDER) -> DistinguishingSet:
    return incremental_algorithm(board.target, board.distractors, order)


def classify_expression_type(d: DistinguishingSet) -> ExpressionType:
    if not d.selections:
        raise ValueError("no distinguishing properties")
    return ExpressionType.from_properties(d.properties)
