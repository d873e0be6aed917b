"""Template realization of distinguishing sets and the inverse parser."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .core import (
    COLOR,
    COLORS,
    EXPRESSION_TYPES,
    POSITION,
    POSITION_WORDS,
    POSITIONS,
    PROPERTIES,
    PROPERTY_VALUES,
    SHAPE,
    SHAPES,
    ExpressionType,
)
from .ia import DistinguishingSet

TEMPLATES: dict[ExpressionType, str] = {
    ExpressionType.C: "Take the [color] piece",
    ExpressionType.S: "Take the [shape]",
    ExpressionType.P: "Take the piece at [position]",
    ExpressionType.CS: "Take the [color] [shape]",
    ExpressionType.CP: "Take the [color] piece at [position]",
    ExpressionType.SP: "Take the [shape] at [position]",
    ExpressionType.CSP: "Take the [color] [shape] at [position]",
}

TEMPLATE_WORDS = ("Take", "the", "piece", "at")
SPECIAL_WORDS = ("<s>", "<e>", "<pad>", "<unk>")
# Never produced by a template; keeps the position-word group at six entries.
RESERVED_POSITION_WORDS = ("middle",)


def _unique_words(phrases) -> list[str]:
    seen: dict[str, None] = {}
    for phrase in phrases:
        for w in phrase.split():
            seen.setdefault(w, None)
    return list(seen)


VOCABULARY: tuple[str, ...] = tuple(
    list(SHAPES)
    + _unique_words(COLORS)
    + list(POSITION_WORDS)
    + list(RESERVED_POSITION_WORDS)
    + list(TEMPLATE_WORDS)
    + list(SPECIAL_WORDS)
)


class UnrealizableError(ValueError):
    pass


class UngrammaticalError(ValueError):
    pass


@dataclass(frozen=True)
class ParsedExpression:
    expression_type: ExpressionType
    values: tuple[tuple[str, str], ...]

    def as_dict(self) -> dict[str, str]:
        return dict(self.values)

    def get(self, prop: str) -> str | None:
        return self.as_dict().get(prop)


def normalize_whitespace(text: str) -> str:
    return " ".join(text.split())


def realize(d: DistinguishingSet) -> str:
    if not d.selections:
        raise UnrealizableError("unrealizable: no distinguishing properties")
    values = d.as_dict()
    et = ExpressionType.from_properties(values)
    out = TEMPLATES[et]
    for prop in PROPERTIES:
        if prop in values:
            out = out.replace(f"[{prop}]", values[prop])
    return out


def _alternation(values) -> str:
    # longest first so that "navy blue" wins over a hypothetical "navy"
    return "|".join(re.escape(v) for v in sorted(values, key=len, reverse=True))


_SLOT_PATTERNS = {
    COLOR: f"(?P<color>{_alternation(COLORS)})",
    SHAPE: f"(?P<shape>{_alternation(SHAPES)})",
    POSITION: f"(?P<position>{_alternation(POSITIONS)})",
}

_TEMPLATE_REGEXES = [
    (
        et,
        re.compile(
            re.escape(pattern)
            .replace(re.escape("[color]"), _SLOT_PATTERNS[COLOR])
            .replace(re.escape("[shape]"), _SLOT_PATTERNS[SHAPE])
            .replace(re.escape("[position]"), _SLOT_PATTERNS[POSITION])
        ),
    )
    for et, pattern in TEMPLATES.items()
]


def parse(expression: str) -> ParsedExpression:
    text = normalize_whitespace(expression)
    for et, regex in _TEMPLATE_REGEXES:
        m = regex.fullmatch(text)
        if m:
            values = tuple((p, m.group(p)) for p in et.properties)
            return ParsedExpression(et, values)
    raise UngrammaticalError(f"ungrammatical: {expression!r}")


def is_grammatical(expression: str) -> bool:
    try:
        parse(expression)
    except UngrammaticalError:
        return False
    return True


@lru_cache(maxsize=None)
def enumerate_expressions_by_type() -> dict[ExpressionType, tuple[str, ...]]:
    out = {}
    for et in EXPRESSION_TYPES:
        props = et.properties
        exprs = []
        for combo in itertools.product(*(PROPERTY_VALUES[p] for p in props)):
            exprs.append(realize(DistinguishingSet(tuple(zip(props, combo)))))
        out[et] = tuple(exprs)
    return out


def enumerate_expressions() -> frozenset[str]:
    return frozenset(itertools.chain.from_iterable(enumerate_expressions_by_type().values()))


def write_vocabulary(path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(VOCABULARY) + "\n", encoding="utf-8")
    return path
