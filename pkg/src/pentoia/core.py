"""Domain vocabulary of the Pentomino world.

Pieces are (color, shape, position) symbols. Everything that later samples,
describes or renders a board works from the tables defined here.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

COLOR, SHAPE, POSITION = "color", "shape", "position"
PROPERTIES = (COLOR, SHAPE, POSITION)

COLORS: dict[str, tuple[int, int, int]] = {
    "red": (255, 0, 0),
    "orange": (255, 165, 0),
    "yellow": (255, 255, 0),
    "green": (0, 128, 0),
    "blue": (0, 0, 255),
    "cyan": (0, 255, 255),
    "purple": (128, 0, 128),
    "brown": (139, 69, 19),
    "grey": (128, 128, 128),
    "pink": (255, 192, 203),
    "olive green": (128, 128, 0),
    "navy blue": (0, 0, 128),
}

# (col, row) tile offsets; col grows to the right, row grows downwards.
SHAPES: dict[str, frozenset[tuple[int, int]]] = {
    name: frozenset(cells)
    for name, cells in {
        "F": [(1, 0), (2, 0), (0, 1), (1, 1), (1, 2)],
        "I": [(0, 0), (0, 1), (0, 2), (0, 3), (0, 4)],
        "L": [(0, 0), (0, 1), (0, 2), (0, 3), (1, 3)],
        "N": [(1, 0), (1, 1), (0, 2), (1, 2), (0, 3)],
        "P": [(0, 0), (1, 0), (0, 1), (1, 1), (0, 2)],
        "T": [(0, 0), (1, 0), (2, 0), (1, 1), (1, 2)],
        "U": [(0, 0), (2, 0), (0, 1), (1, 1), (2, 1)],
        "V": [(0, 0), (0, 1), (0, 2), (1, 2), (2, 2)],
        "W": [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)],
        "X": [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)],
        "Y": [(1, 0), (0, 1), (1, 1), (1, 2), (1, 3)],
        "Z": [(0, 0), (1, 0), (1, 1), (1, 2), (2, 2)],
    }.items()
}

# position name -> (column band, row band) in the 3x3 area layout
POSITIONS: dict[str, tuple[int, int]] = {
    "top left": (0, 0),
    "top center": (1, 0),
    "top right": (2, 0),
    "left center": (0, 1),
    "center": (1, 1),
    "right center": (2, 1),
    "bottom left": (0, 2),
    "bottom center": (1, 2),
    "bottom right": (2, 2),
}

POSITION_WORDS = ("left", "right", "top", "bottom", "center")

ROTATIONS = (0, 90, 180, 270)

PROPERTY_VALUES: dict[str, tuple[str, ...]] = {
    COLOR: tuple(COLORS),
    SHAPE: tuple(SHAPES),
    POSITION: tuple(POSITIONS),
}


@dataclass(frozen=True, order=True)
class SymbolicPiece:
    color: str
    shape: str
    position: str

    def __post_init__(self):
        for prop in PROPERTIES:
            value = getattr(self, prop)
            if value not in PROPERTY_VALUES[prop]:
                raise ValueError(f"unknown {prop} value: {value!r}")

    def value(self, prop: str) -> str:
        return getattr(self, prop)

    def __str__(self):
        return f"({self.color}, {self.shape}, {self.position})"


MIN_PIECES = 4
MAX_PIECES = 10
MAX_PIECES_PER_AREA = 2


@dataclass(frozen=True)
class SymbolicBoard:
    """Pieces on a board and the index of the referent among them."""

    pieces: tuple[SymbolicPiece, ...]
    target_index: int

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        n = len(self.pieces)
        if not MIN_PIECES <= n <= MAX_PIECES:
            raise ValueError(f"a board holds {MIN_PIECES}-{MAX_PIECES} pieces, got {n}")
        if not 0 <= self.target_index < n:
            raise ValueError(f"target_index {self.target_index} out of range for {n} pieces")
        counts = area_counts(self.pieces)
        full = [pos for pos, c in counts.items() if c > MAX_PIECES_PER_AREA]
        if full:
            raise ValueError(f"more than {MAX_PIECES_PER_AREA} pieces in area(s): {full}")

    @property
    def target(self) -> SymbolicPiece:
        return self.pieces[self.target_index]

    @property
    def distractors(self) -> tuple[SymbolicPiece, ...]:
        return self.pieces[: self.target_index] + self.pieces[self.target_index + 1 :]

    def with_target(self, index: int) -> "SymbolicBoard":
        return SymbolicBoard(self.pieces, index)


def area_counts(pieces: Iterable[SymbolicPiece]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for p in pieces:
        counts[p.position] = counts.get(p.position, 0) + 1
    return counts


@dataclass(frozen=True)
class PreferenceOrder:
    order: tuple[str, ...] = PROPERTIES

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        if sorted(self.order) != sorted(PROPERTIES):
            raise ValueError(f"preference order must be a permutation of {PROPERTIES}, got {self.order}")

    def __iter__(self):
        return iter(self.order)

    @classmethod
    def all_orders(cls) -> list["PreferenceOrder"]:
        return [cls(p) for p in itertools.permutations(PROPERTIES)]


DEFAULT_ORDER = PreferenceOrder()


class ExpressionType(enum.Enum):
    C = "C"
    S = "S"
    P = "P"
    CS = "CS"
    CP = "CP"
    SP = "SP"
    CSP = "CSP"

    @property
    def properties(self) -> tuple[str, ...]:
        """The mentioned properties, in color/shape/position order."""
        letters = {"C": COLOR, "S": SHAPE, "P": POSITION}
        return tuple(letters[ch] for ch in self.value)

    @classmethod
    def from_properties(cls, props: Iterable[str]) -> "ExpressionType":
        props = set(props)
        unknown = props - set(PROPERTIES)
        if unknown:
            raise ValueError(f"unknown properties: {sorted(unknown)}")
        if not props:
            raise ValueError("an expression type mentions at least one property")
        return cls("".join(p[0].upper() for p in PROPERTIES if p in props))


EXPRESSION_TYPES = tuple(ExpressionType)


def shares_property(a: SymbolicPiece, b: SymbolicPiece, prop: str) -> bool:
    return a.value(prop) == b.value(prop)


@lru_cache(maxsize=None)
def enumerate_symbol_space() -> tuple[SymbolicPiece, ...]:
    """All 1296 symbols, color-major, then shape, then position."""
    return tuple(
        SymbolicPiece(c, s, p)
        for c, s, p in itertools.product(COLORS, SHAPES, POSITIONS)
    )


def symbol_index(piece: SymbolicPiece) -> int:
    """Position of `piece` in the canonical enumeration."""
    c = PROPERTY_VALUES[COLOR].index(piece.color)
    s = PROPERTY_VALUES[SHAPE].index(piece.shape)
    p = PROPERTY_VALUES[POSITION].index(piece.position)
    return (c * len(SHAPES) + s) * len(POSITIONS) + p


def sort_symbols(symbols: Iterable[SymbolicPiece]) -> list[SymbolicPiece]:
    return sorted(symbols, key=symbol_index)

