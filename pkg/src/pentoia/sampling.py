"""Board sampling and dataset assembly.

Two training regimes are supported: ``naive`` fills boards uniformly at random,
``didact`` builds each board around an intended target so that the Incremental
Algorithm has to produce a requested expression type (expression type oriented
sampling, ETOS). Held-out symbols and (symbol, type) pairs feed the three
compositional test sets.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .boardgen import PlacedBoard, PlacementError, place_pieces
from .core import (
    COLORS,
    EXPRESSION_TYPES,
    MAX_PIECES,
    MAX_PIECES_PER_AREA,
    MIN_PIECES,
    POSITIONS,
    PROPERTIES,
    SHAPES,
    ExpressionType,
    SymbolicBoard,
    SymbolicPiece,
    enumerate_symbol_space,
    sort_symbols,
)
from .ia import DistinguishingSet, classify_expression_type, run_ia
from .realize import realize

# seed stream identifiers
ASSIGNMENT_STREAM = 0
NAIVE_STREAM = 1
DIDACT_STREAM = 2
HOLDOUT_STREAM = 3
SPLIT_STREAM = 4

FULL_SCALE_BOARDS = 42_000
FULL_SCALE_EVAL_BOARDS = 2_500  # 10,000 examples at 4 targets per board
DIDACT_TRAIN_TYPES = 5
TRAIN_SYMBOLS = 840

HOLDOUT_SETS = ("ho_color", "ho_pos", "ho_uts")
EVAL_SPLITS = ("val", "test")
FILTERED = "filtered"

MAX_BOARD_TRIES = 100


class EtosError(RuntimeError):
    """No board for the requested (target, expression type) could be built."""


def derive_rng(seed: int, *keys: int) -> random.Random:
    """Independent random source for (seed, *keys), stable across runs and workers."""
    state = np.random.SeedSequence([seed, *keys]).generate_state(4, dtype=np.uint32)
    return random.Random(int.from_bytes(state.tobytes(), "little"))


@dataclass(frozen=True)
class HoldoutAssignment:
    held_colors: dict[str, tuple[str, str]]
    held_positions: dict[tuple[str, str], tuple[str, str]]
    held_expression_types: dict[SymbolicPiece, tuple[ExpressionType, ExpressionType]]
    train_symbols: tuple[SymbolicPiece, ...]

    def ho_color_symbols(self, split: str) -> list[SymbolicPiece]:
        k = EVAL_SPLITS.index(split)
        return sort_symbols(
            SymbolicPiece(pair[k], shape, pos)
            for shape, pair in self.held_colors.items()
            for pos in POSITIONS
        )

    def ho_pos_symbols(self, split: str) -> list[SymbolicPiece]:
        k = EVAL_SPLITS.index(split)
        return sort_symbols(
            SymbolicPiece(color, shape, pair[k])
            for (shape, color), pair in self.held_positions.items()
        )

    def held_type(self, symbol: SymbolicPiece, split: str) -> ExpressionType:
        return self.held_expression_types[symbol][EVAL_SPLITS.index(split)]

    def allowed_types(self, symbol: SymbolicPiece) -> list[ExpressionType]:
        held = self.held_expression_types[symbol]
        return [et for et in EXPRESSION_TYPES if et not in held]

    def is_held_pair(self, symbol: SymbolicPiece, et: ExpressionType) -> bool:
        held = self.held_expression_types.get(symbol)
        return held is not None and et in held

    def to_dict(self) -> dict:
        return {
            "held_colors": {s: list(p) for s, p in self.held_colors.items()},
            "held_positions": [
                {"shape": s, "color": c, "val": p[0], "test": p[1]}
                for (s, c), p in self.held_positions.items()
            ],
            "held_expression_types": [
                {"color": sym.color, "shape": sym.shape, "position": sym.position,
                 "val": p[0].value, "test": p[1].value}
                for sym, p in self.held_expression_types.items()
            ],
            "train_symbols": len(self.train_symbols),
        }


def assign_holdouts(rng: random.Random) -> HoldoutAssignment:
    colors, positions = list(COLORS), list(POSITIONS)
    held_colors = {shape: tuple(rng.sample(colors, 2)) for shape in SHAPES}
    held_positions = {}
    for shape in SHAPES:
        for color in colors:
            if color in held_colors[shape]:
                continue
            held_positions[(shape, color)] = tuple(rng.sample(positions, 2))

    train = []
    for sym in enumerate_symbol_space():
        if sym.color in held_colors[sym.shape]:
            continue
        if sym.position in held_positions[(sym.shape, sym.color)]:
            continue
        train.append(sym)

    held_types = {sym: tuple(rng.sample(EXPRESSION_TYPES, 2)) for sym in train}
    return HoldoutAssignment(held_colors, held_positions, held_types, tuple(train))


# -- symbol pools and distractor classes -------------------------------------

SAME, DIFF, ANY = "=", "!", "*"
Relation = tuple[str, str, str]  # per property, in (color, shape, position) order


def matches(candidate: SymbolicPiece, target: SymbolicPiece, relation: Relation) -> bool:
    for prop, rel in zip(PROPERTIES, relation):
        if rel == ANY:
            continue
        same = candidate.value(prop) == target.value(prop)
        if same != (rel == SAME):
            return False
    return True


class SymbolPool:
    """Symbols available as distractors, with cached per-target class lookups."""

    def __init__(self, symbols: Iterable[SymbolicPiece]):
        self.symbols = tuple(sort_symbols(set(symbols)))
        self._members = frozenset(self.symbols)
        self._values = np.array([[s.value(p) for p in PROPERTIES] for s in self.symbols], dtype=object)
        self._cache: dict = {}

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, item):
        return item in self._members

    def _mask(self, target: SymbolicPiece, relation: Relation) -> np.ndarray:
        mask = np.ones(len(self.symbols), dtype=bool)
        for k, (prop, rel) in enumerate(zip(PROPERTIES, relation)):
            if rel == ANY:
                continue
            same = self._values[:, k] == target.value(prop)
            mask &= same if rel == SAME else ~same
        return mask

    def candidates(self, target: SymbolicPiece, relations: Sequence[Relation]) -> tuple[SymbolicPiece, ...]:
        key = (target, tuple(relations))
        hit = self._cache.get(key)
        if hit is None:
            mask = np.zeros(len(self.symbols), dtype=bool)
            for r in relations:
                mask |= self._mask(target, r)
            hit = tuple(self.symbols[i] for i in np.flatnonzero(mask))
            self._cache[key] = hit
        return hit


@dataclass(frozen=True)
class Recipe:
    required: tuple[Relation, ...]
    fillers: tuple[Relation, ...]


_DIFF_COLOR = (DIFF, ANY, ANY)
_SAME_COLOR_DIFF_SHAPE = (SAME, DIFF, ANY)
_SAME_COLOR_SHAPE_DIFF_POS = (SAME, SAME, DIFF)

RECIPES: dict[ExpressionType, Recipe] = {
    ExpressionType.C: Recipe((), (_DIFF_COLOR,)),
    ExpressionType.S: Recipe((), (_SAME_COLOR_DIFF_SHAPE,)),
    ExpressionType.P: Recipe((), (_SAME_COLOR_SHAPE_DIFF_POS,)),
    ExpressionType.CS: Recipe(
        (_DIFF_COLOR, _SAME_COLOR_DIFF_SHAPE),
        (_DIFF_COLOR, _SAME_COLOR_DIFF_SHAPE),
    ),
    ExpressionType.CP: Recipe(
        (_DIFF_COLOR, _SAME_COLOR_SHAPE_DIFF_POS),
        (_DIFF_COLOR, _SAME_COLOR_SHAPE_DIFF_POS),
    ),
    ExpressionType.SP: Recipe(
        (_SAME_COLOR_DIFF_SHAPE, _SAME_COLOR_SHAPE_DIFF_POS),
        (_SAME_COLOR_DIFF_SHAPE, _SAME_COLOR_SHAPE_DIFF_POS),
    ),
    ExpressionType.CSP: Recipe(
        (_DIFF_COLOR, (SAME, DIFF, DIFF), _SAME_COLOR_SHAPE_DIFF_POS),
        # anything but an exact copy of the target
        (_DIFF_COLOR, _SAME_COLOR_DIFF_SHAPE, _SAME_COLOR_SHAPE_DIFF_POS),
    ),
}


def _draw(candidates: Sequence[SymbolicPiece], counts: dict[str, int], rng: random.Random):
    """Uniform draw among candidates whose area still has room, or None."""
    for _ in range(16):
        pick = candidates[rng.randrange(len(candidates))]
        if counts.get(pick.position, 0) < MAX_PIECES_PER_AREA:
            return pick
    room = [c for c in candidates if counts.get(c.position, 0) < MAX_PIECES_PER_AREA]
    if not room:
        return None
    return room[rng.randrange(len(room))]


def _assemble(target: SymbolicPiece, distractors: list[SymbolicPiece], rng: random.Random) -> SymbolicBoard:
    pieces = list(distractors)
    rng.shuffle(pieces)
    index = rng.randrange(len(pieces) + 1)
    pieces.insert(index, target)
    return SymbolicBoard(tuple(pieces), index)


def sample_piece_count(rng: random.Random) -> int:
    return rng.randint(MIN_PIECES, MAX_PIECES)


def sample_naive_board(pool: SymbolPool | Sequence[SymbolicPiece], rng: random.Random) -> SymbolicBoard:
    """Uniform piece count, pieces drawn with replacement, uniform target."""
    symbols = pool.symbols if isinstance(pool, SymbolPool) else tuple(pool)
    n = sample_piece_count(rng)
    counts: dict[str, int] = {}
    pieces = []
    while len(pieces) < n:
        pick = symbols[rng.randrange(len(symbols))]
        if counts.get(pick.position, 0) >= MAX_PIECES_PER_AREA:
            continue
        counts[pick.position] = counts.get(pick.position, 0) + 1
        pieces.append(pick)
    return SymbolicBoard(tuple(pieces), rng.randrange(n))


def etos_board(
    target: SymbolicPiece,
    et: ExpressionType,
    pool: SymbolPool,
    rng: random.Random,
    max_tries: int = MAX_BOARD_TRIES,
) -> SymbolicBoard:
    """Board around `target` for which the IA yields expression type `et`."""
    recipe = RECIPES[et]
    required = [pool.candidates(target, (r,)) for r in recipe.required]
    fillers = pool.candidates(target, recipe.fillers)
    if not fillers or not all(required):
        raise EtosError(f"no distractors in pool for {target} / {et.value}")

    for _ in range(max_tries):
        n_distractors = max(sample_piece_count(rng) - 1, len(recipe.required))
        counts = {target.position: 1}
        distractors = []
        for group in required + [fillers] * (n_distractors - len(required)):
            pick = _draw(group, counts, rng)
            if pick is None:
                break
            counts[pick.position] = counts.get(pick.position, 0) + 1
            distractors.append(pick)
        else:
            board = _assemble(target, distractors, rng)
            d = run_ia(board)
            if not d.ambiguous and classify_expression_type(d) is et:
                return board
    raise EtosError(f"could not build a {et.value} board for {target} in {max_tries} tries")


def pick_extra_targets(board: SymbolicBoard, rng: random.Random, k: int = 3) -> list[int]:
    others = [i for i in range(len(board.pieces)) if i != board.target_index]
    if k > len(others):
        raise ValueError(f"board with {len(board.pieces)} pieces cannot provide {k} extra targets")
    return rng.sample(others, k)


# -- datasets ------------------------------------------------------------------


@dataclass(frozen=True)
class GenerationConfig:
    seed: int = 1
    boards: int = FULL_SCALE_BOARDS
    targets_per_board: int = 4
    val_size: int | None = None
    test_size: int | None = None
    images: bool = False

    def __post_init__(self):
        if self.boards <= 0:
            raise ValueError("boards must be positive")
        if not 1 <= self.targets_per_board <= MIN_PIECES:
            raise ValueError(
                f"targets_per_board must be within 1..{MIN_PIECES} (the minimum piece count)"
            )
        for name in ("val_size", "test_size"):
            size = getattr(self, name)
            if size is not None and (size < 0 or size % self.targets_per_board):
                raise ValueError(f"{name} must be a non-negative multiple of targets_per_board")
        if self.eval_boards("val") + self.eval_boards("test") > self.boards:
            raise ValueError("val and test splits need more boards than generated")

    def eval_boards(self, split: str) -> int:
        size = getattr(self, f"{split}_size")
        if size is None:
            # 10,000 examples each at 42,000 boards, scaled proportionally
            return round(self.boards * FULL_SCALE_EVAL_BOARDS / FULL_SCALE_BOARDS)
        return size // self.targets_per_board

    @property
    def repetitions(self) -> int:
        """Boards per (train symbol, allowed type) in the didact regime."""
        per_rep = TRAIN_SYMBOLS * DIDACT_TRAIN_TYPES
        if self.boards % per_rep:
            raise ValueError(f"didact board count must be a multiple of {per_rep}, got {self.boards}")
        return self.boards // per_rep


@dataclass
class DatasetExample:
    id: int
    split: str
    board_id: int
    board: PlacedBoard
    target_index: int
    expression: str
    expression_type: ExpressionType
    distinguishing: DistinguishingSet
    generator: str
    intended: bool = False
    image: str | None = None

    @property
    def target(self) -> SymbolicPiece:
        return self.board.pieces[self.target_index].symbol

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "split": self.split,
            "generator": self.generator,
            "image": self.image,
            "pieces": [
                {
                    "color": p.symbol.color,
                    "shape": p.symbol.shape,
                    "position": p.symbol.position,
                    "rotation": p.rotation,
                    "tiles": [list(t) for t in p.occupied],
                    "bbox": list(p.bbox),
                }
                for p in self.board.pieces
            ],
            "target_index": self.target_index,
            "expression": self.expression,
            "expression_type": self.expression_type.value,
            "ambiguous": self.distinguishing.ambiguous,
        }


@dataclass
class Dataset:
    examples: list[DatasetExample]
    boards: list[PlacedBoard] = field(default_factory=list)

    def split(self, name: str) -> list[DatasetExample]:
        return [e for e in self.examples if e.split == name]

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for e in self.examples:
            out[e.split] = out.get(e.split, 0) + 1
        return out


def make_example(board: PlacedBoard, target_index: int, **fields) -> DatasetExample:
    symbolic = SymbolicBoard(board.symbols, target_index)
    d = run_ia(symbolic)
    return DatasetExample(
        board=board,
        target_index=target_index,
        expression=realize(d),
        expression_type=classify_expression_type(d),
        distinguishing=d,
        **fields,
    )


def assign_board_splits(n_boards: int, n_val: int, n_test: int, rng: random.Random) -> list[str]:
    order = list(range(n_boards))
    rng.shuffle(order)
    splits = ["train"] * n_boards
    for i in order[:n_val]:
        splits[i] = "val"
    for i in order[n_val : n_val + n_test]:
        splits[i] = "test"
    return splits


def _place_or_resample(make_board, rng: random.Random) -> tuple[SymbolicBoard, PlacedBoard]:
    for _ in range(MAX_BOARD_TRIES):
        symbolic = make_board()
        try:
            return symbolic, place_pieces(symbolic, rng)
        except PlacementError:
            continue
    raise PlacementError("board placement failed repeatedly")


def _board_examples(
    symbolic: SymbolicBoard,
    placed: PlacedBoard,
    board_id: int,
    split: str,
    generator: str,
    targets_per_board: int,
    rng: random.Random,
) -> list[DatasetExample]:
    targets = [symbolic.target_index] + pick_extra_targets(symbolic, rng, targets_per_board - 1)
    return [
        make_example(
            placed, t, id=-1, split=split, board_id=board_id,
            generator=generator, intended=(k == 0),
        )
        for k, t in enumerate(targets)
    ]


def _number(examples: list[DatasetExample]) -> list[DatasetExample]:
    for i, e in enumerate(examples):
        e.id = i
    return examples


def build_naive_dataset(config: GenerationConfig, assignment: HoldoutAssignment) -> Dataset:
    pool = SymbolPool(assignment.train_symbols)
    splits = assign_board_splits(
        config.boards, config.eval_boards("val"), config.eval_boards("test"),
        derive_rng(config.seed, SPLIT_STREAM, NAIVE_STREAM),
    )
    examples, boards = [], []
    for b in range(config.boards):
        rng = derive_rng(config.seed, NAIVE_STREAM, b)
        symbolic, placed = _place_or_resample(lambda: sample_naive_board(pool, rng), rng)
        boards.append(placed)
        examples.extend(
            _board_examples(symbolic, placed, b, splits[b], "naive", config.targets_per_board, rng)
        )
    return Dataset(_number(examples), boards)


def didact_plan(assignment: HoldoutAssignment, repetitions: int) -> list[tuple[SymbolicPiece, ExpressionType]]:
    """(intended target, expression type) per didact board, in board order."""
    return [
        (sym, et)
        for sym in assignment.train_symbols
        for et in assignment.allowed_types(sym)
        for _ in range(repetitions)
    ]


def build_didact_dataset(config: GenerationConfig, assignment: HoldoutAssignment) -> Dataset:
    pool = SymbolPool(assignment.train_symbols)
    plan = didact_plan(assignment, config.repetitions)
    splits = assign_board_splits(
        len(plan), config.eval_boards("val"), config.eval_boards("test"),
        derive_rng(config.seed, SPLIT_STREAM, DIDACT_STREAM),
    )
    examples, boards = [], []
    for b, (target, et) in enumerate(plan):
        rng = derive_rng(config.seed, DIDACT_STREAM, b)
        symbolic, placed = _place_or_resample(lambda: etos_board(target, et, pool, rng), rng)
        boards.append(placed)
        board_examples = _board_examples(
            symbolic, placed, b, splits[b], "didact", config.targets_per_board, rng
        )
        if board_examples[0].expression_type is not et:
            raise AssertionError(f"ETOS board {b} yields {board_examples[0].expression_type} not {et}")
        for e in board_examples:
            if e.split == "train" and assignment.is_held_pair(e.target, e.expression_type):
                e.split = FILTERED
        examples.extend(board_examples)
    return Dataset(_number(examples), boards)


def holdout_plan(assignment: HoldoutAssignment, name: str, split: str) -> tuple[list, SymbolPool]:
    """(target, type) per board of one holdout set, plus its distractor pool."""
    train = assignment.train_symbols
    if name == "ho_color":
        targets = assignment.ho_color_symbols(split)
        return [(t, et) for t in targets for et in EXPRESSION_TYPES], SymbolPool(train + tuple(targets))
    if name == "ho_pos":
        targets = assignment.ho_pos_symbols(split)
        return [(t, et) for t in targets for et in EXPRESSION_TYPES], SymbolPool(train + tuple(targets))
    if name == "ho_uts":
        return [(t, assignment.held_type(t, split)) for t in train], SymbolPool(train)
    raise ValueError(f"unknown holdout set {name!r}")


def build_holdout_set(assignment: HoldoutAssignment, name: str, split: str, seed: int) -> Dataset:
    plan, pool = holdout_plan(assignment, name, split)
    stream = HOLDOUT_SETS.index(name) * len(EVAL_SPLITS) + EVAL_SPLITS.index(split)
    examples, boards = [], []
    for b, (target, et) in enumerate(plan):
        rng = derive_rng(seed, HOLDOUT_STREAM, stream, b)
        symbolic, placed = _place_or_resample(lambda: etos_board(target, et, pool, rng), rng)
        boards.append(placed)
        e = make_example(
            placed, symbolic.target_index, id=b, split=split, board_id=b,
            generator=name, intended=True,
        )
        if e.expression_type is not et:
            raise AssertionError(f"holdout board {b} yields {e.expression_type} not {et}")
        examples.append(e)
    return Dataset(examples, boards)


def build_holdout_sets(assignment: HoldoutAssignment, seed: int) -> dict[str, Dataset]:
    """The six compositional test sets, keyed ``<set>_<split>``."""
    return {
        f"{name}_{split}": build_holdout_set(assignment, name, split, seed)
        for name in HOLDOUT_SETS
        for split in EVAL_SPLITS
    }
