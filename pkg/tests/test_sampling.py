import random
from collections import Counter

import pytest

from pentoia.core import (
    EXPRESSION_TYPES,
    ExpressionType,
    SymbolicBoard,
    SymbolicPiece,
    area_counts,
    enumerate_symbol_space,
)
from pentoia.ia import classify_expression_type, run_ia
from pentoia.realize import realize
from pentoia.sampling import (
    FILTERED,
    RECIPES,
    GenerationConfig,
    SymbolPool,
    assign_holdouts,
    derive_rng,
    etos_board,
    matches,
    pick_extra_targets,
    sample_naive_board,
)

T_BLUE_CENTER = SymbolicPiece("blue", "T", "center")


def test_assignment_sizes(assignment):
    assert len(assignment.train_symbols) == 840
    assert len(set(assignment.train_symbols)) == 840
    for split in ("val", "test"):
        assert len(assignment.ho_color_symbols(split)) == 108
        assert len(assignment.ho_pos_symbols(split)) == 120
    assert len(assignment.held_positions) == 120
    assert len(assignment.held_expression_types) == 840


def test_assignment_pairs_distinct(assignment):
    for pair in assignment.held_colors.values():
        assert pair[0] != pair[1]
    for pair in assignment.held_positions.values():
        assert pair[0] != pair[1]
    for sym, pair in assignment.held_expression_types.items():
        assert pair[0] != pair[1]
        assert len(assignment.allowed_types(sym)) == 5


def test_assignment_partitions_symbol_space(assignment):
    train = set(assignment.train_symbols)
    held = [set(assignment.ho_color_symbols(s)) | set(assignment.ho_pos_symbols(s)) for s in ("val", "test")]
    assert not train & held[0] and not train & held[1] and not held[0] & held[1]
    assert len(train) + len(held[0]) + len(held[1]) == 1296
    assert set(assignment.held_expression_types) == train


def test_assignment_deterministic():
    a = assign_holdouts(derive_rng(5, 0))
    b = assign_holdouts(derive_rng(5, 0))
    c = assign_holdouts(derive_rng(6, 0))
    assert a == b
    assert a.train_symbols != c.train_symbols


def test_derive_rng_independent_streams():
    assert derive_rng(1, 2, 3).random() == derive_rng(1, 2, 3).random()
    assert derive_rng(1, 2, 3).random() != derive_rng(1, 2, 4).random()


def test_naive_piece_count_frequencies(assignment):
    pool = SymbolPool(assignment.train_symbols)
    rng = random.Random(0)
    counts = Counter(len(sample_naive_board(pool, rng).pieces) for _ in range(10_000))
    assert set(counts) == set(range(4, 11))
    for n, c in counts.items():
        assert abs(c / 10_000 - 1 / 7) < 0.02


def test_naive_boards_valid(assignment):
    pool = SymbolPool(assignment.train_symbols)
    rng = random.Random(1)
    train = set(assignment.train_symbols)
    for _ in range(2000):
        board = sample_naive_board(pool, rng)
        assert set(board.pieces) <= train
        assert max(area_counts(board.pieces).values()) <= 2


def test_etos_shape_example():
    pool = SymbolPool(enumerate_symbol_space())
    board = etos_board(T_BLUE_CENTER, ExpressionType.S, pool, random.Random(0))
    assert board.target == T_BLUE_CENTER
    assert run_ia(board).selections == (("shape", "T"),)
    assert all(d.color == "blue" and d.shape != "T" for d in board.distractors)


def test_etos_position_example():
    pool = SymbolPool(enumerate_symbol_space())
    for seed in range(20):
        board = etos_board(T_BLUE_CENTER, ExpressionType.P, pool, random.Random(seed))
        assert all(d.color == "blue" and d.shape == "T" and d.position != "center" for d in board.distractors)
        assert run_ia(board).selections == (("position", "center"),)


@pytest.mark.parametrize("et", EXPRESSION_TYPES)
def test_etos_follows_recipe(assignment, et):
    pool = SymbolPool(assignment.train_symbols)
    rng = random.Random(et.value)
    recipe = RECIPES[et]
    for _ in range(100):
        target = rng.choice(assignment.train_symbols)
        board = etos_board(target, et, pool, rng)
        assert 4 <= len(board.pieces) <= 10
        assert max(area_counts(board.pieces).values()) <= 2
        assert set(board.distractors) <= set(assignment.train_symbols)
        for rel in recipe.required:
            assert any(matches(d, target, rel) for d in board.distractors)
        for d in board.distractors:
            assert any(matches(d, target, rel) for rel in recipe.fillers + recipe.required)
        d = run_ia(board)
        assert not d.ambiguous
        assert classify_expression_type(d) is et


def test_etos_csp_needs_three_distractors(assignment):
    pool = SymbolPool(assignment.train_symbols)
    rng = random.Random(2)
    for _ in range(50):
        board = etos_board(assignment.train_symbols[0], ExpressionType.CSP, pool, rng)
        assert len(board.distractors) >= 3


def test_etos_infeasible():
    from pentoia.sampling import EtosError

    pool = SymbolPool([T_BLUE_CENTER, SymbolicPiece("red", "X", "center")])
    with pytest.raises(EtosError):
        etos_board(T_BLUE_CENTER, ExpressionType.P, pool, random.Random(0))


def test_pick_extra_targets():
    pieces = [SymbolicPiece("red", s, p) for s, p in [("X", "center"), ("T", "top left"), ("L", "top right"), ("I", "bottom left")]]
    board = SymbolicBoard(pieces, 2)
    picks = pick_extra_targets(board, random.Random(0))
    assert sorted(picks) == [0, 1, 3]
    rng = random.Random(4)
    big = SymbolicBoard(pieces + [SymbolicPiece("red", "U", "bottom right")] * 2, 0)
    for _ in range(100):
        picks = pick_extra_targets(big, rng)
        assert len(set(picks)) == 3 and 0 not in picks


def test_config_validation():
    with pytest.raises(ValueError):
        GenerationConfig(boards=10, targets_per_board=5)
    with pytest.raises(ValueError):
        GenerationConfig(boards=10, val_size=3)
    with pytest.raises(ValueError):
        GenerationConfig(boards=10, val_size=40, test_size=4)
    with pytest.raises(ValueError):
        GenerationConfig(boards=0)
    assert GenerationConfig().eval_boards("val") == 2500
    assert GenerationConfig(boards=1000).eval_boards("test") == 60
    assert GenerationConfig(boards=42_000).repetitions == 10
    with pytest.raises(ValueError):
        GenerationConfig(boards=1000).repetitions


def _check_examples(dataset):
    for e in dataset.examples:
        board = SymbolicBoard(e.board.symbols, e.target_index)
        d = run_ia(board)
        assert e.distinguishing == d
        assert e.expression == realize(d)
        assert e.expression_type is classify_expression_type(d)


def test_naive_dataset(naive_dataset, assignment):
    ds = naive_dataset
    assert len(ds.examples) == 4000 and len(ds.boards) == 1000
    assert ds.counts() == {"train": 3520, "val": 240, "test": 240}
    assert [e.id for e in ds.examples] == list(range(4000))
    _check_examples(ds)
    train = set(assignment.train_symbols)
    by_board = {}
    for e in ds.examples:
        by_board.setdefault(e.board_id, []).append(e)
        assert e.target in train
    for examples in by_board.values():
        assert len(examples) == 4
        assert len({e.split for e in examples}) == 1
        assert len({e.target_index for e in examples}) == 4
        assert len({id(e.board) for e in examples}) == 1
        assert sum(e.intended for e in examples) == 1


def test_didact_dataset(didact_dataset, assignment):
    ds = didact_dataset
    assert len(ds.boards) == 4200 and len(ds.examples) == 16_800
    _check_examples(ds)
    intended = Counter((e.target, e.expression_type) for e in ds.examples if e.intended)
    expected = {(s, et) for s in assignment.train_symbols for et in assignment.allowed_types(s)}
    assert set(intended) == expected
    assert set(intended.values()) == {1}
    for e in ds.examples:
        if e.split == "train":
            assert not assignment.is_held_pair(e.target, e.expression_type)
        if e.split == FILTERED:
            assert assignment.is_held_pair(e.target, e.expression_type) and not e.intended
    counts = ds.counts()
    assert counts["val"] == counts["test"] == 4 * 250
    assert counts["train"] + counts[FILTERED] == 16_800 - 2000


def test_didact_reuse(didact_dataset):
    as_target, as_distractor = Counter(), Counter()
    boards_as_target = {}
    for e in didact_dataset.examples:
        as_target[e.target] += 1
        boards_as_target.setdefault(e.target, set()).add(e.board_id)
        for i, p in enumerate(e.board.symbols):
            if i != e.target_index:
                as_distractor[p] += 1
    assert len(as_target) == 840
    assert min(len(b) for b in boards_as_target.values()) >= 2
    assert sum(as_distractor.values()) / 840 > sum(as_target.values()) / 840


def test_holdout_sets(holdout_sets, assignment):
    sizes = {k: len(v.examples) for k, v in holdout_sets.items()}
    assert sizes == {
        "ho_color_val": 756, "ho_color_test": 756,
        "ho_pos_val": 840, "ho_pos_test": 840,
        "ho_uts_val": 840, "ho_uts_test": 840,
    }
    for name, ds in holdout_sets.items():
        _check_examples(ds)
        tps = Counter(e.target for e in ds.examples)
        pairs = Counter((e.target, e.expression_type) for e in ds.examples)
        assert set(pairs.values()) == {1}
        expected_tps = {"ho_color": 108, "ho_pos": 120, "ho_uts": 840}[name.rsplit("_", 1)[0]]
        assert len(tps) == expected_tps
    for split in ("val", "test"):
        assert {e.target for e in holdout_sets[f"ho_color_{split}"].examples} == set(assignment.ho_color_symbols(split))
        assert {e.target for e in holdout_sets[f"ho_pos_{split}"].examples} == set(assignment.ho_pos_symbols(split))
        for e in holdout_sets[f"ho_uts_{split}"].examples:
            assert e.expression_type is assignment.held_type(e.target, split)


def test_holdout_targets_never_train_targets(holdout_sets, naive_dataset, didact_dataset):
    ho = set()
    for key in ("ho_color_val", "ho_color_test", "ho_pos_val", "ho_pos_test"):
        ho |= {e.target for e in holdout_sets[key].examples}
    for ds in (naive_dataset, didact_dataset):
        assert not ho & {e.target for e in ds.examples}


def test_build_deterministic(assignment, naive_dataset):
    from pentoia.sampling import build_naive_dataset

    again = build_naive_dataset(GenerationConfig(seed=1, boards=1000), assignment)
    assert [e.to_record() for e in again.examples] == [e.to_record() for e in naive_dataset.examples]
