import pytest

from pentoia.core import (
    COLORS,
    EXPRESSION_TYPES,
    POSITION_WORDS,
    POSITIONS,
    PROPERTIES,
    SHAPES,
    ExpressionType,
    PreferenceOrder,
    SymbolicBoard,
    SymbolicPiece,
    enumerate_symbol_space,
    shares_property,
    symbol_index,
)


def test_color_table():
    assert len(COLORS) == 12
    assert COLORS["red"] == (255, 0, 0)
    assert COLORS["orange"] == (255, 165, 0)
    assert COLORS["brown"] == (139, 69, 19)
    assert COLORS["pink"] == (255, 192, 203)
    assert COLORS["olive green"] == (128, 128, 0)
    assert COLORS["navy blue"] == (0, 0, 128)
    assert sorted(c for c in COLORS if " " in c) == ["navy blue", "olive green"]


def _connected(cells):
    cells = set(cells)
    seen, stack = set(), [next(iter(cells))]
    while stack:
        c, r = stack.pop()
        if (c, r) in seen:
            continue
        seen.add((c, r))
        stack.extend(n for n in ((c + 1, r), (c - 1, r), (c, r + 1), (c, r - 1)) if n in cells)
    return seen == cells


def _canonical(cells):
    """Smallest normalized form over the 8 rotations/reflections."""
    forms = []
    cur = list(cells)
    for flip in (False, True):
        cur = [(-c, r) for c, r in cells] if flip else list(cells)
        for _ in range(4):
            cur = [(-r, c) for c, r in cur]
            mc, mr = min(c for c, _ in cur), min(r for _, r in cur)
            forms.append(tuple(sorted((c - mc, r - mr) for c, r in cur)))
    return min(forms)


def test_shapes_are_the_twelve_free_pentominoes():
    assert list(SHAPES) == list("FILNPTUVWXYZ")
    for cells in SHAPES.values():
        assert len(cells) == 5
        assert _connected(cells)
    # pairwise distinct even up to rotation and reflection
    assert len({_canonical(c) for c in SHAPES.values()}) == 12


def test_positions():
    assert len(POSITIONS) == 9
    assert sorted(POSITIONS.values()) == [(c, r) for c in range(3) for r in range(3)]
    for name in POSITIONS:
        assert set(name.split()) <= set(POSITION_WORDS)
    assert "center" in POSITIONS and "center center" not in POSITIONS
    assert "right center" in POSITIONS and "top left" in POSITIONS


def test_symbol_space():
    space = enumerate_symbol_space()
    assert len(space) == 1296
    assert len(set(space)) == 1296
    assert SymbolicPiece("orange", "X", "top center") in space
    for shape in SHAPES:
        assert sum(s.shape == shape for s in space) == 108
    # color-major, then shape, then position
    assert space[0] == SymbolicPiece("red", "F", "top left")
    assert space[1] == SymbolicPiece("red", "F", "top center")
    assert space[9] == SymbolicPiece("red", "I", "top left")
    assert space[108] == SymbolicPiece("orange", "F", "top left")
    assert [symbol_index(s) for s in space] == list(range(1296))


def test_symbol_space_deterministic():
    assert repr(enumerate_symbol_space()) == repr(tuple(enumerate_symbol_space()))


def test_shares_property():
    a = SymbolicPiece("orange", "X", "top center")
    b = SymbolicPiece("orange", "T", "left center")
    assert shares_property(a, b, "color")
    assert not shares_property(a, b, "shape")
    assert not shares_property(a, b, "position")
    for p in PROPERTIES:
        assert shares_property(a, a, p)


def test_unknown_values_rejected():
    with pytest.raises(ValueError):
        SymbolicPiece("magenta", "X", "center")
    with pytest.raises(ValueError):
        SymbolicPiece("red", "Q", "center")
    with pytest.raises(ValueError):
        SymbolicPiece("red", "X", "middle")


def test_expression_types_round_trip():
    assert [et.value for et in EXPRESSION_TYPES] == ["C", "S", "P", "CS", "CP", "SP", "CSP"]
    subsets = set()
    for et in EXPRESSION_TYPES:
        assert ExpressionType.from_properties(et.properties) is et
        subsets.add(frozenset(et.properties))
    assert len(subsets) == 7
    assert ExpressionType.from_properties(["position", "color"]) is ExpressionType.CP
    with pytest.raises(ValueError):
        ExpressionType.from_properties([])


def test_preference_order():
    assert tuple(PreferenceOrder()) == ("color", "shape", "position")
    assert len(PreferenceOrder.all_orders()) == 6
    with pytest.raises(ValueError):
        PreferenceOrder(("color", "color", "shape"))


def _board(*positions):
    return [SymbolicPiece("red", "X", p) for p in positions]


def test_board_validation():
    SymbolicBoard(_board("center", "center", "top left", "top right"), 0)
    with pytest.raises(ValueError, match="more than 2"):
        SymbolicBoard(_board("center", "center", "center", "top left"), 0)
    with pytest.raises(ValueError):
        SymbolicBoard(_board("center", "top left", "top right"), 0)
    with pytest.raises(ValueError):
        SymbolicBoard(_board(*list(POSITIONS)[:9], "center", "top left"), 0)
    with pytest.raises(ValueError):
        SymbolicBoard(_board("center", "top left", "top right", "left center"), 4)
