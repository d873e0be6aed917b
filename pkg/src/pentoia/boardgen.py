"""Tile placement of symbolic boards and their pixel rendering."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from PIL import Image

from .core import COLORS, POSITIONS, ROTATIONS, SHAPES, SymbolicBoard, SymbolicPiece

GRID_SIZE = 30
AREA_SIZE = 10
IMAGE_SIZE = 224
MAX_PLACEMENT_TRIES = 100

WHITE = (255, 255, 255)
BLACK = (0, 0, 0)

Tile = tuple[int, int]


class PlacementError(RuntimeError):
    """Raised when a piece cannot be placed within the retry bound."""


def area_rect(position: str) -> tuple[int, int, int, int]:
    """(col0, row0, col1, row1) tile rectangle of an area, end exclusive."""
    band_col, band_row = POSITIONS[position]
    c0, r0 = band_col * AREA_SIZE, band_row * AREA_SIZE
    return c0, r0, c0 + AREA_SIZE, r0 + AREA_SIZE


def tile_edges() -> list[int]:
    """Pixel boundaries of the tile grid; tile k spans [edges[k], edges[k+1])."""
    # floor(x + 0.5); no exact halves occur for 224/30 but avoid banker's rounding anyway
    return [int(k * IMAGE_SIZE / GRID_SIZE + 0.5) for k in range(GRID_SIZE + 1)]


TILE_EDGES = tile_edges()


@lru_cache(maxsize=None)
def rotated_cells(shape: str, rotation: int) -> tuple[Tile, ...]:
    """Cells of `shape` rotated clockwise by `rotation` degrees, shifted to the origin."""
    if rotation not in ROTATIONS:
        raise ValueError(f"rotation must be one of {ROTATIONS}, got {rotation}")
    cells = list(SHAPES[shape])
    for _ in range(rotation // 90):
        # clockwise on screen (rows grow downwards)
        cells = [(-r, c) for c, r in cells]
    min_c = min(c for c, _ in cells)
    min_r = min(r for _, r in cells)
    return tuple(sorted((c - min_c, r - min_r) for c, r in cells))


@dataclass(frozen=True)
class PlacedPiece:
    symbol: SymbolicPiece
    rotation: int
    anchor: Tile
    occupied: tuple[Tile, ...] = field(default=())

    def __post_init__(self):
        cells = rotated_cells(self.symbol.shape, self.rotation)
        expected = tuple(sorted((self.anchor[0] + c, self.anchor[1] + r) for c, r in cells))
        if self.occupied and tuple(sorted(map(tuple, self.occupied))) != expected:
            raise ValueError("occupied tiles do not match shape, rotation and anchor")
        object.__setattr__(self, "occupied", expected)
        object.__setattr__(self, "anchor", tuple(self.anchor))
        for c, r in self.occupied:
            if not (0 <= c < GRID_SIZE and 0 <= r < GRID_SIZE):
                raise ValueError(f"tile {(c, r)} outside the {GRID_SIZE}x{GRID_SIZE} grid")

    @property
    def bbox(self) -> tuple[int, int, int, int]:
        return bbox_of(self)


@dataclass(frozen=True)
class PlacedBoard:
    pieces: tuple[PlacedPiece, ...]
    target_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        seen: set[Tile] = set()
        for piece in self.pieces:
            overlap = seen.intersection(piece.occupied)
            if overlap:
                raise ValueError(f"pieces overlap on tiles {sorted(overlap)}")
            seen.update(piece.occupied)

    @property
    def symbols(self) -> tuple[SymbolicPiece, ...]:
        return tuple(p.symbol for p in self.pieces)

    def symbolic(self) -> SymbolicBoard:
        return SymbolicBoard(self.symbols, self.target_index)


def place_pieces(
    board: SymbolicBoard,
    rng: random.Random,
    max_tries: int = MAX_PLACEMENT_TRIES,
) -> PlacedBoard:
    """Rotate and drop each piece at a uniform anchor inside its area.

    A colliding anchor is resampled up to `max_tries` times per piece before
    giving up with :class:`PlacementError`.
    """
    occupied: set[Tile] = set()
    placed = []
    for symbol in board.pieces:
        rotation = rng.choice(ROTATIONS)
        cells = rotated_cells(symbol.shape, rotation)
        width = max(c for c, _ in cells) + 1
        height = max(r for _, r in cells) + 1
        c0, r0, c1, r1 = area_rect(symbol.position)
        for _ in range(max_tries):
            anchor = (rng.randrange(c0, c1 - width + 1), rng.randrange(r0, r1 - height + 1))
            tiles = {(anchor[0] + c, anchor[1] + r) for c, r in cells}
            if occupied.isdisjoint(tiles):
                break
        else:
            raise PlacementError(f"could not place {symbol} after {max_tries} tries")
        occupied |= tiles
        placed.append(PlacedPiece(symbol, rotation, anchor))
    return PlacedBoard(tuple(placed), board.target_index)


def tile_pixels(tile: Tile) -> tuple[int, int, int, int]:
    """(x0, y0, x1, y1) pixel span of a tile, end exclusive."""
    c, r = tile
    return TILE_EDGES[c], TILE_EDGES[r], TILE_EDGES[c + 1], TILE_EDGES[r + 1]


def bbox_of(piece: PlacedPiece) -> tuple[int, int, int, int]:
    """Tight (x, y, w, h) pixel box of the piece, border included."""
    cols = [c for c, _ in piece.occupied]
    rows = [r for _, r in piece.occupied]
    x0, y0 = TILE_EDGES[min(cols)], TILE_EDGES[min(rows)]
    x1, y1 = TILE_EDGES[max(cols) + 1], TILE_EDGES[max(rows) + 1]
    return x0, y0, x1 - x0, y1 - y0


def _paint_piece(canvas: np.ndarray, piece: PlacedPiece) -> None:
    tiles = set(piece.occupied)
    rgb = COLORS[piece.symbol.color]
    for c, r in tiles:
        x0, y0, x1, y1 = tile_pixels((c, r))
        canvas[y0:y1, x0:x1] = rgb
        # outline: tile sides not shared with another tile of this piece
        if (c - 1, r) not in tiles:
            canvas[y0:y1, x0] = BLACK
        if (c + 1, r) not in tiles:
            canvas[y0:y1, x1 - 1] = BLACK
        if (c, r - 1) not in tiles:
            canvas[y0, x0:x1] = BLACK
        if (c, r + 1) not in tiles:
            canvas[y1 - 1, x0:x1] = BLACK


def render(placed: PlacedBoard) -> np.ndarray:
    """224x224x3 uint8 raster: white background, filled pieces, 1px black outline."""
    canvas = np.empty((IMAGE_SIZE, IMAGE_SIZE, 3), dtype=np.uint8)
    canvas[:] = WHITE
    for piece in placed.pieces:
        _paint_piece(canvas, piece)
    return canvas


def save_png(image: np.ndarray, path) -> None:
    Image.fromarray(image).save(path, format="PNG")


def crop_target(
    image: np.ndarray,
    bbox: tuple[int, int, int, int],
    dilation: int = 5,
) -> np.ndarray:
    """Cut out `bbox` grown by `dilation` pixels per side, clamped to the image."""
    x, y, w, h = bbox
    if w <= 0 or h <= 0:
        raise ValueError(f"degenerate bbox {bbox}")
    height, width = image.shape[:2]
    if x < 0 or y < 0 or x + w > width or y + h > height:
        raise ValueError(f"bbox {bbox} outside image of size {width}x{height}")
    x0, y0 = max(0, x - dilation), max(0, y - dilation)
    x1, y1 = min(width, x + w + dilation), min(height, y + h + dilation)
    return image[y0:y1, x0:x1].copy()
