"""JSON-lines manifests, image emission and dataset statistics."""
from __future__ import annotations

import json
from collections import Counter
from pathlib import Path
from typing import Iterable, Iterator

from .boardgen import PlacedBoard, PlacedPiece, render, save_png
from .core import COLORS, EXPRESSION_TYPES, POSITIONS, ROTATIONS, SHAPES, SymbolicPiece
from .sampling import Dataset

RECORD_FIELDS = (
    "id", "split", "generator", "image", "pieces", "target_index",
    "expression", "expression_type", "ambiguous",
)


class ManifestError(ValueError):
    pass


def dumps_record(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False, separators=(", ", ": "))


def write_jsonl(path: str | Path, records: Iterable[dict]) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with path.open("w", encoding="utf-8", newline="\n") as f:
        for record in records:
            f.write(dumps_record(record) + "\n")
            n += 1
    return n


def iter_jsonl(path: str | Path) -> Iterator[tuple[int, dict]]:
    """Yield (line number, object) pairs; blank lines are skipped."""
    with Path(path).open(encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from None
            if not isinstance(obj, dict):
                raise ManifestError(f"{path}:{lineno}: expected a JSON object")
            yield lineno, obj


def load_manifest(path: str | Path) -> list[dict]:
    records = []
    for lineno, record in iter_jsonl(path):
        missing = [k for k in RECORD_FIELDS if k not in record]
        if missing:
            raise ManifestError(f"{path}:{lineno}: missing field(s) {missing}")
        records.append(record)
    return records


def board_from_record(record: dict) -> PlacedBoard:
    """Rebuild the placed board stored in a manifest record."""
    pieces = []
    for p in record["pieces"]:
        tiles = [tuple(t) for t in p["tiles"]]
        cols = [c for c, _ in tiles]
        rows = [r for _, r in tiles]
        symbol = SymbolicPiece(p["color"], p["shape"], p["position"])
        # anchor is the corner of the rotated cell set's bounding box
        pieces.append(PlacedPiece(symbol, p["rotation"], (min(cols), min(rows)), tuple(tiles)))
    return PlacedBoard(tuple(pieces), record["target_index"])


def image_name(board_id: int) -> str:
    return f"{board_id:06d}.png"


def attach_images(dataset: Dataset, out_dir: Path, subdir: str = "images", emit: bool = True) -> None:
    """Render each board once and point its examples at the PNG."""
    if not emit:
        for e in dataset.examples:
            e.image = None
        return
    image_dir = out_dir / subdir
    image_dir.mkdir(parents=True, exist_ok=True)
    for board_id, board in enumerate(dataset.boards):
        save_png(render(board), image_dir / image_name(board_id))
    for e in dataset.examples:
        e.image = f"{subdir}/{image_name(e.board_id)}"


def write_dataset(dataset: Dataset, out_dir: Path, name: str = "manifest") -> dict[str, int]:
    """manifest.jsonl with every record plus one file per split tag."""
    records = [e.to_record() for e in dataset.examples]
    write_jsonl(out_dir / f"{name}.jsonl", records)
    counts: dict[str, int] = {}
    for split in sorted({r["split"] for r in records}):
        counts[split] = write_jsonl(out_dir / f"{split}.jsonl", (r for r in records if r["split"] == split))
    counts["total"] = len(records)
    return counts


def manifest_stats(records: list[dict]) -> dict:
    """Type histogram, target property histograms and per-symbol reuse counts."""
    types = {et.value: 0 for et in EXPRESSION_TYPES}
    colors = dict.fromkeys(COLORS, 0)
    shapes = dict.fromkeys(SHAPES, 0)
    positions = dict.fromkeys(POSITIONS, 0)
    rotations = {str(r): 0 for r in ROTATIONS}
    as_target: Counter = Counter()
    as_distractor: Counter = Counter()
    splits: Counter = Counter()
    ambiguous = 0

    for r in records:
        splits[r["split"]] += 1
        types[r["expression_type"]] += 1
        ambiguous += bool(r["ambiguous"])
        for i, p in enumerate(r["pieces"]):
            key = f'{p["color"]}|{p["shape"]}|{p["position"]}'
            if i == r["target_index"]:
                colors[p["color"]] += 1
                shapes[p["shape"]] += 1
                positions[p["position"]] += 1
                rotations[str(p["rotation"])] += 1
                as_target[key] += 1
            else:
                as_distractor[key] += 1

    symbols = sorted(set(as_target) | set(as_distractor))
    per_symbol = {
        s: {"target": as_target[s], "distractor": as_distractor[s]} for s in symbols
    }
    n_targets = len(as_target) or 1
    return {
        "records": len(records),
        "splits": dict(sorted(splits.items())),
        "ambiguous": ambiguous,
        "expression_types": types,
        "target_colors": colors,
        "target_shapes": shapes,
        "target_positions": positions,
        "target_rotations": rotations,
        "symbols_as_target": len(as_target),
        "mean_target_contexts": sum(as_target.values()) / n_targets,
        "mean_distractor_contexts": (
            sum(as_distractor[s] for s in as_target) / n_targets
        ),
        "per_symbol": per_symbol,
    }


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
