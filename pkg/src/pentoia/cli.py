"""Command line front end.

    pentoia generate --mode naive --boards 1000 --seed 7 --out data/naive --images
    pentoia holdouts --seed 7 --out data/holdouts
    pentoia evaluate predictions.jsonl data/naive/test.jsonl --out report.json
    pentoia stats data/naive/manifest.jsonl
    pentoia vocab --out vocab.txt
    pentoia render data/naive/manifest.jsonl --out regenerated/
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import yaml

from . import __version__
from .boardgen import render, save_png
from .manifest import (
    ManifestError,
    attach_images,
    board_from_record,
    dumps_json,
    iter_jsonl,
    load_manifest,
    manifest_stats,
    write_dataset,
    write_jsonl,
)
from .metrics import evaluate
from .realize import write_vocabulary
from .sampling import (
    ASSIGNMENT_STREAM,
    GenerationConfig,
    assign_holdouts,
    build_didact_dataset,
    build_holdout_set,
    build_naive_dataset,
    derive_rng,
    EVAL_SPLITS,
    HOLDOUT_SETS,
)

log = logging.getLogger("pentoia")

CONFIG_KEYS = ("mode", "seed", "boards", "targets_per_board", "val_size", "test_size", "images", "out")
DEFAULTS = {"mode": "naive", "seed": 1, "boards": 42_000, "targets_per_board": 4, "images": False}


class CommandError(Exception):
    pass


def resolve_config(args: argparse.Namespace) -> dict:
    """Defaults, then the config file, then explicit flags."""
    settings = dict(DEFAULTS)
    if getattr(args, "config", None):
        loaded = yaml.safe_load(Path(args.config).read_text(encoding="utf-8")) or {}
        if not isinstance(loaded, dict):
            raise CommandError(f"{args.config}: expected a mapping")
        unknown = set(loaded) - set(CONFIG_KEYS)
        if unknown:
            raise CommandError(f"{args.config}: unknown key(s) {sorted(unknown)}")
        settings.update(loaded)
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    if not settings.get("out"):
        raise CommandError("an output directory is required (--out or config 'out')")
    return settings


def _generation_config(settings: dict) -> GenerationConfig:
    try:
        return GenerationConfig(
            seed=int(settings["seed"]),
            boards=int(settings["boards"]),
            targets_per_board=int(settings["targets_per_board"]),
            val_size=settings.get("val_size"),
            test_size=settings.get("test_size"),
            images=bool(settings["images"]),
        )
    except ValueError as exc:
        raise CommandError(str(exc)) from None


def _assignment(seed: int):
    return assign_holdouts(derive_rng(seed, ASSIGNMENT_STREAM))


def cmd_generate(args) -> int:
    settings = resolve_config(args)
    mode = settings["mode"]
    if mode not in ("naive", "didact"):
        raise CommandError(f"unknown mode {mode!r}")
    config = _generation_config(settings)
    if mode == "didact":
        try:
            config.repetitions
        except ValueError as exc:
            raise CommandError(str(exc)) from None
    out = Path(settings["out"])
    out.mkdir(parents=True, exist_ok=True)

    assignment = _assignment(config.seed)
    build = build_naive_dataset if mode == "naive" else build_didact_dataset
    log.info("building %s dataset: %d boards, seed %d", mode, config.boards, config.seed)
    dataset = build(config, assignment)
    attach_images(dataset, out, emit=config.images)
    counts = write_dataset(dataset, out)
    (out / "assignment.json").write_text(dumps_json(assignment.to_dict()), encoding="utf-8")

    print(f"{mode}: {len(dataset.boards)} boards, {counts['total']} examples")
    for split, n in counts.items():
        if split != "total":
            print(f"  {split}: {n}")
    return 0


def cmd_holdouts(args) -> int:
    settings = resolve_config(args)
    seed = int(settings["seed"])
    out = Path(settings["out"])
    out.mkdir(parents=True, exist_ok=True)
    assignment = _assignment(seed)
    for name in HOLDOUT_SETS:
        for split in EVAL_SPLITS:
            key = f"{name}_{split}"
            dataset = build_holdout_set(assignment, name, split, seed)
            attach_images(dataset, out, subdir=f"images/{key}", emit=bool(settings["images"]))
            n = write_jsonl(out / f"{key}.jsonl", (e.to_record() for e in dataset.examples))
            print(f"{key}: {n}")
    (out / "assignment.json").write_text(dumps_json(assignment.to_dict()), encoding="utf-8")
    return 0


def cmd_evaluate(args) -> int:
    try:
        references = {r["id"]: r for r in load_manifest(args.manifest)}
        predictions = []
        for lineno, obj in iter_jsonl(args.predictions):
            if "id" not in obj or "prediction" not in obj:
                raise CommandError(f"{args.predictions}:{lineno}: need fields 'id' and 'prediction'")
            predictions.append(obj)
    except ManifestError as exc:
        raise CommandError(str(exc)) from None

    unknown = [p["id"] for p in predictions if p["id"] not in references]
    if unknown:
        shown = ", ".join(map(str, unknown[:20]))
        more = f" (+{len(unknown) - 20} more)" if len(unknown) > 20 else ""
        raise CommandError(f"{len(unknown)} prediction id(s) not in manifest: {shown}{more}")
    if not predictions:
        raise CommandError("no predictions")

    refs = [references[p["id"]] for p in predictions]
    report = evaluate(
        [p["prediction"] for p in predictions],
        [r["expression"] for r in refs],
        [r["split"] for r in refs],
    )
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(dumps_json(report.to_dict()), encoding="utf-8")
    for split, scores in report.per_split.items():
        print(f"{split}: BLEU@1 {scores['bleu1']:.2f}  SentA {scores['sentence_accuracy']:.2f}  (n={scores['count']})")
    print(f"all: BLEU@1 {report.bleu1:.2f}  SentA {report.sentence_accuracy:.2f}  (n={report.count})")
    return 0


def cmd_stats(args) -> int:
    try:
        records = load_manifest(args.manifest)
    except ManifestError as exc:
        raise CommandError(str(exc)) from None
    stats = manifest_stats(records)
    if not args.per_symbol:
        stats.pop("per_symbol")
    text = dumps_json(stats)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_vocab(args) -> int:
    path = write_vocabulary(args.out)
    print(f"vocabulary written to {path}")
    return 0


def cmd_render(args) -> int:
    """Regenerate board images from the tile placements stored in a manifest."""
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    done = set()
    for record in load_manifest(args.manifest):
        name = record["image"] or f"{record['id']:06d}.png"
        if name in done:
            continue
        done.add(name)
        path = out / name
        path.parent.mkdir(parents=True, exist_ok=True)
        save_png(render(board_from_record(record)), path)
    print(f"{len(done)} images written to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pentoia", description=__doc__.splitlines()[0] or None)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="YAML file with generation settings")
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--images", action=argparse.BooleanOptionalAction, default=None)

    gen = sub.add_parser("generate", help="build a naive or didact training dataset")
    add_common(gen)
    gen.add_argument("--mode", choices=("naive", "didact"))
    gen.add_argument("--boards", type=int)
    gen.add_argument("--targets-per-board", dest="targets_per_board", type=int)
    gen.add_argument("--val-size", dest="val_size", type=int)
    gen.add_argument("--test-size", dest="test_size", type=int)
    gen.set_defaults(func=cmd_generate)

    ho = sub.add_parser("holdouts", help="build the six compositional holdout sets")
    add_common(ho)
    ho.set_defaults(func=cmd_holdouts)

    ev = sub.add_parser("evaluate", help="score a predictions file against a manifest")
    ev.add_argument("predictions")
    ev.add_argument("manifest")
    ev.add_argument("--out", default="report.json")
    ev.set_defaults(func=cmd_evaluate)

    st = sub.add_parser("stats", help="histograms over a manifest")
    st.add_argument("manifest")
    st.add_argument("--out")
    st.add_argument("--per-symbol", action="store_true", help="include per-symbol target/distractor counts")
    st.set_defaults(func=cmd_stats)

    vo = sub.add_parser("vocab", help="export the word list")
    vo.add_argument("--out", default="vocab.txt")
    vo.set_defaults(func=cmd_vocab)

    re_ = sub.add_parser("render", help="regenerate PNGs from a manifest")
    re_.add_argument("manifest")
    re_.add_argument("--out", required=True)
    re_.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (CommandError, ManifestError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
