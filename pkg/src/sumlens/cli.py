"""Command-line driver: ingest, precompute, serve, fixture."""

from __future__ import annotations

import argparse
import json
import shutil
import sys
from pathlib import Path

from .align import AlignConfig
from .corpus import (
    ANNOTATIONS_SUBDIR,
    INDEX_SUBDIR,
    add_model_outputs,
    ingest_corpus,
    load_store,
    save_store,
)
from .errors import AnnotationError, IngestError, LoadError
from .fixture import FIXTURE_SEED, write_fixture_corpus
from .index import persist_index
from .precompute import build_index
from .service import ServiceConfig, create_app, load_context

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_ANNOTATIONS = 3


def _emit(record: dict) -> None:
    print(json.dumps(record, ensure_ascii=False, sort_keys=True))


def cmd_ingest(args) -> int:
    out_dir = Path(args.out)
    if (out_dir / "manifest.json").exists() and not args.force:
        print(f"refusing to overwrite existing store at {out_dir} (use --force)", file=sys.stderr)
        return EXIT_BAD_INPUT
    manifest_path = Path(args.manifest)
    try:
        store = ingest_corpus(manifest_path)
        _emit({"event": "documents", "count": store.manifest.document_count})
        raw = json.loads(manifest_path.read_text(encoding="utf-8"))
        total_accepted = 0
        for entry in raw.get("models", []):
            report = add_model_outputs(
                store, entry["model_id"], manifest_path.parent / entry["outputs_file"]
            )
            total_accepted += report.accepted
            _emit({"event": "model_outputs", **report.to_record()})
        store.verify_integrity()
        save_store(store, out_dir)
    except IngestError as err:
        print(f"ingest failed: {err}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if args.annotations:
        annotations_dir = Path(args.annotations)
        if not annotations_dir.is_dir():
            print(f"annotations directory not found: {annotations_dir}", file=sys.stderr)
            return EXIT_BAD_INPUT
        target = out_dir / ANNOTATIONS_SUBDIR
        target.mkdir(parents=True, exist_ok=True)
        for path in sorted(annotations_dir.glob("*.jsonl")):
            shutil.copyfile(path, target / path.name)
    _emit({"event": "done", "store": str(out_dir), "accepted": total_accepted})
    return EXIT_OK


def cmd_precompute(args) -> int:
    store_dir = Path(args.store)
    try:
        store = load_store(store_dir)
        config = AlignConfig.from_file(Path(args.config))
    except (LoadError, IngestError, ValueError, OSError) as err:
        print(f"precompute failed: {err}", file=sys.stderr)
        return EXIT_BAD_INPUT
    index_dir = store_dir / INDEX_SUBDIR
    if index_dir.exists() and any(index_dir.iterdir()):
        print(f"index already exists at {index_dir}; indexes are write-once", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        index = build_index(store, config, jobs=args.jobs)
        persist_index(index, index_dir)
    except AnnotationError as err:
        print(f"annotation error: {err}", file=sys.stderr)
        return EXIT_ANNOTATIONS
    except LoadError as err:
        print(f"precompute failed: {err}", file=sys.stderr)
        return EXIT_BAD_INPUT
    _emit({"event": "precompute", "pairs": len(index.alignments), "index": str(index_dir)})
    return EXIT_OK


def cmd_serve(args) -> int:
    config = ServiceConfig(
        index_dir=Path(args.index),
        listen_address=args.listen,
        cors_allowed_origins=args.cors or ["*"],
    )
    try:
        ctx = load_context(config.index_dir)
    except LoadError as err:
        print(f"serve failed: {err}", file=sys.stderr)
        return EXIT_BAD_INPUT
    app = create_app(ctx, config.cors_allowed_origins)
    import uvicorn

    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return EXIT_OK


def cmd_fixture(args) -> int:
    out = write_fixture_corpus(Path(args.out), seed=args.seed)
    _emit({"event": "fixture", "dir": str(out)})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sumlens")
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="normalize and store a corpus plus model outputs")
    ingest.add_argument("--manifest", required=True)
    ingest.add_argument("--annotations", default=None, help="directory of standoff files to attach")
    ingest.add_argument("--out", required=True)
    ingest.add_argument("--force", action="store_true")
    ingest.set_defaults(func=cmd_ingest)

    precompute = sub.add_parser("precompute", help="build the immutable index for a store")
    precompute.add_argument("--store", required=True)
    precompute.add_argument("--config", required=True, help="align.json")
    precompute.add_argument("--jobs", type=int, default=1)
    precompute.set_defaults(func=cmd_precompute)

    serve = sub.add_parser("serve", help="serve the JSON API over a precomputed index")
    serve.add_argument("--index", required=True)
    serve.add_argument("--listen", default="127.0.0.1:8080")
    serve.add_argument("--cors", action="append", default=None)
    serve.set_defaults(func=cmd_serve)

    fixture = sub.add_parser("fixture", help="write the synthetic fixture corpus")
    fixture.add_argument("--out", required=True)
    fixture.add_argument("--seed", type=int, default=FIXTURE_SEED)
    fixture.set_defaults(func=cmd_fixture)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
