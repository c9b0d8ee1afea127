"""CLI for the offline annotation scripts: annotate, verify."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .annotate import ProviderConfig, annotate_corpus, verify_annotations


def cmd_annotate(args) -> int:
    try:
        config = (
            ProviderConfig.from_file(Path(args.config)) if args.config else ProviderConfig()
        )
    except (ValueError, OSError, TypeError) as err:
        print(f"bad provider config: {err}", file=sys.stderr)
        return 2
    report = annotate_corpus(Path(args.store), config, Path(args.out))
    for name in report.written:
        print(name)
    for skip in report.skipped:
        print(f"skipped {skip['id']}: {skip['reason']}", file=sys.stderr)
    return 0 if report.ok else 1


def cmd_verify(args) -> int:
    results = verify_annotations(Path(args.store), Path(args.annotations))
    return 0 if not results["failed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sumlens-annotate")
    sub = parser.add_subparsers(dest="command", required=True)

    annotate = sub.add_parser("annotate", help="run backends over a store, emit standoff files")
    annotate.add_argument("--store", required=True)
    annotate.add_argument("--config", default=None, help="provider config json")
    annotate.add_argument("--out", required=True)
    annotate.set_defaults(func=cmd_annotate)

    verify = sub.add_parser("verify", help="validate standoff files against a store")
    verify.add_argument("--store", required=True)
    verify.add_argument("--annotations", required=True)
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING)
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
