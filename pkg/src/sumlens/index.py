"""The immutable precomputed index the service reads.

A write-once directory of alignments, metric records, per-model aggregates,
and the persisted position-bias samples. Identical inputs persist to
byte-identical directories.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .align import AlignmentRecord
from .corpus import CorpusManifest, dumps_canonical, read_jsonl, write_jsonl
from .errors import LoadError
from .metrics import AggregateRecord, MetricRecord

INDEX_VERSION = 1

_FILES = (
    "index.json",
    "manifest.json",
    "alignments.jsonl",
    "metrics.jsonl",
    "aggregates.json",
    "position_samples.json",
)


@dataclass
class Index:
    manifest: CorpusManifest
    alignments: dict[tuple[str, str], AlignmentRecord] = field(default_factory=dict)
    metrics: dict[tuple[str, str], MetricRecord] = field(default_factory=dict)
    aggregates: dict[str, AggregateRecord] = field(default_factory=dict)
    position_samples: dict[str, list[str]] = field(default_factory=dict)

    def validate_complete(self) -> None:
        if set(self.alignments) != set(self.metrics):
            raise LoadError("index incomplete: alignments and metrics cover different pairs")
        models = set(self.manifest.model_ids)
        if set(self.aggregates) != models:
            raise LoadError("index incomplete: aggregates do not cover every model")
        if set(self.position_samples) != models:
            raise LoadError("index incomplete: position samples do not cover every model")


def persist_index(index: Index, out_dir: Path) -> None:
    """Write the index once; refuses to overwrite an existing one."""
    index.validate_complete()
    out_dir = Path(out_dir)
    if out_dir.exists() and any(out_dir.iterdir()):
        raise LoadError(f"index directory {out_dir} already exists; indexes are write-once")
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "index.json").write_text(
        dumps_canonical({"version": INDEX_VERSION, "corpus_id": index.manifest.corpus_id}) + "\n",
        encoding="utf-8",
        newline="\n",
    )
    (out_dir / "manifest.json").write_text(
        dumps_canonical(index.manifest.to_record()) + "\n", encoding="utf-8", newline="\n"
    )
    write_jsonl(
        out_dir / "alignments.jsonl",
        (index.alignments[key].to_record() for key in sorted(index.alignments)),
    )
    write_jsonl(
        out_dir / "metrics.jsonl",
        (
            {"model_id": key[0], "doc_id": key[1], **index.metrics[key].to_record()}
            for key in sorted(index.metrics)
        ),
    )
    (out_dir / "aggregates.json").write_text(
        dumps_canonical(
            {model_id: agg.to_record() for model_id, agg in sorted(index.aggregates.items())}
        )
        + "\n",
        encoding="utf-8",
        newline="\n",
    )
    (out_dir / "position_samples.json").write_text(
        dumps_canonical(dict(sorted(index.position_samples.items()))) + "\n",
        encoding="utf-8",
        newline="\n",
    )


def load_index(index_dir: Path) -> Index:
    index_dir = Path(index_dir)
    for name in _FILES:
        if not (index_dir / name).exists():
            raise LoadError(f"index is missing {name} in {index_dir}")
    meta = json.loads((index_dir / "index.json").read_text(encoding="utf-8"))
    if meta.get("version") != INDEX_VERSION:
        raise LoadError(f"unsupported index version {meta.get('version')!r}")
    manifest = CorpusManifest.from_record(
        json.loads((index_dir / "manifest.json").read_text(encoding="utf-8"))
    )
    index = Index(manifest=manifest)
    for record in read_jsonl(index_dir / "alignments.jsonl"):
        alignment = AlignmentRecord.from_record(record)
        index.alignments[(alignment.model_id, alignment.doc_id)] = alignment
    for record in read_jsonl(index_dir / "metrics.jsonl"):
        key = (record["model_id"], record["doc_id"])
        index.metrics[key] = MetricRecord.from_record(record)
    aggregates = json.loads((index_dir / "aggregates.json").read_text(encoding="utf-8"))
    index.aggregates = {
        model_id: AggregateRecord.from_record(record) for model_id, record in aggregates.items()
    }
    samples = json.loads((index_dir / "position_samples.json").read_text(encoding="utf-8"))
    index.position_samples = {model_id: list(ids) for model_id, ids in samples.items()}
    index.validate_complete()
    return index
