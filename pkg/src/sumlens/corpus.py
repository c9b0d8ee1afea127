"""Corpus storage: documents, reference summaries, and model outputs.

Input files are line-delimited JSON plus a single manifest; the ingested
store is written once and read concurrently afterwards. All serialization is
canonical (sorted keys, "\n" newlines) so identical inputs produce
byte-identical stores.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IngestError, LoadError, NotFoundError
from .textnorm import NormalizedText, default_delimiters, load_delimiter_table, normalize_document

_CORPUS_ID_RE = re.compile(r"^[a-z0-9_-]+$")

ANNOTATIONS_SUBDIR = "annotations"
INDEX_SUBDIR = "index"
DOC_ANNOTATION_KEY = "doc"


def dumps_canonical(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def write_jsonl(path: Path, records) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(dumps_canonical(record))
            fh.write("\n")


def read_jsonl(path: Path) -> list[dict]:
    records = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as err:
                raise IngestError(f"{path}:{line_no}: invalid JSON: {err}") from err
    return records


@dataclass
class CorpusManifest:
    corpus_id: str
    name: str
    description: str
    document_count: int = 0
    model_ids: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not _CORPUS_ID_RE.match(self.corpus_id):
            raise IngestError(
                f"corpus_id {self.corpus_id!r} must be nonempty and match [a-z0-9_-]+"
            )

    def to_record(self) -> dict:
        return {
            "corpus_id": self.corpus_id,
            "name": self.name,
            "description": self.description,
            "document_count": self.document_count,
            "model_ids": list(self.model_ids),
        }

    @classmethod
    def from_record(cls, record: dict) -> "CorpusManifest":
        return cls(
            corpus_id=record["corpus_id"],
            name=record.get("name", ""),
            description=record.get("description", ""),
            document_count=record.get("document_count", 0),
            model_ids=list(record.get("model_ids", [])),
        )


@dataclass
class Document:
    doc_id: str
    raw_text: str
    normalized: NormalizedText
    reference_summary: NormalizedText | None = None


@dataclass
class ModelOutput:
    model_id: str
    doc_id: str
    summary: NormalizedText


@dataclass
class IngestReport:
    model_id: str
    accepted: int = 0
    rejected: list[dict] = field(default_factory=list)

    @property
    def rejected_count(self) -> int:
        return len(self.rejected)

    def to_record(self) -> dict:
        return {
            "model_id": self.model_id,
            "accepted": self.accepted,
            "rejected": self.rejected_count,
            "reasons": self.rejected,
        }


class CorpusStore:
    """In-memory corpus with documents and per-model outputs."""

    def __init__(self, manifest: CorpusManifest, delimiters: dict[str, tuple[str, ...]] | None = None):
        self.manifest = manifest
        self.documents: dict[str, Document] = {}
        self.outputs: dict[tuple[str, str], ModelOutput] = {}
        self.delimiters = delimiters or {"default": default_delimiters()}
        self.directory: Path | None = None

    # -- queries ----------------------------------------------------------

    def document(self, doc_id: str) -> Document:
        try:
            return self.documents[doc_id]
        except KeyError:
            raise NotFoundError(f"unknown doc_id {doc_id!r}") from None

    def model_ids(self) -> list[str]:
        return list(self.manifest.model_ids)

    def output(self, model_id: str, doc_id: str) -> ModelOutput:
        try:
            return self.outputs[(model_id, doc_id)]
        except KeyError:
            raise NotFoundError(f"unknown output ({model_id!r}, {doc_id!r})") from None

    def doc_ids(self) -> list[str]:
        return sorted(self.documents)

    def query(self, kind: str, *args):
        """Selector-style access mirroring document/model_list/output."""
        if kind == "document":
            return self.document(*args)
        if kind == "model_list":
            return self.model_ids()
        if kind == "output":
            return self.output(*args)
        raise ValueError(f"unknown selector {kind!r}")

    # -- integrity --------------------------------------------------------

    def verify_integrity(self) -> None:
        """Full-scan referential check: every output points at a document."""
        for (model_id, doc_id) in self.outputs:
            if doc_id not in self.documents:
                raise IngestError(
                    f"output ({model_id}, {doc_id}) references unknown document"
                )
        if self.manifest.document_count != len(self.documents):
            raise IngestError(
                f"manifest document_count {self.manifest.document_count} != "
                f"{len(self.documents)} stored documents"
            )

    def delimiters_for(self, model_id: str | None) -> tuple[str, ...]:
        if model_id is not None and model_id in self.delimiters:
            return self.delimiters[model_id]
        return self.delimiters.get("default", default_delimiters())


def ingest_corpus(manifest_path: Path) -> CorpusStore:
    """Read a manifest and its documents file into a normalized store.

    Model outputs listed in the manifest are not ingested here; feed them
    through add_model_outputs (the CLI does both).
    """
    manifest_path = Path(manifest_path)
    if not manifest_path.exists():
        raise IngestError(f"manifest not found: {manifest_path}")
    try:
        raw = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise IngestError(f"{manifest_path}: invalid JSON: {err}") from err
    for key in ("corpus_id", "documents_file"):
        if key not in raw:
            raise IngestError(f"{manifest_path}: missing manifest field {key!r}")
    manifest = CorpusManifest(
        corpus_id=raw["corpus_id"],
        name=raw.get("name", raw["corpus_id"]),
        description=raw.get("description", ""),
    )
    base = manifest_path.parent
    delimiters = {"default": default_delimiters()}
    delimiters_path = base / "delimiters.json"
    if delimiters_path.exists():
        delimiters = load_delimiter_table(delimiters_path)
        delimiters.setdefault("default", default_delimiters())
    store = CorpusStore(manifest, delimiters)

    documents_path = base / raw["documents_file"]
    if not documents_path.exists():
        raise IngestError(f"documents file not found: {documents_path}")
    with documents_path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as err:
                raise IngestError(f"{documents_path}:{line_no}: invalid JSON: {err}") from err
            if "doc_id" not in record or "text" not in record:
                raise IngestError(f"{documents_path}:{line_no}: needs doc_id and text")
            doc_id = record["doc_id"]
            if doc_id in store.documents:
                raise IngestError(f"{documents_path}:{line_no}: duplicate doc_id {doc_id!r}")
            patterns = store.delimiters_for(None)
            reference = None
            if record.get("reference_summary"):
                reference = normalize_document(record["reference_summary"], patterns)
            store.documents[doc_id] = Document(
                doc_id=doc_id,
                raw_text=record["text"],
                normalized=normalize_document(record["text"], patterns),
                reference_summary=reference,
            )
    store.manifest.document_count = len(store.documents)
    return store


def add_model_outputs(store: CorpusStore, model_id: str, outputs_path: Path) -> IngestReport:
    """Ingest one model's outputs; unknown doc_ids and duplicates are rejected, not fatal."""
    outputs_path = Path(outputs_path)
    if not outputs_path.exists():
        raise IngestError(f"outputs file not found: {outputs_path}")
    report = IngestReport(model_id=model_id)
    patterns = store.delimiters_for(model_id)
    with outputs_path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as err:
                raise IngestError(f"{outputs_path}:{line_no}: invalid JSON: {err}") from err
            if "doc_id" not in record or "summary" not in record:
                raise IngestError(f"{outputs_path}:{line_no}: needs doc_id and summary")
            doc_id = record["doc_id"]
            if doc_id not in store.documents:
                report.rejected.append({"doc_id": doc_id, "reason": "unknown doc_id"})
                continue
            if (model_id, doc_id) in store.outputs:
                report.rejected.append({"doc_id": doc_id, "reason": "duplicate"})
                continue
            store.outputs[(model_id, doc_id)] = ModelOutput(
                model_id=model_id,
                doc_id=doc_id,
                summary=normalize_document(record["summary"], patterns),
            )
            report.accepted += 1
    if model_id not in store.manifest.model_ids and report.accepted:
        store.manifest.model_ids = sorted(store.manifest.model_ids + [model_id])
    return report


def save_store(store: CorpusStore, out_dir: Path) -> None:
    """Write the normalized store; canonical ordering keeps bytes reproducible."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "manifest.json").write_text(
        dumps_canonical(store.manifest.to_record()) + "\n", encoding="utf-8", newline="\n"
    )
    write_jsonl(
        out_dir / "documents.jsonl",
        (
            {
                "doc_id": doc.doc_id,
                "raw_text": doc.raw_text,
                "normalized": doc.normalized.to_record(),
                "reference_summary": (
                    doc.reference_summary.to_record() if doc.reference_summary else None
                ),
            }
            for doc_id, doc in sorted(store.documents.items())
        ),
    )
    for model_id in store.manifest.model_ids:
        write_jsonl(
            out_dir / f"outputs.{model_id}.jsonl",
            (
                {"doc_id": doc_id, "summary": store.outputs[(model_id, doc_id)].summary.to_record()}
                for (m, doc_id) in sorted(store.outputs)
                if m == model_id
            ),
        )
    store.directory = out_dir


def load_store(store_dir: Path) -> CorpusStore:
    store_dir = Path(store_dir)
    manifest_path = store_dir / "manifest.json"
    if not manifest_path.exists():
        raise LoadError(f"store manifest missing: {manifest_path}")
    manifest = CorpusManifest.from_record(json.loads(manifest_path.read_text(encoding="utf-8")))
    store = CorpusStore(manifest)
    documents_path = store_dir / "documents.jsonl"
    if not documents_path.exists():
        raise LoadError(f"store documents missing: {documents_path}")
    for record in read_jsonl(documents_path):
        reference = record.get("reference_summary")
        store.documents[record["doc_id"]] = Document(
            doc_id=record["doc_id"],
            raw_text=record["raw_text"],
            normalized=NormalizedText.from_record(record["normalized"]),
            reference_summary=NormalizedText.from_record(reference) if reference else None,
        )
    for model_id in manifest.model_ids:
        outputs_path = store_dir / f"outputs.{model_id}.jsonl"
        if not outputs_path.exists():
            raise LoadError(f"store outputs missing: {outputs_path}")
        for record in read_jsonl(outputs_path):
            store.outputs[(model_id, record["doc_id"])] = ModelOutput(
                model_id=model_id,
                doc_id=record["doc_id"],
                summary=NormalizedText.from_record(record["summary"]),
            )
    store.directory = store_dir
    store.verify_integrity()
    return store
