"""Runs annotation backends over a corpus store and emits standoff files.

Reads the store's records directly (normalized text, sentence spans, token
spans) so all offsets refer to the text the core emitted; nothing here
re-normalizes. Backend tokenizations that disagree with the core are
realigned by character offsets; texts that cannot be realigned are skipped
and logged.
"""

from __future__ import annotations

import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .backends import EMBEDDING_BACKENDS, EMBEDDING_DIMS, IE_BACKENDS, NER_BACKENDS

logger = logging.getLogger("annotator_glue")

DOC_KEY = "doc"


@dataclass
class ProviderConfig:
    ner_backend: str = "rule"
    ie_backend: str = "pattern"
    embedding_backend: str = "hash16"
    batch_size: int = 16

    def __post_init__(self) -> None:
        if self.ner_backend not in NER_BACKENDS:
            raise ValueError(f"unknown ner_backend {self.ner_backend!r}")
        if self.ie_backend not in IE_BACKENDS:
            raise ValueError(f"unknown ie_backend {self.ie_backend!r}")
        if self.embedding_backend not in EMBEDDING_BACKENDS:
            raise ValueError(f"unknown embedding_backend {self.embedding_backend!r}")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")

    @classmethod
    def from_file(cls, path: Path) -> "ProviderConfig":
        return cls(**json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass
class StoredText:
    text_id: str
    text: str
    sentences: list[tuple[int, int]]
    # word-token char spans per sentence, straight from the store
    word_spans: list[list[tuple[int, int]]]


@dataclass
class AnnotateReport:
    written: list[str] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.skipped


def _stored_texts(store_dir: Path, filename: str, summary_field: str | None) -> list[StoredText]:
    path = store_dir / filename
    if not path.exists():
        raise FileNotFoundError(f"store file missing: {path}")
    texts = []
    with path.open(encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            normalized = record[summary_field] if summary_field else record["normalized"]
            texts.append(_parse_normalized(record["doc_id"], normalized))
    return texts


def _parse_normalized(text_id: str, normalized: dict) -> StoredText:
    text = normalized["text"]
    sentences = [tuple(span) for span in normalized["sentences"]]
    word_spans: list[list[tuple[int, int]]] = [[] for _ in sentences]
    for begin, end, is_word, _is_stop in normalized["tokens"]:
        if not is_word:
            continue
        for s, (s_begin, s_end) in enumerate(sentences):
            if s_begin <= begin and end <= s_end:
                word_spans[s].append((begin, end))
                break
    return StoredText(text_id=text_id, text=text, sentences=sentences, word_spans=word_spans)


def _realign_embeddings(stored: StoredText, backend_rows) -> list[list[list[float]]]:
    """Map backend token vectors onto the core's word tokens by char overlap."""
    table = []
    for s, spans in enumerate(stored.word_spans):
        backend_tokens = backend_rows[s] if s < len(backend_rows) else []
        row = []
        for begin, end in spans:
            overlapping = [
                t.vector for t in backend_tokens if t.begin < end and t.end > begin
            ]
            if not overlapping:
                raise ValueError(
                    f"token at [{begin},{end}) has no backend token to realign with"
                )
            dim = len(overlapping[0])
            row.append([sum(v[k] for v in overlapping) / len(overlapping) for k in range(dim)])
        table.append(row)
    return table


def _annotate_texts(
    texts: list[StoredText], key: str, config: ProviderConfig, out_dir: Path, report: AnnotateReport
) -> None:
    ner = NER_BACKENDS[config.ner_backend]
    ie = IE_BACKENDS[config.ie_backend]
    embed = EMBEDDING_BACKENDS[config.embedding_backend]
    dim = EMBEDDING_DIMS[config.embedding_backend]
    annotation_records = []
    embedding_records = []
    for start in range(0, len(texts), config.batch_size):
        for stored in texts[start:start + config.batch_size]:
            try:
                entities = ner(stored.text, stored.sentences)
                relations = ie(stored.text, stored.sentences)
                vectors = _realign_embeddings(stored, embed(stored.text, stored.sentences))
            except Exception as err:  # backend failure: skip with logged id
                logger.warning("skipping %s:%s: %s", key, stored.text_id, err)
                report.skipped.append({"id": f"{key}:{stored.text_id}", "reason": str(err)})
                continue
            annotation_records.append(
                {"id": stored.text_id, "entities": entities, "relations": relations}
            )
            embedding_records.append(
                {"id": stored.text_id, "unit": "token", "dim": dim, "vectors": vectors}
            )
    _write_jsonl(out_dir / f"annotations.{key}.jsonl", annotation_records)
    _write_jsonl(out_dir / f"embeddings.{key}.jsonl", embedding_records)
    report.written.extend([f"annotations.{key}.jsonl", f"embeddings.{key}.jsonl"])


def _write_jsonl(path: Path, records: list[dict]) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True, separators=(",", ":")))
            fh.write("\n")


def annotate_corpus(store_dir: Path, config: ProviderConfig, out_dir: Path) -> AnnotateReport:
    """Emit one annotations file and one embeddings file per text collection."""
    store_dir = Path(store_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = json.loads((store_dir / "manifest.json").read_text(encoding="utf-8"))
    report = AnnotateReport()
    documents = _stored_texts(store_dir, "documents.jsonl", None)
    _annotate_texts(documents, DOC_KEY, config, out_dir, report)
    for model_id in manifest.get("model_ids", []):
        outputs = _stored_texts(store_dir, f"outputs.{model_id}.jsonl", "summary")
        _annotate_texts(outputs, model_id, config, out_dir, report)
    return report


def verify_annotations(store_dir: Path, annotations_dir: Path, out=sys.stdout) -> dict:
    """Validate emitted files with the exact loader the core uses."""
    from sumlens.corpus import load_store
    from sumlens.errors import AnnotationError
    from sumlens.standoff import annotation_set_from_record, embedding_table_from_record

    store = load_store(Path(store_dir))
    annotations_dir = Path(annotations_dir)
    results = {"passed": [], "failed": []}

    def owner_for(key: str, text_id: str):
        if key == DOC_KEY:
            return store.document(text_id).normalized
        return store.output(key, text_id).summary

    for path in sorted(annotations_dir.glob("*.jsonl")):
        kind, key = path.name.split(".", 2)[:2]
        failures = []
        with path.open(encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                record = json.loads(line)
                try:
                    owner = owner_for(key, record.get("id"))
                    if kind == "annotations":
                        annotation_set_from_record(record, owner)
                    else:
                        embedding_table_from_record(record, owner)
                except (AnnotationError, KeyError) as err:
                    failures.append(f"{record.get('id')}: {err}")
        if failures:
            results["failed"].append({"file": path.name, "errors": failures})
            print(f"FAIL {path.name}: {failures[0]}", file=out)
        else:
            results["passed"].append(path.name)
            print(f"PASS {path.name}", file=out)
    if not results["passed"] and not results["failed"]:
        print("no annotation files found", file=out)
    return results
