"""Builds the immutable index: alignments, metrics, aggregates, samples.

Work fans out per (model, document) pair to a bounded worker pool; results
are collected in sorted key order so the output is byte-identical regardless
of the worker count.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .align import AlignConfig, AlignmentRecord, align_summary
from .corpus import ANNOTATIONS_SUBDIR, DOC_ANNOTATION_KEY, CorpusStore, read_jsonl
from .errors import AnnotationError
from .index import Index
from .metrics import MetricRecord, aggregate, compute_metric_record
from .standoff import (
    AnnotationSet,
    annotation_set_from_record,
    embedding_table_from_record,
    fallback_annotate,
)
from .textnorm import NormalizedText

POSITION_SAMPLE_SIZE = 50


class AnnotationProvider:
    """Resolves each text's annotations from standoff files or the fallback annotator.

    Embedding resolution follows AlignConfig.embeddings: "external" requires a
    shipped table for every text, "fallback" always uses deterministic hash
    embeddings, "auto" prefers shipped tables and falls back per text.
    """

    def __init__(self, store: CorpusStore, config: AlignConfig):
        self.config = config
        self.directory = (
            store.directory / ANNOTATIONS_SUBDIR if store.directory is not None else None
        )
        self._file_cache: dict[str, dict[str, dict] | None] = {}

    def _records(self, filename: str) -> dict[str, dict] | None:
        if filename not in self._file_cache:
            if self.directory is None or not (self.directory / filename).exists():
                self._file_cache[filename] = None
            else:
                self._file_cache[filename] = {
                    record.get("id"): record
                    for record in read_jsonl(self.directory / filename)
                }
        return self._file_cache[filename]

    def annotations_for(self, key: str, text_id: str, owner: NormalizedText) -> AnnotationSet:
        """key is "doc" for documents or the model_id for its outputs."""
        fallback = fallback_annotate(owner)
        records = self._records(f"annotations.{key}.jsonl")
        record = records.get(text_id) if records else None
        if record is not None:
            result = annotation_set_from_record(record, owner)
        else:
            result = AnnotationSet(entities=fallback.entities, relations=fallback.relations)
        result.embeddings = self._embeddings_for(key, text_id, owner, fallback)
        return result

    def _embeddings_for(self, key, text_id, owner, fallback):
        if self.config.embeddings == "fallback":
            return fallback.embeddings
        records = self._records(f"embeddings.{key}.jsonl")
        record = records.get(text_id) if records else None
        if record is not None:
            return embedding_table_from_record(record, owner)
        if self.config.embeddings == "external":
            raise AnnotationError(f"no embeddings for {key}:{text_id}")
        return fallback.embeddings


@dataclass
class _WorkItem:
    model_id: str
    doc_id: str
    doc: NormalizedText
    reference: NormalizedText | None
    summary: NormalizedText
    doc_annotations: AnnotationSet
    summary_annotations: AnnotationSet
    config: AlignConfig


def _compute_pair(item: _WorkItem) -> tuple[tuple[str, str], AlignmentRecord, MetricRecord]:
    alignment = align_summary(
        item.summary,
        item.doc,
        item.model_id,
        item.doc_id,
        config=item.config,
        summary_annotations=item.summary_annotations,
        doc_annotations=item.doc_annotations,
    )
    metric = compute_metric_record(
        item.doc,
        item.reference,
        item.summary,
        item.doc_annotations.entities,
        item.doc_annotations.relations,
        item.summary_annotations.entities,
        item.summary_annotations.relations,
    )
    return (item.model_id, item.doc_id), alignment, metric


def build_index(store: CorpusStore, config: AlignConfig, jobs: int = 1) -> Index:
    """Align and score every stored (model, document) pair."""
    provider = AnnotationProvider(store, config)
    doc_annotations = {
        doc_id: provider.annotations_for(DOC_ANNOTATION_KEY, doc_id, store.document(doc_id).normalized)
        for doc_id in store.doc_ids()
    }
    items = []
    for (model_id, doc_id) in sorted(store.outputs):
        doc = store.document(doc_id)
        output = store.output(model_id, doc_id)
        items.append(
            _WorkItem(
                model_id=model_id,
                doc_id=doc_id,
                doc=doc.normalized,
                reference=doc.reference_summary,
                summary=output.summary,
                doc_annotations=doc_annotations[doc_id],
                summary_annotations=provider.annotations_for(
                    model_id, doc_id, output.summary
                ),
                config=config,
            )
        )
    if jobs <= 1 or len(items) < 2:
        results = [_compute_pair(item) for item in items]
    else:
        chunksize = max(1, len(items) // (jobs * 4))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_compute_pair, items, chunksize=chunksize))

    index = Index(manifest=store.manifest)
    per_model_records: dict[str, list[MetricRecord]] = {m: [] for m in store.manifest.model_ids}
    per_model_docs: dict[str, list[str]] = {m: [] for m in store.manifest.model_ids}
    for key, alignment, metric in results:
        index.alignments[key] = alignment
        index.metrics[key] = metric
        per_model_records[key[0]].append(metric)
        per_model_docs[key[0]].append(key[1])
    for model_id in store.manifest.model_ids:
        index.aggregates[model_id] = aggregate(
            model_id, per_model_records[model_id], bins=config.histogram_bins
        )
        index.position_samples[model_id] = draw_position_sample(
            per_model_docs[model_id], model_id, config.random_seed
        )
    return index


def draw_position_sample(doc_ids: list[str], model_id: str, seed: int) -> list[str]:
    """Seeded sample of up to 50 doc ids, persisted so views stay stable."""
    rng = random.Random(f"{seed}:{model_id}")
    ordered = sorted(doc_ids)
    if len(ordered) <= POSITION_SAMPLE_SIZE:
        return ordered
    return sorted(rng.sample(ordered, POSITION_SAMPLE_SIZE))
