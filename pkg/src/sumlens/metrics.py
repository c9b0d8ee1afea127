"""Per-summary evaluation measures and per-model aggregates.

Five measures (compression, n-gram abstractiveness, word-count length,
entity-level and relation-level factuality) plus recomputed ROUGE-{1,2,L}
against the reference summary. Undefined values (no entities, no reference,
empty summary) are carried as None and excluded from aggregate means.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .align import RougeScore, rouge_l, rouge_n
from .errors import MetricUndefined
from .standoff import EntityMention, Relation
from .textnorm import NormalizedText

ABSTRACTIVENESS_NS = (1, 2, 3, 4)
DEFAULT_ABSTRACTIVENESS_N = 3

# Stable metric keys used by the index, the API, and the heatmap.
HEATMAP_METRIC_KEYS = (
    "compression",
    "abstractiveness_n3",
    "length_words",
    "entity_factuality",
    "relation_factuality",
    "rouge1_f",
    "rouge2_f",
    "rougeL_f",
)

AGGREGATE_METRIC_KEYS = (
    "compression",
    "abstractiveness_n1",
    "abstractiveness_n2",
    "abstractiveness_n3",
    "abstractiveness_n4",
    "length_words",
    "entity_factuality",
    "relation_factuality",
    "rouge1_f",
    "rouge2_f",
    "rougeL_f",
)


def compression(doc: NormalizedText, summary: NormalizedText) -> float:
    """Word ratio between a document and its summary."""
    summary_words = summary.word_count()
    if summary_words == 0:
        raise MetricUndefined("compression undefined for zero-word summary")
    return doc.word_count() / summary_words


def ngram_abstractiveness(summary: NormalizedText, doc: NormalizedText, n: int) -> float:
    """Share of summary word positions not covered by n-grams shared with the document.

    Every summary word position covered by at least one summary n-gram that
    also occurs in the document counts as seen; the score is 1 minus the seen
    fraction. Summaries shorter than n words fall back to unigram matching.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    words = summary.words()
    if not words:
        raise MetricUndefined("abstractiveness undefined for zero-word summary")
    if len(words) < n:
        n = 1
    doc_ngrams = {tuple(dw) for dw in _sliding(doc.words(), n)}
    marked: set[int] = set()
    for start, gram in enumerate(_sliding(words, n)):
        if tuple(gram) in doc_ngrams:
            marked.update(range(start, start + n))
    return 1.0 - len(marked) / len(words)


def _sliding(tokens: list[str], n: int) -> list[list[str]]:
    return [tokens[i:i + n] for i in range(len(tokens) - n + 1)]


def summary_length(summary: NormalizedText) -> int:
    """Word count (punctuation tokens excluded)."""
    return summary.word_count()


def entity_factuality(
    summary_entities: list[EntityMention], doc_entities: list[EntityMention]
) -> float:
    """Percentage of distinct summary entities found in the document.

    A summary entity counts as found when its lowercased form equals or is
    contained in (or contains) some document entity form, so partial mentions
    like "obama" vs "barack obama" match.
    """
    summary_forms = {e.normalized_form for e in summary_entities}
    if not summary_forms:
        raise MetricUndefined("entity factuality undefined without summary entities")
    doc_forms = {e.normalized_form for e in doc_entities}
    found = sum(
        1
        for form in summary_forms
        if any(form == d or form in d or d in form for d in doc_forms)
    )
    return 100.0 * found / len(summary_forms)


def relation_factuality(
    summary_relations: list[Relation], doc_relations: list[Relation]
) -> float:
    """Percentage of summary relations captured by some document relation.

    A summary relation is found when a document relation shares its subject
    token set and its predicate+object token set is a superset-or-equal.
    """
    if not summary_relations:
        raise MetricUndefined("relation factuality undefined without summary relations")
    found = sum(1 for rel in summary_relations if relation_is_aligned(rel, doc_relations))
    return 100.0 * found / len(summary_relations)


def relation_is_aligned(relation: Relation, doc_relations: list[Relation]) -> bool:
    return any(
        doc_rel.subject_tokens == relation.subject_tokens
        and doc_rel.po_tokens >= relation.po_tokens
        for doc_rel in doc_relations
    )


def reference_rouge(
    summary: NormalizedText, reference: NormalizedText | None
) -> tuple[RougeScore, RougeScore, RougeScore]:
    """ROUGE-1, ROUGE-2 and ROUGE-L against the reference summary."""
    if reference is None:
        raise MetricUndefined("no reference summary")
    cand, ref = summary.words(), reference.words()
    return (rouge_n(cand, ref, 1), rouge_n(cand, ref, 2), rouge_l(cand, ref))


@dataclass
class MetricRecord:
    compression: float | None = None
    abstractiveness_by_n: dict[int, float | None] = field(default_factory=dict)
    summary_length_words: int = 0
    entity_factuality: float | None = None
    relation_factuality: float | None = None
    rouge1: RougeScore | None = None
    rouge2: RougeScore | None = None
    rougeL: RougeScore | None = None

    @property
    def abstractiveness(self) -> float | None:
        return self.abstractiveness_by_n.get(DEFAULT_ABSTRACTIVENESS_N)

    def values(self) -> dict[str, float | None]:
        """Metric values keyed by the stable string keys."""
        out: dict[str, float | None] = {
            "compression": self.compression,
            "length_words": float(self.summary_length_words),
            "entity_factuality": self.entity_factuality,
            "relation_factuality": self.relation_factuality,
            "rouge1_f": self.rouge1.f1 if self.rouge1 else None,
            "rouge2_f": self.rouge2.f1 if self.rouge2 else None,
            "rougeL_f": self.rougeL.f1 if self.rougeL else None,
        }
        for n in ABSTRACTIVENESS_NS:
            out[f"abstractiveness_n{n}"] = self.abstractiveness_by_n.get(n)
        return out

    def to_record(self) -> dict:
        return {
            "compression": self.compression,
            "abstractiveness": {str(n): v for n, v in sorted(self.abstractiveness_by_n.items())},
            "length_words": self.summary_length_words,
            "entity_factuality": self.entity_factuality,
            "relation_factuality": self.relation_factuality,
            "rouge1": _rouge_to_record(self.rouge1),
            "rouge2": _rouge_to_record(self.rouge2),
            "rougeL": _rouge_to_record(self.rougeL),
        }

    @classmethod
    def from_record(cls, record: dict) -> "MetricRecord":
        return cls(
            compression=record["compression"],
            abstractiveness_by_n={int(n): v for n, v in record["abstractiveness"].items()},
            summary_length_words=record["length_words"],
            entity_factuality=record["entity_factuality"],
            relation_factuality=record["relation_factuality"],
            rouge1=_rouge_from_record(record["rouge1"]),
            rouge2=_rouge_from_record(record["rouge2"]),
            rougeL=_rouge_from_record(record["rougeL"]),
        )


def _rouge_to_record(score: RougeScore | None) -> dict | None:
    if score is None:
        return None
    return {"precision": score.precision, "recall": score.recall, "f1": score.f1}


def _rouge_from_record(record: dict | None) -> RougeScore | None:
    if record is None:
        return None
    return RougeScore(record["precision"], record["recall"], record["f1"])


def compute_metric_record(
    doc: NormalizedText,
    reference: NormalizedText | None,
    summary: NormalizedText,
    doc_entities: list[EntityMention],
    doc_relations: list[Relation],
    summary_entities: list[EntityMention],
    summary_relations: list[Relation],
) -> MetricRecord:
    record = MetricRecord(summary_length_words=summary_length(summary))
    record.compression = _defined(lambda: compression(doc, summary))
    for n in ABSTRACTIVENESS_NS:
        record.abstractiveness_by_n[n] = _defined(
            lambda n=n: ngram_abstractiveness(summary, doc, n)
        )
    record.entity_factuality = _defined(
        lambda: entity_factuality(summary_entities, doc_entities)
    )
    record.relation_factuality = _defined(
        lambda: relation_factuality(summary_relations, doc_relations)
    )
    try:
        record.rouge1, record.rouge2, record.rougeL = reference_rouge(summary, reference)
    except MetricUndefined:
        pass
    return record


def _defined(compute) -> float | None:
    try:
        return compute()
    except MetricUndefined:
        return None


@dataclass
class Histogram:
    bin_edges: list[float]
    counts: list[int]

    def to_record(self) -> dict:
        return {"bin_edges": self.bin_edges, "counts": self.counts}

    @classmethod
    def from_record(cls, record: dict) -> "Histogram":
        return cls(bin_edges=list(record["bin_edges"]), counts=list(record["counts"]))


@dataclass
class AggregateRecord:
    model_id: str
    means: dict[str, float | None]
    counts: dict[str, int]
    histograms: dict[str, Histogram]

    def to_record(self) -> dict:
        return {
            "model_id": self.model_id,
            "means": self.means,
            "counts": self.counts,
            "histograms": {k: h.to_record() for k, h in self.histograms.items()},
        }

    @classmethod
    def from_record(cls, record: dict) -> "AggregateRecord":
        return cls(
            model_id=record["model_id"],
            means=dict(record["means"]),
            counts=dict(record["counts"]),
            histograms={
                k: Histogram.from_record(h) for k, h in record["histograms"].items()
            },
        )


def aggregate(model_id: str, records: list[MetricRecord], bins: int = 10) -> AggregateRecord:
    """Arithmetic means and equal-width histograms over defined values."""
    if not records:
        raise ValueError("aggregate needs at least one record")
    if bins < 1:
        raise ValueError("bins must be >= 1")
    means: dict[str, float | None] = {}
    counts: dict[str, int] = {}
    histograms: dict[str, Histogram] = {}
    value_maps = [record.values() for record in records]
    for key in AGGREGATE_METRIC_KEYS:
        defined = [vm[key] for vm in value_maps if vm[key] is not None]
        counts[key] = len(defined)
        if not defined:
            means[key] = None
            continue
        means[key] = sum(defined) / len(defined)
        histograms[key] = _histogram(defined, bins)
    return AggregateRecord(model_id=model_id, means=means, counts=counts, histograms=histograms)


def _histogram(values: list[float], bins: int) -> Histogram:
    lo, hi = min(values), max(values)
    if lo == hi:
        # all mass in one bin of width 1 centered on the value
        return Histogram(bin_edges=[lo - 0.5, lo + 0.5], counts=[len(values)])
    hist, edges = np.histogram(values, bins=bins, range=(lo, hi))
    return Histogram(bin_edges=[float(e) for e in edges], counts=[int(c) for c in hist])
