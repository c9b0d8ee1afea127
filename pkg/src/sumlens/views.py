"""Render-ready payloads for the six quality-aspect views.

Views join the immutable index (scores) with the store (texts, annotations);
alignment and metric scores are passed through bit-for-bit, never recomputed.
"""

from __future__ import annotations

from collections import Counter

from .align import AlignConfig, AlignmentRecord, SentenceMatch
from .corpus import DOC_ANNOTATION_KEY, CorpusStore
from .errors import NotFoundError
from .index import Index
from .metrics import relation_is_aligned
from .precompute import AnnotationProvider
from .standoff import AnnotationSet

ASPECTS = (
    {
        "id": "content_coverage",
        "criterion": "coverage",
        "title": "Content coverage",
        "question": "Does the summary condense information from all important parts of the document?",
    },
    {
        "id": "entity_coverage",
        "criterion": "coverage",
        "title": "Entity coverage",
        "question": "Which named entities of the document does the summary keep?",
    },
    {
        "id": "relation_coverage",
        "criterion": "coverage",
        "title": "Relation coverage",
        "question": "Which relations of the document does the summary keep?",
    },
    {
        "id": "faithfulness",
        "criterion": "faithfulness",
        "title": "Faithfulness",
        "question": "Does the summary add novel words unsupported by the document?",
    },
    {
        "id": "position_bias_document",
        "criterion": "position_bias",
        "title": "Position bias across models",
        "question": "Which document positions do the selected models draw from?",
    },
    {
        "id": "position_bias_model",
        "criterion": "position_bias",
        "title": "Position bias of one model",
        "question": "Where in its documents does the model source its summaries?",
    },
)


class ViewContext:
    """Read-only join of a store and its index with cached annotations."""

    def __init__(self, store: CorpusStore, index: Index):
        self.store = store
        self.index = index
        # entity/relation resolution does not depend on alignment knobs
        self._provider = AnnotationProvider(store, AlignConfig())
        self._annotation_cache: dict[tuple[str, str], AnnotationSet] = {}

    def doc_annotations(self, doc_id: str) -> AnnotationSet:
        return self._annotations(DOC_ANNOTATION_KEY, doc_id)

    def output_annotations(self, model_id: str, doc_id: str) -> AnnotationSet:
        return self._annotations(model_id, doc_id)

    def _annotations(self, key: str, doc_id: str) -> AnnotationSet:
        cache_key = (key, doc_id)
        if cache_key not in self._annotation_cache:
            owner = (
                self.store.document(doc_id).normalized
                if key == DOC_ANNOTATION_KEY
                else self.store.output(key, doc_id).summary
            )
            self._annotation_cache[cache_key] = self._provider.annotations_for(
                key, doc_id, owner
            )
        return self._annotation_cache[cache_key]

    def alignment(self, model_id: str, doc_id: str) -> AlignmentRecord:
        try:
            return self.index.alignments[(model_id, doc_id)]
        except KeyError:
            raise NotFoundError(f"no alignment for ({model_id!r}, {doc_id!r})") from None

    def require_models(self, model_ids: list[str]) -> list[str]:
        known = set(self.store.manifest.model_ids)
        for model_id in model_ids:
            if model_id not in known:
                raise NotFoundError(f"unknown model_id {model_id!r}")
        return model_ids


def _match_payload(match: SentenceMatch) -> dict:
    return {"index": match.doc_sentence_index, "score": match.score, "rank": match.rank}


def _document_sentences(ctx: ViewContext, doc_id: str) -> list[dict]:
    doc = ctx.store.document(doc_id).normalized
    return [
        {"index": i, "text": doc.sentence_text(i)} for i in range(len(doc.sentences))
    ]


def content_coverage(ctx: ViewContext, doc_id: str, model_ids: list[str]) -> dict:
    """Side-by-side alignment view: document sentences plus per-model summaries."""
    ctx.require_models(model_ids)
    sentences = _document_sentences(ctx, doc_id)
    models = []
    for model_id in model_ids:
        summary = ctx.store.output(model_id, doc_id).summary
        record = ctx.alignment(model_id, doc_id)
        models.append(
            {
                "model_id": model_id,
                "summary_sentences": [
                    {
                        "index": s,
                        "text": summary.sentence_text(s),
                        "lexical": [_match_payload(m) for m in record.sentences[s].lexical],
                        "semantic": [_match_payload(m) for m in record.sentences[s].semantic],
                    }
                    for s in range(len(summary.sentences))
                ],
            }
        )
    return {"doc_id": doc_id, "document_sentences": sentences, "models": models}


def entity_coverage(ctx: ViewContext, doc_id: str, model_ids: list[str]) -> dict:
    """Summary entities aligned to document entities; unmatched ones flagged."""
    ctx.require_models(model_ids)
    doc_entities = ctx.doc_annotations(doc_id).entities
    doc_payload = [
        {"begin": e.begin, "end": e.end, "surface": e.surface, "label": e.label}
        for e in doc_entities
    ]
    models = []
    for model_id in model_ids:
        ctx.store.output(model_id, doc_id)
        entities = []
        for entity in ctx.output_annotations(model_id, doc_id).entities:
            doc_matches = [
                j
                for j, doc_entity in enumerate(doc_entities)
                if entity.normalized_form == doc_entity.normalized_form
                or entity.normalized_form in doc_entity.normalized_form
                or doc_entity.normalized_form in entity.normalized_form
            ]
            entities.append(
                {
                    "begin": entity.begin,
                    "end": entity.end,
                    "surface": entity.surface,
                    "label": entity.label,
                    "matched": bool(doc_matches),
                    "doc_matches": doc_matches,
                }
            )
        models.append({"model_id": model_id, "entities": entities})
    return {"doc_id": doc_id, "document_entities": doc_payload, "models": models}


def relation_coverage(ctx: ViewContext, doc_id: str, model_ids: list[str]) -> dict:
    """Aligned/unaligned summary relations; unaligned ones carry source sentences."""
    ctx.require_models(model_ids)
    doc = ctx.store.document(doc_id).normalized
    doc_relations = ctx.doc_annotations(doc_id).relations
    doc_payload = [_relation_payload(r) for r in doc_relations]
    models = []
    for model_id in model_ids:
        ctx.store.output(model_id, doc_id)
        record = ctx.alignment(model_id, doc_id)
        relations = []
        for relation in ctx.output_annotations(model_id, doc_id).relations:
            aligned = relation_is_aligned(relation, doc_relations)
            payload = _relation_payload(relation)
            payload["aligned"] = aligned
            if not aligned:
                payload["source_sentences"] = _source_sentences(
                    doc, record, relation.sentence_index
                )
            relations.append(payload)
        models.append({"model_id": model_id, "relations": relations})
    return {"doc_id": doc_id, "document_relations": doc_payload, "models": models}


def _relation_payload(relation) -> dict:
    return {
        "subject": relation.subject,
        "predicate": relation.predicate,
        "object": relation.object,
        "sentence_index": relation.sentence_index,
    }


def _source_sentences(doc, record: AlignmentRecord, sentence_index: int) -> list[dict]:
    if sentence_index >= len(record.sentences):
        return []
    alignment = record.sentences[sentence_index]
    indices = sorted(
        {m.doc_sentence_index for m in alignment.lexical + alignment.semantic}
    )
    return [{"index": i, "text": doc.sentence_text(i)} for i in indices]


def faithfulness(ctx: ViewContext, doc_id: str, model_id: str) -> dict:
    """Novel-word highlighting; novel-bearing sentences carry their matches."""
    ctx.require_models([model_id])
    doc = ctx.store.document(doc_id).normalized
    summary = ctx.store.output(model_id, doc_id).summary
    record = ctx.alignment(model_id, doc_id)
    doc_words = set(doc.words())
    sentences = []
    for s in range(len(summary.sentences)):
        tokens = []
        has_novel = False
        for token in summary.sentence_tokens(s):
            novel = token.is_word and not token.is_stopword and token.lower not in doc_words
            has_novel = has_novel or novel
            tokens.append(
                {
                    "begin": token.begin,
                    "end": token.end,
                    "surface": token.surface,
                    "is_word": token.is_word,
                    "novel": novel,
                }
            )
        entry = {
            "index": s,
            "text": summary.sentence_text(s),
            "tokens": tokens,
            "has_novel": has_novel,
            "lexical": [],
            "semantic": [],
        }
        if has_novel:
            entry["lexical"] = [_match_payload(m) for m in record.sentences[s].lexical]
            entry["semantic"] = [_match_payload(m) for m in record.sentences[s].semantic]
        sentences.append(entry)
    return {"doc_id": doc_id, "model_id": model_id, "sentences": sentences}


def hallucination_aggregate(ctx: ViewContext, model_id: str) -> dict:
    """Novel words of one model over the whole corpus, ordered by frequency."""
    ctx.require_models([model_id])
    counts: Counter[str] = Counter()
    for doc_id in ctx.store.doc_ids():
        if (model_id, doc_id) not in ctx.store.outputs:
            continue
        doc_words = set(ctx.store.document(doc_id).normalized.words())
        summary = ctx.store.output(model_id, doc_id).summary
        novel = {
            t.lower
            for t in summary.tokens
            if t.is_word and not t.is_stopword and t.lower not in doc_words
        }
        counts.update(novel)
    ordered = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return {
        "model_id": model_id,
        "words": [{"word": word, "count": count} for word, count in ordered],
    }


def position_bias_document(ctx: ViewContext, doc_id: str, model_ids: list[str]) -> dict:
    """Per document sentence: how many selected models align something to it."""
    ctx.require_models(model_ids)
    sentences = _document_sentences(ctx, doc_id)
    counts = [0] * len(sentences)
    for model_id in model_ids:
        record = ctx.alignment(model_id, doc_id)
        for index in record.matched_indices():
            counts[index] += 1
    return {
        "doc_id": doc_id,
        "model_count": len(model_ids),
        "sentences": [
            {**sentence, "count": counts[sentence["index"]]} for sentence in sentences
        ],
    }


def position_bias_model(ctx: ViewContext, model_id: str) -> dict:
    """Up to 50 bars (one per sampled document) with matched sentence indices."""
    ctx.require_models([model_id])
    try:
        sample = ctx.index.position_samples[model_id]
    except KeyError:
        raise NotFoundError(f"no position sample for {model_id!r}") from None
    bars = []
    for doc_id in sorted(sample):
        doc = ctx.store.document(doc_id).normalized
        record = ctx.alignment(model_id, doc_id)
        matches = [
            {"index": index, "kinds": sorted(kinds)}
            for index, kinds in sorted(record.matched_indices().items())
        ]
        bars.append(
            {
                "doc_id": doc_id,
                "sentence_count": len(doc.sentences),
                "matches": matches,
            }
        )
    return {"model_id": model_id, "bars": bars}
