"""Guided qualitative assessment of single-document summarization systems."""

from .align import (
    AlignConfig,
    AlignmentRecord,
    RougeScore,
    SentenceMatch,
    align_summary,
    averaged_rouge,
    bertscore_rescaled,
    lexical_align,
    rouge_l,
    rouge_n,
    semantic_align,
)
from .corpus import (
    CorpusManifest,
    CorpusStore,
    Document,
    IngestReport,
    ModelOutput,
    add_model_outputs,
    ingest_corpus,
    load_store,
    save_store,
)
from .errors import (
    AnnotationError,
    IngestError,
    LoadError,
    MetricUndefined,
    NotFoundError,
    SumlensError,
)
from .index import Index, load_index, persist_index
from .metrics import (
    AggregateRecord,
    Histogram,
    MetricRecord,
    aggregate,
    compression,
    entity_factuality,
    ngram_abstractiveness,
    reference_rouge,
    relation_factuality,
    summary_length,
)
from .precompute import build_index
from .standoff import (
    AnnotationSet,
    EmbeddingTable,
    EntityMention,
    Relation,
    fallback_annotate,
    load_annotations,
    load_embeddings,
    make_relation,
    merge_contained_relations,
)
from .textnorm import (
    NormalizedText,
    SentenceSpan,
    Token,
    content_words,
    normalize_document,
    normalize_text,
    segment_sentences,
    tokenize,
)
from .views import ViewContext

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
