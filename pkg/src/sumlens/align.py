"""Sentence alignment between summaries and their source documents.

Lexical alignment scores every document sentence by averaged ROUGE-{1,2,L}
F1 against a summary sentence; the second match is found after removing the
content words the first match already captured. Semantic alignment scores by
rescaled BERTScore over token embeddings and takes the plain top two.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import AnnotationError
from .standoff import AnnotationSet, EmbeddingTable
from .textnorm import NormalizedText, Token


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, overlap: float, candidate_total: int, reference_total: int) -> "RougeScore":
        precision = overlap / candidate_total if candidate_total else 0.0
        recall = overlap / reference_total if reference_total else 0.0
        return cls(precision, recall, _f1(precision, recall))


def _f1(precision: float, recall: float) -> float:
    if precision + recall <= 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def rouge_n(candidate: list[str], reference: list[str], n: int) -> RougeScore:
    """Clipped n-gram overlap over lowercased word tokens."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    cand = _ngram_counts(candidate, n)
    ref = _ngram_counts(reference, n)
    overlap = sum(min(count, ref[gram]) for gram, count in cand.items())
    return RougeScore.from_counts(overlap, sum(cand.values()), sum(ref.values()))


def _ngram_counts(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def rouge_l(candidate: list[str], reference: list[str]) -> RougeScore:
    """Longest common subsequence recall/precision/F1."""
    lcs = _lcs_length(candidate, reference)
    return RougeScore.from_counts(lcs, len(candidate), len(reference))


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def averaged_rouge(candidate: list[str], reference: list[str]) -> float:
    """Mean of ROUGE-1, ROUGE-2 and ROUGE-L F1."""
    return (
        rouge_n(candidate, reference, 1).f1
        + rouge_n(candidate, reference, 2).f1
        + rouge_l(candidate, reference).f1
    ) / 3.0


def bertscore_rescaled(
    candidate_vectors: list[list[float]],
    reference_vectors: list[list[float]],
    b: float,
) -> float:
    """Greedy-matching BERTScore F1, rescaled as (F1 - b) / (1 - b).

    May be negative when the raw F1 falls below the baseline b.
    """
    if b >= 1:
        raise ValueError(f"baseline b must be < 1, got {b}")
    if not candidate_vectors or not reference_vectors:
        raise ValueError("vector lists must be nonempty")
    cand = np.asarray(candidate_vectors, dtype=np.float64)
    ref = np.asarray(reference_vectors, dtype=np.float64)
    if cand.ndim != 2 or ref.ndim != 2 or cand.shape[1] != ref.shape[1]:
        raise ValueError(
            f"dimension mismatch: candidate {cand.shape} vs reference {ref.shape}"
        )
    sim = _cosine_matrix(cand, ref)
    precision = float(sim.max(axis=1).mean())
    recall = float(sim.max(axis=0).mean())
    f1 = _f1(precision, recall)
    return (f1 - b) / (1 - b)


def _cosine_matrix(cand: np.ndarray, ref: np.ndarray) -> np.ndarray:
    # Squared norms come from the same matmul kernel as the cross products so
    # that identical vectors score exactly 1.0 (sqrt(x*x) == x in IEEE-754).
    dots = cand @ ref.T
    cand_sq = np.einsum("ij,ij->i", cand, cand)
    ref_sq = np.einsum("ij,ij->i", ref, ref)
    denom = np.sqrt(np.outer(cand_sq, ref_sq))
    out = np.zeros_like(dots)
    np.divide(dots, denom, out=out, where=denom > 0)
    return out


@dataclass(frozen=True)
class AlignConfig:
    """Knobs for the precompute alignment pass, loaded from align.json."""

    bertscore_baseline: float = 0.0
    lexical_floor: float = 0.0
    semantic_floor: float = 0.0
    random_seed: int = 13
    histogram_bins: int = 10
    embeddings: str = "auto"  # auto | external | fallback

    def __post_init__(self) -> None:
        if not 0.0 <= self.bertscore_baseline < 1.0:
            raise ValueError("bertscore_baseline must lie in [0, 1)")
        if self.lexical_floor < 0 or self.semantic_floor < 0:
            raise ValueError("floors must be >= 0")
        if self.embeddings not in ("auto", "external", "fallback"):
            raise ValueError("embeddings must be one of auto/external/fallback")

    @classmethod
    def from_file(cls, path: Path) -> "AlignConfig":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown align config keys: {sorted(unknown)}")
        return cls(**raw)


@dataclass(frozen=True)
class SentenceMatch:
    doc_sentence_index: int
    score: float
    kind: str  # "lexical" | "semantic"
    rank: int  # 1 or 2


@dataclass
class SentenceAlignment:
    lexical: list[SentenceMatch] = field(default_factory=list)
    semantic: list[SentenceMatch] = field(default_factory=list)


@dataclass
class AlignmentRecord:
    model_id: str
    doc_id: str
    sentences: list[SentenceAlignment] = field(default_factory=list)

    def matched_indices(self) -> dict[int, set[str]]:
        """All matched document sentence indices with the kinds that hit them."""
        hits: dict[int, set[str]] = {}
        for sent in self.sentences:
            for match in sent.lexical + sent.semantic:
                hits.setdefault(match.doc_sentence_index, set()).add(match.kind)
        return hits

    def to_record(self) -> dict:
        return {
            "model_id": self.model_id,
            "doc_id": self.doc_id,
            "sentences": [
                {
                    "lexical": [_match_to_record(m) for m in s.lexical],
                    "semantic": [_match_to_record(m) for m in s.semantic],
                }
                for s in self.sentences
            ],
        }

    @classmethod
    def from_record(cls, record: dict) -> "AlignmentRecord":
        return cls(
            model_id=record["model_id"],
            doc_id=record["doc_id"],
            sentences=[
                SentenceAlignment(
                    lexical=[_match_from_record(m, "lexical") for m in s["lexical"]],
                    semantic=[_match_from_record(m, "semantic") for m in s["semantic"]],
                )
                for s in record["sentences"]
            ],
        )


def _match_to_record(m: SentenceMatch) -> dict:
    return {"index": m.doc_sentence_index, "score": m.score, "rank": m.rank}


def _match_from_record(record: dict, kind: str) -> SentenceMatch:
    return SentenceMatch(
        doc_sentence_index=record["index"],
        score=record["score"],
        kind=kind,
        rank=record["rank"],
    )


def lexical_align(
    summary_sentence: list[Token],
    doc_sentences: list[list[Token]],
    config: AlignConfig | None = None,
) -> list[SentenceMatch]:
    """Top-2 lexically related document sentences for one summary sentence.

    The first match maximizes averaged ROUGE-{1,2,L} F1 (ties break to the
    lowest index). Content words captured by the first match are removed;
    when content words remain, the residual token list is rescored and the
    new argmax (excluding the first index) becomes the second match. The
    second score is capped at the first so rank order and score order agree.
    """
    cfg = config or AlignConfig()
    summary_words = [t.lower for t in summary_sentence if t.is_word]
    if not summary_words:
        return []
    doc_words = [[t.lower for t in sent if t.is_word] for sent in doc_sentences]
    first_index, first_score = _argmax_rouge(summary_words, doc_words, exclude=None)
    if first_index is None:
        return []
    matches: list[SentenceMatch] = []
    if first_score >= cfg.lexical_floor:
        matches.append(SentenceMatch(first_index, first_score, "lexical", 1))
    captured = set(doc_words[first_index])
    residual_tokens = [
        t
        for t in summary_sentence
        if t.is_word and not (not t.is_stopword and t.lower in captured)
    ]
    if not any(not t.is_stopword for t in residual_tokens):
        return matches
    residual_words = [t.lower for t in residual_tokens]
    second_index, second_score = _argmax_rouge(residual_words, doc_words, exclude=first_index)
    if second_index is None:
        return matches
    second_score = min(second_score, first_score)
    if second_score >= cfg.lexical_floor:
        matches.append(SentenceMatch(second_index, second_score, "lexical", 2))
    return matches


def _argmax_rouge(
    words: list[str], doc_words: list[list[str]], exclude: int | None
) -> tuple[int | None, float]:
    best_index: int | None = None
    best_score = -1.0
    for index, sentence_words in enumerate(doc_words):
        if index == exclude:
            continue
        score = averaged_rouge(words, sentence_words)
        if score > best_score:
            best_index, best_score = index, score
    if best_index is None:
        return None, 0.0
    return best_index, best_score


def semantic_align(
    summary_sentence_index: int,
    summary_embeddings: EmbeddingTable,
    doc_embeddings: EmbeddingTable,
    config: AlignConfig | None = None,
) -> list[SentenceMatch]:
    """Top-2 semantically related document sentences via rescaled BERTScore."""
    cfg = config or AlignConfig()
    for table, side in ((summary_embeddings, "summary"), (doc_embeddings, "document")):
        if table is None:
            raise AnnotationError(f"missing {side} embeddings for semantic alignment")
        if table.unit != "token":
            raise AnnotationError(f"semantic alignment needs token embeddings, got unit={table.unit!r}")
    candidate = summary_embeddings.vectors[summary_sentence_index]
    if not candidate:
        return []
    scored: list[tuple[float, int]] = []
    for index, reference in enumerate(doc_embeddings.vectors):
        if not reference:
            continue
        score = bertscore_rescaled(candidate, reference, cfg.bertscore_baseline)
        scored.append((score, index))
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    matches = []
    for rank, (score, index) in enumerate(scored[:2], start=1):
        if score >= cfg.semantic_floor:
            matches.append(SentenceMatch(index, score, "semantic", rank))
    return matches


def align_summary(
    summary: NormalizedText,
    doc: NormalizedText,
    model_id: str,
    doc_id: str,
    config: AlignConfig | None = None,
    summary_annotations: AnnotationSet | None = None,
    doc_annotations: AnnotationSet | None = None,
) -> AlignmentRecord:
    """Align every summary sentence against the document, both kinds.

    Semantic matches are computed when token embeddings are present on both
    sides and skipped otherwise; the precompute driver decides whether
    missing embeddings are an error.
    """
    cfg = config or AlignConfig()
    doc_sentence_tokens = [doc.sentence_tokens(s) for s in range(len(doc.sentences))]
    summary_emb = summary_annotations.embeddings if summary_annotations else None
    doc_emb = doc_annotations.embeddings if doc_annotations else None
    semantic_possible = (
        summary_emb is not None
        and doc_emb is not None
        and summary_emb.unit == "token"
        and doc_emb.unit == "token"
    )
    record = AlignmentRecord(model_id=model_id, doc_id=doc_id)
    for s in range(len(summary.sentences)):
        alignment = SentenceAlignment(
            lexical=lexical_align(summary.sentence_tokens(s), doc_sentence_tokens, cfg)
        )
        if semantic_possible:
            alignment.semantic = semantic_align(s, summary_emb, doc_emb, cfg)
        record.sentences.append(alignment)
    return record
