"""Standoff annotations: entities, relations, and token embeddings.

Annotations are produced by external extractors and attached to a normalized
text by character offsets. This module validates them, merges contained
relations, and provides a deterministic rule-based fallback annotator so the
whole pipeline runs with no external ML dependency.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import AnnotationError
from .textnorm import NormalizedText, SentenceSpan, Token, tokenize

EMBEDDING_DIM = 16

_VERBISH = frozenset(
    """am is are was were be been being has have had do does did will would
    can could may might must shall should went came said says told saw met
    made took got gave found left kept held paid won lost ran sat stood
    became began brought bought sought sold built felt put led read heard
    knew grew wrote spoke drove rose chose broke threw drew flew""".split()
)

_PREPOSITIONS = frozenset(
    "on in at to of for with by from into over under about near after before".split()
)


@dataclass(frozen=True)
class EntityMention:
    begin: int
    end: int
    surface: str
    label: str
    normalized_form: str


@dataclass(frozen=True)
class Relation:
    subject: str
    predicate: str
    object: str
    sentence_index: int
    subject_tokens: frozenset[str]
    predicate_tokens: frozenset[str]
    object_tokens: frozenset[str]

    @property
    def po_tokens(self) -> frozenset[str]:
        return self.predicate_tokens | self.object_tokens

    @property
    def surface(self) -> str:
        return " ".join(part for part in (self.subject, self.predicate, self.object) if part)


@dataclass
class EmbeddingTable:
    """Per-sentence vectors (unit="sentence") or per-word-token vectors (unit="token")."""

    unit: str
    dim: int
    vectors: list  # [sentence] -> vector, or [sentence][word token] -> vector


@dataclass
class AnnotationSet:
    entities: list[EntityMention] = field(default_factory=list)
    relations: list[Relation] = field(default_factory=list)
    embeddings: EmbeddingTable | None = None


def _word_token_set(part: str) -> frozenset[str]:
    if not part:
        return frozenset()
    tokens = tokenize(part, SentenceSpan(0, len(part)))
    return frozenset(t.lower for t in tokens if t.is_word)


def make_relation(subject: str, predicate: str, object: str, sentence_index: int) -> Relation:
    if not subject:
        raise AnnotationError("relation subject must be nonempty")
    return Relation(
        subject=subject,
        predicate=predicate,
        object=object,
        sentence_index=sentence_index,
        subject_tokens=_word_token_set(subject),
        predicate_tokens=_word_token_set(predicate),
        object_tokens=_word_token_set(object),
    )


def merge_contained_relations(relations: list[Relation]) -> list[Relation]:
    """Drop relations whose content is already captured by a longer counterpart.

    A relation is absorbed by another with the same subject token set whose
    predicate+object token set is a superset of its own. Among relations with
    equal token sets the representative is the one with the longest surface
    string, earliest in input order. Survivors keep input order.
    """
    survivors: list[Relation] = []
    for i, rel in enumerate(relations):
        absorbed = False
        for j, other in enumerate(relations):
            if i == j or rel.subject_tokens != other.subject_tokens:
                continue
            if rel.po_tokens < other.po_tokens:
                absorbed = True
                break
            if rel.po_tokens == other.po_tokens and _outranks(other, j, rel, i):
                absorbed = True
                break
        if not absorbed:
            survivors.append(rel)
    return survivors


def _outranks(a: Relation, ia: int, b: Relation, ib: int) -> bool:
    if len(a.surface) != len(b.surface):
        return len(a.surface) > len(b.surface)
    return ia < ib


def load_annotations(
    path: Path, owner: NormalizedText, text_id: str | None = None
) -> AnnotationSet:
    """Load and validate one text's standoff annotations from a jsonl file.

    The file holds one record per text ({"id", "entities", "relations"});
    `text_id` selects the record and may be omitted when the file holds
    exactly one.
    """
    record = _select_record(Path(path), text_id)
    return annotation_set_from_record(record, owner)


def annotation_set_from_record(record: dict, owner: NormalizedText) -> AnnotationSet:
    """Validate one parsed annotation record against its text."""
    entities = [
        _parse_entity(raw, owner, record.get("id", "?")) for raw in record.get("entities", [])
    ]
    entities.sort(key=lambda e: (e.begin, e.end))
    relations = []
    for raw in record.get("relations", []):
        relations.append(_parse_relation(raw, owner, record.get("id", "?")))
    return AnnotationSet(entities=entities, relations=merge_contained_relations(relations))


def _select_record(path: Path, text_id: str | None) -> dict:
    if not path.exists():
        raise AnnotationError(f"annotation file not found: {path}")
    records = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as err:
                raise AnnotationError(f"{path}:{line_no}: invalid JSON: {err}") from err
    if text_id is None:
        if len(records) != 1:
            raise AnnotationError(
                f"{path}: holds {len(records)} records; text_id required"
            )
        return records[0]
    for record in records:
        if record.get("id") == text_id:
            return record
    raise AnnotationError(f"{path}: no record with id {text_id!r}")


def _parse_entity(raw: dict, owner: NormalizedText, rec_id: str) -> EntityMention:
    try:
        begin, end = int(raw["begin"]), int(raw["end"])
    except (KeyError, TypeError, ValueError) as err:
        raise AnnotationError(f"{rec_id}: malformed entity record {raw!r}") from err
    if not (0 <= begin < end <= len(owner.text)):
        raise AnnotationError(
            f"{rec_id}: entity offsets [{begin},{end}) out of range for text of "
            f"length {len(owner.text)}"
        )
    slice_ = owner.text[begin:end]
    claimed = raw.get("surface")
    if claimed is not None and claimed.lower() != slice_.lower():
        raise AnnotationError(
            f"{rec_id}: entity surface {claimed!r} does not match text slice {slice_!r}"
        )
    return EntityMention(
        begin=begin,
        end=end,
        surface=slice_,
        label=str(raw.get("label", "MISC")),
        normalized_form=slice_.lower(),
    )


def _parse_relation(raw: dict, owner: NormalizedText, rec_id: str) -> Relation:
    try:
        subject = raw["subject"]
        predicate = raw.get("predicate", "")
        obj = raw.get("object", "")
        sentence_index = int(raw["sentence_index"])
    except (KeyError, TypeError, ValueError) as err:
        raise AnnotationError(f"{rec_id}: malformed relation record {raw!r}") from err
    if not subject:
        raise AnnotationError(f"{rec_id}: relation subject must be nonempty")
    if not (0 <= sentence_index < len(owner.sentences)):
        raise AnnotationError(
            f"{rec_id}: relation sentence_index {sentence_index} out of range "
            f"(text has {len(owner.sentences)} sentences)"
        )
    return make_relation(subject, predicate, obj, sentence_index)


def load_embeddings(
    path: Path, owner: NormalizedText, text_id: str | None = None
) -> EmbeddingTable:
    """Load one text's embedding table and validate coverage and dimensions."""
    record = _select_record(Path(path), text_id)
    return embedding_table_from_record(record, owner)


def embedding_table_from_record(record: dict, owner: NormalizedText) -> EmbeddingTable:
    """Validate one parsed embedding record against its text."""
    rec_id = record.get("id", "?")
    unit = record.get("unit")
    if unit not in ("token", "sentence"):
        raise AnnotationError(f"{rec_id}: embedding unit must be 'token' or 'sentence'")
    try:
        dim = int(record["dim"])
        vectors = record["vectors"]
    except (KeyError, TypeError, ValueError) as err:
        raise AnnotationError(f"{rec_id}: malformed embedding record") from err
    if len(vectors) != len(owner.sentences):
        raise AnnotationError(
            f"{rec_id}: {len(vectors)} sentence entries for text with "
            f"{len(owner.sentences)} sentences"
        )
    if unit == "sentence":
        for s, vec in enumerate(vectors):
            if len(vec) != dim:
                raise AnnotationError(f"{rec_id}: sentence {s}: vector length != dim {dim}")
        return EmbeddingTable(unit=unit, dim=dim, vectors=[list(map(float, v)) for v in vectors])
    table: list[list[list[float]]] = []
    for s, sent_vectors in enumerate(vectors):
        n_words = sum(1 for t in owner.sentence_tokens(s) if t.is_word)
        if len(sent_vectors) != n_words:
            raise AnnotationError(
                f"{rec_id}: sentence {s}: {len(sent_vectors)} vectors for "
                f"{n_words} word tokens (missing vector for token "
                f"{min(len(sent_vectors), n_words)})"
            )
        row = []
        for t, vec in enumerate(sent_vectors):
            if len(vec) != dim:
                raise AnnotationError(
                    f"{rec_id}: sentence {s}, token {t}: vector length "
                    f"{len(vec)} != dim {dim}"
                )
            row.append(list(map(float, vec)))
        table.append(row)
    return EmbeddingTable(unit="token", dim=dim, vectors=table)


def pseudo_embedding(lower: str, dim: int = EMBEDDING_DIM) -> list[float]:
    """Deterministic hash-based vector; identical strings map to identical vectors."""
    digest = hashlib.sha256(lower.encode("utf-8")).digest()
    needed = dim * 2
    while len(digest) < needed:
        digest += hashlib.sha256(digest).digest()
    return [
        int.from_bytes(digest[2 * k:2 * k + 2], "big") / 32768.0 - 1.0 for k in range(dim)
    ]


def fallback_annotate(text: NormalizedText) -> AnnotationSet:
    """Deterministic test double for external NER / open-IE / embedding models."""
    entities = _capitalized_run_entities(text)
    relations = []
    for s in range(len(text.sentences)):
        triple = _first_pattern_triple(text, s)
        if triple is not None:
            relations.append(triple)
    embeddings = EmbeddingTable(
        unit="token",
        dim=EMBEDDING_DIM,
        vectors=[
            [pseudo_embedding(t.lower) for t in text.sentence_tokens(s) if t.is_word]
            for s in range(len(text.sentences))
        ],
    )
    return AnnotationSet(
        entities=entities,
        relations=merge_contained_relations(relations),
        embeddings=embeddings,
    )


def _capitalized_run_entities(text: NormalizedText) -> list[EntityMention]:
    entities: list[EntityMention] = []
    for s in range(len(text.sentences)):
        tokens = text.sentence_tokens(s)
        run: list[Token] = []
        for tok in tokens + [None]:  # type: ignore[list-item]
            if tok is not None and tok.is_word and tok.surface[:1].isupper():
                run.append(tok)
                continue
            if run:
                entity = _run_to_entity(text, run)
                if entity is not None:
                    entities.append(entity)
                run = []
    entities.sort(key=lambda e: (e.begin, e.end))
    return entities


def _run_to_entity(text: NormalizedText, run: list[Token]) -> EntityMention | None:
    # Trim stopword edges so plain sentence-initial capitalization ("The",
    # "It") does not become an entity on its own.
    while run and run[0].is_stopword:
        run = run[1:]
    while run and run[-1].is_stopword:
        run = run[:-1]
    if not run:
        return None
    begin, end = run[0].begin, run[-1].end
    surface = text.text[begin:end]
    return EntityMention(
        begin=begin, end=end, surface=surface, label="MISC", normalized_form=surface.lower()
    )


def _first_pattern_triple(text: NormalizedText, sentence_index: int) -> Relation | None:
    words = [t for t in text.sentence_tokens(sentence_index) if t.is_word]
    for v, tok in enumerate(words):
        if v == 0 or not _is_verbish(tok.lower):
            continue
        w = v
        while w + 1 < len(words) and _is_verbish(words[w + 1].lower):
            w += 1
        if w + 1 < len(words) and words[w + 1].lower in _PREPOSITIONS:
            w += 1
        span = text.sentences[sentence_index]
        subject = text.text[words[0].begin:words[v].begin].strip()
        predicate = text.text[words[v].begin:words[w].end]
        obj = text.text[words[w].end:span.end].strip().strip(".!?,;:").strip()
        if not subject:
            return None
        return make_relation(subject, predicate, obj, sentence_index)
    return None


def _is_verbish(lower: str) -> bool:
    return lower in _VERBISH or (len(lower) >= 4 and lower.endswith("ed"))
