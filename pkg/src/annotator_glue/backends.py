"""Pluggable NER / open-IE / embedding backends, registered by string id.

The built-in backends are rule-based and deterministic so a corpus can be
annotated with no model downloads; heavyweight models plug in by registering
a callable under a new id. Every backend reports character offsets against
the normalized text it was handed; it never re-normalizes.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

_CAPITALIZED_RUN = re.compile(r"\b[A-Z][\w,]*(?:\s+[A-Z][\w,]*)*")
_WORDISH = re.compile(r"\w+")
_VERB_PIVOT = re.compile(
    r"\b(was|were|is|are|has|have|had|will|would|did|does|do)\b|\b\w{2,}ed\b"
)


@dataclass
class BackendToken:
    begin: int
    end: int
    vector: list[float]


def rule_ner(text: str, sentences: list[tuple[int, int]]) -> list[dict]:
    """Capitalized runs, label MISC; offsets into the given text."""
    entities = []
    for begin, end in sentences:
        for match in _CAPITALIZED_RUN.finditer(text, begin, end):
            entities.append({"begin": match.start(), "end": match.end(), "label": "MISC"})
    return entities


def pattern_ie(text: str, sentences: list[tuple[int, int]]) -> list[dict]:
    """First subject/pivot/object split per sentence."""
    relations = []
    for index, (begin, end) in enumerate(sentences):
        sentence = text[begin:end]
        match = _VERB_PIVOT.search(sentence)
        if match is None or match.start() == 0:
            continue
        subject = sentence[:match.start()].strip(" ,;:")
        predicate = match.group(0)
        obj = sentence[match.end():].strip(" ,;:").rstrip(".!?").strip()
        if not subject:
            continue
        relations.append(
            {
                "subject": subject,
                "predicate": predicate,
                "object": obj,
                "sentence_index": index,
            }
        )
    return relations


def _hash_vector(token: str, dim: int) -> list[float]:
    digest = hashlib.blake2b(token.lower().encode("utf-8"), digest_size=dim * 2).digest()
    return [
        int.from_bytes(digest[2 * k:2 * k + 2], "little") / 32768.0 - 1.0 for k in range(dim)
    ]


def _hash_embedder(dim: int):
    def embed(text: str, sentences: list[tuple[int, int]]) -> list[list[BackendToken]]:
        table = []
        for begin, end in sentences:
            row = [
                BackendToken(
                    begin=match.start(),
                    end=match.end(),
                    vector=_hash_vector(match.group(0), dim),
                )
                for match in _WORDISH.finditer(text, begin, end)
            ]
            table.append(row)
        return table

    return embed


NER_BACKENDS = {"rule": rule_ner}
IE_BACKENDS = {"pattern": pattern_ie}
EMBEDDING_BACKENDS = {"hash16": _hash_embedder(16), "hash32": _hash_embedder(32)}
EMBEDDING_DIMS = {"hash16": 16, "hash32": 32}


def register_embedding_backend(backend_id: str, dim: int, fn) -> None:
    EMBEDDING_BACKENDS[backend_id] = fn
    EMBEDDING_DIMS[backend_id] = dim
