"""Text normalization: de-tokenization, sentence segmentation, tokenization.

All functions here are pure and deterministic; the rule tables (stopwords,
abbreviations, delimiter patterns) ship as data files so results are
reproducible bit-for-bit.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

_DATA_DIR = Path(__file__).parent / "data"

_TERMINALS = ".!?"
_CLITIC_RE = re.compile(r"\s+('s|'re|'ve|'ll|'d|'m|n't|'t)(?=[\s.,;:!?)\]}\"']|$)")
_SPACE_BEFORE_PUNCT_RE = re.compile(r"\s+([.,;:!?%)\]}])")
_SPACE_AFTER_OPEN_RE = re.compile(r"([(\[{])\s+")
_CURRENCY_RE = re.compile(r"([$£€])\s+(?=\d)")
_REPEAT_TERMINAL_RE = re.compile(r"([.!?])\1+")
_WS_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class SentenceSpan:
    """Half-open character span [begin, end) of one sentence."""

    begin: int
    end: int


@dataclass(frozen=True)
class Token:
    begin: int
    end: int
    surface: str
    lower: str
    is_word: bool
    is_stopword: bool


@dataclass(frozen=True)
class NormalizedText:
    """Normalized surface form with sentence spans and token spans."""

    text: str
    sentences: tuple[SentenceSpan, ...]
    tokens: tuple[Token, ...]

    def sentence_text(self, index: int) -> str:
        span = self.sentences[index]
        return self.text[span.begin:span.end]

    def sentence_tokens(self, index: int) -> list[Token]:
        span = self.sentences[index]
        return [t for t in self.tokens if span.begin <= t.begin and t.end <= span.end]

    def sentence_words(self, index: int) -> list[str]:
        """Lowercased word tokens of one sentence."""
        return [t.lower for t in self.sentence_tokens(index) if t.is_word]

    def words(self) -> list[str]:
        """Lowercased word tokens of the whole text."""
        return [t.lower for t in self.tokens if t.is_word]

    def word_count(self) -> int:
        return sum(1 for t in self.tokens if t.is_word)

    def sentence_index_of(self, token: Token) -> int:
        for i, span in enumerate(self.sentences):
            if span.begin <= token.begin and token.end <= span.end:
                return i
        raise ValueError(f"token at [{token.begin},{token.end}) lies in no sentence")

    def to_record(self) -> dict:
        return {
            "text": self.text,
            "sentences": [[s.begin, s.end] for s in self.sentences],
            "tokens": [
                [t.begin, t.end, int(t.is_word), int(t.is_stopword)] for t in self.tokens
            ],
        }

    @classmethod
    def from_record(cls, record: dict) -> "NormalizedText":
        text = record["text"]
        sentences = tuple(SentenceSpan(b, e) for b, e in record["sentences"])
        tokens = tuple(
            Token(
                begin=b,
                end=e,
                surface=text[b:e],
                lower=text[b:e].lower(),
                is_word=bool(w),
                is_stopword=bool(s),
            )
            for b, e, w, s in record["tokens"]
        )
        return cls(text=text, sentences=sentences, tokens=tokens)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    lines = (_DATA_DIR / "stopwords.txt").read_text(encoding="utf-8").splitlines()
    return frozenset(line.strip() for line in lines if line.strip())


@lru_cache(maxsize=1)
def default_abbreviations() -> frozenset[str]:
    lines = (_DATA_DIR / "abbreviations.txt").read_text(encoding="utf-8").splitlines()
    return frozenset(line.strip() for line in lines if line.strip())


@lru_cache(maxsize=1)
def default_delimiters() -> tuple[str, ...]:
    table = json.loads((_DATA_DIR / "delimiters.json").read_text(encoding="utf-8"))
    return tuple(table["default"])


def load_delimiter_table(path: Path) -> dict[str, tuple[str, ...]]:
    """Per-model delimiter patterns; key "default" applies when a model has none."""
    table = json.loads(Path(path).read_text(encoding="utf-8"))
    return {key: tuple(patterns) for key, patterns in table.items()}


def normalize_text(raw: str, delimiter_patterns: tuple[str, ...] | list[str] = ()) -> str:
    """De-tokenize and clean a raw text.

    Model-specific sentence delimiters become ". ", detached punctuation is
    re-attached, whitespace runs collapse to single spaces, and the result is
    trimmed. Total and idempotent.
    """
    text = raw
    for pattern in delimiter_patterns:
        if pattern:
            text = text.replace(pattern, ". ")
    text = text.replace("``", '"').replace("''", '"')
    text = _WS_RE.sub(" ", text).strip()
    text = _CURRENCY_RE.sub(r"\1", text)
    text = _SPACE_BEFORE_PUNCT_RE.sub(r"\1", text)
    text = _SPACE_AFTER_OPEN_RE.sub(r"\1", text)
    text = _pair_double_quotes(text)
    text = _CLITIC_RE.sub(r"\1", text)
    text = _REPEAT_TERMINAL_RE.sub(r"\1", text)
    return text.strip()


def _pair_double_quotes(text: str) -> str:
    # Straight double quotes alternate opening/closing; spaces just inside
    # the pair are dropped.
    out: list[str] = []
    opening = True
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == '"':
            if opening:
                out.append(ch)
                i += 1
                while i < n and text[i] == " ":
                    i += 1
            else:
                while out and out[-1] == " ":
                    out.pop()
                out.append(ch)
                i += 1
            opening = not opening
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def segment_sentences(
    text: str, abbreviations: frozenset[str] | None = None
) -> list[SentenceSpan]:
    """Rule-based sentence segmentation over a normalized text.

    Splits after `.`, `!`, `?` followed by whitespace and an uppercase letter
    (or at end of text), unless the period terminates a known abbreviation or
    a single-letter initial.
    """
    abbrevs = abbreviations if abbreviations is not None else default_abbreviations()
    spans: list[SentenceSpan] = []
    start: int | None = None
    for i, ch in enumerate(text):
        if start is None and not ch.isspace():
            start = i
        if start is not None and ch in _TERMINALS and _is_boundary(text, i, abbrevs):
            spans.append(SentenceSpan(start, i + 1))
            start = None
    if start is not None:
        end = len(text)
        while end > start and text[end - 1].isspace():
            end -= 1
        spans.append(SentenceSpan(start, end))
    return spans


def _is_boundary(text: str, i: int, abbrevs: frozenset[str]) -> bool:
    if text[i] == ".":
        token = _token_ending_at(text, i)
        if token in abbrevs:
            return False
        # single-letter initials: "J. K. Rowling"
        if len(token) == 2 and token[0].isalpha():
            return False
    rest = text[i + 1:]
    if not rest.strip():
        return True
    if not rest[0].isspace():
        return False
    following = rest.lstrip()
    return following[0].isupper()


def _token_ending_at(text: str, i: int) -> str:
    # Includes the terminal period; periods and apostrophes inside the token
    # are kept so "u.s." resolves as one abbreviation.
    k = i
    while k > 0 and (text[k - 1].isalnum() or text[k - 1] in ".'"):
        k -= 1
    return text[k:i + 1].lower()


def tokenize(
    text: str, span: SentenceSpan, stopwords: frozenset[str] | None = None
) -> list[Token]:
    """Split one sentence span into word and punctuation tokens.

    Punctuation characters become their own tokens (is_word=False) except
    digit-internal commas/periods ("10,500", "3.14") which stay inside the
    word token. An apostrophe inside a word starts a clitic token ("it's" ->
    "it", "'s").
    """
    stop = stopwords if stopwords is not None else default_stopwords()
    tokens: list[Token] = []
    i = span.begin
    end = span.end
    while i < end:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isalnum():
            j = i + 1
            while j < end:
                c = text[j]
                if c.isalnum():
                    j += 1
                elif (
                    c in ",."
                    and j + 1 < end
                    and text[j - 1].isdigit()
                    and text[j + 1].isdigit()
                ):
                    j += 1
                else:
                    break
            tokens.append(_make_token(text, i, j, stop))
            i = j
        elif (
            ch == "'"
            and i > span.begin
            and i + 1 < end
            and text[i - 1].isalnum()
            and text[i + 1].isalpha()
        ):
            j = i + 1
            while j < end and text[j].isalpha():
                j += 1
            tokens.append(_make_token(text, i, j, stop))
            i = j
        else:
            tokens.append(_make_token(text, i, i + 1, stop))
            i += 1
    return tokens


def _make_token(text: str, begin: int, end: int, stopwords: frozenset[str]) -> Token:
    surface = text[begin:end]
    lower = surface.lower()
    is_word = any(c.isalnum() for c in surface)
    return Token(
        begin=begin,
        end=end,
        surface=surface,
        lower=lower,
        is_word=is_word,
        is_stopword=is_word and lower in stopwords,
    )


def content_words(tokens: list[Token]) -> list[Token]:
    """Word tokens that are not stopwords, order preserved."""
    return [t for t in tokens if t.is_word and not t.is_stopword]


def normalize_document(
    raw: str,
    delimiter_patterns: tuple[str, ...] | list[str] | None = None,
    stopwords: frozenset[str] | None = None,
    abbreviations: frozenset[str] | None = None,
) -> NormalizedText:
    """Run the full pipeline: normalize, segment, tokenize."""
    patterns = delimiter_patterns if delimiter_patterns is not None else default_delimiters()
    text = normalize_text(raw, patterns)
    spans = segment_sentences(text, abbreviations)
    stop = stopwords if stopwords is not None else default_stopwords()
    tokens: list[Token] = []
    for span in spans:
        tokens.extend(tokenize(text, span, stop))
    return NormalizedText(text=text, sentences=tuple(spans), tokens=tuple(tokens))
