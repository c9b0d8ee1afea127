from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumlens.errors import AnnotationError
from sumlens.standoff import (
    fallback_annotate,
    load_annotations,
    load_embeddings,
    make_relation,
    merge_contained_relations,
    pseudo_embedding,
)
from sumlens.textnorm import normalize_document


def _write_jsonl(path, records):
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8")


def test_load_annotations_accepts_matching_entity(tmp_path):
    owner = normalize_document("He went to London on Monday.")
    begin = owner.text.index("London")
    path = tmp_path / "annotations.d1.jsonl"
    _write_jsonl(
        path,
        [{"id": "d1", "entities": [{"begin": begin, "end": begin + 6, "label": "GPE",
                                    "surface": "London"}], "relations": []}],
    )
    ann = load_annotations(path, owner, "d1")
    assert len(ann.entities) == 1
    assert ann.entities[0].surface == "London"
    assert ann.entities[0].normalized_form == "london"
    assert ann.entities[0].label == "GPE"


def test_load_annotations_surface_check_is_case_insensitive(tmp_path):
    owner = normalize_document("he went to london on monday")
    begin = owner.text.index("london")
    path = tmp_path / "annotations.d1.jsonl"
    _write_jsonl(
        path,
        [{"id": "d1", "entities": [{"begin": begin, "end": begin + 6,
                                    "surface": "London", "label": "GPE"}]}],
    )
    ann = load_annotations(path, owner, "d1")
    assert ann.entities[0].surface == "london"


def test_load_annotations_rejects_out_of_range_offset(tmp_path):
    owner = normalize_document("Short text.")
    path = tmp_path / "annotations.d1.jsonl"
    _write_jsonl(path, [{"id": "d1", "entities": [{"begin": 3, "end": 999, "label": "X"}]}])
    with pytest.raises(AnnotationError):
        load_annotations(path, owner, "d1")


def test_load_annotations_rejects_surface_mismatch(tmp_path):
    owner = normalize_document("He went to London.")
    path = tmp_path / "annotations.d1.jsonl"
    _write_jsonl(path, [{"id": "d1", "entities": [{"begin": 0, "end": 2, "surface": "Paris"}]}])
    with pytest.raises(AnnotationError):
        load_annotations(path, owner, "d1")


def test_load_annotations_validates_relation_sentence_index(tmp_path):
    owner = normalize_document("One sentence only.")
    path = tmp_path / "annotations.d1.jsonl"
    _write_jsonl(
        path,
        [{"id": "d1", "relations": [{"subject": "x", "predicate": "y", "object": "z",
                                     "sentence_index": 5}]}],
    )
    with pytest.raises(AnnotationError):
        load_annotations(path, owner, "d1")


def test_merge_bail_fixture_keeps_only_the_larger_relation():
    r_full = make_relation("bennett", "was released on", "$10,500 bail", 0)
    r_part = make_relation("bennett", "was released", "bail", 0)
    # derived by hand: {was, released, bail} is a subset of
    # {was, released, on, 10,500, bail} and the subjects match
    assert r_part.po_tokens < r_full.po_tokens
    merged = merge_contained_relations([r_full, r_part])
    assert merged == [r_full]
    merged = merge_contained_relations([r_part, r_full])
    assert merged == [r_full]


def test_merge_keeps_relations_with_different_subjects():
    r1 = make_relation("alice", "saw", "the ship", 0)
    r2 = make_relation("bob", "saw", "the ship", 0)
    assert merge_contained_relations([r1, r2]) == [r1, r2]


def test_merge_empty_list():
    assert merge_contained_relations([]) == []


def test_merge_equal_token_sets_keeps_longest_surface():
    # "the ship the" has the same word-token set as "the ship" but a longer surface
    short = make_relation("alice", "saw", "the ship", 0)
    long = make_relation("alice", "saw", "the ship the", 1)
    assert short.po_tokens == long.po_tokens
    merged = merge_contained_relations([short, long])
    assert merged == [long]  # longer surface wins over input order


def test_merge_equal_token_sets_and_surfaces_keeps_first():
    a = make_relation("alice", "saw", "the ship", 0)
    b = make_relation("alice", "saw", "the ship", 1)
    assert merge_contained_relations([a, b]) == [a]


_WORDS = ["alpha", "beta", "gamma", "delta", "epsilon"]


@st.composite
def _relations(draw):
    subject = draw(st.sampled_from(["alice", "bob"]))
    predicate = " ".join(draw(st.lists(st.sampled_from(_WORDS), min_size=1, max_size=3)))
    obj = " ".join(draw(st.lists(st.sampled_from(_WORDS), min_size=0, max_size=3)))
    return make_relation(subject, predicate, obj, 0)


@given(st.lists(_relations(), max_size=8))
@settings(max_examples=150)
def test_merge_is_idempotent_and_never_invents(relations):
    merged = merge_contained_relations(relations)
    assert merge_contained_relations(merged) == merged
    for rel in merged:
        assert rel in relations
    assert len(merged) <= len(relations)


def test_merge_without_containment_pairs_is_identity():
    r1 = make_relation("alice", "saw", "ship", 0)
    r2 = make_relation("alice", "heard", "song", 0)
    assert merge_contained_relations([r1, r2]) == [r1, r2]


def test_fallback_entities_capitalized_runs():
    text = normalize_document("John met Mary Smith.")
    ann = fallback_annotate(text)
    assert [e.surface for e in ann.entities] == ["John", "Mary Smith"]
    assert all(e.label == "MISC" for e in ann.entities)


def test_fallback_entities_lowercase_sentence_is_empty():
    ann = fallback_annotate(normalize_document("it rained all day."))
    assert ann.entities == []


def test_fallback_entity_skips_bare_capitalized_stopword():
    ann = fallback_annotate(normalize_document("The rain fell on Paris."))
    assert [e.surface for e in ann.entities] == ["Paris"]


def test_fallback_relation_pattern():
    text = normalize_document("Bennett was released on $10,500 bail.")
    ann = fallback_annotate(text)
    assert len(ann.relations) == 1
    rel = ann.relations[0]
    assert rel.subject == "Bennett"
    assert rel.predicate == "was released on"
    assert rel.object == "$10,500 bail"
    assert rel.sentence_index == 0


def test_fallback_relation_without_object():
    text = normalize_document("She was arrested.")
    ann = fallback_annotate(text)
    assert len(ann.relations) == 1
    assert ann.relations[0].subject == "She"
    assert ann.relations[0].predicate == "was arrested"
    assert ann.relations[0].object == ""


def test_fallback_embeddings_deterministic_across_texts():
    a = fallback_annotate(normalize_document("The storm hit the coast."))
    b = fallback_annotate(normalize_document("The storm hit the coast."))
    assert a.embeddings is not None and b.embeddings is not None
    assert a.embeddings.vectors == b.embeddings.vectors
    assert a.embeddings.dim == 16


def test_pseudo_embedding_depends_only_on_string():
    assert pseudo_embedding("storm") == pseudo_embedding("storm")
    assert pseudo_embedding("storm") != pseudo_embedding("coast")
    assert len(pse := pseudo_embedding("storm")) == 16
    assert all(-1.0 <= x < 1.0 for x in pse)


def test_fallback_embeddings_cover_every_word_token():
    text = normalize_document("Alice met Bob. They talked.")
    table = fallback_annotate(text).embeddings
    assert table is not None
    for s in range(len(text.sentences)):
        n_words = sum(1 for t in text.sentence_tokens(s) if t.is_word)
        assert len(table.vectors[s]) == n_words


def test_load_embeddings_full_coverage_accepted(tmp_path):
    owner = normalize_document("Alice met Bob.")
    vectors = [[[0.0] * 768 for _t in range(3)]]
    path = tmp_path / "embeddings.d1.jsonl"
    _write_jsonl(path, [{"id": "d1", "unit": "token", "dim": 768, "vectors": vectors}])
    table = load_embeddings(path, owner, "d1")
    assert table.dim == 768
    assert len(table.vectors[0]) == 3


def test_load_embeddings_missing_vector_names_position(tmp_path):
    owner = normalize_document("Alice met Bob.")
    vectors = [[[0.0] * 4 for _t in range(2)]]  # 3 word tokens, only 2 vectors
    path = tmp_path / "embeddings.d1.jsonl"
    _write_jsonl(path, [{"id": "d1", "unit": "token", "dim": 4, "vectors": vectors}])
    with pytest.raises(AnnotationError, match=r"sentence 0.*token 2"):
        load_embeddings(path, owner, "d1")


def test_load_embeddings_ragged_dims_rejected(tmp_path):
    owner = normalize_document("Alice met Bob.")
    vectors = [[[0.0] * 4, [0.0] * 3, [0.0] * 4]]
    path = tmp_path / "embeddings.d1.jsonl"
    _write_jsonl(path, [{"id": "d1", "unit": "token", "dim": 4, "vectors": vectors}])
    with pytest.raises(AnnotationError):
        load_embeddings(path, owner, "d1")


def test_entities_sorted_by_begin_offset(tmp_path):
    owner = normalize_document("Paris and London and Rome.")
    ents = [
        {"begin": owner.text.index(name), "end": owner.text.index(name) + len(name)}
        for name in ["Rome", "Paris", "London"]
    ]
    path = tmp_path / "annotations.d1.jsonl"
    _write_jsonl(path, [{"id": "d1", "entities": ents}])
    ann = load_annotations(path, owner, "d1")
    assert [e.surface for e in ann.entities] == ["Paris", "London", "Rome"]
