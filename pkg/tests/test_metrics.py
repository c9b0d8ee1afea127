from __future__ import annotations

import pytest

from sumlens.errors import MetricUndefined
from sumlens.metrics import (
    AGGREGATE_METRIC_KEYS,
    MetricRecord,
    aggregate,
    compression,
    compute_metric_record,
    entity_factuality,
    ngram_abstractiveness,
    reference_rouge,
    relation_factuality,
    summary_length,
)
from sumlens.standoff import EntityMention, fallback_annotate, make_relation
from sumlens.textnorm import normalize_document


def _text_with_words(count: int) -> "NormalizedText":
    words = [f"w{i}" for i in range(count)]
    return normalize_document(" ".join(words) + ".")


def _entity(form: str) -> EntityMention:
    return EntityMention(0, len(form), form, "MISC", form.lower())


def test_compression_ratio():
    doc = _text_with_words(100)
    summary = _text_with_words(25)
    assert compression(doc, summary) == 4.0


def test_compression_identity_summary():
    doc = _text_with_words(12)
    assert compression(doc, doc) == 1.0


def test_compression_empty_summary_undefined():
    with pytest.raises(MetricUndefined):
        compression(_text_with_words(5), normalize_document(""))


def test_abstractiveness_verbatim_substring_is_zero():
    doc = normalize_document("Alpha beta gamma delta epsilon zeta eta.")
    summary = normalize_document("Beta gamma delta epsilon.")
    assert ngram_abstractiveness(summary, doc, 2) == 0.0


def test_abstractiveness_disjoint_vocabulary_is_one():
    doc = normalize_document("Alpha beta gamma delta.")
    summary = normalize_document("Quixotic zephyrs jangle loudly.")
    assert ngram_abstractiveness(summary, doc, 2) == 1.0


def test_abstractiveness_worked_example():
    # doc "a b c d e", summary "a b x c d", n=2; bigrams enumerated by hand:
    #   summary: (a,b) (b,x) (x,c) (c,d); doc: (a,b) (b,c) (c,d) (d,e)
    #   shared (a,b) covers positions {0,1}; shared (c,d) covers {3,4}
    #   1 - 4/5 = 0.2
    doc = normalize_document("a b c d e")
    summary = normalize_document("a b x c d")
    summary_bigrams = [("a", "b"), ("b", "x"), ("x", "c"), ("c", "d")]
    doc_bigrams = [("a", "b"), ("b", "c"), ("c", "d"), ("d", "e")]
    marked = set()
    for i, gram in enumerate(summary_bigrams):
        if gram in doc_bigrams:
            marked.update({i, i + 1})
    assert marked == {0, 1, 3, 4}
    assert ngram_abstractiveness(summary, doc, 2) == pytest.approx(1 - 4 / 5)


def test_abstractiveness_short_summary_falls_back_to_unigrams():
    doc = normalize_document("Alpha beta gamma.")
    summary = normalize_document("Alpha beta.")
    assert ngram_abstractiveness(summary, doc, 3) == 0.0
    summary = normalize_document("Zebra.")
    assert ngram_abstractiveness(summary, doc, 3) == 1.0


def test_abstractiveness_empty_summary_undefined():
    with pytest.raises(MetricUndefined):
        ngram_abstractiveness(normalize_document(""), _text_with_words(4), 2)


def test_abstractiveness_non_decreasing_in_n_on_constructed_case():
    # one substituted word makes longer shared n-grams strictly rarer
    doc = normalize_document("a b c d e f")
    summary = normalize_document("a b x d e f")
    values = [ngram_abstractiveness(summary, doc, n) for n in (1, 2, 3, 4)]
    assert values == sorted(values)
    assert values[0] < values[-1]


def test_summary_length_excludes_punctuation():
    assert summary_length(normalize_document("john went.")) == 2
    assert summary_length(normalize_document("")) == 0
    # tokenizer fixture: it / 's / $ / 10,500 / bail -> 4 words, "$" is punctuation
    assert summary_length(normalize_document("it's $10,500 bail")) == 4


def test_entity_factuality_full_and_partial():
    doc_entities = [_entity("london")]
    assert entity_factuality([_entity("london")], doc_entities) == 100.0
    assert entity_factuality([_entity("london"), _entity("paris")], doc_entities) == 50.0


def test_entity_factuality_undefined_without_entities():
    with pytest.raises(MetricUndefined):
        entity_factuality([], [_entity("london")])


def test_entity_factuality_duplicates_counted_once():
    doc_entities = [_entity("london")]
    once = entity_factuality([_entity("london"), _entity("paris")], doc_entities)
    dup = entity_factuality(
        [_entity("london"), _entity("london"), _entity("paris")], doc_entities
    )
    assert once == dup == 50.0


def test_entity_factuality_containment_matches_partial_mentions():
    doc_entities = [_entity("barack obama")]
    assert entity_factuality([_entity("obama")], doc_entities) == 100.0
    assert entity_factuality([_entity("barack obama of hawaii")], [_entity("obama")]) == 100.0


def test_relation_factuality_exact_match():
    rel = make_relation("bennett", "was released on", "$10,500 bail", 0)
    assert relation_factuality([rel], [rel]) == 100.0


def test_relation_factuality_unaligned_relation_counts_zero():
    summary_rel = make_relation("she", "was arrested", "", 0)
    doc_rel = make_relation("bennett", "was released on", "$10,500 bail", 0)
    assert relation_factuality([summary_rel], [doc_rel]) == 0.0


def test_relation_factuality_one_of_two():
    found = make_relation("alice", "saw", "the ship", 0)
    missing = make_relation("bob", "flew", "a kite", 0)
    assert relation_factuality([found, missing], [found]) == 50.0


def test_relation_factuality_superset_absorbs():
    short = make_relation("bennett", "was released", "bail", 0)
    full = make_relation("bennett", "was released on", "$10,500 bail", 0)
    assert relation_factuality([short], [full]) == 100.0
    assert relation_factuality([full], [short]) == 0.0


def test_relation_factuality_undefined_without_relations():
    with pytest.raises(MetricUndefined):
        relation_factuality([], [])


def test_reference_rouge_identity_and_disjoint():
    summary = normalize_document("Alice met Bob.")
    r1, r2, rl = reference_rouge(summary, summary)
    assert (r1.f1, r2.f1, rl.f1) == (1.0, 1.0, 1.0)
    other = normalize_document("Zebras gallop north.")
    r1, r2, rl = reference_rouge(summary, other)
    assert (r1.f1, r2.f1, rl.f1) == (0.0, 0.0, 0.0)


def test_reference_rouge_matches_simple_oracle():
    summary = normalize_document("Alice met Bob at noon.")
    reference = normalize_document("Alice met Carol at dawn.")
    r1, _, _ = reference_rouge(summary, reference)
    cand, ref = summary.words(), reference.words()
    overlap = 0
    pool = list(ref)
    for w in cand:
        if w in pool:
            pool.remove(w)
            overlap += 1
    p, r = overlap / len(cand), overlap / len(ref)
    assert r1.precision == pytest.approx(p)
    assert r1.recall == pytest.approx(r)
    assert r1.f1 == pytest.approx(2 * p * r / (p + r))


def test_reference_rouge_absent_reference_undefined():
    with pytest.raises(MetricUndefined):
        reference_rouge(normalize_document("Alice met Bob."), None)


def _record(**values) -> MetricRecord:
    record = MetricRecord(summary_length_words=int(values.pop("length_words", 0)))
    record.compression = values.pop("compression", None)
    for n in (1, 2, 3, 4):
        record.abstractiveness_by_n[n] = values.pop(f"abstractiveness_n{n}", None)
    record.entity_factuality = values.pop("entity_factuality", None)
    record.relation_factuality = values.pop("relation_factuality", None)
    assert not values
    return record


def test_aggregate_mean():
    records = [_record(compression=2.0), _record(compression=4.0)]
    agg = aggregate("m", records)
    assert agg.means["compression"] == 3.0
    assert agg.counts["compression"] == 2


def test_aggregate_histograms_conserve_mass():
    records = [_record(compression=float(i)) for i in range(1, 12)]
    agg = aggregate("m", records, bins=4)
    hist = agg.histograms["compression"]
    assert sum(hist.counts) == agg.counts["compression"] == 11
    assert hist.bin_edges == sorted(hist.bin_edges)
    assert len(hist.bin_edges) == len(hist.counts) + 1


def test_aggregate_single_value_histogram():
    records = [_record(compression=3.0), _record(compression=3.0)]
    hist = aggregate("m", records).histograms["compression"]
    assert hist.bin_edges == [2.5, 3.5]
    assert hist.counts == [2]


def test_aggregate_undefined_values_excluded():
    records = [_record(entity_factuality=100.0), _record()]
    agg = aggregate("m", records)
    assert agg.means["entity_factuality"] == 100.0
    assert agg.counts["entity_factuality"] == 1
    assert agg.counts["relation_factuality"] == 0
    assert agg.means["relation_factuality"] is None
    assert "relation_factuality" not in agg.histograms


def test_aggregate_mean_of_constant_is_constant():
    records = [_record(compression=7.5)] * 5
    assert aggregate("m", records).means["compression"] == 7.5


def test_aggregate_empty_raises():
    with pytest.raises(ValueError):
        aggregate("m", [])


def test_aggregate_means_match_independent_recomputation():
    records = [
        _record(compression=float(i), length_words=i, abstractiveness_n3=i / 10.0)
        for i in range(1, 8)
    ]
    agg = aggregate("m", records)
    for key in AGGREGATE_METRIC_KEYS:
        defined = [r.values()[key] for r in records if r.values()[key] is not None]
        if defined:
            assert abs(agg.means[key] - sum(defined) / len(defined)) <= 1e-9
        else:
            assert agg.means[key] is None


def test_compute_metric_record_end_to_end():
    doc = normalize_document(
        "Alice visited Paris in March. Bob bought seven lamps. Carol sailed to Malta."
    )
    reference = normalize_document("Alice visited Paris. Carol sailed.")
    summary = normalize_document("Alice visited Paris in March.")
    doc_ann = fallback_annotate(doc)
    sum_ann = fallback_annotate(summary)
    record = compute_metric_record(
        doc, reference, summary,
        doc_ann.entities, doc_ann.relations,
        sum_ann.entities, sum_ann.relations,
    )
    assert record.compression == pytest.approx(doc.word_count() / summary.word_count())
    assert record.abstractiveness == 0.0  # verbatim copy
    assert record.summary_length_words == 5
    assert record.entity_factuality == 100.0
    assert record.rouge1 is not None and record.rouge1.f1 > 0
    assert record.values()["abstractiveness_n3"] == 0.0


def test_metric_record_round_trip():
    doc = normalize_document("Alice visited Paris. Bob slept.")
    summary = normalize_document("Alice visited Paris.")
    doc_ann = fallback_annotate(doc)
    sum_ann = fallback_annotate(summary)
    record = compute_metric_record(
        doc, None, summary,
        doc_ann.entities, doc_ann.relations,
        sum_ann.entities, sum_ann.relations,
    )
    assert MetricRecord.from_record(record.to_record()).to_record() == record.to_record()
    assert record.rouge1 is None
