"""Tour of the scoring primitives: ROUGE, rescaled BERTScore, and the
residual second-match procedure that powers lexical alignment."""

from sumlens import bertscore_rescaled, lexical_align, normalize_document, rouge_l, rouge_n
from sumlens.standoff import fallback_annotate

# n-gram overlap and longest common subsequence
candidate = "the cat sat on the mat".split()
reference = "the cat lay on a mat".split()
for n in (1, 2):
    score = rouge_n(candidate, reference, n)
    print(f"rouge-{n}: P={score.precision:.3f} R={score.recall:.3f} F1={score.f1:.3f}")
score = rouge_l(candidate, reference)
print(f"rouge-L: P={score.precision:.3f} R={score.recall:.3f} F1={score.f1:.3f}")

# greedy token-matching BERTScore with baseline rescaling
doc = normalize_document("Alice visited Paris. Bob bought lamps. Carol sailed away.")
summary = normalize_document("Alice visited Paris.")
doc_emb = fallback_annotate(doc).embeddings
sum_emb = fallback_annotate(summary).embeddings
for b in (0.0, 0.3):
    scores = [
        bertscore_rescaled(sum_emb.vectors[0], doc_emb.vectors[s], b)
        for s in range(len(doc.sentences))
    ]
    print(f"bertscore (b={b}):", " ".join(f"s{s}={v:.3f}" for s, v in enumerate(scores)))

# a fused sentence recovers both of its sources: the first match wins on
# averaged ROUGE, then its content words are removed and the residual
# rescores against the remaining sentences
fused = normalize_document("Alice visited Paris and Bob bought lamps.")
doc_sentences = [doc.sentence_tokens(s) for s in range(len(doc.sentences))]
matches = lexical_align(fused.sentence_tokens(0), doc_sentences)
for match in matches:
    print(f"lexical rank {match.rank}: doc sentence {match.doc_sentence_index} "
          f"(score {match.score:.3f}) -> {doc.sentence_text(match.doc_sentence_index)}")
