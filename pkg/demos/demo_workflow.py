"""Walk the full assessment workflow on the synthetic fixture corpus.

Builds the corpus, runs the precompute pipeline in-process, then replays the
two classic diagnosis stories: verifying a hallucinated word through sentence
alignment, and uncovering a subtler error through an unaligned relation.
"""

import json
import tempfile
from pathlib import Path

from sumlens import AlignConfig, ViewContext, add_model_outputs, build_index, ingest_corpus
from sumlens.fixture import CASE_B_DOC, write_fixture_corpus
from sumlens.views import faithfulness, hallucination_aggregate, relation_coverage

workdir = Path(tempfile.mkdtemp(prefix="sumlens-demo-"))
fixture = write_fixture_corpus(workdir / "input")
print(f"fixture corpus written to {fixture}")

# ingest: normalize documents and the four models' outputs
store = ingest_corpus(fixture / "manifest.json")
manifest = json.loads((fixture / "manifest.json").read_text())
for entry in manifest["models"]:
    report = add_model_outputs(store, entry["model_id"], fixture / entry["outputs_file"])
    print(f"  {entry['model_id']}: accepted {report.accepted} summaries")

# precompute: lexical + semantic alignments, metrics, aggregates
config = AlignConfig.from_file(fixture / "align.json")
index = build_index(store, config, jobs=2)
ctx = ViewContext(store=store, index=index)
print(f"index built: {len(index.alignments)} aligned (model, document) pairs\n")

# ---------------------------------------------------------------------------
# Story 1: a paraphrasing model substitutes novel words. The faithfulness
# view highlights them and offers the best-matching source sentences so a
# reviewer can decide whether each substitution is justified.
print("=== story 1: checking novel words in context ===")
payload = faithfulness(ctx, "d00", "halluc")
for sentence in payload["sentences"]:
    novel = [t["surface"] for t in sentence["tokens"] if t["novel"]]
    if not novel:
        continue
    print(f"summary sentence: {sentence['text']}")
    print(f"  novel words: {', '.join(novel)}")
    for match in sentence["lexical"]:
        source = store.document("d00").normalized.sentence_text(match["index"])
        print(f"  best source (score {match['score']:.2f}): {source}")

top = hallucination_aggregate(ctx, "halluc")["words"][:5]
print("most frequent novel words of this model:", ", ".join(f"{w['word']} x{w['count']}" for w in top))

# ---------------------------------------------------------------------------
# Story 2: a summary sentence can be unfaithful without any novel word.
# Relation alignment catches it: the claim has no supporting relation in the
# document, and the view retrieves the sentences that show what actually
# happened.
print("\n=== story 2: a hidden error via relation alignment ===")
payload = relation_coverage(ctx, CASE_B_DOC, ["halluc"])
for relation in payload["models"][0]["relations"]:
    status = "aligned" if relation["aligned"] else "UNALIGNED"
    print(f"[{status}] ({relation['subject']} | {relation['predicate']} | {relation['object']})")
    if not relation["aligned"]:
        for source in relation["source_sentences"]:
            print(f"    document says: {source['text']}")

print("\ndocument relations for comparison:")
for relation in payload["document_relations"]:
    print(f"  ({relation['subject']} | {relation['predicate']} | {relation['object']})")
