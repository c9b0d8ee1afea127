"""Deterministic synthetic fixture corpus: 20 documents x 4 models.

The four models exercise the whole pipeline: "lead3" copies the first three
sentences verbatim, "fusion" fuses adjacent sentence pairs (joined with a
model-specific <q> delimiter), "halluc" paraphrases the lead with novel
words plus one unfaithful relation sentence, and "noise" emits sentences
with vocabulary fully disjoint from the document.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

FIXTURE_CORPUS_ID = "fixture20"
FIXTURE_SEED = 20250810
DOC_COUNT = 20
MODEL_IDS = ("fusion", "halluc", "lead3", "noise")

CASE_B_DOC = "d07"
CASE_B_ARREST_SENTENCE = "Police arrested a burglar near the station."
CASE_B_BAIL_SENTENCE = "Bennett was released on $10,500 bail."
CASE_B_SUMMARY_SENTENCE = "She was arrested."

_NAMES = """Alice Bennett Carol Daniel Elena Frank Grace Henry Irene Jonas
    Karen Leon Mira Nadia Oscar Petra Ruth Stefan Tessa Victor""".split()
_PLACES = """Paris Oslo Lisbon Prague Vienna Dublin Geneva Madrid Athens
    Bruges Turin Valletta Krakow Seville Porto Zagreb""".split()
_VERBS = """visited painted planted repaired signed opened rented counted
    mailed filmed mapped carved sorted stacked washed folded traded hauled
    packed weighed""".split()
_OBJECTS = """lamps bridges violins orchards canoes murals statues gardens
    towers archives lanterns barrels ledgers saddles kettles banners crates
    fences mirrors carpets""".split()
_NUMBERS = "three four five six seven eight nine ten twelve twenty".split()

_NOVEL_VERBS = """toured sketched praised staged scouted drafted honored
    admired saluted greeted""".split()
_NOVEL_OBJECTS = """chapels fountains stables terraces galleries harbors
    meadows vineyards cottages windmills""".split()
_FAKE_PLACES = "Zorvania Quellmark Virdull Ostrehaven".split()

_NOISE_WORDS = """quixotic zephyrs jangle briskly crystalline fjords hum
    softly velvet moths drift skyward amber resin glows faintly obsidian
    ravens wheel gently turquoise comets spiral inward silver dunes shimmer
    coolly cobalt petals flutter downward""".split()


def doc_sentences(doc_index: int, rng: random.Random) -> list[str]:
    """6-9 template sentences with pairwise-distinct content words."""
    count = 6 + doc_index % 4
    names = rng.sample(_NAMES, count)
    verbs = rng.sample(_VERBS, count)
    numbers = rng.sample(_NUMBERS, min(count, len(_NUMBERS)))
    objects = rng.sample(_OBJECTS, count)
    places = rng.sample(_PLACES, count)
    sentences = []
    for s in range(count):
        number = numbers[s % len(numbers)]
        if s % 3 == 2:
            sentences.append(f"{names[s]} {verbs[s]} the {objects[s]} near {places[s]}.")
        else:
            sentences.append(f"{names[s]} {verbs[s]} {number} {objects[s]} in {places[s]}.")
    doc_id = f"d{doc_index:02d}"
    if doc_id == CASE_B_DOC:
        sentences[2] = CASE_B_ARREST_SENTENCE
        sentences[3] = CASE_B_BAIL_SENTENCE
    return sentences


def _fuse(first: str, second: str) -> str:
    return first.rstrip(".") + " and " + second


def build_fixture(seed: int = FIXTURE_SEED) -> dict:
    """All fixture records in memory, keyed by output file name."""
    rng = random.Random(seed)
    documents = []
    outputs: dict[str, list[dict]] = {model: [] for model in MODEL_IDS}
    for doc_index in range(DOC_COUNT):
        doc_id = f"d{doc_index:02d}"
        sentences = doc_sentences(doc_index, rng)
        text = " ".join(sentences)
        if doc_index % 3 == 0:
            # PTB-style detached punctuation; normalization re-attaches it
            text = text.replace(".", " .")
        documents.append(
            {
                "doc_id": doc_id,
                "text": text,
                "reference_summary": " ".join(sentences[:2]),
            }
        )

        outputs["lead3"].append({"doc_id": doc_id, "summary": " ".join(sentences[:3])})

        fused = [
            _fuse(sentences[k], sentences[k + 1]) for k in range(0, 6, 2) if k + 1 < len(sentences)
        ]
        outputs["fusion"].append({"doc_id": doc_id, "summary": " <q> ".join(fused)})

        paraphrased = []
        for s in range(2):
            words = sentences[s].rstrip(".").split()
            words[1] = _NOVEL_VERBS[(doc_index + s) % len(_NOVEL_VERBS)]
            # the object noun sits before the trailing "in/near <place>" pair
            words[-3] = _NOVEL_OBJECTS[(doc_index + s) % len(_NOVEL_OBJECTS)]
            paraphrased.append(" ".join(words) + ".")
        if doc_index % 5 == 0:
            fake = _FAKE_PLACES[(doc_index // 5) % len(_FAKE_PLACES)]
            paraphrased.append(f"Guides praised {fake}.")
        if doc_id == CASE_B_DOC:
            paraphrased.append(CASE_B_SUMMARY_SENTENCE)
        outputs["halluc"].append({"doc_id": doc_id, "summary": " ".join(paraphrased)})

        noise_words = rng.sample(_NOISE_WORDS, 8)
        noise_sentences = [
            " ".join(noise_words[k:k + 4]).capitalize() + "." for k in (0, 4)
        ]
        outputs["noise"].append({"doc_id": doc_id, "summary": " ".join(noise_sentences)})

    return {
        "manifest": {
            "corpus_id": FIXTURE_CORPUS_ID,
            "name": "Synthetic fixture corpus",
            "description": "20 synthetic documents with 4 synthetic models",
            "documents_file": "documents.jsonl",
            "models": [
                {"model_id": model, "outputs_file": f"outputs.{model}.jsonl"}
                for model in MODEL_IDS
            ],
        },
        "documents": documents,
        "outputs": outputs,
        "delimiters": {"fusion": ["<q>"]},
        "align_config": {
            "bertscore_baseline": 0.0,
            "lexical_floor": 0.05,
            "semantic_floor": 0.6,
            "random_seed": seed,
            "histogram_bins": 10,
            "embeddings": "auto",
        },
    }


def write_fixture_corpus(out_dir: Path, seed: int = FIXTURE_SEED) -> Path:
    """Write the fixture input files (manifest, documents, outputs, configs)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fixture = build_fixture(seed)
    _write_json(out_dir / "manifest.json", fixture["manifest"])
    _write_lines(out_dir / "documents.jsonl", fixture["documents"])
    for model, records in fixture["outputs"].items():
        _write_lines(out_dir / f"outputs.{model}.jsonl", records)
    _write_json(out_dir / "delimiters.json", fixture["delimiters"])
    _write_json(out_dir / "align.json", fixture["align_config"])
    return out_dir


def _write_json(path: Path, obj) -> None:
    path.write_text(
        json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
        newline="\n",
    )


def _write_lines(path: Path, records: list[dict]) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True))
            fh.write("\n")
