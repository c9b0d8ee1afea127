from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from sumlens.errors import LoadError
from sumlens.fixture import FIXTURE_CORPUS_ID
from sumlens.metrics import HEATMAP_METRIC_KEYS
from sumlens.service import create_app, load_context, resolve_index_dir


@pytest.fixture(scope="module")
def client(fixture_context):
    return TestClient(create_app(fixture_context))


def _data(response):
    assert response.status_code == 200, response.text
    body = response.json()
    assert body["version"] == 1
    return body["data"]


def test_corpora_lists_fixture(client):
    data = _data(client.get("/api/corpora"))
    assert len(data) == 1
    assert data[0]["corpus_id"] == FIXTURE_CORPUS_ID
    assert data[0]["document_count"] == 20
    assert data[0]["model_ids"] == ["fusion", "halluc", "lead3", "noise"]


def test_aspects_endpoint(client):
    data = _data(client.get(f"/api/corpora/{FIXTURE_CORPUS_ID}/aspects"))
    assert [a["id"] for a in data] == [
        "content_coverage",
        "entity_coverage",
        "relation_coverage",
        "faithfulness",
        "position_bias_document",
        "position_bias_model",
    ]


def test_models_heatmap_data(client):
    data = _data(client.get(f"/api/corpora/{FIXTURE_CORPUS_ID}/models"))
    assert data["metric_keys"] == list(HEATMAP_METRIC_KEYS)
    assert len(data["models"]) == 4
    lead3 = next(m for m in data["models"] if m["model_id"] == "lead3")
    assert lead3["means"]["entity_factuality"] == 100.0
    assert lead3["means"]["abstractiveness_n3"] == 0.0


def test_histogram_endpoint(client):
    url = f"/api/corpora/{FIXTURE_CORPUS_ID}/models/lead3/histogram"
    data = _data(client.get(url, params={"metric": "compression"}))
    assert data["metric"] == "compression"
    assert sum(data["histogram"]["counts"]) == data["count"] == 20


def test_histogram_bad_metric_is_400(client):
    url = f"/api/corpora/{FIXTURE_CORPUS_ID}/models/lead3/histogram"
    assert client.get(url, params={"metric": "nope"}).status_code == 400
    assert client.get(url).status_code == 400  # missing required param


def test_histogram_unknown_model_is_404(client):
    url = f"/api/corpora/{FIXTURE_CORPUS_ID}/models/ghost/histogram"
    assert client.get(url, params={"metric": "compression"}).status_code == 404


def test_documents_pagination(client):
    url = f"/api/corpora/{FIXTURE_CORPUS_ID}/documents"
    data = _data(client.get(url, params={"offset": 0, "limit": 5}))
    assert data["total"] == 20
    assert [d["doc_id"] for d in data["documents"]] == ["d00", "d01", "d02", "d03", "d04"]
    rest = _data(client.get(url, params={"offset": 18, "limit": 5}))
    assert [d["doc_id"] for d in rest["documents"]] == ["d18", "d19"]


def test_unknown_corpus_is_404(client):
    assert client.get("/api/corpora/ghost/aspects").status_code == 404


def test_content_coverage_view(client):
    data = _data(
        client.get(
            "/api/views/content_coverage",
            params={"c": FIXTURE_CORPUS_ID, "doc": "d00", "models": "lead3,fusion"},
        )
    )
    assert [m["model_id"] for m in data["models"]] == ["lead3", "fusion"]
    assert data["document_sentences"]


def test_every_view_endpoint_serves_fixture(client):
    params = {"c": FIXTURE_CORPUS_ID, "doc": "d07", "models": "lead3,halluc"}
    for path in ("/api/views/entity_coverage", "/api/views/relation_coverage",
                 "/api/views/position_bias/document"):
        _data(client.get(path, params=params))
    _data(client.get("/api/views/faithfulness",
                     params={"c": FIXTURE_CORPUS_ID, "doc": "d07", "model": "halluc"}))
    _data(client.get("/api/views/hallucinations",
                     params={"c": FIXTURE_CORPUS_ID, "model": "halluc"}))
    data = _data(client.get("/api/views/position_bias/model",
                            params={"c": FIXTURE_CORPUS_ID, "model": "lead3"}))
    assert len(data["bars"]) <= 50


def test_view_unknown_doc_is_404(client):
    response = client.get(
        "/api/views/content_coverage",
        params={"c": FIXTURE_CORPUS_ID, "doc": "ghost", "models": "lead3"},
    )
    assert response.status_code == 404


def test_view_missing_required_param_is_400(client):
    assert client.get("/api/views/faithfulness").status_code == 400


def test_responses_are_pure_reads(client):
    url = "/api/views/position_bias/model"
    params = {"c": FIXTURE_CORPUS_ID, "model": "fusion"}
    first = client.get(url, params=params)
    second = client.get(url, params=params)
    assert first.content == second.content


def test_resolve_index_dir_accepts_store_or_index(fixture_input_dir, tmp_path):
    from sumlens.align import AlignConfig
    from sumlens.index import persist_index
    from sumlens.precompute import build_index
    from tests.conftest import build_fixture_store

    store_dir = tmp_path / "store"
    store, _ = build_fixture_store(fixture_input_dir, store_dir)
    config = AlignConfig.from_file(fixture_input_dir / "align.json")
    persist_index(build_index(store, config, jobs=1), store_dir / "index")

    assert resolve_index_dir(store_dir) == (store_dir, store_dir / "index")
    assert resolve_index_dir(store_dir / "index") == (store_dir, store_dir / "index")
    with pytest.raises(LoadError):
        resolve_index_dir(tmp_path)

    ctx = load_context(store_dir)
    assert ctx.store.manifest.corpus_id == FIXTURE_CORPUS_ID
    assert len(ctx.index.alignments) == 80
