from __future__ import annotations

import json

import pytest

from sumlens.align import AlignConfig
from sumlens.corpus import add_model_outputs, ingest_corpus, save_store
from sumlens.fixture import write_fixture_corpus
from sumlens.index import persist_index
from sumlens.precompute import build_index
from sumlens.views import ViewContext


@pytest.fixture(scope="session")
def fixture_input_dir(tmp_path_factory):
    return write_fixture_corpus(tmp_path_factory.mktemp("fixture") / "input")


def build_fixture_store(fixture_input_dir, store_dir):
    store = ingest_corpus(fixture_input_dir / "manifest.json")
    manifest = json.loads((fixture_input_dir / "manifest.json").read_text(encoding="utf-8"))
    reports = [
        add_model_outputs(store, entry["model_id"], fixture_input_dir / entry["outputs_file"])
        for entry in manifest["models"]
    ]
    save_store(store, store_dir)
    return store, reports


@pytest.fixture(scope="session")
def fixture_store(fixture_input_dir, tmp_path_factory):
    store_dir = tmp_path_factory.mktemp("fixture") / "store"
    store, _reports = build_fixture_store(fixture_input_dir, store_dir)
    return store


@pytest.fixture(scope="session")
def fixture_config(fixture_input_dir):
    return AlignConfig.from_file(fixture_input_dir / "align.json")


@pytest.fixture(scope="session")
def fixture_index(fixture_store, fixture_config, tmp_path_factory):
    index = build_index(fixture_store, fixture_config, jobs=1)
    persist_index(index, tmp_path_factory.mktemp("fixture") / "index")
    return index


@pytest.fixture(scope="session")
def fixture_context(fixture_store, fixture_index):
    return ViewContext(store=fixture_store, index=fixture_index)
