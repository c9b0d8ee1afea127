"""HTTP JSON API over an immutable precomputed index.

All endpoints are GET and pure reads; responses are wrapped in a versioned
envelope {"version": 1, "data": ...}. Unknown ids yield 404, malformed
queries 400.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import views
from .corpus import INDEX_SUBDIR, load_store
from .errors import LoadError, NotFoundError
from .index import load_index
from .metrics import AGGREGATE_METRIC_KEYS, HEATMAP_METRIC_KEYS
from .views import ViewContext

WIRE_VERSION = 1


@dataclass
class ServiceConfig:
    index_dir: Path
    listen_address: str = "127.0.0.1:8080"
    cors_allowed_origins: list[str] = field(default_factory=lambda: ["*"])

    @property
    def host(self) -> str:
        return self.listen_address.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen_address.rsplit(":", 1)[1])


def resolve_index_dir(path: Path) -> tuple[Path, Path]:
    """Accepts the index directory or the store directory containing index/."""
    path = Path(path)
    if (path / "index.json").exists():
        return path.parent, path
    if (path / INDEX_SUBDIR / "index.json").exists():
        return path, path / INDEX_SUBDIR
    raise LoadError(f"{path} holds neither an index nor a store with one")


def load_context(path: Path) -> ViewContext:
    store_dir, index_dir = resolve_index_dir(path)
    return ViewContext(store=load_store(store_dir), index=load_index(index_dir))


def _envelope(data) -> dict:
    return {"version": WIRE_VERSION, "data": data}


def _csv(models: str) -> list[str]:
    return [m for m in models.split(",") if m]


def create_app(ctx: ViewContext, cors_allowed_origins: list[str] | None = None) -> FastAPI:
    app = FastAPI(title="summary assessment service", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_allowed_origins or ["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    @app.exception_handler(NotFoundError)
    async def _not_found(request: Request, exc: NotFoundError):
        return JSONResponse(status_code=404, content={"version": WIRE_VERSION, "error": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def _bad_query(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"version": WIRE_VERSION, "error": str(exc)})

    @app.exception_handler(ValueError)
    async def _bad_value(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"version": WIRE_VERSION, "error": str(exc)})

    manifest = ctx.store.manifest

    def check_corpus(corpus_id: str) -> None:
        if corpus_id != manifest.corpus_id:
            raise NotFoundError(f"unknown corpus {corpus_id!r}")

    @app.get("/api/corpora")
    async def corpora():
        return _envelope([manifest.to_record()])

    @app.get("/api/corpora/{corpus_id}/aspects")
    async def aspects(corpus_id: str):
        check_corpus(corpus_id)
        return _envelope(list(views.ASPECTS))

    @app.get("/api/corpora/{corpus_id}/models")
    async def models(corpus_id: str):
        check_corpus(corpus_id)
        return _envelope(
            {
                "metric_keys": list(HEATMAP_METRIC_KEYS),
                "document_count": manifest.document_count,
                "models": [
                    ctx.index.aggregates[model_id].to_record()
                    for model_id in sorted(ctx.index.aggregates)
                ],
            }
        )

    @app.get("/api/corpora/{corpus_id}/models/{model_id}/histogram")
    async def histogram(corpus_id: str, model_id: str, metric: str = Query(...)):
        check_corpus(corpus_id)
        if model_id not in ctx.index.aggregates:
            raise NotFoundError(f"unknown model_id {model_id!r}")
        if metric not in AGGREGATE_METRIC_KEYS:
            raise ValueError(f"unknown metric {metric!r}")
        aggregate = ctx.index.aggregates[model_id]
        hist = aggregate.histograms.get(metric)
        return _envelope(
            {
                "model_id": model_id,
                "metric": metric,
                "count": aggregate.counts.get(metric, 0),
                "mean": aggregate.means.get(metric),
                "histogram": hist.to_record() if hist else {"bin_edges": [], "counts": []},
            }
        )

    @app.get("/api/corpora/{corpus_id}/documents")
    async def documents(corpus_id: str, offset: int = 0, limit: int = 50):
        check_corpus(corpus_id)
        if offset < 0 or limit < 0:
            raise ValueError("offset and limit must be >= 0")
        doc_ids = ctx.store.doc_ids()
        page = doc_ids[offset:offset + min(limit, 500)]
        entries = []
        for doc_id in page:
            doc = ctx.store.document(doc_id).normalized
            preview = doc.sentence_text(0) if doc.sentences else ""
            entries.append(
                {
                    "doc_id": doc_id,
                    "sentence_count": len(doc.sentences),
                    "word_count": doc.word_count(),
                    "preview": preview[:120],
                }
            )
        return _envelope({"total": len(doc_ids), "offset": offset, "documents": entries})

    @app.get("/api/views/content_coverage")
    async def content_coverage(c: str = Query(...), doc: str = Query(...), models: str = ""):
        check_corpus(c)
        return _envelope(views.content_coverage(ctx, doc, _csv(models)))

    @app.get("/api/views/entity_coverage")
    async def entity_coverage(c: str = Query(...), doc: str = Query(...), models: str = ""):
        check_corpus(c)
        return _envelope(views.entity_coverage(ctx, doc, _csv(models)))

    @app.get("/api/views/relation_coverage")
    async def relation_coverage(c: str = Query(...), doc: str = Query(...), models: str = ""):
        check_corpus(c)
        return _envelope(views.relation_coverage(ctx, doc, _csv(models)))

    @app.get("/api/views/faithfulness")
    async def faithfulness(c: str = Query(...), doc: str = Query(...), model: str = Query(...)):
        check_corpus(c)
        return _envelope(views.faithfulness(ctx, doc, model))

    @app.get("/api/views/hallucinations")
    async def hallucinations(c: str = Query(...), model: str = Query(...)):
        check_corpus(c)
        return _envelope(views.hallucination_aggregate(ctx, model))

    @app.get("/api/views/position_bias/document")
    async def position_bias_document(
        c: str = Query(...), doc: str = Query(...), models: str = ""
    ):
        check_corpus(c)
        return _envelope(views.position_bias_document(ctx, doc, _csv(models)))

    @app.get("/api/views/position_bias/model")
    async def position_bias_model(c: str = Query(...), model: str = Query(...)):
        check_corpus(c)
        return _envelope(views.position_bias_model(ctx, model))

    return app
