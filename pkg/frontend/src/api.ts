// Thin typed client over the read-only JSON API.

import type {
  Aspect,
  ContentCoveragePayload,
  CorpusInfo,
  DocumentsPayload,
  EntityCoveragePayload,
  Envelope,
  FaithfulnessPayload,
  HallucinationsPayload,
  HistogramPayload,
  ModelsPayload,
  PositionBiasDocPayload,
  PositionBiasModelPayload,
  RelationCoveragePayload,
} from "./types.js";

export class ApiClient {
  constructor(private readonly baseUrl: string) {}

  private async get<T>(path: string, params?: Record<string, string>): Promise<T> {
    const url = new URL(path, this.baseUrl);
    for (const [key, value] of Object.entries(params ?? {})) {
      url.searchParams.set(key, value);
    }
    const response = await fetch(url.toString());
    if (!response.ok) {
      throw new Error(`GET ${url.pathname} failed: ${response.status}`);
    }
    const body = (await response.json()) as Envelope<T>;
    if (body.version !== 1) {
      throw new Error(`unsupported wire version ${body.version}`);
    }
    return body.data;
  }

  corpora(): Promise<CorpusInfo[]> {
    return this.get("/api/corpora");
  }

  aspects(corpus: string): Promise<Aspect[]> {
    return this.get(`/api/corpora/${corpus}/aspects`);
  }

  models(corpus: string): Promise<ModelsPayload> {
    return this.get(`/api/corpora/${corpus}/models`);
  }

  histogram(corpus: string, model: string, metric: string): Promise<HistogramPayload> {
    return this.get(`/api/corpora/${corpus}/models/${model}/histogram`, { metric });
  }

  documents(corpus: string, offset = 0, limit = 50): Promise<DocumentsPayload> {
    return this.get(`/api/corpora/${corpus}/documents`, {
      offset: String(offset),
      limit: String(limit),
    });
  }

  contentCoverage(c: string, doc: string, models: string[]): Promise<ContentCoveragePayload> {
    return this.get("/api/views/content_coverage", { c, doc, models: models.join(",") });
  }

  entityCoverage(c: string, doc: string, models: string[]): Promise<EntityCoveragePayload> {
    return this.get("/api/views/entity_coverage", { c, doc, models: models.join(",") });
  }

  relationCoverage(c: string, doc: string, models: string[]): Promise<RelationCoveragePayload> {
    return this.get("/api/views/relation_coverage", { c, doc, models: models.join(",") });
  }

  faithfulness(c: string, doc: string, model: string): Promise<FaithfulnessPayload> {
    return this.get("/api/views/faithfulness", { c, doc, model });
  }

  hallucinations(c: string, model: string): Promise<HallucinationsPayload> {
    return this.get("/api/views/hallucinations", { c, model });
  }

  positionBiasDocument(c: string, doc: string, models: string[]): Promise<PositionBiasDocPayload> {
    return this.get("/api/views/position_bias/document", { c, doc, models: models.join(",") });
  }

  positionBiasModel(c: string, model: string): Promise<PositionBiasModelPayload> {
    return this.get("/api/views/position_bias/model", { c, model });
  }
}
