// Session state for the four-step guided flow, serialized into the URL hash
// so analyses are shareable and browser back/forward keep working.

export const ASPECT_IDS = [
  "content_coverage",
  "entity_coverage",
  "relation_coverage",
  "faithfulness",
  "position_bias_document",
  "position_bias_model",
] as const;

export type AspectId = (typeof ASPECT_IDS)[number];

export interface SessionState {
  corpus: string | null;
  aspect: AspectId | null;
  models: string[];
  doc: string | null;
}

export function emptyState(): SessionState {
  return { corpus: null, aspect: null, models: [], doc: null };
}

// Step k is reachable only after steps < k are complete; a deep link with
// missing selections lands on the first incomplete step.
export function currentStep(state: SessionState): 1 | 2 | 3 | 4 {
  if (!state.corpus) return 1;
  if (!state.aspect) return 2;
  if (state.models.length === 0) return 3;
  return 4;
}

export function selectCorpus(state: SessionState, corpus: string): SessionState {
  if (state.corpus === corpus) return state;
  // changing corpus resets everything downstream
  return { corpus, aspect: null, models: [], doc: null };
}

export function selectAspect(state: SessionState, aspect: AspectId): SessionState {
  return { ...state, aspect, doc: null };
}

export function toggleModel(state: SessionState, modelId: string): SessionState {
  const models = state.models.includes(modelId)
    ? state.models.filter((m) => m !== modelId)
    : [...state.models, modelId];
  return { ...state, models };
}

export function selectDoc(state: SessionState, doc: string): SessionState {
  return { ...state, doc };
}

export function encodeState(state: SessionState): string {
  const params = new URLSearchParams();
  if (state.corpus) params.set("corpus", state.corpus);
  if (state.aspect) params.set("aspect", state.aspect);
  if (state.models.length) params.set("models", state.models.join(","));
  if (state.doc) params.set("doc", state.doc);
  const encoded = params.toString();
  return encoded ? `#${encoded}` : "";
}

export function decodeState(hash: string): SessionState {
  const params = new URLSearchParams(hash.replace(/^#/, ""));
  const aspect = params.get("aspect");
  const state: SessionState = {
    corpus: params.get("corpus"),
    aspect: aspect && (ASPECT_IDS as readonly string[]).includes(aspect) ? (aspect as AspectId) : null,
    models: (params.get("models") ?? "").split(",").filter((m) => m.length > 0),
    doc: params.get("doc"),
  };
  // enforce the gating invariant on arbitrary deep links
  if (!state.corpus) return { ...emptyState() };
  if (!state.aspect) return { ...state, aspect: null, models: [], doc: null };
  if (state.models.length === 0) return { ...state, models: [], doc: null };
  return state;
}
