// App bootstrap: hash-routed four-step flow over the read-only API.

import { ApiClient } from "./api.js";
import {
  renderAspectList,
  renderContentCoverage,
  renderCorpusList,
  renderEntityCoverage,
  renderFaithfulness,
  renderHallucinations,
  renderHeatmap,
  renderHistogram,
  renderPositionBiasDocument,
  renderPositionBiasModel,
  renderRelationCoverage,
} from "./render.js";
import {
  AspectId,
  SessionState,
  currentStep,
  decodeState,
  encodeState,
  selectAspect,
  selectCorpus,
  selectDoc,
  toggleModel,
} from "./state.js";

const params = new URLSearchParams(window.location.search);
const api = new ApiClient(params.get("api") ?? "http://127.0.0.1:8080");
const root = document.getElementById("app")!;

let state: SessionState = decodeState(window.location.hash);

function setState(next: SessionState): void {
  state = next;
  const hash = encodeState(state);
  if (window.location.hash !== hash) {
    window.location.hash = hash; // triggers render via hashchange
  } else {
    void render();
  }
}

window.addEventListener("hashchange", () => {
  state = decodeState(window.location.hash);
  void render();
});

async function render(): Promise<void> {
  try {
    await renderStep();
  } catch (err) {
    root.innerHTML = `<p class="error">${String(err)}</p>`;
  }
}

async function renderStep(): Promise<void> {
  const step = currentStep(state);
  renderBreadcrumb(step);
  if (step === 1) {
    const corpora = await api.corpora();
    root.innerHTML = renderCorpusList(corpora);
    for (const button of root.querySelectorAll<HTMLElement>("[data-corpus]")) {
      button.addEventListener("click", () =>
        setState(selectCorpus(state, button.dataset.corpus!)),
      );
    }
  } else if (step === 2) {
    const aspects = await api.aspects(state.corpus!);
    root.innerHTML = renderAspectList(aspects);
    for (const button of root.querySelectorAll<HTMLElement>("[data-aspect]")) {
      button.addEventListener("click", () =>
        setState(selectAspect(state, button.dataset.aspect as AspectId)),
      );
    }
  } else if (step === 3) {
    const models = await api.models(state.corpus!);
    root.innerHTML = renderHeatmap(models, state.models);
    wireHeatmap();
  } else {
    await renderAspectView();
  }
}

function renderBreadcrumb(step: number): void {
  const crumb = document.getElementById("breadcrumb")!;
  const parts = [
    state.corpus ?? "corpus",
    state.aspect ?? "aspect",
    state.models.length ? state.models.join("+") : "models",
    "view",
  ];
  crumb.innerHTML = parts
    .map((label, i) => {
      const active = i + 1 === step ? " active" : "";
      const done = i + 1 < step ? " done" : "";
      return `<span class="crumb${active}${done}">${i + 1}. ${label}</span>`;
    })
    .join(" &rsaquo; ");
  const reset = document.createElement("button");
  reset.textContent = "restart";
  reset.className = "restart";
  reset.addEventListener("click", () => setState(decodeState("")));
  crumb.appendChild(reset);
}

function wireHeatmap(): void {
  for (const pick of root.querySelectorAll<HTMLInputElement>(".model-pick")) {
    pick.addEventListener("change", () => {
      state = toggleModel(state, pick.value); // no rerender while picking
      window.history.replaceState(null, "", encodeState(state) || "#");
    });
  }
  for (const cell of root.querySelectorAll<HTMLElement>(".cell[data-model]")) {
    cell.addEventListener("click", async () => {
      const payload = await api.histogram(
        state.corpus!,
        cell.dataset.model!,
        cell.dataset.metric!,
      );
      document.getElementById("histogram-slot")!.innerHTML = renderHistogram(payload);
    });
  }
  document.getElementById("to-view")!.addEventListener("click", () => {
    if (state.models.length > 0) setState({ ...state });
  });
}

async function renderAspectView(): Promise<void> {
  const corpus = state.corpus!;
  const aspect = state.aspect!;
  const needsDoc = aspect !== "position_bias_model";
  let pickerHtml = "";
  if (needsDoc) {
    const docs = await api.documents(corpus, 0, 500);
    if (!state.doc && docs.documents.length > 0) {
      state = selectDoc(state, docs.documents[0].doc_id);
    }
    if (!state.doc) {
      root.innerHTML = `<p class="error">corpus has no documents</p>`;
      return;
    }
    pickerHtml = `<label class="doc-picker">document
      <select id="doc-picker">${docs.documents
        .map(
          (d) =>
            `<option value="${d.doc_id}"${d.doc_id === state.doc ? " selected" : ""}>` +
            `${d.doc_id} (${d.sentence_count} sentences)</option>`,
        )
        .join("")}</select></label>`;
  }
  const modelPicker =
    aspect === "faithfulness"
      ? `<label class="doc-picker">model <select id="model-picker">${state.models
          .map((m) => `<option value="${m}">${m}</option>`)
          .join("")}</select></label>`
      : "";
  let viewHtml = "";
  const doc = state.doc!;
  const firstModel = state.models[0];
  if (aspect === "content_coverage") {
    viewHtml = renderContentCoverage(await api.contentCoverage(corpus, doc, state.models));
  } else if (aspect === "entity_coverage") {
    viewHtml = renderEntityCoverage(await api.entityCoverage(corpus, doc, state.models));
  } else if (aspect === "relation_coverage") {
    viewHtml = renderRelationCoverage(await api.relationCoverage(corpus, doc, state.models));
  } else if (aspect === "faithfulness") {
    viewHtml = renderFaithfulness(await api.faithfulness(corpus, doc, firstModel));
  } else if (aspect === "position_bias_document") {
    viewHtml = renderPositionBiasDocument(
      await api.positionBiasDocument(corpus, doc, state.models),
    );
  } else {
    viewHtml = renderPositionBiasModel(await api.positionBiasModel(corpus, firstModel));
  }
  root.innerHTML = `<section class="step-panel"><h2>4. ${aspect.replace(/_/g, " ")}</h2>
    <div class="pickers">${pickerHtml}${modelPicker}</div>${viewHtml}</section>`;
  wireAspectView(aspect);
}

function wireAspectView(aspect: AspectId): void {
  const picker = document.getElementById("doc-picker") as HTMLSelectElement | null;
  picker?.addEventListener("change", () => setState(selectDoc(state, picker.value)));
  const modelPicker = document.getElementById("model-picker") as HTMLSelectElement | null;
  modelPicker?.addEventListener("change", async () => {
    if (aspect === "faithfulness" && state.doc) {
      const payload = await api.faithfulness(state.corpus!, state.doc, modelPicker.value);
      const view = root.querySelector(".view.faithfulness")!;
      view.outerHTML = renderFaithfulness(payload);
      wireHover();
      void loadHallucinations(modelPicker.value);
    }
  });
  wireHover();
  if (aspect === "faithfulness") {
    void loadHallucinations(state.models[0]);
  }
}

async function loadHallucinations(model: string): Promise<void> {
  const slot = document.getElementById("hallucination-slot");
  if (slot) {
    slot.innerHTML = renderHallucinations(await api.hallucinations(state.corpus!, model));
  }
}

// Hovering a summary sentence highlights exactly the payload's match
// indices on the document side: underline for lexical, tint for semantic.
export function applyHighlights(container: ParentNode, matchesJson: string): void {
  const matches = JSON.parse(matchesJson) as { index: number; kinds: string[] }[];
  for (const match of matches) {
    const target = container.querySelector<HTMLElement>(
      `.doc-sentence[data-index="${match.index}"]`,
    );
    if (!target) continue;
    if (match.kinds.includes("lexical")) target.classList.add("hl-lex");
    if (match.kinds.includes("semantic")) target.classList.add("hl-sem");
  }
}

export function clearHighlights(container: ParentNode): void {
  for (const el of container.querySelectorAll(".hl-lex, .hl-sem")) {
    el.classList.remove("hl-lex", "hl-sem");
  }
}

function wireHover(): void {
  for (const sentence of root.querySelectorAll<HTMLElement>("[data-matches]")) {
    sentence.addEventListener("mouseenter", () =>
      applyHighlights(root, sentence.dataset.matches!),
    );
    sentence.addEventListener("mouseleave", () => clearHighlights(root));
  }
}

void render();
