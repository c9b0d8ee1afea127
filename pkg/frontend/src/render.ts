// Pure renderers: payload in, HTML string out. No score is ever computed
// here; every number on screen exists in an API response. Lexical matches
// render as underlines and semantic matches as background tints, so the two
// kinds stay distinguishable without color vision.

import { columnShades, gradientColor, gradientTextColor } from "./gradient.js";
import type {
  Aspect,
  ContentCoveragePayload,
  CorpusInfo,
  EntityCoveragePayload,
  FaithfulnessPayload,
  HallucinationsPayload,
  HistogramPayload,
  ModelsPayload,
  PositionBiasDocPayload,
  PositionBiasModelPayload,
  RelationCoveragePayload,
  SummarySentence,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

// The union of a summary sentence's match indices with the kinds that hit
// each one; hover highlighting uses exactly this set.
export function matchIndices(
  sentence: Pick<SummarySentence, "lexical" | "semantic">,
): { index: number; kinds: string[] }[] {
  const kindsByIndex = new Map<number, Set<string>>();
  for (const match of sentence.lexical) {
    (kindsByIndex.get(match.index) ?? kindsByIndex.set(match.index, new Set()).get(match.index)!).add(
      "lexical",
    );
  }
  for (const match of sentence.semantic) {
    (kindsByIndex.get(match.index) ?? kindsByIndex.set(match.index, new Set()).get(match.index)!).add(
      "semantic",
    );
  }
  return [...kindsByIndex.entries()]
    .sort((a, b) => a[0] - b[0])
    .map(([index, kinds]) => ({ index, kinds: [...kinds].sort() }));
}

export function renderCorpusList(corpora: CorpusInfo[]): string {
  const cards = corpora
    .map(
      (corpus) => `
  <button class="card corpus" data-corpus="${escapeHtml(corpus.corpus_id)}">
    <h3>${escapeHtml(corpus.name)}</h3>
    <p>${escapeHtml(corpus.description)}</p>
    <p class="meta">${corpus.document_count} documents, ${corpus.model_ids.length} models</p>
  </button>`,
    )
    .join("");
  return `<section class="step-panel"><h2>1. Select a corpus</h2>${cards}</section>`;
}

export function renderAspectList(aspects: Aspect[]): string {
  const cards = aspects
    .map(
      (aspect) => `
  <button class="card aspect" data-aspect="${escapeHtml(aspect.id)}">
    <span class="criterion">${escapeHtml(aspect.criterion.replace("_", " "))}</span>
    <h3>${escapeHtml(aspect.title)}</h3>
    <p>${escapeHtml(aspect.question)}</p>
  </button>`,
    )
    .join("");
  return `<section class="step-panel"><h2>2. Select a quality aspect</h2>${cards}</section>`;
}

export function renderHeatmap(payload: ModelsPayload, selected: string[]): string {
  const keys = payload.metric_keys;
  const shadesByKey = new Map<string, (number | null)[]>();
  for (const key of keys) {
    shadesByKey.set(
      key,
      columnShades(payload.models.map((m) => m.means[key] ?? null)),
    );
  }
  const header = keys.map((k) => `<th>${escapeHtml(k)}</th>`).join("");
  const rows = payload.models
    .map((model, row) => {
      const cells = keys
        .map((key) => {
          const mean = model.means[key];
          const shade = shadesByKey.get(key)![row];
          if (mean === null || mean === undefined || shade === null) {
            return `<td class="cell undefined-cell">&ndash;</td>`;
          }
          const style = `background:hsl(214, 62%, ${shade}%);color:${shade < 55 ? "#fff" : "#1a2433"}`;
          return (
            `<td class="cell" data-model="${escapeHtml(model.model_id)}" ` +
            `data-metric="${escapeHtml(key)}" style="${style}">${formatNumber(mean)}</td>`
          );
        })
        .join("");
      const checked = selected.includes(model.model_id) ? " checked" : "";
      return (
        `<tr><th class="model-name"><label>` +
        `<input type="checkbox" class="model-pick" value="${escapeHtml(model.model_id)}"${checked}>` +
        ` ${escapeHtml(model.model_id)}</label></th>${cells}</tr>`
      );
    })
    .join("");
  return `
<section class="step-panel">
  <h2>3. Select models <small>(click a cell for the score distribution)</small></h2>
  <table class="heatmap"><thead><tr><th></th>${header}</tr></thead><tbody>${rows}</tbody></table>
  <div id="histogram-slot"></div>
  <button id="to-view" class="primary">Open aspect view</button>
</section>`;
}

export function renderHistogram(payload: HistogramPayload): string {
  const counts = payload.histogram.counts;
  const max = Math.max(1, ...counts);
  const bars = counts
    .map((count, i) => {
      const lo = payload.histogram.bin_edges[i];
      const hi = payload.histogram.bin_edges[i + 1];
      const height = Math.round((count / max) * 100);
      return (
        `<div class="bar" title="[${formatNumber(lo)}, ${formatNumber(hi)}]: ${count}">` +
        `<div class="fill" style="height:${height}%"></div><span>${count}</span></div>`
      );
    })
    .join("");
  const meanText = payload.mean === null ? "undefined" : formatNumber(payload.mean);
  return `
<div class="histogram" data-model="${escapeHtml(payload.model_id)}">
  <h4>${escapeHtml(payload.model_id)} &middot; ${escapeHtml(payload.metric)}
      <small>mean ${meanText}, n=${payload.count}</small></h4>
  <div class="bars">${bars}</div>
</div>`;
}

function matchChips(sentence: Pick<SummarySentence, "lexical" | "semantic">): string {
  const lexical = sentence.lexical
    .map((m) => `<span class="chip lex">L${m.rank}&rarr;${m.index} (${formatNumber(m.score)})</span>`)
    .join("");
  const semantic = sentence.semantic
    .map((m) => `<span class="chip sem">S${m.rank}&rarr;${m.index} (${formatNumber(m.score)})</span>`)
    .join("");
  return lexical + semantic;
}

export function renderContentCoverage(payload: ContentCoveragePayload): string {
  const docPanel = payload.document_sentences
    .map(
      (s) =>
        `<span class="doc-sentence" data-index="${s.index}">${escapeHtml(s.text)}</span> `,
    )
    .join("");
  const models = payload.models
    .map((model) => {
      const sentences = model.summary_sentences
        .map((sentence) => {
          const matches = JSON.stringify(matchIndices(sentence));
          return (
            `<span class="summary-sentence" data-matches='${matches}'>` +
            `${escapeHtml(sentence.text)}${matchChips(sentence)}</span> `
          );
        })
        .join("");
      return `<article class="summary-panel"><h4>${escapeHtml(model.model_id)}</h4><p>${sentences}</p></article>`;
    })
    .join("");
  return `
<div class="view content-coverage">
  <article class="doc-panel"><h4>document ${escapeHtml(payload.doc_id)}</h4><p>${docPanel}</p></article>
  <div class="summaries">${models}</div>
</div>`;
}

export function renderEntityCoverage(payload: EntityCoveragePayload): string {
  const docList = payload.document_entities
    .map((e, i) => `<li data-entity="${i}">${escapeHtml(e.surface)} <small>${escapeHtml(e.label)}</small></li>`)
    .join("");
  const models = payload.models
    .map((model) => {
      const rows = model.entities
        .map((entity) => {
          const cls = entity.matched ? "entity matched" : "entity unmatched";
          const links = entity.matched
            ? `<small>&rarr; doc ${entity.doc_matches.join(", ")}</small>`
            : `<small class="flag">not in document</small>`;
          return `<li class="${cls}" data-doc-matches="${entity.doc_matches.join(",")}">${escapeHtml(
            entity.surface,
          )} ${links}</li>`;
        })
        .join("");
      return `<article><h4>${escapeHtml(model.model_id)}</h4><ul>${rows.length ? rows : "<li class='empty'>no entities</li>"}</ul></article>`;
    })
    .join("");
  return `
<div class="view entity-coverage">
  <article><h4>document entities</h4><ul>${docList}</ul></article>
  <div class="summaries">${models}</div>
</div>`;
}

export function renderRelationCoverage(payload: RelationCoveragePayload): string {
  const triple = (r: { subject: string; predicate: string; object: string }) =>
    `<b>${escapeHtml(r.subject)}</b> ${escapeHtml(r.predicate)} ${escapeHtml(r.object)}`;
  const docList = payload.document_relations.map((r) => `<li>${triple(r)}</li>`).join("");
  const models = payload.models
    .map((model) => {
      const rows = model.relations
        .map((relation) => {
          if (relation.aligned) {
            return `<li class="relation aligned">${triple(relation)}</li>`;
          }
          const sources = (relation.source_sentences ?? [])
            .map((s) => `<li><small>#${s.index}</small> ${escapeHtml(s.text)}</li>`)
            .join("");
          return (
            `<li class="relation unaligned">${triple(relation)} <small class="flag">unaligned</small>` +
            `<details><summary>retrieve source sentences</summary><ul>${sources}</ul></details></li>`
          );
        })
        .join("");
      return `<article><h4>${escapeHtml(model.model_id)}</h4><ul>${rows.length ? rows : "<li class='empty'>no relations</li>"}</ul></article>`;
    })
    .join("");
  return `
<div class="view relation-coverage">
  <article><h4>document relations</h4><ul>${docList}</ul></article>
  <div class="summaries">${models}</div>
</div>`;
}

export function renderFaithfulness(payload: FaithfulnessPayload): string {
  const sentences = payload.sentences
    .map((sentence) => {
      let cursor = 0;
      const text = sentence.text;
      const base = sentence.tokens.length ? sentence.tokens[0].begin : 0;
      let html = "";
      for (const token of sentence.tokens) {
        const start = token.begin - base;
        html += escapeHtml(text.slice(cursor, start));
        const surface = escapeHtml(token.surface);
        html += token.novel ? `<mark class="novel">${surface}</mark>` : surface;
        cursor = start + (token.end - token.begin);
      }
      html += escapeHtml(text.slice(cursor));
      const matches = sentence.has_novel
        ? `<span class="matches" data-matches='${JSON.stringify(matchIndices(sentence))}'>${matchChips(sentence)}</span>`
        : "";
      return `<p class="faith-sentence${sentence.has_novel ? " has-novel" : ""}">${html}${matches}</p>`;
    })
    .join("");
  return `
<div class="view faithfulness">
  <h4>${escapeHtml(payload.model_id)} on ${escapeHtml(payload.doc_id)}</h4>
  ${sentences}
  <div id="hallucination-slot"></div>
</div>`;
}

export function renderHallucinations(payload: HallucinationsPayload): string {
  const max = payload.words.length ? payload.words[0].count : 0;
  const rows = payload.words
    .map(
      (w) =>
        `<li><span class="swatch" style="background:${gradientColor(w.count, max)};color:${gradientTextColor(
          w.count,
          max,
        )}">${w.count}</span> ${escapeHtml(w.word)}</li>`,
    )
    .join("");
  return `
<div class="hallucinations">
  <h4>novel words of ${escapeHtml(payload.model_id)} by frequency</h4>
  <ol>${rows.length ? rows : "<li class='empty'>none</li>"}</ol>
</div>`;
}

export function renderPositionBiasDocument(payload: PositionBiasDocPayload): string {
  const sentences = payload.sentences
    .map((s) => {
      const bg = gradientColor(s.count, payload.model_count);
      const fg = gradientTextColor(s.count, payload.model_count);
      return (
        `<span class="heat-sentence" style="background:${bg};color:${fg}" ` +
        `title="${s.count} of ${payload.model_count} models">${escapeHtml(s.text)}</span> `
      );
    })
    .join("");
  return `
<div class="view position-bias-document">
  <h4>document ${escapeHtml(payload.doc_id)} &middot; ${payload.model_count} models selected</h4>
  <p class="heat-text">${sentences}</p>
</div>`;
}

export function renderPositionBiasModel(payload: PositionBiasModelPayload): string {
  const maxLen = Math.max(1, ...payload.bars.map((b) => b.sentence_count));
  const bars = payload.bars
    .map((bar) => {
      const kindByIndex = new Map(bar.matches.map((m) => [m.index, m.kinds]));
      const segments = Array.from({ length: bar.sentence_count }, (_, i) => {
        const kinds = kindByIndex.get(i);
        const cls = kinds ? `seg hit ${kinds.join(" ")}` : "seg";
        return `<span class="${cls}" title="sentence ${i}"></span>`;
      }).join("");
      // bar length reflects document length in sentences
      const width = Math.round((bar.sentence_count / maxLen) * 100);
      return (
        `<div class="bar-row"><span class="bar-label">${escapeHtml(bar.doc_id)}</span>` +
        `<div class="bar-track" style="width:${width}%">${segments}</div></div>`
      );
    })
    .join("");
  return `
<div class="view position-bias-model">
  <h4>${escapeHtml(payload.model_id)} &middot; ${payload.bars.length} sampled summaries</h4>
  <div class="bars-vertical">${bars}</div>
  <p class="legend"><span class="seg hit lexical"></span> lexical
     <span class="seg hit semantic"></span> semantic
     <span class="seg hit lexical semantic"></span> both</p>
</div>`;
}

export function formatNumber(value: number): string {
  if (Number.isInteger(value)) return String(value);
  return value.toFixed(3).replace(/0+$/, "").replace(/\.$/, "");
}
