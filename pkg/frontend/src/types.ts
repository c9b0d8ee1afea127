// Wire types for the assessment service API (envelope version 1).

export interface Envelope<T> {
  version: number;
  data: T;
}

export interface CorpusInfo {
  corpus_id: string;
  name: string;
  description: string;
  document_count: number;
  model_ids: string[];
}

export interface Aspect {
  id: string;
  criterion: string;
  title: string;
  question: string;
}

export interface AggregateRecord {
  model_id: string;
  means: Record<string, number | null>;
  counts: Record<string, number>;
  histograms: Record<string, HistogramData>;
}

export interface ModelsPayload {
  metric_keys: string[];
  document_count: number;
  models: AggregateRecord[];
}

export interface HistogramData {
  bin_edges: number[];
  counts: number[];
}

export interface HistogramPayload {
  model_id: string;
  metric: string;
  count: number;
  mean: number | null;
  histogram: HistogramData;
}

export interface DocumentEntry {
  doc_id: string;
  sentence_count: number;
  word_count: number;
  preview: string;
}

export interface DocumentsPayload {
  total: number;
  offset: number;
  documents: DocumentEntry[];
}

export interface Match {
  index: number;
  score: number;
  rank: number;
}

export interface SummarySentence {
  index: number;
  text: string;
  lexical: Match[];
  semantic: Match[];
}

export interface ContentCoveragePayload {
  doc_id: string;
  document_sentences: { index: number; text: string }[];
  models: { model_id: string; summary_sentences: SummarySentence[] }[];
}

export interface EntityRow {
  begin: number;
  end: number;
  surface: string;
  label: string;
  matched: boolean;
  doc_matches: number[];
}

export interface EntityCoveragePayload {
  doc_id: string;
  document_entities: { begin: number; end: number; surface: string; label: string }[];
  models: { model_id: string; entities: EntityRow[] }[];
}

export interface RelationRow {
  subject: string;
  predicate: string;
  object: string;
  sentence_index: number;
  aligned?: boolean;
  source_sentences?: { index: number; text: string }[];
}

export interface RelationCoveragePayload {
  doc_id: string;
  document_relations: RelationRow[];
  models: { model_id: string; relations: RelationRow[] }[];
}

export interface FaithfulnessToken {
  begin: number;
  end: number;
  surface: string;
  is_word: boolean;
  novel: boolean;
}

export interface FaithfulnessSentence {
  index: number;
  text: string;
  tokens: FaithfulnessToken[];
  has_novel: boolean;
  lexical: Match[];
  semantic: Match[];
}

export interface FaithfulnessPayload {
  doc_id: string;
  model_id: string;
  sentences: FaithfulnessSentence[];
}

export interface HallucinationsPayload {
  model_id: string;
  words: { word: string; count: number }[];
}

export interface PositionBiasDocPayload {
  doc_id: string;
  model_count: number;
  sentences: { index: number; text: string; count: number }[];
}

export interface PositionBiasBar {
  doc_id: string;
  sentence_count: number;
  matches: { index: number; kinds: string[] }[];
}

export interface PositionBiasModelPayload {
  model_id: string;
  bars: PositionBiasBar[];
}
