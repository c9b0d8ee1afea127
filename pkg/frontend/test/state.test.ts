import { describe, expect, it } from "vitest";

import {
  currentStep,
  decodeState,
  emptyState,
  encodeState,
  selectAspect,
  selectCorpus,
  selectDoc,
  toggleModel,
} from "../src/state.js";

describe("guided flow gating", () => {
  it("starts at step 1", () => {
    expect(currentStep(emptyState())).toBe(1);
  });

  it("advances one step per completed selection", () => {
    let state = emptyState();
    state = selectCorpus(state, "fixture20");
    expect(currentStep(state)).toBe(2);
    state = selectAspect(state, "content_coverage");
    expect(currentStep(state)).toBe(3);
    state = toggleModel(state, "lead3");
    expect(currentStep(state)).toBe(4);
  });

  it("redirects deep links without selections back to step 1", () => {
    const state = decodeState("#doc=d07&models=lead3,fusion");
    expect(state.corpus).toBeNull();
    expect(currentStep(state)).toBe(1);
  });

  it("drops downstream selections missing their prerequisites", () => {
    const state = decodeState("#corpus=fixture20&doc=d07");
    expect(currentStep(state)).toBe(2);
    expect(state.doc).toBeNull();
  });

  it("changing corpus resets aspect, models and doc", () => {
    let state = decodeState("#corpus=a&aspect=faithfulness&models=m1&doc=d1");
    expect(currentStep(state)).toBe(4);
    state = selectCorpus(state, "b");
    expect(state).toEqual({ corpus: "b", aspect: null, models: [], doc: null });
  });

  it("round trips through the URL hash", () => {
    let state = emptyState();
    state = selectCorpus(state, "fixture20");
    state = selectAspect(state, "relation_coverage");
    state = toggleModel(state, "halluc");
    state = toggleModel(state, "lead3");
    state = selectDoc(state, "d07");
    expect(decodeState(encodeState(state))).toEqual(state);
  });

  it("toggleModel adds and removes", () => {
    let state = selectCorpus(emptyState(), "c");
    state = toggleModel(state, "m1");
    state = toggleModel(state, "m2");
    expect(state.models).toEqual(["m1", "m2"]);
    state = toggleModel(state, "m1");
    expect(state.models).toEqual(["m2"]);
  });

  it("rejects unknown aspect ids from deep links", () => {
    const state = decodeState("#corpus=c&aspect=evil&models=m");
    expect(state.aspect).toBeNull();
    expect(currentStep(state)).toBe(2);
  });
});
