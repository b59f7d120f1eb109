import { describe, expect, it } from "vitest";

import {
  buildTaggedText,
  markEntity,
  newSession,
  removeSpan,
  setParam,
} from "../src/session.js";

function marked(text: string, spans: Array<[number, number]>) {
  let state = newSession(text);
  for (const [start, length] of spans) {
    const result = markEntity(state, start, length);
    if (!result.ok) throw new Error(result.reason);
    state = result.state;
  }
  return state;
}

describe("markEntity", () => {
  it("captures a selection as a span", () => {
    const state = marked("visited Paris", [[8, 5]]);
    expect(state.spans).toEqual([{ start: 8, length: 5 }]);
  });

  it("rejects overlapping selections and keeps state unchanged", () => {
    const state = marked("abcdef", [[0, 3]]);
    const result = markEntity(state, 2, 2);
    expect(result.ok).toBe(false);
    if (!result.ok) expect(result.reason).toMatch(/overlap/);
    expect(state.spans).toEqual([{ start: 0, length: 3 }]);
  });

  it("rejects whitespace-only selections", () => {
    const result = markEntity(newSession("a   b"), 1, 3);
    expect(result.ok).toBe(false);
  });

  it("rejects out-of-bounds selections", () => {
    expect(markEntity(newSession("abc"), 1, 5).ok).toBe(false);
    expect(markEntity(newSession("abc"), 0, 0).ok).toBe(false);
  });

  it("keeps spans sorted by start offset", () => {
    const state = marked("one two three", [[8, 5], [0, 3]]);
    expect(state.spans.map((s) => s.start)).toEqual([0, 8]);
  });

  it("uses scalar offsets for astral characters", () => {
    const state = marked("🎉 Paris fête", [[2, 5]]);
    expect(buildTaggedText(state)).toBe("🎉 <entity>Paris</entity> fête");
  });
});

describe("buildTaggedText", () => {
  it("wraps each span in entity tags", () => {
    const state = marked("Barack met Barack Obama", [
      [0, 6],
      [11, 12],
    ]);
    expect(buildTaggedText(state)).toBe(
      "<entity>Barack</entity> met <entity>Barack Obama</entity>",
    );
  });

  it("is the identity with no spans", () => {
    expect(buildTaggedText(newSession("plain text"))).toBe("plain text");
  });
});

describe("removeSpan", () => {
  it("drops the span at the given start", () => {
    const state = marked("one two", [
      [0, 3],
      [4, 3],
    ]);
    expect(removeSpan(state, 0).spans).toEqual([{ start: 4, length: 3 }]);
  });
});

describe("setParam", () => {
  it("applies valid values", () => {
    const state = setParam(newSession(""), "algorithm", "pagerank");
    expect(state?.params.algorithm).toBe("pagerank");
    expect(setParam(newSession(""), "depth", "4")?.params.depth).toBe(4);
  });

  it("rejects out-of-range values", () => {
    expect(setParam(newSession(""), "algorithm", "dijkstra")).toBeNull();
    expect(setParam(newSession(""), "ngramDistance", "1")).toBeNull();
    expect(setParam(newSession(""), "depth", "-1")).toBeNull();
  });
});
