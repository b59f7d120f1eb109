/**
 * Session state: the text being annotated, the marked spans, the parameter
 * panel and the last service response.  All functions are pure so the
 * marking rules are unit-testable without a DOM.
 */

import { scalarLength, scalarSlice } from "./offsets.js";
import {
  AnnotationRecord,
  CandidatesRecord,
  DEFAULT_PARAMS,
  LinkerParams,
  ViewMode,
} from "./types.js";

/** A marked mention span in scalar offsets. */
export interface MarkedSpan {
  start: number;
  length: number;
}

export interface SessionState {
  text: string;
  spans: MarkedSpan[];
  params: LinkerParams;
  mode: ViewMode;
  lastResponse: AnnotationRecord[] | CandidatesRecord[] | null;
}

export function newSession(text: string = ""): SessionState {
  return {
    text,
    spans: [],
    params: { ...DEFAULT_PARAMS },
    mode: "linked",
    lastResponse: null,
  };
}

export type MarkResult =
  | { ok: true; state: SessionState }
  | { ok: false; reason: string };

/** Add a span; rejects out-of-range, overlapping and whitespace-only selections. */
export function markEntity(state: SessionState, start: number, length: number): MarkResult {
  const textLength = scalarLength(state.text);
  if (length < 1 || start < 0 || start + length > textLength) {
    return { ok: false, reason: "selection is outside the text" };
  }
  if (scalarSlice(state.text, start, length).trim() === "") {
    return { ok: false, reason: "selection is empty or whitespace-only" };
  }
  for (const span of state.spans) {
    if (start < span.start + span.length && span.start < start + length) {
      return { ok: false, reason: "selection overlaps an existing mention" };
    }
  }
  const spans = [...state.spans, { start, length }].sort((a, b) => a.start - b.start);
  return { ok: true, state: { ...state, spans, lastResponse: null } };
}

export function removeSpan(state: SessionState, start: number): SessionState {
  return {
    ...state,
    spans: state.spans.filter((s) => s.start !== start),
    lastResponse: null,
  };
}

/** Serialize the session into the <entity>-tagged payload the service expects. */
export function buildTaggedText(state: SessionState): string {
  const scalars = Array.from(state.text);
  const parts: string[] = [];
  let cursor = 0;
  for (const span of state.spans) {
    parts.push(scalars.slice(cursor, span.start).join(""));
    parts.push("<entity>");
    parts.push(scalars.slice(span.start, span.start + span.length).join(""));
    parts.push("</entity>");
    cursor = span.start + span.length;
  }
  parts.push(scalars.slice(cursor).join(""));
  return parts.join("");
}

/** Validate and apply a parameter panel change; returns null on bad values. */
export function setParam(
  state: SessionState,
  key: keyof LinkerParams,
  raw: string | boolean,
): SessionState | null {
  const params = { ...state.params };
  switch (key) {
    case "algorithm":
      if (raw !== "hits" && raw !== "pagerank") return null;
      params.algorithm = raw;
      break;
    case "ngramDistance":
    case "depth": {
      const value = typeof raw === "string" ? Number(raw) : NaN;
      if (!Number.isInteger(value)) return null;
      if (key === "ngramDistance" && value < 2) return null;
      if (key === "depth" && value < 0) return null;
      params[key] = value;
      break;
    }
    default:
      if (typeof raw !== "boolean") return null;
      params[key] = raw;
  }
  return { ...state, params };
}
