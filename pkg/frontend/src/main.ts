/**
 * DOM wiring for the demo page: text entry, selection marking, the
 * parameter panel, submission and the two result views.
 */

import { annotate, getHealth, listCandidates, ServiceError, SingleFlight } from "./api.js";
import { utf16ToScalar } from "./offsets.js";
import { renderCandidates, renderLinked, escapeHtml } from "./render.js";
import {
  buildTaggedText,
  markEntity,
  newSession,
  SessionState,
} from "./session.js";
import { LinkerParams } from "./types.js";

let session: SessionState = newSession();
const flight = new SingleFlight();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setStatus(message: string, isError = false): void {
  const status = el<HTMLElement>("status");
  status.textContent = message;
  status.className = isError ? "status error" : "status";
}

function renderText(): void {
  const view = el<HTMLElement>("text-view");
  const scalars = Array.from(session.text);
  const parts: string[] = [];
  let cursor = 0;
  for (const span of session.spans) {
    parts.push(escapeHtml(scalars.slice(cursor, span.start).join("")));
    const surface = escapeHtml(scalars.slice(span.start, span.start + span.length).join(""));
    parts.push(`<mark class="pending" data-start="${span.start}">${surface}</mark>`);
    cursor = span.start + span.length;
  }
  parts.push(escapeHtml(scalars.slice(cursor).join("")));
  view.innerHTML = parts.join("") || '<span class="empty">Set some text first.</span>';
}

/** UTF-16 offset of a DOM position relative to the full text of container. */
function domOffset(container: Node, node: Node, offset: number): number {
  let total = 0;
  const walker = document.createTreeWalker(container, NodeFilter.SHOW_TEXT);
  for (let current = walker.nextNode(); current; current = walker.nextNode()) {
    if (current === node) {
      return total + offset;
    }
    total += (current.textContent ?? "").length;
  }
  return total;
}

function markSelection(): void {
  const selection = window.getSelection();
  const view = el<HTMLElement>("text-view");
  if (!selection || selection.rangeCount === 0 || selection.isCollapsed) {
    setStatus("Select a mention in the text first.", true);
    return;
  }
  const range = selection.getRangeAt(0);
  if (!view.contains(range.startContainer) || !view.contains(range.endContainer)) {
    setStatus("Selection must be inside the text panel.", true);
    return;
  }
  const startUnits = domOffset(view, range.startContainer, range.startOffset);
  const endUnits = domOffset(view, range.endContainer, range.endOffset);
  const start = utf16ToScalar(session.text, Math.min(startUnits, endUnits));
  const end = utf16ToScalar(session.text, Math.max(startUnits, endUnits));
  const result = markEntity(session, start, end - start);
  if (!result.ok) {
    setStatus(result.reason, true);
    return;
  }
  session = result.state;
  selection.removeAllRanges();
  renderText();
  setStatus(`Marked span (${start}, ${end - start}).`);
}

function readParams(): LinkerParams {
  return {
    popularity: el<HTMLInputElement>("p-popularity").checked,
    algorithm: el<HTMLSelectElement>("p-algorithm").value as LinkerParams["algorithm"],
    context: el<HTMLInputElement>("p-context").checked,
    acronym: el<HTMLInputElement>("p-acronym").checked,
    commonEntities: el<HTMLInputElement>("p-commonEntities").checked,
    ngramDistance: Number(el<HTMLInputElement>("p-ngramDistance").value),
    depth: Number(el<HTMLInputElement>("p-depth").value),
    heuristicExpansion: el<HTMLInputElement>("p-heuristicExpansion").checked,
  };
}

async function submit(mode: "linked" | "candidates"): Promise<void> {
  const baseUrl = el<HTMLInputElement>("service-url").value.replace(/\/+$/, "");
  session = { ...session, params: readParams(), mode };
  const payload = buildTaggedText(session);
  const results = el<HTMLElement>("results");
  setStatus("Linking…");
  try {
    const signal = flight.signal();
    if (mode === "candidates") {
      const records = await listCandidates(baseUrl, payload, session.params, signal);
      session = { ...session, lastResponse: records };
      results.innerHTML = renderCandidates(records);
    } else {
      const records = await annotate(baseUrl, payload, session.params, signal);
      session = { ...session, lastResponse: records };
      results.innerHTML = renderLinked(session.text, records);
    }
    setStatus(`${mode === "candidates" ? "Candidate lists" : "Linked"} — ${payload.length ? "done" : "nothing to submit"}.`);
  } catch (error) {
    if (error instanceof DOMException && error.name === "AbortError") {
      return; // superseded by a newer submission
    }
    if (error instanceof ServiceError) {
      setStatus(`Service error ${error.status}: ${error.body}`, true);
    } else {
      setStatus(`Network failure: ${String(error)} — check the service URL and retry.`, true);
    }
  }
}

async function refreshHealth(): Promise<void> {
  const baseUrl = el<HTMLInputElement>("service-url").value.replace(/\/+$/, "");
  const health = el<HTMLElement>("health");
  try {
    const info = await getHealth(baseUrl);
    health.textContent =
      `${info.kbName} (${info.language}) — ${info.entityCount} entities, ` +
      `format v${info.formatVersion}`;
  } catch {
    health.textContent = "service unreachable";
  }
}

function applyText(): void {
  const input = el<HTMLTextAreaElement>("text-input");
  session = newSession(input.value);
  renderText();
  el<HTMLElement>("results").innerHTML = "";
  setStatus("Text set. Select mentions and mark them.");
}

function clearSpans(): void {
  session = { ...session, spans: [], lastResponse: null };
  renderText();
  setStatus("Marks cleared.");
}

export function init(): void {
  el<HTMLButtonElement>("apply-text").addEventListener("click", applyText);
  el<HTMLButtonElement>("mark").addEventListener("click", markSelection);
  el<HTMLButtonElement>("clear").addEventListener("click", clearSpans);
  el<HTMLButtonElement>("submit-linked").addEventListener("click", () => void submit("linked"));
  el<HTMLButtonElement>("submit-candidates").addEventListener(
    "click",
    () => void submit("candidates"),
  );
  el<HTMLInputElement>("service-url").addEventListener("change", () => void refreshHealth());
  void refreshHealth();
  renderText();
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", init);
}
