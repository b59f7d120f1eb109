/**
 * Result rendering.  Segment computation is pure and keyed directly off
 * the response records, so the rendered highlight offsets are exactly the
 * (start, offset) values the service returned.
 */

import { scalarLength, scalarSlice } from "./offsets.js";
import { AnnotationRecord, CandidateEntry, CandidatesRecord } from "./types.js";

export interface TextSegment {
  kind: "plain" | "mention";
  text: string;
  /** scalar offsets into the document text; present on mention segments */
  start?: number;
  offset?: number;
  url?: string;
}

/** Split the document text into plain and highlighted mention segments. */
export function linkedSegments(text: string, records: AnnotationRecord[]): TextSegment[] {
  const segments: TextSegment[] = [];
  let cursor = 0;
  for (const record of records) {
    if (record.start > cursor) {
      segments.push({ kind: "plain", text: scalarSlice(text, cursor, record.start - cursor) });
    }
    segments.push({
      kind: "mention",
      text: scalarSlice(text, record.start, record.offset),
      start: record.start,
      offset: record.offset,
      url: record.disambiguatedURL,
    });
    cursor = record.start + record.offset;
  }
  const tailLength = scalarLength(text) - cursor;
  if (tailLength > 0) {
    segments.push({ kind: "plain", text: scalarSlice(text, cursor, tailLength) });
  }
  return segments;
}

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Linked view: mentions become hyperlinks, NIL is rendered distinctly. */
export function renderLinked(text: string, records: AnnotationRecord[]): string {
  const pieces = linkedSegments(text, records).map((segment) => {
    if (segment.kind === "plain") {
      return escapeHtml(segment.text);
    }
    const label = escapeHtml(segment.text);
    if (!segment.url) {
      return `<mark class="nil" title="NIL: no entity assigned">${label}</mark>`;
    }
    const href = escapeHtml(segment.url);
    return `<mark class="linked"><a href="${href}" target="_blank" rel="noopener">${label}</a></mark>`;
  });
  return `<p class="annotated">${pieces.join("")}</p>`;
}

function candidateRow(candidate: CandidateEntry): string {
  return (
    "<tr>" +
    `<td><a href="${escapeHtml(candidate.url)}" target="_blank" rel="noopener">` +
    `${escapeHtml(candidate.url)}</a></td>` +
    `<td>${candidate.sim.toFixed(4)}</td>` +
    `<td>${candidate.popularity.toFixed(4)}</td>` +
    `<td>${escapeHtml(candidate.source)}</td>` +
    "</tr>"
  );
}

/** Candidates view: one ranked table per mention. */
export function renderCandidates(records: CandidatesRecord[]): string {
  if (records.length === 0) {
    return '<p class="empty">No mentions submitted.</p>';
  }
  const blocks = records.map((record) => {
    const caption =
      `<caption>${escapeHtml(record.namedEntity)} ` +
      `<span class="span-info">(${record.start}, ${record.offset})</span></caption>`;
    const header = "<tr><th>entity</th><th>sim</th><th>popularity</th><th>source</th></tr>";
    const rows = record.candidates.map(candidateRow).join("");
    const body = rows || '<tr><td colspan="4" class="empty">no candidates</td></tr>';
    return `<table class="candidates">${caption}${header}${body}</table>`;
  });
  return blocks.join("\n");
}
