/**
 * Client for the linking service.  The UI talks only to POST /AGDISTIS and
 * GET /health; parameters ride along as query overrides so no server
 * restart is needed between attempts.
 */

import {
  AnnotationRecord,
  CandidatesRecord,
  HealthInfo,
  LinkerParams,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly body: string,
  ) {
    super(`HTTP ${status}: ${body}`);
  }
}

function paramsToQuery(params: LinkerParams): string {
  const query = new URLSearchParams();
  query.set("popularity", String(params.popularity));
  query.set("algorithm", params.algorithm);
  query.set("context", String(params.context));
  query.set("acronym", String(params.acronym));
  query.set("commonEntities", String(params.commonEntities));
  query.set("ngramDistance", String(params.ngramDistance));
  query.set("depth", String(params.depth));
  query.set("heuristicExpansion", String(params.heuristicExpansion));
  return query.toString();
}

async function post(
  baseUrl: string,
  taggedText: string,
  type: "agdistis" | "candidates",
  params: LinkerParams,
  signal?: AbortSignal,
): Promise<unknown> {
  const body = new URLSearchParams({ text: taggedText, type }).toString();
  const response = await fetch(`${baseUrl}/AGDISTIS?${paramsToQuery(params)}`, {
    method: "POST",
    headers: { "Content-Type": "application/x-www-form-urlencoded; charset=UTF-8" },
    body,
    signal,
  });
  const text = await response.text();
  if (!response.ok) {
    throw new ServiceError(response.status, text);
  }
  return JSON.parse(text);
}

export async function annotate(
  baseUrl: string,
  taggedText: string,
  params: LinkerParams,
  signal?: AbortSignal,
): Promise<AnnotationRecord[]> {
  return (await post(baseUrl, taggedText, "agdistis", params, signal)) as AnnotationRecord[];
}

export async function listCandidates(
  baseUrl: string,
  taggedText: string,
  params: LinkerParams,
  signal?: AbortSignal,
): Promise<CandidatesRecord[]> {
  return (await post(baseUrl, taggedText, "candidates", params, signal)) as CandidatesRecord[];
}

export async function getHealth(baseUrl: string, signal?: AbortSignal): Promise<HealthInfo> {
  const response = await fetch(`${baseUrl}/health`, { signal });
  const text = await response.text();
  if (!response.ok) {
    throw new ServiceError(response.status, text);
  }
  return JSON.parse(text) as HealthInfo;
}

/** Keeps at most one request in flight; a new submission cancels the last. */
export class SingleFlight {
  private controller: AbortController | null = null;

  signal(): AbortSignal {
    if (this.controller) {
      this.controller.abort();
    }
    this.controller = new AbortController();
    return this.controller.signal;
  }

  cancel(): void {
    if (this.controller) {
      this.controller.abort();
      this.controller = null;
    }
  }
}
