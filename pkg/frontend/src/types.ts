/** Wire types of the linking service. */

/** One linked mention, as returned for type=agdistis. */
export interface AnnotationRecord {
  namedEntity: string;
  start: number;
  offset: number;
  /** Empty string means NIL (no entity assigned). */
  disambiguatedURL: string;
}

export interface CandidateEntry {
  url: string;
  sim: number;
  popularity: number;
  source: string;
}

/** One mention with its ranked candidate list, as returned for type=candidates. */
export interface CandidatesRecord {
  namedEntity: string;
  start: number;
  offset: number;
  candidates: CandidateEntry[];
}

export interface HealthInfo {
  language: string;
  kbName: string;
  entityCount: number;
  formatVersion: number;
}

/** The per-request tuning parameters the service accepts as query overrides. */
export interface LinkerParams {
  popularity: boolean;
  algorithm: "hits" | "pagerank";
  context: boolean;
  acronym: boolean;
  commonEntities: boolean;
  ngramDistance: number;
  depth: number;
  heuristicExpansion: boolean;
}

export const DEFAULT_PARAMS: LinkerParams = {
  popularity: false,
  algorithm: "hits",
  context: false,
  acronym: false,
  commonEntities: false,
  ngramDistance: 3,
  depth: 2,
  heuristicExpansion: true,
};

export type ViewMode = "linked" | "candidates";
