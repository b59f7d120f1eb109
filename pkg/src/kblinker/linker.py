"""End-to-end linking pipeline and the JSON wire format.

Both the HTTP service and the CLI render responses through this module so
their outputs are byte-identical for the same bundle, text and config.
"""

from __future__ import annotations

import json

from .candidates import Candidate, generate_candidates
from .config import LinkerConfig
from .documents import Document, parse_entity_tagged_text
from .graph import LinkDecision, build_graph, run_hits, run_pagerank, select
from .indexing import IndexBundle

TYPE_DISAMBIGUATE = "agdistis"
TYPE_CANDIDATES = "candidates"
REQUEST_TYPES = (TYPE_DISAMBIGUATE, TYPE_CANDIDATES)


def link_document(
    doc: Document, bundle: IndexBundle, cfg: LinkerConfig
) -> tuple[list[LinkDecision], list[list[Candidate]]]:
    """Candidate generation, graph scoring and per-mention selection."""
    candidates = generate_candidates(doc, bundle, cfg)
    g = build_graph(candidates, bundle.graph, cfg.depth)
    if cfg.algorithm == "pagerank":
        scores = run_pagerank(g, cfg.damping, cfg.pagerank_iterations)
    else:
        scores = run_hits(g, cfg.hits_iterations)
    return select(g, scores, candidates, cfg), candidates


def annotation_records(doc: Document, decisions: list[LinkDecision]) -> list[dict]:
    records = []
    for mention, decision in zip(doc.mentions, decisions):
        records.append(
            {
                "namedEntity": mention.surface,
                "start": mention.start,
                "offset": mention.length,
                "disambiguatedURL": decision.chosen or "",
            }
        )
    return records


def candidate_records(doc: Document, candidates: list[list[Candidate]]) -> list[dict]:
    records = []
    for mention, cands in zip(doc.mentions, candidates):
        records.append(
            {
                "namedEntity": mention.surface,
                "start": mention.start,
                "offset": mention.length,
                "candidates": [
                    {
                        "url": c.entity,
                        "sim": c.sim,
                        "popularity": c.popularity,
                        "source": c.source,
                    }
                    for c in cands
                ],
            }
        )
    return records


def render_json(records: list[dict]) -> str:
    return json.dumps(records, ensure_ascii=False, separators=(",", ":"))


def annotate_text(
    tagged_text: str, request_type: str, bundle: IndexBundle, cfg: LinkerConfig
) -> str:
    """The response body for one request; raises UnbalancedTag on bad input."""
    doc = parse_entity_tagged_text(tagged_text)
    decisions, candidates = link_document(doc, bundle, cfg)
    if request_type == TYPE_CANDIDATES:
        return render_json(candidate_records(doc, candidates))
    return render_json(annotation_records(doc, decisions))
