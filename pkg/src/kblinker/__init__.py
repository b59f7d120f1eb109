"""Knowledge-base-agnostic multilingual entity linking.

Offline: parse any triple dump into a KnowledgeBase and compile it into an
index bundle (surface forms, person names, rare references, acronyms,
context, popularity, entity graph).  Online: generate candidates per
mention and disambiguate them with HITS or PageRank over a depth-bounded
neighborhood graph.
"""

from .candidates import Candidate, generate_candidates, ngram_similarity
from .config import LinkerConfig, ServiceConfig, load_config
from .documents import Document, Mention, parse_entity_tagged_text, parse_spans_payload
from .graph import (
    DisambiguationGraph,
    LinkDecision,
    NodeScore,
    build_graph,
    run_hits,
    run_pagerank,
    select,
)
from .indexing import (
    IndexBundle,
    IndexConfig,
    build_indices,
    compute_popularity,
    load_bundle,
    normalize_surface_form,
    persist_bundle,
)
from .kb import EntityRecord, KnowledgeBase, PredicateConfig, Triple, load_kb, parse_triple_line
from .linker import annotate_text, link_document

__version__ = "0.1.0"

__all__ = [
    "Candidate",
    "Document",
    "DisambiguationGraph",
    "EntityRecord",
    "IndexBundle",
    "IndexConfig",
    "KnowledgeBase",
    "LinkDecision",
    "LinkerConfig",
    "Mention",
    "NodeScore",
    "PredicateConfig",
    "ServiceConfig",
    "Triple",
    "annotate_text",
    "build_graph",
    "build_indices",
    "compute_popularity",
    "generate_candidates",
    "link_document",
    "load_bundle",
    "load_config",
    "load_kb",
    "ngram_similarity",
    "normalize_surface_form",
    "parse_entity_tagged_text",
    "parse_spans_payload",
    "parse_triple_line",
    "persist_bundle",
    "run_hits",
    "run_pagerank",
    "select",
]
