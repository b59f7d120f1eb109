"""Online step 1: retrieve a manageable candidate set per mention.

Per mention the pipeline is: optional in-document expansion, exact lookup
in the surface/person/rare indices, fuzzy n-gram scan when exact fails,
optional acronym expansion, optional context-index fallback, the entity
type filter, and finally a deterministic sort.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass

from .config import LinkerConfig
from .documents import Document
from .indexing import IndexBundle, normalize_surface_form, tokenize

SOURCE_DIRECT = "direct"
SOURCE_RARE = "rare"
SOURCE_PERSON = "person"
SOURCE_EXPANDED = "expanded"
SOURCE_ACRONYM = "acronym"
SOURCE_CONTEXT = "context"


@dataclass(frozen=True)
class Candidate:
    mention_index: int
    entity: str
    matched_label: str
    sim: float
    popularity: float
    source: str


def char_ngrams(s: str, n: int) -> set[str]:
    """Character n-grams of s padded with n-1 '#' sentinels on both sides."""
    padded = "#" * (n - 1) + s + "#" * (n - 1)
    return {padded[i : i + n] for i in range(len(padded) - n + 1)}


def ngram_similarity(a: str, b: str, n: int) -> float:
    """Dice coefficient over padded character n-gram sets; 1.0 iff equal sets."""
    grams_a = char_ngrams(a, n)
    grams_b = char_ngrams(b, n)
    inter = len(grams_a & grams_b)
    if inter == 0:
        return 0.0
    return 2.0 * inter / (len(grams_a) + len(grams_b))


def heuristic_expansion(surfaces: list[str]) -> dict[int, str]:
    """Grow each mention to a co-occurring longer mention containing it.

    The containment test is token-bounded, the longest superstring wins and
    ties go to the mention appearing earliest in the document.
    """
    expansions: dict[int, str] = {}
    for i, surface in enumerate(surfaces):
        if not surface:
            continue
        pattern = re.compile(r"(?<!\w)" + re.escape(surface) + r"(?!\w)")
        best: str | None = None
        for j, other in enumerate(surfaces):
            if j == i or len(other) <= len(surface):
                continue
            if not pattern.search(other):
                continue
            if best is None or len(other) > len(best):
                best = other
        if best is not None:
            expansions[i] = best
    return expansions


def acronym_lookup(surface: str, acronyms: dict[str, set[str]]) -> set[str]:
    """Exact, case-sensitive expansion lookup on the raw surface."""
    return set(acronyms.get(surface, ()))


def fuzzy_scan(
    query: str, keys: dict[str, set[str]], n: int, threshold: float
) -> list[tuple[str, float]]:
    """All index keys whose n-gram similarity to query reaches the threshold."""
    hits = []
    for key in keys:
        sim = ngram_similarity(query, key, n)
        if sim >= threshold:
            hits.append((key, sim))
    hits.sort(key=lambda kv: (-kv[1], kv[0]))
    return hits


def context_search(
    surface: str,
    doc_tokens: Counter,
    bundle: IndexBundle,
    max_candidates: int,
    mention_index: int = 0,
) -> list[Candidate]:
    """Cosine overlap between document tokens and entity context postings.

    Only entities whose postings share at least one token with the surface
    itself are considered.
    """
    surface_tokens = set(tokenize(surface))
    if not surface_tokens or not doc_tokens:
        return []
    eligible: set[str] = set()
    for token in surface_tokens:
        eligible.update(bundle.context.postings.get(token, ()))
    if not eligible:
        return []

    doc_norm = math.sqrt(sum(c * c for c in doc_tokens.values()))
    raw: dict[str, float] = {}
    norms: dict[str, float] = {e: 0.0 for e in eligible}
    for token, entry in bundle.context.postings.items():
        count = doc_tokens.get(token, 0)
        for entity, tf in entry.items():
            if entity not in norms:
                continue
            norms[entity] += tf * tf
            if count:
                raw[entity] = raw.get(entity, 0.0) + count * tf

    results = []
    for entity, score in raw.items():
        sim = score / (doc_norm * math.sqrt(norms[entity]))
        results.append(
            Candidate(
                mention_index=mention_index,
                entity=entity,
                matched_label=normalize_surface_form(surface),
                sim=sim,
                popularity=bundle.popularity.get(entity, 0.0),
                source=SOURCE_CONTEXT,
            )
        )
    results.sort(key=lambda c: (-c.sim, c.entity))
    return results[:max_candidates]


def _exact_hits(key: str, bundle: IndexBundle) -> dict[str, str]:
    """entity -> source for exact lookups, first index in priority order wins."""
    found: dict[str, str] = {}
    for index, source in (
        (bundle.surface, SOURCE_DIRECT),
        (bundle.persons, SOURCE_PERSON),
        (bundle.rare, SOURCE_RARE),
    ):
        for entity in index.get(key, ()):
            found.setdefault(entity, source)
    return found


def generate_candidates(
    doc: Document, bundle: IndexBundle, cfg: LinkerConfig
) -> list[list[Candidate]]:
    """Candidate lists per mention, deterministically ordered."""
    surfaces = [m.surface for m in doc.mentions]
    expansions = heuristic_expansion(surfaces) if cfg.heuristic_expansion else {}
    doc_tokens = Counter(tokenize(doc.text))
    common_types = bundle.common_type_iris

    results: list[list[Candidate]] = []
    for idx, mention in enumerate(doc.mentions):
        lookup_surface = expansions.get(idx, mention.surface)
        expanded = idx in expansions
        key = normalize_surface_form(lookup_surface)
        picked: dict[str, Candidate] = {}

        def offer(entity: str, matched: str, sim: float, source: str) -> None:
            cand = Candidate(
                mention_index=idx,
                entity=entity,
                matched_label=matched,
                sim=sim,
                popularity=bundle.popularity.get(entity, 0.0),
                source=SOURCE_EXPANDED if expanded and source != SOURCE_ACRONYM else source,
            )
            existing = picked.get(entity)
            if existing is None or cand.sim > existing.sim:
                picked[entity] = cand

        for entity, source in sorted(_exact_hits(key, bundle).items()):
            offer(entity, key, 1.0, source)

        if not picked:
            for index, source in (
                (bundle.surface, SOURCE_DIRECT),
                (bundle.persons, SOURCE_PERSON),
                (bundle.rare, SOURCE_RARE),
            ):
                for matched, sim in fuzzy_scan(key, index, cfg.ngram_distance, cfg.sim_threshold):
                    for entity in sorted(index[matched]):
                        offer(entity, matched, sim, source)

        if cfg.acronym:
            for expansion in sorted(acronym_lookup(mention.surface, bundle.acronyms)):
                expansion_key = normalize_surface_form(expansion)
                for entity in sorted(bundle.surface.get(expansion_key, ())):
                    offer(entity, expansion, 1.0, SOURCE_ACRONYM)

        candidates = list(picked.values())
        if not candidates and cfg.context:
            candidates = context_search(
                mention.surface, doc_tokens, bundle, cfg.max_candidates, idx
            )

        if not cfg.common_entities:
            candidates = [
                c for c in candidates if bundle.types.get(c.entity, set()) & common_types
            ]

        if cfg.popularity:
            candidates.sort(key=lambda c: (-c.popularity, c.entity))
        else:
            candidates.sort(key=lambda c: (-c.sim, c.entity))
        results.append(candidates[: cfg.max_candidates])
    return results
