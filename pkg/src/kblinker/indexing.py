"""Offline phase: compile a KnowledgeBase into the retrieval index bundle.

The bundle holds the surface-form, person-name, rare-reference, acronym and
context sub-indices plus a popularity table, the entity graph, entity types
and the redirect map.  Everything is persisted as sorted, newline-delimited
``key TAB value(s)`` files so builds are diffable and deterministic.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import CorruptBundle, InvalidValue, VersionMismatch
from .kb import KnowledgeBase, PredicateConfig, resolve_redirect

FORMAT_VERSION = 1

DEFAULT_PERSON_TYPES = frozenset({"foaf:Person", "http://xmlns.com/foaf/0.1/Person"})
DEFAULT_PLACE_TYPES = frozenset({"dbo:Place", "http://dbpedia.org/ontology/Place"})
DEFAULT_ORGANIZATION_TYPES = frozenset(
    {"dbo:Organisation", "http://dbpedia.org/ontology/Organisation"}
)

_TOKEN = re.compile(r"\w+", re.UNICODE)
_WS = re.compile(r"\s+", re.UNICODE)
_ACRONYM = re.compile(r"^[A-Z0-9]{2,6}$")
_PARENS = re.compile(r"\([^()]*\)")


def normalize_surface_form(s: str) -> str:
    """Lowercase, collapse whitespace and strip punctuation at token edges."""
    tokens = []
    for token in _WS.split(s.lower().strip()):
        token = _strip_edge_punctuation(token)
        if token:
            tokens.append(token)
    return " ".join(tokens)


def _strip_edge_punctuation(token: str) -> str:
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(token[end - 1]).startswith("P"):
        end -= 1
    return token[start:end]


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens, used by the context index on both sides."""
    return _TOKEN.findall(text.lower())


@dataclass(frozen=True)
class IndexConfig:
    """Build-time knobs: special predicates, type IRIs and popularity mode."""

    predicates: PredicateConfig = PredicateConfig()
    person_types: frozenset[str] = DEFAULT_PERSON_TYPES
    place_types: frozenset[str] = DEFAULT_PLACE_TYPES
    organization_types: frozenset[str] = DEFAULT_ORGANIZATION_TYPES
    popularity_mode: str = "pagerank"
    damping: float = 0.85
    iterations: int = 50
    acronym_seeds: dict[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        if self.popularity_mode not in ("frequency", "pagerank"):
            raise InvalidValue("popularity.mode", self.popularity_mode)
        if not 0.0 <= self.damping < 1.0:
            raise InvalidValue("popularity.damping", self.damping)
        if self.iterations < 1:
            raise InvalidValue("popularity.iterations", self.iterations)


def load_acronym_seeds(path: str | Path) -> dict[str, frozenset[str]]:
    """Read a TAB-separated acronym -> expansion seed file."""
    seeds: dict[str, set[str]] = {}
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not raw.strip() or raw.startswith("#"):
            continue
        parts = raw.split("\t")
        if len(parts) != 2 or not _ACRONYM.match(parts[0]):
            raise InvalidValue(f"acronym seed line {line_no}", raw)
        seeds.setdefault(parts[0], set()).add(parts[1])
    return {k: frozenset(v) for k, v in seeds.items()}


@dataclass
class ContextIndex:
    """Token postings with per-entity term frequencies."""

    postings: dict[str, dict[str, int]] = field(default_factory=dict)
    totals: dict[str, int] = field(default_factory=dict)

    def add(self, entity: str, tokens: list[str]) -> None:
        for token in tokens:
            entry = self.postings.setdefault(token, {})
            entry[entity] = entry.get(entity, 0) + 1
        self.totals[entity] = self.totals.get(entity, 0) + len(tokens)


@dataclass
class BundleMeta:
    language: str
    kb_name: str
    built_at: str
    format_version: int
    entity_count: int
    popularity_mode: str
    person_types: frozenset[str]
    place_types: frozenset[str]
    organization_types: frozenset[str]


@dataclass
class IndexBundle:
    """The offline-phase product; immutable and shared by request handlers."""

    surface: dict[str, set[str]]
    persons: dict[str, set[str]]
    rare: dict[str, set[str]]
    acronyms: dict[str, set[str]]
    context: ContextIndex
    popularity: dict[str, float]
    graph: dict[str, list[tuple[str, str]]]
    types: dict[str, set[str]]
    redirects: dict[str, str]
    meta: BundleMeta

    @property
    def common_type_iris(self) -> frozenset[str]:
        return frozenset(
            self.meta.person_types | self.meta.place_types | self.meta.organization_types
        )


def _person_name_variants(label: str) -> set[str]:
    norm = normalize_surface_form(label)
    if not norm:
        return set()
    variants = {norm}
    tokens = norm.split(" ")
    if len(tokens) >= 2:
        first, last = tokens[0], tokens[-1]
        variants.add(f"{last} {first}")   # "Last, First" normalizes to this
        variants.add(last)
        variants.add(f"{first} {last[0]}")
    return variants


def _initials(label: str) -> str:
    bare = _PARENS.sub(" ", label)
    parts = [p for p in re.split(r"[\s\-]+", bare) if p]
    return "".join(p[0] for p in parts).upper()


def compute_popularity(
    graph: dict[str, list[tuple[str, str]]],
    mode: str = "pagerank",
    damping: float = 0.85,
    iterations: int = 50,
) -> dict[str, float]:
    """Per-entity prior: in-link counts or whole-graph PageRank."""
    nodes = set(graph)
    for targets in graph.values():
        nodes.update(t for _, t in targets)
    if not nodes:
        return {}

    if mode == "frequency":
        scores = {v: 0.0 for v in nodes}
        for targets in graph.values():
            for _, t in targets:
                scores[t] += 1.0
        return scores

    if mode != "pagerank":
        raise InvalidValue("popularity mode", mode)
    if not 0.0 <= damping < 1.0:
        raise InvalidValue("damping", damping)
    if iterations < 1:
        raise InvalidValue("iterations", iterations)

    successors = {v: sorted({t for _, t in graph.get(v, ())}) for v in nodes}
    return _pagerank(nodes, successors, damping, iterations)


def _pagerank(
    nodes: set[str],
    successors: dict[str, list[str]],
    damping: float,
    iterations: int,
) -> dict[str, float]:
    n = len(nodes)
    rank = {v: 1.0 / n for v in nodes}
    base = (1.0 - damping) / n
    for _ in range(iterations):
        nxt = {v: 0.0 for v in nodes}
        dangling = 0.0
        for u in nodes:
            succ = successors.get(u, ())
            if not succ:
                dangling += rank[u]
                continue
            share = rank[u] / len(succ)
            for v in succ:
                nxt[v] += share
        spread = damping * dangling / n
        for v in nodes:
            nxt[v] = base + damping * nxt[v] + spread
        rank = nxt
    return rank


def build_indices(kb: KnowledgeBase, config: IndexConfig = IndexConfig()) -> IndexBundle:
    """Run the offline phase.  Deterministic for a fixed kb and config."""
    surface: dict[str, set[str]] = {}
    persons: dict[str, set[str]] = {}
    rare: dict[str, set[str]] = {}
    acronyms: dict[str, set[str]] = {k: set(v) for k, v in config.acronym_seeds.items()}
    context = ContextIndex()
    types: dict[str, set[str]] = {}
    redirects: dict[str, str] = {}

    for iri, rec in kb.entities.items():
        if rec.redirect_to is not None:
            redirects[iri] = rec.redirect_to

    def resolve(iri: str) -> str:
        return resolve_redirect(iri, redirects)

    for iri in sorted(kb.entities):
        rec = kb.entities[iri]
        if rec.redirect_to is not None:
            # Redirect sources contribute their labels as rare references
            # for the redirect target and are otherwise skipped.
            target = resolve(iri)
            for label in rec.alt_labels:
                key = normalize_surface_form(label)
                if key:
                    rare.setdefault(key, set()).add(target)
            continue

        if rec.types:
            types[iri] = set(rec.types)

        is_person = bool(rec.types & config.person_types)
        for label in rec.alt_labels:
            key = normalize_surface_form(label)
            if key:
                surface.setdefault(key, set()).add(iri)
            if is_person:
                for variant in _person_name_variants(label):
                    persons.setdefault(variant, set()).add(iri)

        # Acronym harvesting: token initials of one label matching another
        # label that is itself a short all-caps string.
        caps_labels = {l for l in rec.alt_labels if _ACRONYM.match(l)}
        if caps_labels:
            for label in rec.alt_labels:
                if label in caps_labels:
                    continue
                initials = _initials(label)
                if initials in caps_labels:
                    expansion = _PARENS.sub(" ", label).strip()
                    acronyms.setdefault(initials, set()).add(expansion)

        for pred, text in kb.literals.get(iri, []):
            if pred in config.predicates.abstract:
                context.add(iri, tokenize(text))

    # Disambiguation pages: their labels name each listed member.
    for iri, rec in kb.entities.items():
        if rec.redirect_to is not None:
            continue
        members = [
            t for p, t in kb.out_edges.get(iri, [])
            if p in config.predicates.disambiguation
        ]
        if not members:
            continue
        for label in rec.alt_labels:
            key = normalize_surface_form(label)
            if not key:
                continue
            for member in members:
                rare.setdefault(key, set()).add(resolve(member))

    popularity = compute_popularity(
        kb.out_edges, config.popularity_mode, config.damping, config.iterations
    )

    meta = BundleMeta(
        language=kb.language,
        kb_name=kb.name,
        built_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        format_version=FORMAT_VERSION,
        entity_count=len(kb.entities),
        popularity_mode=config.popularity_mode,
        person_types=frozenset(config.person_types),
        place_types=frozenset(config.place_types),
        organization_types=frozenset(config.organization_types),
    )
    return IndexBundle(
        surface=surface,
        persons=persons,
        rare=rare,
        acronyms=acronyms,
        context=context,
        popularity=popularity,
        graph={k: list(v) for k, v in kb.out_edges.items()},
        types=types,
        redirects=redirects,
        meta=meta,
    )


# ---------------------------------------------------------------------------
# Persistence: one sorted key TAB value(s) file per sub-index.

_FILES = (
    "meta.txt",
    "surface.idx",
    "persons.idx",
    "rare.idx",
    "acronyms.idx",
    "context.idx",
    "popularity.idx",
    "graph.idx",
    "types.idx",
    "redirects.idx",
)


def _esc(value: str) -> str:
    return (
        value.replace("\\", "\\\\")
        .replace("\t", "\\t")
        .replace("\n", "\\n")
        .replace("\r", "\\r")
    )


def _unesc(value: str) -> str:
    out = []
    i = 0
    while i < len(value):
        c = value[i]
        if c == "\\" and i + 1 < len(value):
            nxt = value[i + 1]
            mapped = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}.get(nxt)
            if mapped is not None:
                out.append(mapped)
                i += 2
                continue
        out.append(c)
        i += 1
    return "".join(out)


def _write_index(path: Path, rows: dict[str, list[str]]) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for key in sorted(rows):
            fields = [_esc(key)] + [_esc(v) for v in rows[key]]
            fh.write("\t".join(fields) + "\n")


def _read_index(path: Path) -> dict[str, list[str]]:
    if not path.is_file():
        raise CorruptBundle(path.name, "missing file")
    rows: dict[str, list[str]] = {}
    for raw in path.read_text(encoding="utf-8").splitlines():
        if not raw:
            continue
        fields = [_unesc(f) for f in raw.split("\t")]
        rows[fields[0]] = fields[1:]
    return rows


def persist_bundle(bundle: IndexBundle, directory: str | Path) -> None:
    """Write the bundle; load_bundle restores a structurally equal value."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)

    meta = bundle.meta
    meta_rows = {
        "format_version": [str(meta.format_version)],
        "language": [meta.language],
        "kb_name": [meta.kb_name],
        "built_at": [meta.built_at],
        "entity_count": [str(meta.entity_count)],
        "popularity_mode": [meta.popularity_mode],
        "person_types": sorted(meta.person_types),
        "place_types": sorted(meta.place_types),
        "organization_types": sorted(meta.organization_types),
        "surface_keys": [str(len(bundle.surface))],
        "person_keys": [str(len(bundle.persons))],
        "rare_keys": [str(len(bundle.rare))],
        "acronym_keys": [str(len(bundle.acronyms))],
        "context_tokens": [str(len(bundle.context.postings))],
        "graph_nodes": [str(len(bundle.graph))],
    }
    _write_index(d / "meta.txt", meta_rows)
    _write_index(d / "surface.idx", {k: sorted(v) for k, v in bundle.surface.items()})
    _write_index(d / "persons.idx", {k: sorted(v) for k, v in bundle.persons.items()})
    _write_index(d / "rare.idx", {k: sorted(v) for k, v in bundle.rare.items()})
    _write_index(d / "acronyms.idx", {k: sorted(v) for k, v in bundle.acronyms.items()})
    _write_index(
        d / "context.idx",
        {
            token: [f"{iri} {count}" for iri, count in sorted(entry.items())]
            for token, entry in bundle.context.postings.items()
        },
    )
    _write_index(d / "popularity.idx", {k: [repr(v)] for k, v in bundle.popularity.items()})
    _write_index(
        d / "graph.idx",
        {k: [f"{p} {t}" for p, t in v] for k, v in bundle.graph.items()},
    )
    _write_index(d / "types.idx", {k: sorted(v) for k, v in bundle.types.items()})
    _write_index(d / "redirects.idx", {k: [v] for k, v in bundle.redirects.items()})


def _meta_single(rows: dict[str, list[str]], key: str) -> str:
    if key not in rows or len(rows[key]) != 1:
        raise CorruptBundle("meta.txt", f"missing or malformed key {key}")
    return rows[key][0]


def load_bundle(directory: str | Path) -> IndexBundle:
    d = Path(directory)
    meta_rows = _read_index(d / "meta.txt")
    try:
        version = int(_meta_single(meta_rows, "format_version"))
    except ValueError as exc:
        raise CorruptBundle("meta.txt", f"bad format_version: {exc}")
    if version != FORMAT_VERSION:
        raise VersionMismatch(version, FORMAT_VERSION)

    def read_sets(name: str) -> dict[str, set[str]]:
        return {k: set(v) for k, v in _read_index(d / name).items()}

    context = ContextIndex()
    for token, values in _read_index(d / "context.idx").items():
        entry: dict[str, int] = {}
        for value in values:
            try:
                iri, count = value.rsplit(" ", 1)
                entry[iri] = int(count)
            except ValueError:
                raise CorruptBundle("context.idx", f"bad posting {value!r}")
        context.postings[token] = entry
    totals: dict[str, int] = {}
    for entry in context.postings.values():
        for iri, count in entry.items():
            totals[iri] = totals.get(iri, 0) + count
    context.totals = totals

    popularity: dict[str, float] = {}
    for iri, values in _read_index(d / "popularity.idx").items():
        try:
            popularity[iri] = float(values[0])
        except (IndexError, ValueError):
            raise CorruptBundle("popularity.idx", f"bad score for {iri}")

    graph: dict[str, list[tuple[str, str]]] = {}
    for iri, values in _read_index(d / "graph.idx").items():
        edges = []
        for value in values:
            parts = value.split(" ")
            if len(parts) != 2:
                raise CorruptBundle("graph.idx", f"bad edge {value!r}")
            edges.append((parts[0], parts[1]))
        graph[iri] = edges

    redirects: dict[str, str] = {}
    for iri, values in _read_index(d / "redirects.idx").items():
        if len(values) != 1:
            raise CorruptBundle("redirects.idx", f"bad target list for {iri}")
        redirects[iri] = values[0]

    meta = BundleMeta(
        language=_meta_single(meta_rows, "language"),
        kb_name=_meta_single(meta_rows, "kb_name"),
        built_at=_meta_single(meta_rows, "built_at"),
        format_version=version,
        entity_count=int(_meta_single(meta_rows, "entity_count")),
        popularity_mode=_meta_single(meta_rows, "popularity_mode"),
        person_types=frozenset(meta_rows.get("person_types", [])),
        place_types=frozenset(meta_rows.get("place_types", [])),
        organization_types=frozenset(meta_rows.get("organization_types", [])),
    )
    return IndexBundle(
        surface=read_sets("surface.idx"),
        persons=read_sets("persons.idx"),
        rare=read_sets("rare.idx"),
        acronyms=read_sets("acronyms.idx"),
        context=context,
        popularity=popularity,
        graph=graph,
        types=read_sets("types.idx"),
        redirects=redirects,
        meta=meta,
    )
