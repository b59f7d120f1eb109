"""Knowledge-base model: triple-dump parsing and the in-memory entity graph.

The ingestion format is newline-delimited triples with three
whitespace-separated fields: subject and predicate are IRIs in angle
brackets, the object is either an IRI or a quoted literal with an optional
``@lang`` tag.  ``\\"`` and ``\\\\`` are the only escapes recognized inside
literals.  ``#`` at column 0 starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable

from .errors import DuplicateRedirect, MalformedLine

_LANG_TAG = re.compile(r"^[A-Za-z]{1,8}(-[A-Za-z0-9]{1,8})*$")

# Compact and full forms of the conventional special predicates.  KB
# agnosticism comes from remapping these per dump.
DEFAULT_LABEL_PREDICATES = frozenset(
    {"rdfs:label", "http://www.w3.org/2000/01/rdf-schema#label"}
)
DEFAULT_TYPE_PREDICATES = frozenset(
    {"rdf:type", "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"}
)
DEFAULT_REDIRECT_PREDICATES = frozenset(
    {"dbo:wikiPageRedirects", "http://dbpedia.org/ontology/wikiPageRedirects"}
)
DEFAULT_DISAMBIGUATION_PREDICATES = frozenset(
    {"dbo:wikiPageDisambiguates", "http://dbpedia.org/ontology/wikiPageDisambiguates"}
)
DEFAULT_ABSTRACT_PREDICATES = frozenset(
    {"dbo:abstract", "http://dbpedia.org/ontology/abstract"}
)


@dataclass(frozen=True)
class Literal:
    """A plain literal with an optional BCP-47 language tag."""

    text: str
    lang: str | None = None


@dataclass(frozen=True)
class Triple:
    subject: str
    predicate: str
    object: str | Literal

    @property
    def is_literal(self) -> bool:
        return isinstance(self.object, Literal)


@dataclass(frozen=True)
class PredicateConfig:
    """Which predicates are treated specially while loading a dump."""

    label: frozenset[str] = DEFAULT_LABEL_PREDICATES
    type: frozenset[str] = DEFAULT_TYPE_PREDICATES
    redirect: frozenset[str] = DEFAULT_REDIRECT_PREDICATES
    disambiguation: frozenset[str] = DEFAULT_DISAMBIGUATION_PREDICATES
    abstract: frozenset[str] = DEFAULT_ABSTRACT_PREDICATES

    def with_extra_labels(self, extra: Iterable[str]) -> "PredicateConfig":
        return replace(self, label=frozenset(self.label | set(extra)))


@dataclass
class EntityRecord:
    iri: str
    preferred_label: str | None = None
    alt_labels: set[str] = field(default_factory=set)
    types: set[str] = field(default_factory=set)
    redirect_to: str | None = None


@dataclass
class KnowledgeBase:
    """Immutable after load_kb returns; shared read-only by request handlers.

    ``out_edges`` keeps every entity as a key (possibly with an empty list)
    so the graph node set equals the entity set.  ``literals`` carries
    literal-object triples that are not labels, e.g. abstracts feeding the
    context index.
    """

    entities: dict[str, EntityRecord]
    out_edges: dict[str, list[tuple[str, str]]]
    literals: dict[str, list[tuple[str, str]]]
    language: str
    name: str


def _parse_iri(token: str, line_no: int) -> str:
    if not (token.startswith("<") and token.endswith(">")):
        raise MalformedLine(line_no, f"expected <IRI>, got {token!r}")
    value = token[1:-1]
    if not value:
        raise MalformedLine(line_no, "empty IRI")
    if any(c.isspace() for c in value) or "<" in value or ">" in value:
        raise MalformedLine(line_no, f"bad IRI {value!r}")
    return value


def _parse_literal(text: str, line_no: int) -> Literal:
    # text starts at the opening quote; returns the literal and checks the
    # remainder is either empty or a single @lang tag.
    chars = []
    i = 1
    closed_at = -1
    while i < len(text):
        c = text[i]
        if c == "\\":
            if i + 1 >= len(text) or text[i + 1] not in ('"', "\\"):
                raise MalformedLine(line_no, "invalid escape in literal")
            chars.append(text[i + 1])
            i += 2
            continue
        if c == '"':
            closed_at = i
            break
        chars.append(c)
        i += 1
    if closed_at < 0:
        raise MalformedLine(line_no, "unterminated literal")
    rest = text[closed_at + 1 :]
    lang = None
    if rest:
        if not rest.startswith("@"):
            raise MalformedLine(line_no, f"unexpected content after literal: {rest!r}")
        lang = rest[1:]
        if not _LANG_TAG.match(lang):
            raise MalformedLine(line_no, f"bad language tag {lang!r}")
    return Literal("".join(chars), lang)


def parse_triple_line(line: str, line_no: int = 0) -> Triple | None:
    """Parse one dump line; returns None for blank and comment lines."""
    if line.startswith("#"):
        return None
    stripped = line.strip()
    if not stripped:
        return None

    parts = stripped.split(None, 2)
    if len(parts) != 3:
        raise MalformedLine(line_no, f"expected 3 fields, got {len(parts)}")
    subject = _parse_iri(parts[0], line_no)
    predicate = _parse_iri(parts[1], line_no)
    obj_text = parts[2]

    if obj_text.startswith("<"):
        obj_fields = obj_text.split()
        if len(obj_fields) != 1:
            raise MalformedLine(line_no, f"expected 3 fields, got {2 + len(obj_fields)}")
        return Triple(subject, predicate, _parse_iri(obj_fields[0], line_no))
    if obj_text.startswith('"'):
        return Triple(subject, predicate, _parse_literal(obj_text, line_no))
    raise MalformedLine(line_no, f"object must be <IRI> or quoted literal, got {obj_text!r}")


def _lang_matches(lang: str | None, kb_language: str) -> bool:
    return lang is None or lang.lower() == kb_language.lower()


def load_kb(
    source: Iterable[str],
    language: str,
    name: str,
    predicates: PredicateConfig = PredicateConfig(),
) -> KnowledgeBase:
    """Build a KnowledgeBase from ingestion-format lines.

    All collections are deduplicated and stored in sorted order, so the
    result is invariant under permutation of the input lines.
    """
    labels: dict[str, set[str]] = {}
    types: dict[str, set[str]] = {}
    redirects: dict[str, str] = {}
    edges: dict[str, set[tuple[str, str]]] = {}
    literals: dict[str, set[tuple[str, str]]] = {}
    seen: set[str] = set()

    def touch(iri: str) -> None:
        seen.add(iri)

    for line_no, raw in enumerate(source, start=1):
        line = raw.rstrip("\r\n")
        triple = parse_triple_line(line, line_no)
        if triple is None:
            continue
        s, p = triple.subject, triple.predicate
        touch(s)
        if isinstance(triple.object, Literal):
            lit = triple.object
            if not _lang_matches(lit.lang, language):
                continue
            if p in predicates.label:
                labels.setdefault(s, set()).add(lit.text)
            else:
                literals.setdefault(s, set()).add((p, lit.text))
            continue
        o = triple.object
        if p in predicates.type:
            # Class IRIs are recorded as types, not as entities.
            types.setdefault(s, set()).add(o)
        elif p in predicates.redirect:
            if s in redirects and redirects[s] != o:
                raise DuplicateRedirect(s, redirects[s], o)
            redirects[s] = o
            touch(o)
        else:
            edges.setdefault(s, set()).add((p, o))
            touch(o)

    entities: dict[str, EntityRecord] = {}
    for iri in sorted(seen):
        alt = labels.get(iri, set())
        entities[iri] = EntityRecord(
            iri=iri,
            preferred_label=min(alt) if alt else None,
            alt_labels=alt,
            types=types.get(iri, set()),
            redirect_to=redirects.get(iri),
        )
    out_edges = {iri: sorted(edges.get(iri, ())) for iri in sorted(seen)}
    lit_out = {s: sorted(v) for s, v in sorted(literals.items())}
    return KnowledgeBase(
        entities=entities,
        out_edges=out_edges,
        literals=lit_out,
        language=language,
        name=name,
    )


def _escape_literal(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def kb_to_lines(kb: KnowledgeBase, predicates: PredicateConfig = PredicateConfig()) -> list[str]:
    """Serialize back to ingestion lines; re-parsing yields an equal KB.

    Special predicates are emitted in their canonical compact form; literal
    language tags are dropped (untagged literals match any KB language).
    """
    label_pred = min(predicates.label, key=lambda p: (len(p), p))
    type_pred = min(predicates.type, key=lambda p: (len(p), p))
    redirect_pred = min(predicates.redirect, key=lambda p: (len(p), p))
    lines = []
    for iri in sorted(kb.entities):
        rec = kb.entities[iri]
        for label in sorted(rec.alt_labels):
            lines.append(f'<{iri}> <{label_pred}> "{_escape_literal(label)}"')
        for t in sorted(rec.types):
            lines.append(f"<{iri}> <{type_pred}> <{t}>")
        if rec.redirect_to is not None:
            lines.append(f"<{iri}> <{redirect_pred}> <{rec.redirect_to}>")
        for pred, text in kb.literals.get(iri, []):
            lines.append(f'<{iri}> <{pred}> "{_escape_literal(text)}"')
        for pred, target in kb.out_edges.get(iri, []):
            lines.append(f"<{iri}> <{pred}> <{target}>")
    return lines


def resolve_redirect(iri: str, redirects: dict[str, str]) -> str:
    """Follow redirect pointers to a final target, guarding against cycles."""
    seen = {iri}
    current = iri
    while current in redirects:
        current = redirects[current]
        if current in seen:
            return current
        seen.add(current)
    return current
