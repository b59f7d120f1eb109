"""Operator command line: index, link, serve and eval subcommands.

Exit codes: 0 success, 1 malformed input (dump lines, tags, spans),
2 file-system or bundle errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import indexing
from .config import (
    LINKER_KEYS,
    LinkerConfig,
    ServiceConfig,
    apply_overrides,
    load_config,
    read_properties,
)
from .errors import (
    CorruptBundle,
    DuplicateRedirect,
    InvalidValue,
    KBLinkerError,
    MalformedLine,
    SpanMismatch,
    UnbalancedTag,
    VersionMismatch,
)
from .evaluation import evaluate, read_documents_json, read_gold_tsv
from .kb import PredicateConfig, load_kb
from .linker import TYPE_DISAMBIGUATE, annotate_text

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_IO = 2


def _split_list(value: str) -> frozenset[str]:
    return frozenset(v.strip() for v in value.split(",") if v.strip())


def _index_config_from_properties(path: str | None) -> tuple[indexing.IndexConfig, str, str]:
    """Read build-time settings; returns (config, language, kb name)."""
    values = read_properties(path) if path else {}
    predicates = PredicateConfig()
    if "label.predicates" in values:
        predicates = predicates.with_extra_labels(_split_list(values["label.predicates"]))
    for key, attr in (
        ("type.predicate", "type"),
        ("redirect.predicate", "redirect"),
        ("abstract.predicate", "abstract"),
        ("disambiguation.predicates", "disambiguation"),
    ):
        if key in values:
            predicates = replace(predicates, **{attr: _split_list(values[key])})

    seeds = {}
    if "acronyms.seed" in values:
        seed_path = Path(values["acronyms.seed"])
        if not seed_path.is_absolute() and path:
            seed_path = Path(path).parent / seed_path
        seeds = indexing.load_acronym_seeds(seed_path)

    config = indexing.IndexConfig(
        predicates=predicates,
        person_types=_split_list(values["person.types"])
        if "person.types" in values
        else indexing.DEFAULT_PERSON_TYPES,
        place_types=_split_list(values["place.types"])
        if "place.types" in values
        else indexing.DEFAULT_PLACE_TYPES,
        organization_types=_split_list(values["organization.types"])
        if "organization.types" in values
        else indexing.DEFAULT_ORGANIZATION_TYPES,
        popularity_mode=values.get("popularity.mode", "pagerank"),
        damping=float(values.get("popularity.damping", "0.85")),
        iterations=int(values.get("popularity.iterations", "50")),
        acronym_seeds=seeds,
    )
    return config, values.get("language", "en"), values.get("name", "kb")


def _add_linker_flags(parser: argparse.ArgumentParser) -> None:
    for key in LINKER_KEYS:
        parser.add_argument(f"--{key}", metavar="VALUE", dest=f"opt_{key}")


def _linker_overrides(args: argparse.Namespace) -> dict[str, str]:
    return {
        key: getattr(args, f"opt_{key}")
        for key in LINKER_KEYS
        if getattr(args, f"opt_{key}", None) is not None
    }


def cmd_index(args: argparse.Namespace) -> int:
    kb_path = Path(args.kb_file)
    if not kb_path.is_file():
        print(f"error: kb file not found: {kb_path}", file=sys.stderr)
        return EXIT_IO
    try:
        config, language, name = _index_config_from_properties(args.config)
        if args.language:
            language = args.language
        if args.name:
            name = args.name
        with kb_path.open("r", encoding="utf-8") as fh:
            kb = load_kb(fh, language=language, name=name, predicates=config.predicates)
        bundle = indexing.build_indices(kb, config)
        indexing.persist_bundle(bundle, args.out_dir)
    except (MalformedLine, DuplicateRedirect) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (OSError, InvalidValue) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"entities: {bundle.meta.entity_count}")
    print(f"surface forms: {len(bundle.surface)}")
    print(f"person names: {len(bundle.persons)}")
    print(f"rare references: {len(bundle.rare)}")
    print(f"acronyms: {len(bundle.acronyms)}")
    print(f"context tokens: {len(bundle.context.postings)}")
    return EXIT_OK


def _load_bundle_or_exit(bundle_dir: str):
    try:
        return indexing.load_bundle(bundle_dir)
    except (CorruptBundle, VersionMismatch, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None


def cmd_link(args: argparse.Namespace) -> int:
    bundle = _load_bundle_or_exit(args.bundle_dir)
    if bundle is None:
        return EXIT_IO
    try:
        text = Path(args.input_file).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        cfg = apply_overrides(LinkerConfig(), _linker_overrides(args))
        body = annotate_text(text, TYPE_DISAMBIGUATE, bundle, cfg)
    except UnbalancedTag as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except InvalidValue as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    # Exactly the HTTP response body, byte for byte.
    sys.stdout.write(body)
    sys.stdout.flush()
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app_for_bundle_dir

    try:
        service_cfg = load_config(args.config)
    except (InvalidValue, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        linker = apply_overrides(service_cfg.linker, _linker_overrides(args))
        service_cfg = ServiceConfig(
            linker=linker,
            host=args.host or service_cfg.host,
            port=args.port or service_cfg.port,
            bundle_dir=args.bundle_dir,
            max_request_bytes=service_cfg.max_request_bytes,
        )
        app = app_for_bundle_dir(args.bundle_dir, service_cfg)
    except (CorruptBundle, VersionMismatch, InvalidValue, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    uvicorn.run(app, host=service_cfg.host, port=service_cfg.port, log_level="warning")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    bundle = _load_bundle_or_exit(args.bundle_dir)
    if bundle is None:
        return EXIT_IO
    try:
        documents = read_documents_json(args.documents_file)
        gold = read_gold_tsv(args.gold_file)
    except (OSError, InvalidValue, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        cfg = apply_overrides(LinkerConfig(), _linker_overrides(args))
        report = evaluate(bundle, documents, gold, cfg)
    except SpanMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except KBLinkerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    print(report.to_json())
    print()
    print(report.to_table())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kblinker",
        description="Knowledge-base-agnostic entity linking engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="build an index bundle from a KB dump")
    p_index.add_argument("kb_file", help="KB dump in the ingestion triple format")
    p_index.add_argument("out_dir", help="output bundle directory")
    p_index.add_argument("--config", help="index properties file")
    p_index.add_argument("--language", help="KB language tag (default from config or en)")
    p_index.add_argument("--name", help="KB name (default from config or kb)")
    p_index.set_defaults(func=cmd_index)

    p_link = sub.add_parser("link", help="link a tagged-text file against a bundle")
    p_link.add_argument("bundle_dir")
    p_link.add_argument("input_file", help="file with <entity>-tagged text")
    _add_linker_flags(p_link)
    p_link.set_defaults(func=cmd_link)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("bundle_dir")
    p_serve.add_argument("--config", help="service properties file")
    p_serve.add_argument("--host")
    p_serve.add_argument("--port", type=int)
    _add_linker_flags(p_serve)
    p_serve.set_defaults(func=cmd_serve)

    p_eval = sub.add_parser("eval", help="score predictions against gold annotations")
    p_eval.add_argument("bundle_dir")
    p_eval.add_argument("documents_file", help="JSON object mapping doc id to text")
    p_eval.add_argument("gold_file", help="TSV: doc_id, start, length, surface, iri")
    _add_linker_flags(p_eval)
    p_eval.set_defaults(func=cmd_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
