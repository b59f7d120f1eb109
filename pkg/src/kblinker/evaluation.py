"""Batch evaluation against gold annotations.

Gold files are TSV: ``doc_id TAB start TAB length TAB surface TAB iri``.
Documents are a JSON object mapping doc_id to plain text.  Scores are
micro-averaged over non-NIL predictions; gold IRIs are compared after
redirect resolution.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .config import LinkerConfig
from .documents import parse_spans_payload
from .errors import InvalidValue, OverlappingSpans, SpanMismatch, SpanOutOfBounds
from .indexing import IndexBundle
from .kb import resolve_redirect
from .linker import link_document


@dataclass(frozen=True)
class GoldRecord:
    doc_id: str
    start: int
    length: int
    surface: str
    iri: str


@dataclass
class EvalReport:
    precision: float
    recall: float
    f1: float
    correct: int
    predicted: int
    gold: int
    per_document: dict[str, tuple[int, int, int]]  # correct, predicted, gold

    def to_json(self) -> str:
        return json.dumps(
            {
                "precision": self.precision,
                "recall": self.recall,
                "f1": self.f1,
                "correct": self.correct,
                "predicted": self.predicted,
                "gold": self.gold,
                "perDocument": {
                    doc_id: {"correct": c, "predicted": p, "gold": g}
                    for doc_id, (c, p, g) in sorted(self.per_document.items())
                },
            },
            ensure_ascii=False,
            indent=2,
        )

    def to_table(self) -> str:
        rows = [("document", "correct", "predicted", "gold")]
        for doc_id, (c, p, g) in sorted(self.per_document.items()):
            rows.append((doc_id, str(c), str(p), str(g)))
        rows.append(("TOTAL", str(self.correct), str(self.predicted), str(self.gold)))
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)) for row in rows]
        lines.append("")
        lines.append(
            f"precision={self.precision:.4f}  recall={self.recall:.4f}  f1={self.f1:.4f}"
        )
        return "\n".join(lines)


def read_gold_tsv(path: str | Path) -> list[GoldRecord]:
    records = []
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not raw.strip() or raw.startswith("#"):
            continue
        parts = raw.split("\t")
        if len(parts) != 5:
            raise InvalidValue(f"gold line {line_no}", raw)
        doc_id, start, length, surface, iri = parts
        try:
            records.append(GoldRecord(doc_id, int(start), int(length), surface, iri))
        except ValueError:
            raise InvalidValue(f"gold line {line_no}", raw)
    return records


def read_documents_json(path: str | Path) -> dict[str, str]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in data.items()
    ):
        raise InvalidValue("documents file", str(path))
    return data


def evaluate(
    bundle: IndexBundle,
    documents: dict[str, str],
    gold: list[GoldRecord],
    cfg: LinkerConfig,
) -> EvalReport:
    by_doc: dict[str, list[GoldRecord]] = {}
    for record in gold:
        if record.doc_id not in documents:
            raise SpanMismatch(f"gold references unknown document {record.doc_id!r}")
        by_doc.setdefault(record.doc_id, []).append(record)

    correct = predicted = total_gold = 0
    per_document: dict[str, tuple[int, int, int]] = {}
    for doc_id in sorted(by_doc):
        text = documents[doc_id]
        records = sorted(by_doc[doc_id], key=lambda r: r.start)
        try:
            doc = parse_spans_payload(text, [(r.start, r.length) for r in records])
        except (SpanOutOfBounds, OverlappingSpans) as exc:
            raise SpanMismatch(f"{doc_id}: {exc}")
        for mention, record in zip(doc.mentions, records):
            if record.surface and mention.surface != record.surface:
                raise SpanMismatch(
                    f"{doc_id}: span ({record.start}, {record.length}) reads "
                    f"{mention.surface!r}, gold says {record.surface!r}"
                )
        decisions, _ = link_document(doc, bundle, cfg)
        doc_correct = doc_predicted = 0
        for decision, record in zip(decisions, records):
            if decision.chosen is None:
                continue
            doc_predicted += 1
            target = resolve_redirect(record.iri, bundle.redirects)
            if resolve_redirect(decision.chosen, bundle.redirects) == target:
                doc_correct += 1
        per_document[doc_id] = (doc_correct, doc_predicted, len(records))
        correct += doc_correct
        predicted += doc_predicted
        total_gold += len(records)

    precision = correct / predicted if predicted else 0.0
    recall = correct / total_gold if total_gold else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return EvalReport(
        precision=precision,
        recall=recall,
        f1=f1,
        correct=correct,
        predicted=predicted,
        gold=total_gold,
        per_document=per_document,
    )
