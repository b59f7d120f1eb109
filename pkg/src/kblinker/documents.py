"""Input documents: plain text plus character-offset mention spans.

Offsets count Unicode scalar values (Python string indices), never bytes,
so payloads in any script round-trip cleanly between clients.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import OverlappingSpans, SpanOutOfBounds, UnbalancedTag

OPEN_TAG = "<entity>"
CLOSE_TAG = "</entity>"


@dataclass(frozen=True)
class Mention:
    start: int
    length: int
    surface: str

    @property
    def end(self) -> int:
        return self.start + self.length


@dataclass
class Document:
    text: str
    mentions: list[Mention] = field(default_factory=list)


def parse_entity_tagged_text(raw: str) -> Document:
    """Strip <entity> tags and record each tagged span as a Mention.

    Tags are literal and case-sensitive; nesting and orphan tags raise
    UnbalancedTag with the offending position in the raw string.
    """
    pieces: list[str] = []
    spans: list[tuple[int, int]] = []
    plain_len = 0
    open_at: int | None = None  # raw offset of the current open tag
    mention_start = 0
    i = 0
    while i < len(raw):
        next_open = raw.find(OPEN_TAG, i)
        next_close = raw.find(CLOSE_TAG, i)
        if next_open < 0 and next_close < 0:
            pieces.append(raw[i:])
            plain_len += len(raw) - i
            break
        if next_close < 0 or (0 <= next_open < next_close):
            if open_at is not None:
                raise UnbalancedTag(next_open, "nested <entity> tag")
            pieces.append(raw[i:next_open])
            plain_len += next_open - i
            open_at = next_open
            mention_start = plain_len
            i = next_open + len(OPEN_TAG)
        else:
            if open_at is None:
                raise UnbalancedTag(next_close, "</entity> without matching <entity>")
            pieces.append(raw[i:next_close])
            plain_len += next_close - i
            if plain_len > mention_start:
                spans.append((mention_start, plain_len - mention_start))
            open_at = None
            i = next_close + len(CLOSE_TAG)
    if open_at is not None:
        raise UnbalancedTag(open_at, "<entity> never closed")
    text = "".join(pieces)
    return Document(
        text=text,
        mentions=[Mention(s, l, text[s : s + l]) for s, l in spans],
    )


def parse_spans_payload(text: str, spans: list[tuple[int, int]]) -> Document:
    """Build a Document from explicit (start, length) spans."""
    checked = []
    for start, length in spans:
        if start < 0 or length < 1 or start + length > len(text):
            raise SpanOutOfBounds(f"span ({start}, {length}) outside text of length {len(text)}")
        checked.append((start, length))
    checked.sort()
    for (s1, l1), (s2, _) in zip(checked, checked[1:]):
        if s1 + l1 > s2:
            raise OverlappingSpans(f"span ({s1}, {l1}) overlaps span starting at {s2}")
    return Document(
        text=text,
        mentions=[Mention(s, l, text[s : s + l]) for s, l in checked],
    )


def to_tagged_text(doc: Document) -> str:
    """Inverse of parse_entity_tagged_text for round trips and UI payloads."""
    out = []
    cursor = 0
    for m in doc.mentions:
        out.append(doc.text[cursor : m.start])
        out.append(OPEN_TAG)
        out.append(doc.text[m.start : m.end])
        out.append(CLOSE_TAG)
        cursor = m.end
    out.append(doc.text[cursor:])
    return "".join(out)
