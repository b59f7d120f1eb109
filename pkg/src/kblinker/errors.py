"""Exception types shared across the engine."""


class KBLinkerError(Exception):
    """Base class for all engine errors."""


class MalformedLine(KBLinkerError):
    """A line of a triple dump could not be parsed."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class DuplicateRedirect(KBLinkerError):
    """An entity carries two redirect triples with different targets."""

    def __init__(self, subject: str, existing: str, duplicate: str):
        super().__init__(
            f"{subject} redirects to both {existing} and {duplicate}"
        )
        self.subject = subject
        self.existing = existing
        self.duplicate = duplicate


class CorruptBundle(KBLinkerError):
    """An index bundle on disk is missing files or cannot be decoded."""

    def __init__(self, file: str, reason: str):
        super().__init__(f"{file}: {reason}")
        self.file = file
        self.reason = reason


class VersionMismatch(KBLinkerError):
    """Bundle on disk was written with an incompatible format version."""

    def __init__(self, found: int, expected: int):
        super().__init__(f"bundle format version {found}, reader expects {expected}")
        self.found = found
        self.expected = expected


class UnbalancedTag(KBLinkerError):
    """Entity tags in an input text do not pair up."""

    def __init__(self, position: int, reason: str):
        super().__init__(f"position {position}: {reason}")
        self.position = position
        self.reason = reason


class SpanOutOfBounds(KBLinkerError):
    """A mention span points outside the document text."""


class OverlappingSpans(KBLinkerError):
    """Two mention spans overlap."""


class SpanMismatch(KBLinkerError):
    """A gold span does not match the referenced document."""


class InvalidValue(KBLinkerError):
    """A configuration key was set to an unusable value."""

    def __init__(self, key: str, value: object):
        super().__init__(f"invalid value for {key}: {value!r}")
        self.key = key
        self.value = value
