"""Exception hierarchy shared across the toolkit.

Every error raised by fieldscope code derives from FieldscopeError so
callers (notably the CLI) can map failures onto exit codes: user/input
problems, external-service problems, and validation problems.
"""

from __future__ import annotations


class FieldscopeError(Exception):
    """Base class for all fieldscope errors."""


class ConfigError(FieldscopeError):
    """A run configuration is missing, malformed, or references absent files."""


class StorageError(FieldscopeError):
    """Corpus persistence failed; message carries the offending path."""


# --- record parsing ---

class MalformedBlock(FieldscopeError):
    """A tagged-export block never reached its ER terminator."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"{message} (line {line_no})")
        self.line_no = line_no


class HeaderMissingUT(FieldscopeError):
    """A tabular export header lacks the UT column."""


# --- query language ---

class QuerySyntaxError(FieldscopeError):
    """Query text failed to parse; carries the byte offset and what was expected."""

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        detail = f"{message} at offset {offset}"
        if expected:
            detail += " (expected " + " | ".join(expected) + ")"
        super().__init__(detail)
        self.offset = offset
        self.expected = expected


class UnknownField(QuerySyntaxError):
    """A field selector outside TS/TI/AB/WC/CT/PY."""


class UnbalancedParen(QuerySyntaxError):
    """Parenthesis nesting never closed (or closed too often)."""


# --- pipeline ---

class EmptyInitial(FieldscopeError):
    """The preliminary strategy matched nothing; the pipeline refuses to run."""


class ClassifierUnavailable(FieldscopeError):
    """The classifier backend cannot serve verdicts; stage 4 aborted."""


class ChecksumMismatch(FieldscopeError):
    """A pipeline checkpoint does not belong to this corpus/config pair."""


# --- classifier hub ---

class EmptyTrainingSet(FieldscopeError):
    """Export requested for a training set with no examples."""


class NTooLarge(FieldscopeError):
    """A sample of n records was requested from a smaller corpus."""


class SingleClassTrainingSet(FieldscopeError):
    """Local training needs at least one example of each label."""


class ReplayMiss(FieldscopeError):
    """A record has no cached verdict in the replay file."""


class ExternalServiceError(FieldscopeError):
    """HTTP backend failed after exhausting its retry budget."""


# --- evaluation / analytics ---

class EmptyGold(FieldscopeError):
    """Scoring requested against an empty gold-label list."""


class NoRelevantInSample(FieldscopeError):
    """Recall estimation needs at least one relevant record in the sample."""


class EmptyGroup(FieldscopeError):
    """A citation profile was requested for a group with no records."""


class MissingDenominator(FieldscopeError):
    """A share/percentage trend needs a denominator corpus."""
