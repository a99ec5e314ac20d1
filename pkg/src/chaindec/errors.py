"""Exception taxonomy shared by the whole package.

The split into three families mirrors the CLI exit codes: malformed input
text (2), well-formed but semantically invalid input (3), and violated
internal invariants that indicate a bug rather than bad input (4).
"""

from __future__ import annotations


class ChaindecError(Exception):
    """Base class for all package errors."""


class ParseError(ChaindecError):
    """Malformed input text. Carries a line number when one is known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(ChaindecError):
    """Input is well-formed but violates a documented invariant."""


class UsageError(ChaindecError):
    """An operation was called outside its contract (caller bug)."""


class InternalInvariantError(ChaindecError):
    """A structural invariant failed mid-run; signals a defect, not bad input."""
