"""Exception types shared across the package.

Every error raised on purpose derives from IsobenchError so callers can
separate expected failures (bad input, resource limits, non-convergence)
from genuine bugs.
"""

from __future__ import annotations


class IsobenchError(Exception):
    """Base class for all deliberate isobench errors."""


class ContractError(IsobenchError, ValueError):
    """A precondition on an argument was violated."""


class GraphParseError(IsobenchError, ValueError):
    """Malformed graph text. Carries a byte offset or a line number."""

    def __init__(self, message: str, *, offset: int | None = None, line: int | None = None):
        where = ""
        if offset is not None:
            where = f" (byte offset {offset})"
        elif line is not None:
            where = f" (line {line})"
        super().__init__(message + where)
        self.message = message
        self.offset = offset
        self.line = line


class UnsupportedSizeError(ContractError):
    """The value fits the data model but exceeds a format limit."""


class ResourceLimitError(IsobenchError, RuntimeError):
    """The requested computation exceeds a configured work budget."""


class ConvergenceError(IsobenchError, RuntimeError):
    """An iterative numeric routine failed to converge."""


class NumericError(IsobenchError, RuntimeError):
    """A numeric routine left its supported regime."""


class CorpusIntegrityError(IsobenchError, RuntimeError):
    """Bundled corpus data failed its recorded expectations."""
