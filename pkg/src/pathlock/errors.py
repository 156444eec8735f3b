"""Exception hierarchy shared across the package."""

from __future__ import annotations


class PathlockError(Exception):
    """Base class for all errors raised by pathlock."""


class InvalidRange(PathlockError, ValueError):
    """A cutoff interval with lower bound above upper bound."""


class InvalidWord(PathlockError, ValueError):
    """Empty word, or a symbol outside the alphabet."""


class MalformedExpression(PathlockError, KeyError):
    """A counter expression mentions a variable the valuation does not define."""

    def __str__(self) -> str:  # KeyError quotes its argument; keep it readable
        return str(self.args[0]) if self.args else ""


class NonTotalMachine(PathlockError, LookupError):
    """No transition applies to a (state, guard, symbol) triple."""


class NonTotalAutomaton(PathlockError, LookupError):
    """No transition applies to a (predecessor, self) pair."""


class PreconditionError(PathlockError, ValueError):
    """An operation was applied to a device outside its domain."""


class ResourceError(PathlockError, RuntimeError):
    """A construction exceeded the configured state cap.

    ``diagnostics`` carries whatever partial information was gathered.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class DeviceFormatError(PathlockError, ValueError):
    """A device document could not be parsed or failed validation."""

    def __init__(self, message: str, *, line: int | None = None,
                 column: int | None = None, diagnostics: list[str] | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column
        self.diagnostics = list(diagnostics or [])
