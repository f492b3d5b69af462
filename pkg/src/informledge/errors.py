"""Exception hierarchy shared by the engine and the CLI.

Every engine error derives from :class:`IlsError`; the CLI maps these to exit
code 2 and prefixes the message with the class name.
"""

from __future__ import annotations


class IlsError(Exception):
    """Base class for all engine errors."""


# link composition
class MissingAxis(IlsError):
    pass


class DuplicateAxis(IlsError):
    pass


class SelfLink(IlsError):
    pass


# assertion DSL
class StatementSyntaxError(IlsError):
    pass


class EmptyStatement(IlsError):
    pass


class DuplicateRelation(IlsError):
    pass


class BadValue(IlsError):
    pass


class UnknownRelation(IlsError):
    def __init__(self, name: str) -> None:
        super().__init__(f"unknown relation {name!r}")
        self.name = name


# embedding
class EmptyReport(IlsError):
    pass


class CorpusError(IlsError):
    """A statement in a corpus failed; carries the 1-based source line."""

    def __init__(self, line: int | None, cause: Exception) -> None:
        where = f"line {line}" if line is not None else "statement"
        super().__init__(f"{where}: {type(cause).__name__}: {cause}")
        self.line = line
        self.cause = cause


# lookup / lifecycle
class UnknownNode(IlsError):
    pass


class UnknownLink(IlsError):
    pass


class FadedLink(IlsError):
    pass


class NotFaded(IlsError):
    pass


# persistence
class BadHeader(IlsError):
    pass


class CorruptRecord(IlsError):
    def __init__(self, line: int, detail: str) -> None:
        super().__init__(f"line {line}: {detail}")
        self.line = line


class InvariantViolation(IlsError):
    pass
