"""Assertion DSL and relation-table loader.

Grammar::

    statement := unit (REL unit)+
    unit      := bare token without whitespace | "double quoted string"
    REL       := [A-Z][A-Z0-9_]*

Roles are positional, so a bare unit may look like a relation name (``A IS_A B``).

Corpus files are line oriented: ``#`` starts a comment line, ``@domain NAME``
switches the domain for following statements, everything else non-blank is
a statement.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import (
    BadValue,
    CorpusError,
    DuplicateRelation,
    EmptyStatement,
    IlsError,
    StatementSyntaxError,
    UnknownRelation,
)
from .model import Additivity, Inclusivity, Statement

RELATION_RE = re.compile(r"[A-Z][A-Z0-9_]*\Z")
_BARE_RE = re.compile(r"\S+")

SYNONYM_OF = "SYNONYM_OF"
_SYNONYM_ENTRY = (Inclusivity.INCLUSIVE, Additivity.ADDITIVE)

DEFAULT_RELATIONS = """\
# name\tinclusivity\tadditivity
IS_A\tinclusive\tadditive
CONTAINS\tinclusive\tadditive
PART_OF\tinclusive\tadditive
MADE_BY\tinclusive\tadditive
HAS_PROPERTY\tinclusive\tsubtractive
SYNONYM_OF\tinclusive\tadditive
OPPOSITE_OF\texclusive\tadditive
"""


@dataclass(frozen=True)
class RelationTable:
    """Relation name -> ``(inclusivity, additivity)``.

    The table is the rulebook for which node pairs may be linked: a relation
    missing from it cannot be embedded.
    """

    entries: Mapping[str, tuple[Inclusivity, Additivity]]

    def __contains__(self, name: object) -> bool:
        return name in self.entries

    def __getitem__(self, name: str) -> tuple[Inclusivity, Additivity]:
        try:
            return self.entries[name]
        except KeyError:
            raise UnknownRelation(name) from None

    def names(self) -> list[str]:
        return sorted(self.entries)


def _tokenize(line: str) -> Iterator[tuple[str, bool]]:
    """Yield ``(text, quoted)`` tokens."""
    pos = 0
    while True:
        while pos < len(line) and line[pos].isspace():
            pos += 1
        if pos >= len(line):
            return
        if line[pos] == '"':
            end = line.find('"', pos + 1)
            if end < 0:
                raise StatementSyntaxError(f"unterminated quote at column {pos + 1}")
            after = end + 1
            if after < len(line) and not line[after].isspace():
                raise StatementSyntaxError(f"junk after closing quote at column {after + 1}")
            yield line[pos + 1 : end], True
            pos = after
        else:
            m = _BARE_RE.match(line, pos)
            assert m is not None
            if '"' in m.group():
                raise StatementSyntaxError(f"stray quote in token {m.group()!r}")
            yield m.group(), False
            pos = m.end()


def parse_statement(line: str, current_domain: str) -> Statement:
    """Parse one assertion line under ``current_domain``.

    >>> parse_statement("Africa CONTAINS lion", "geo").units
    ('Africa', 'lion')
    """
    if not current_domain or not current_domain.strip():
        raise ValueError("current_domain must be non-empty")
    tokens = list(_tokenize(line))
    if not tokens:
        raise EmptyStatement("empty statement")

    units: list[str] = []
    relations: list[str] = []
    for i, (text, quoted) in enumerate(tokens):
        expect_unit = i % 2 == 0
        is_rel = not quoted and RELATION_RE.match(text) is not None
        if expect_unit:
            text = text.strip()
            if not text:
                raise StatementSyntaxError("empty unit")
            if "\t" in text:
                raise StatementSyntaxError("unit labels may not contain tabs")
            units.append(text)
        else:
            if not is_rel:
                raise StatementSyntaxError(f"expected a relation, got {text!r}")
            relations.append(text)

    if len(tokens) % 2 == 0:
        raise StatementSyntaxError(f"trailing relation {relations[-1]!r}")
    if len(units) < 2:
        raise StatementSyntaxError("a statement links at least two units")
    return Statement(current_domain, tuple(units), tuple(relations))


def format_statement(stmt: Statement) -> str:
    """Inverse of :func:`parse_statement` (units with spaces get quoted)."""
    parts = []
    for i, unit in enumerate(stmt.units):
        if i:
            parts.append(stmt.relations[i - 1])
        needs_quotes = any(c.isspace() for c in unit)
        parts.append(f'"{unit}"' if needs_quotes else unit)
    return " ".join(parts)


def parse_corpus(text: str, domain: str | None = None) -> list[Statement]:
    """Parse a corpus file; each statement remembers its 1-based line number.

    Raises :class:`~informledge.errors.CorpusError` on the first bad line.
    """
    statements = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("@"):
            directive, _, arg = line.partition(" ")
            arg = arg.strip()
            if directive != "@domain" or not arg or "\t" in arg:
                raise CorpusError(lineno, StatementSyntaxError(f"bad directive {line!r}"))
            domain = arg
            continue
        if domain is None:
            raise CorpusError(lineno, StatementSyntaxError("statement before any @domain"))
        try:
            stmt = parse_statement(line, domain)
        except IlsError as exc:
            raise CorpusError(lineno, exc) from exc
        statements.append(
            Statement(stmt.domain, stmt.units, stmt.relations, line=lineno)
        )
    return statements


def load_relation_table(text: str) -> RelationTable:
    """Read ``NAME<TAB>inclusive|exclusive<TAB>additive|subtractive`` rows.

    ``SYNONYM_OF`` is reserved and always present as inclusive/additive.
    """
    entries: dict[str, tuple[Inclusivity, Additivity]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        fields = raw.strip().split("\t")
        if len(fields) != 3:
            raise BadValue(f"line {lineno}: expected 3 tab-separated fields")
        name, inc, add = (f.strip() for f in fields)
        if not RELATION_RE.match(name):
            raise BadValue(f"line {lineno}: bad relation name {name!r}")
        try:
            entry = (Inclusivity(inc), Additivity(add))
        except ValueError:
            raise BadValue(f"line {lineno}: bad strand value in {raw.strip()!r}") from None
        if name in entries:
            raise DuplicateRelation(f"line {lineno}: {name} defined twice")
        if name == SYNONYM_OF and entry != _SYNONYM_ENTRY:
            raise BadValue(f"line {lineno}: {SYNONYM_OF} is reserved as inclusive/additive")
        entries[name] = entry
    entries.setdefault(SYNONYM_OF, _SYNONYM_ENTRY)
    return RelationTable(entries)


def default_relation_table() -> RelationTable:
    return load_relation_table(DEFAULT_RELATIONS)


def validate_statement(stmt: Statement, table: RelationTable) -> None:
    for rel in stmt.relations:
        if rel not in table:
            raise UnknownRelation(rel)


def validate_all(statements: Iterable[Statement], table: RelationTable) -> None:
    for stmt in statements:
        try:
            validate_statement(stmt, table)
        except UnknownRelation as exc:
            raise CorpusError(stmt.line, exc) from exc
