"""Statement embedding: resolve-or-create nodes, build links, count the work.

A statement is consumed by a cursor that hops from node to node, carrying the
previous node id and the remaining knowledge, the way control passes from one
KNN to the next. At each hop the current node's parser picks the next unit and
its link manager builds the link into the current node's link database.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable

from .errors import CorpusError, EmptyReport, IlsError, SelfLink
from .lifecycle import recreate_link
from .model import (
    Coordinate,
    KnnId,
    LinkId,
    Statement,
    Strand,
    compose_link,
    integrativity_of,
)
from .parser import RelationTable, validate_statement
from .store import Store

_CENT = Decimal("0.01")


@dataclass(frozen=True)
class EmbedReport:
    nodes_in_statement: int
    nodes_added: int
    links_traversed: int
    links_added: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.nodes_in_statement, self.nodes_added, self.links_traversed, self.links_added)


@dataclass(frozen=True)
class ScenarioStats:
    nodes_added_pct: Decimal
    links_added_pct: Decimal


def _percent(part: int, whole: int) -> Decimal:
    return (Decimal(100 * part) / Decimal(whole)).quantize(_CENT, rounding=ROUND_HALF_UP)


def classify_scenario(report: EmbedReport) -> ScenarioStats:
    """Percentages of nodes and links that had to be created, half-up to 0.01."""
    if report.nodes_in_statement <= 0 or report.links_traversed <= 0:
        raise EmptyReport(f"cannot classify {report.as_tuple()}: zero denominator")
    return ScenarioStats(
        _percent(report.nodes_added, report.nodes_in_statement),
        _percent(report.links_added, report.links_traversed),
    )


def resolve_or_create_node(
    store: Store, label: str, domain: str, parent: KnnId | None = None
) -> tuple[KnnId, bool]:
    """Find ``label`` in ``domain`` or create it one level below ``parent``.

    A new domain gets its apex first. Existing nodes keep their coordinates
    whatever the parent.
    """
    if not label.strip():
        raise ValueError("label must be non-empty")
    apex = store.add_domain(domain)
    l = store.node(apex).coord.l
    existing = store.find(label, l)
    if existing is not None:
        return existing, False

    if parent is None or parent == apex:
        m = 1
    else:
        m = store.node(parent).coord.m + 1
    return store.add_node(label, Coordinate(l, m, store.free_index(l, m))), True


def _link_manager(
    store: Store, src: KnnId, dst: KnnId, relation: str, table: RelationTable
) -> tuple[LinkId, bool, int]:
    """Probe ``src``'s link database for ``(dst, relation)`` and link if absent.

    Returns ``(link_id, added, traversed)``. The probe scans every active link
    from ``src`` to ``dst``; a creation counts as one more traversed link.
    """
    if src == dst:
        raise SelfLink(f"link from node {src} to itself")
    inclusivity, additivity = table[relation]

    bucket = [
        link
        for link in store.outgoing(src)
        if link.active and link.destination == dst
    ]
    for link in bucket:
        if link.descriptor.relation == relation:
            return link.id, False, len(bucket)

    dormant = [
        link
        for link in store.outgoing(src)
        if link.destination == dst and link.descriptor.relation == relation
    ]
    if dormant:
        # a faded link with the same meaning is revived rather than duplicated
        link = recreate_link(store, dormant[-1].id)
        return link.id, True, len(bucket) + 1

    descriptor = compose_link(
        {
            Strand.directional(src, dst),
            Strand.of(inclusivity),
            Strand.of(additivity),
            Strand.of(integrativity_of(store.node(src).coord, store.node(dst).coord)),
        },
        relation,
    )
    return store.add_link(descriptor).id, True, len(bucket) + 1


def build_link(
    store: Store, src: KnnId, dst: KnnId, relation: str, table: RelationTable
) -> tuple[LinkId, bool]:
    store.node(src)
    store.node(dst)
    link_id, added, _ = _link_manager(store, src, dst, relation, table)
    return link_id, added


@dataclass
class _Cursor:
    """Control token handed from node to node while embedding."""

    current: KnnId
    remaining: deque[tuple[str, str]]


def embed_statement(store: Store, stmt: Statement, table: RelationTable) -> EmbedReport:
    validate_statement(stmt, table)
    for a, _, b in stmt.hops():
        if a == b:
            raise SelfLink(f"{a!r} linked to itself")

    created_nodes = 0
    traversed = 0
    added_links = 0

    head, created = resolve_or_create_node(store, stmt.units[0], stmt.domain)
    created_nodes += created
    cursor = _Cursor(head, deque(zip(stmt.relations, stmt.units[1:])))
    while cursor.remaining:
        relation, next_label = cursor.remaining.popleft()
        nxt, created = resolve_or_create_node(store, next_label, stmt.domain, cursor.current)
        created_nodes += created
        _, added, scanned = _link_manager(store, cursor.current, nxt, relation, table)
        traversed += scanned
        added_links += added
        cursor.current = nxt

    return EmbedReport(len(set(stmt.units)), created_nodes, traversed, added_links)


def embed_corpus(
    store: Store, statements: Iterable[Statement], table: RelationTable
) -> list[tuple[EmbedReport, ScenarioStats]]:
    """Embed statements in order; the first failure aborts with its line number."""
    results = []
    for index, stmt in enumerate(statements, start=1):
        try:
            report = embed_statement(store, stmt, table)
        except IlsError as exc:
            raise CorpusError(stmt.line if stmt.line is not None else index, exc) from exc
        results.append((report, classify_scenario(report)))
    return results
