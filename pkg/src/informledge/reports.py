"""CSV emitters for the embedding-scenario table and cone listings."""

from __future__ import annotations

import csv
import io
from typing import Iterable, Sequence

from .embedder import EmbedReport, ScenarioStats
from .errors import UnknownNode
from .retriever import DEFAULT_MAX_DEPTH, build_cone, cone_metrics
from .store import Store, SystemStats

TABLE2_HEADER = (
    "scenario",
    "nodes_in_knowledge",
    "nodes_added_pct",
    "links_traversed",
    "links_added_pct",
)


def _csv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def report_table2(reports: Iterable[tuple[EmbedReport, ScenarioStats]]) -> str:
    rows = (
        (
            f"Sc{i}",
            rep.nodes_in_statement,
            f"{stats.nodes_added_pct:.2f}",
            rep.links_traversed,
            f"{stats.links_added_pct:.2f}",
        )
        for i, (rep, stats) in enumerate(reports, start=1)
    )
    return _csv(TABLE2_HEADER, rows)


def report_cones(
    store: Store,
    labels: Sequence[str],
    domain: str | None = None,
    max_depth: int = DEFAULT_MAX_DEPTH,
    record: bool = False,
) -> str:
    """One ``apex,height,levels`` row per label, in input order.

    A label found in several domains resolves to the lowest ``l`` unless
    ``domain`` pins it.
    """
    rows = []
    for label in labels:
        hits = store.resolve_label(label, domain)
        if not hits:
            raise UnknownNode(f"no node labelled {label!r}")
        row = cone_metrics(build_cone(store, hits[0], max_depth, record=record))
        rows.append((row.apex, row.height, row.levels_text()))
    return _csv(("apex", "height", "levels"), rows)


def report_stats(stats: SystemStats, store: Store) -> str:
    ls = dict(store.domains_by_l())
    return _csv(
        ("domain", "l", "nodes"),
        ((name, ls[name], count) for name, count in stats.knowledge),
    )
