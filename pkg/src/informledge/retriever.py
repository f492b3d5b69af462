"""Thread expansion, knowledge cones and label queries.

Expansion follows active inclusive links depth first. A subtractive link is
the last hop of its thread: the destination is appended and the thread stops.
Children are visited in ascending destination-coordinate order (link id breaks
ties between parallel links), so output order is fully deterministic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .errors import UnknownNode
from .lifecycle import touch_link
from .model import Additivity, Coordinate, Inclusivity, KnnId, Link, LinkId
from .store import Store

DEFAULT_MAX_DEPTH = 32


@dataclass(frozen=True)
class Thread:
    nodes: tuple[KnnId, ...]
    links: tuple[LinkId, ...] = ()

    def __post_init__(self) -> None:
        if not self.nodes or len(self.links) != len(self.nodes) - 1:
            raise ValueError("a thread has n >= 1 nodes and n - 1 links")

    def __len__(self) -> int:
        return len(self.links)

    def labels(self, store: Store) -> tuple[str, ...]:
        return tuple(store.nodes[i].label for i in self.nodes)

    def render(self, store: Store) -> str:
        return " -> ".join(self.labels(store))


@dataclass(frozen=True)
class Cone:
    apex: KnnId
    apex_label: str
    threads: tuple[Thread, ...]
    level_widths: dict[int, int]

    @property
    def height(self) -> int:
        return len(self.threads)


@dataclass(frozen=True)
class ConeRow:
    apex: str
    height: int
    levels: tuple[tuple[int, int], ...]

    def levels_text(self) -> str:
        return ";".join(f"{m}:{width}" for m, width in self.levels)


def _traversable(link: Link) -> bool:
    return link.active and link.descriptor.inclusivity is Inclusivity.INCLUSIVE


def _children(store: Store, node: KnnId, visited: frozenset[KnnId]) -> list[Link]:
    eligible = [
        link
        for link in store.outgoing(node)
        if _traversable(link) and link.destination not in visited
    ]
    eligible.sort(key=lambda lk: (store.nodes[lk.destination].coord, lk.id))
    return eligible


def record_usage(store: Store, threads: Iterable[Thread]) -> None:
    """Apply one retrieval batch's usage counts.

    Every distinct node and link seen in the batch is counted once. The clock
    advances only when the batch actually used a link.
    """
    nodes: set[KnnId] = set()
    links: set[LinkId] = set()
    for thread in threads:
        nodes.update(thread.nodes)
        links.update(thread.links)
    for knn_id in nodes:
        store.nodes[knn_id].usage += 1
    if links:
        now = store.tick + 1
        for link_id in sorted(links):
            touch_link(store, link_id, now)


def expand_threads(
    store: Store,
    start: KnnId,
    max_depth: int = DEFAULT_MAX_DEPTH,
    record: bool = True,
) -> list[Thread]:
    """All maximal threads rooted at ``start``.

    A node with nothing to follow yields the single zero-hop thread
    ``[start]``. With ``record`` the batch's usage counters are updated.
    """
    if start not in store.nodes:
        raise UnknownNode(f"no node with id {start}")
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")

    threads: list[Thread] = []
    # entries are (nodes, links, closed); a closed thread ended on a subtractive hop
    stack: list[tuple[tuple[KnnId, ...], tuple[LinkId, ...], bool]] = [((start,), (), False)]
    while stack:
        nodes, links, closed = stack.pop()
        if closed or len(links) >= max_depth:
            threads.append(Thread(nodes, links))
            continue
        children = _children(store, nodes[-1], frozenset(nodes))
        if not children:
            threads.append(Thread(nodes, links))
            continue
        for link in reversed(children):
            stack.append(
                (
                    nodes + (link.destination,),
                    links + (link.id,),
                    link.descriptor.additivity is Additivity.SUBTRACTIVE,
                )
            )
    if record:
        record_usage(store, threads)
    return threads


def build_cone(
    store: Store,
    apex: KnnId,
    max_depth: int = DEFAULT_MAX_DEPTH,
    record: bool = True,
) -> Cone:
    threads = [t for t in expand_threads(store, apex, max_depth, record) if len(t) > 0]
    members = {apex}
    for thread in threads:
        members.update(thread.nodes)
    widths = Counter(store.nodes[i].coord.m for i in members)
    return Cone(apex, store.nodes[apex].label, tuple(threads), dict(sorted(widths.items())))


def find_thread(
    store: Store,
    from_label: str,
    to_label: str,
    domain: str | None = None,
    max_depth: int = DEFAULT_MAX_DEPTH,
    record: bool = True,
) -> Thread | None:
    """First thread from ``from_label`` that reaches a node labelled ``to_label``.

    Without ``domain`` every domain holding ``from_label`` is tried in
    ascending ``l``. The returned thread is cut at the matching node.
    """
    starts = store.resolve_label(from_label, domain)
    if not starts:
        where = f" in domain {domain!r}" if domain is not None else ""
        raise UnknownNode(f"no node labelled {from_label!r}{where}")
    for start in starts:
        for thread in expand_threads(store, start, max_depth, record=False):
            for i in range(1, len(thread.nodes)):
                if store.nodes[thread.nodes[i]].label == to_label:
                    hit = Thread(thread.nodes[: i + 1], thread.links[:i])
                    if record:
                        record_usage(store, [hit])
                    return hit
    return None


def dataset_projection(coord: Coordinate) -> tuple[int, int]:
    """Drop the domain axis: ``(l, m, n) -> (m, n)``."""
    return (coord.m, coord.n)


def cone_metrics(cone: Cone) -> ConeRow:
    return ConeRow(cone.apex_label, cone.height, tuple(sorted(cone.level_widths.items())))
