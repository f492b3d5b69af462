"""Node and link tables, ILSSNAP persistence and system statistics."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .errors import (
    BadHeader,
    CorruptRecord,
    InvariantViolation,
    SelfLink,
    UnknownLink,
    UnknownNode,
)
from .model import (
    Additivity,
    Coordinate,
    Inclusivity,
    Integrativity,
    Knn,
    KnnId,
    Link,
    LinkDescriptor,
    LinkId,
    LinkState,
    integrativity_of,
)
from .parser import RELATION_RE

HEADER = "ILSSNAP 1"
SECTIONS = ("[nodes]", "[links]", "[domains]")


class Store:
    """In-memory knowledge network.

    Single writer. Nodes are never deleted, so ids are dense and never reused.
    ``tick`` is the lifecycle clock; it always equals the largest
    ``last_used`` of any link (0 for a fresh store), which lets snapshots stay
    free of extra metadata.
    """

    def __init__(self) -> None:
        self.nodes: dict[KnnId, Knn] = {}
        self.links: dict[LinkId, Link] = {}
        self.domains: dict[str, KnnId] = {}
        self.tick = 0
        self._next_node = 0
        self._next_link = 0
        self._by_label: dict[tuple[str, int], KnnId] = {}
        self._by_coord: dict[Coordinate, KnnId] = {}
        self._used_n: dict[tuple[int, int], set[int]] = defaultdict(set)
        self._out: dict[KnnId, list[LinkId]] = defaultdict(list)
        self._active: dict[tuple[KnnId, KnnId, str], LinkId] = {}
        self._domain_of_l: dict[int, str] = {}

    # -- lookup -----------------------------------------------------------

    def node(self, knn_id: KnnId) -> Knn:
        try:
            return self.nodes[knn_id]
        except KeyError:
            raise UnknownNode(f"no node with id {knn_id}") from None

    def link(self, link_id: LinkId) -> Link:
        try:
            return self.links[link_id]
        except KeyError:
            raise UnknownLink(f"no link with id {link_id}") from None

    def find(self, label: str, l: int) -> KnnId | None:
        return self._by_label.get((label, l))

    def at(self, coord: Coordinate) -> KnnId | None:
        return self._by_coord.get(coord)

    def domain_l(self, name: str) -> int | None:
        apex = self.domains.get(name)
        return None if apex is None else self.nodes[apex].coord.l

    def domain_name(self, l: int) -> str:
        return self._domain_of_l[l]

    def domains_by_l(self) -> list[tuple[str, int]]:
        return sorted(
            ((name, self.nodes[apex].coord.l) for name, apex in self.domains.items()),
            key=lambda item: item[1],
        )

    def resolve_label(self, label: str, domain: str | None = None) -> list[KnnId]:
        """Nodes carrying ``label``, in ascending domain order."""
        if domain is not None:
            l = self.domain_l(domain)
            hit = None if l is None else self.find(label, l)
            return [] if hit is None else [hit]
        return [
            self._by_label[(label, l)]
            for _, l in self.domains_by_l()
            if (label, l) in self._by_label
        ]

    def outgoing(self, src: KnnId) -> list[Link]:
        """All links stored in ``src``'s link database, in id order."""
        return [self.links[i] for i in self._out.get(src, ())]

    def active_link(self, src: KnnId, dst: KnnId, relation: str) -> Link | None:
        link_id = self._active.get((src, dst, relation))
        return None if link_id is None else self.links[link_id]

    def free_index(self, l: int, m: int) -> int:
        used = self._used_n.get((l, m), ())
        n = 0
        while n in used:
            n += 1
        return n

    # -- mutation ---------------------------------------------------------

    def add_domain(self, name: str) -> KnnId:
        """Create a domain and its apex node at ``(next_l, 0, 0)``."""
        if name in self.domains:
            return self.domains[name]
        next_l = max(self._domain_of_l, default=0) + 1
        apex = self._insert_node(self._next_node, name, Coordinate(next_l, 0, 0))
        self.domains[name] = apex.id
        self._domain_of_l[next_l] = name
        return apex.id

    def add_node(self, label: str, coord: Coordinate) -> KnnId:
        if coord.l not in self._domain_of_l:
            raise InvariantViolation(f"no domain with l={coord.l}")
        if coord.m < 1:
            raise InvariantViolation("level 0 is reserved for the domain apex")
        return self._insert_node(self._next_node, label, coord).id

    def add_link(self, descriptor: LinkDescriptor) -> Link:
        src = self.node(descriptor.source)
        dst = self.node(descriptor.destination)
        if src.id == dst.id:
            raise SelfLink(f"link from node {src.id} to itself")
        if descriptor.integrativity is not integrativity_of(src.coord, dst.coord):
            raise InvariantViolation(
                f"integrativity {descriptor.integrativity.value} does not match "
                f"endpoints {src.coord} -> {dst.coord}"
            )
        if descriptor.triple in self._active:
            raise InvariantViolation(f"active link {descriptor.triple} already exists")
        link = Link(self._next_link, descriptor, last_used=self.tick)
        self._insert_link(link)
        return link

    def set_state(self, link_id: LinkId, state: LinkState) -> None:
        link = self.link(link_id)
        triple = link.descriptor.triple
        if state is LinkState.ACTIVE and link.state is LinkState.FADED:
            if triple in self._active:
                raise InvariantViolation(f"active link {triple} already exists")
            self._active[triple] = link_id
        elif state is LinkState.FADED and link.state is LinkState.ACTIVE:
            del self._active[triple]
        link.state = state

    def _insert_node(self, knn_id: KnnId, label: str, coord: Coordinate) -> Knn:
        if "\t" in label or "\n" in label or "\r" in label:
            raise InvariantViolation(f"label {label!r} contains a tab or newline")
        if not label.strip():
            raise InvariantViolation("blank node label")
        if knn_id in self.nodes:
            raise InvariantViolation(f"duplicate node id {knn_id}")
        if coord in self._by_coord:
            raise InvariantViolation(f"coordinate {coord} already taken")
        if (label, coord.l) in self._by_label:
            raise InvariantViolation(f"label {label!r} already present in domain l={coord.l}")
        knn = Knn(knn_id, label, coord)
        self.nodes[knn_id] = knn
        self._by_label[(label, coord.l)] = knn_id
        self._by_coord[coord] = knn_id
        self._used_n[(coord.l, coord.m)].add(coord.n)
        self._next_node = max(self._next_node, knn_id + 1)
        return knn

    def _insert_link(self, link: Link) -> None:
        if link.id in self.links:
            raise InvariantViolation(f"duplicate link id {link.id}")
        self.links[link.id] = link
        self._out[link.source].append(link.id)
        if link.active:
            self._active[link.descriptor.triple] = link.id
        self._next_link = max(self._next_link, link.id + 1)

    # -- integrity --------------------------------------------------------

    def check_invariants(self) -> None:
        """Full scan of every store invariant; raises InvariantViolation."""
        seen_coords: set[Coordinate] = set()
        seen_labels: set[tuple[str, int]] = set()
        for knn in self.nodes.values():
            if knn.coord in seen_coords:
                raise InvariantViolation(f"coordinate {knn.coord} used twice")
            if (knn.label, knn.coord.l) in seen_labels:
                raise InvariantViolation(f"label {knn.label!r} twice in l={knn.coord.l}")
            seen_coords.add(knn.coord)
            seen_labels.add((knn.label, knn.coord.l))
            if knn.coord.l not in self._domain_of_l:
                raise InvariantViolation(f"node {knn.id} in unknown domain l={knn.coord.l}")
            if knn.coord.m == 0 and self.domains[self._domain_of_l[knn.coord.l]] != knn.id:
                raise InvariantViolation(f"node {knn.id} sits on level 0 but is not an apex")
        apex_ls: set[int] = set()
        for name, apex_id in self.domains.items():
            if apex_id not in self.nodes:
                raise InvariantViolation(f"domain {name!r} apex {apex_id} missing")
            apex = self.nodes[apex_id]
            if not apex.coord.is_apex:
                raise InvariantViolation(f"domain {name!r} apex at {apex.coord}")
            if apex.label != name:
                raise InvariantViolation(f"domain {name!r} apex labelled {apex.label!r}")
            if apex.coord.l in apex_ls:
                raise InvariantViolation(f"two domains share l={apex.coord.l}")
            apex_ls.add(apex.coord.l)
        active: set[tuple[KnnId, KnnId, str]] = set()
        for link in self.links.values():
            d = link.descriptor
            if d.source not in self.nodes or d.destination not in self.nodes:
                raise InvariantViolation(f"link {link.id} has a dangling endpoint")
            if d.source == d.destination:
                raise InvariantViolation(f"link {link.id} is a self link")
            expected = integrativity_of(self.nodes[d.source].coord, self.nodes[d.destination].coord)
            if d.integrativity is not expected:
                raise InvariantViolation(f"link {link.id} integrativity should be {expected.value}")
            if link.active:
                if d.triple in active:
                    raise InvariantViolation(f"duplicate active link {d.triple}")
                active.add(d.triple)
            if link.last_used > self.tick:
                raise InvariantViolation(f"link {link.id} used in the future")

    def copy(self) -> Store:
        return restore(snapshot(self))


@dataclass(frozen=True)
class SystemStats:
    """Domain partition of the network (``K_ILS`` as a collection of ``K_d``)."""

    domain_nodes: dict[str, int] = field(default_factory=dict)
    active_links: int = 0
    faded_links: int = 0

    @property
    def domain_count(self) -> int:
        return len(self.domain_nodes)

    @property
    def total_nodes(self) -> int:
        return sum(self.domain_nodes.values())

    @property
    def total_links(self) -> int:
        return self.active_links + self.faded_links

    @property
    def knowledge(self) -> list[tuple[str, int]]:
        return list(self.domain_nodes.items())


def system_stats(store: Store) -> SystemStats:
    per_l: dict[int, int] = defaultdict(int)
    for knn in store.nodes.values():
        per_l[knn.coord.l] += 1
    counts = {name: per_l[l] for name, l in store.domains_by_l()}
    faded = sum(1 for link in store.links.values() if not link.active)
    return SystemStats(counts, len(store.links) - faded, faded)


# -- ILSSNAP ---------------------------------------------------------------


def snapshot(store: Store) -> str:
    lines = [HEADER, "[nodes]"]
    for knn_id in sorted(store.nodes):
        k = store.nodes[knn_id]
        lines.append(f"{k.id}\t{k.label}\t{k.coord.l}\t{k.coord.m}\t{k.coord.n}\t{k.usage}")
    lines.append("[links]")
    for link_id in sorted(store.links):
        link = store.links[link_id]
        d = link.descriptor
        lines.append(
            "\t".join(
                str(v)
                for v in (
                    link.id,
                    d.source,
                    d.destination,
                    d.relation,
                    d.inclusivity.value,
                    d.additivity.value,
                    d.integrativity.value,
                    link.usage,
                    link.last_used,
                    link.state.value,
                )
            )
        )
    lines.append("[domains]")
    for name, apex in sorted(store.domains.items(), key=lambda kv: kv[1]):
        lines.append(f"{name}\t{apex}")
    return "\n".join(lines) + "\n"


def _nat(text: str, lineno: int, what: str) -> int:
    if not text.isdigit():
        raise CorruptRecord(lineno, f"{what} must be a non-negative integer, got {text!r}")
    return int(text)


def _enum(cls, text: str, lineno: int):
    try:
        return cls(text)
    except ValueError:
        raise CorruptRecord(lineno, f"bad {cls.__name__.lower()} value {text!r}") from None


def restore(text: str) -> Store:
    """Rebuild a store from ILSSNAP text, rejecting anything inconsistent."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0].rstrip("\r") != HEADER:
        raise BadHeader(f"expected {HEADER!r} on line 1")

    node_rows: list[tuple[int, list[str]]] = []
    link_rows: list[tuple[int, list[str]]] = []
    domain_rows: list[tuple[int, list[str]]] = []
    buckets = dict(zip(SECTIONS, (node_rows, link_rows, domain_rows)))
    expected = list(SECTIONS)
    current: list[tuple[int, list[str]]] | None = None
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.rstrip("\r")
        if line.startswith("[") and "\t" not in line:
            if not expected or line != expected[0]:
                raise CorruptRecord(lineno, f"unexpected section header {line!r}")
            expected.pop(0)
            current = buckets[line]
            continue
        if current is None:
            raise CorruptRecord(lineno, "record outside any section")
        current.append((lineno, line.split("\t")))
    if expected:
        raise CorruptRecord(len(lines), f"missing section {expected[0]}")

    store = Store()
    for lineno, fields in domain_rows:
        if len(fields) != 2 or not fields[0].strip():
            raise CorruptRecord(lineno, "domain row needs name and apex id")
        _nat(fields[1], lineno, "apex id")

    nodes = []
    for lineno, fields in node_rows:
        if len(fields) != 6:
            raise CorruptRecord(lineno, f"node row has {len(fields)} fields, expected 6")
        knn_id, l, m, n, usage = (
            _nat(fields[i], lineno, name)
            for i, name in ((0, "id"), (2, "l"), (3, "m"), (4, "n"), (5, "usage"))
        )
        label = fields[1]
        if not label.strip():
            raise CorruptRecord(lineno, "blank label")
        if l < 1:
            raise CorruptRecord(lineno, "domain index l must be positive")
        nodes.append((knn_id, label, Coordinate(l, m, n), usage))

    for knn_id, label, coord, usage in sorted(nodes):
        store._insert_node(knn_id, label, coord).usage = usage

    for lineno, fields in domain_rows:
        name, apex_id = fields[0], int(fields[1])
        if name in store.domains:
            raise InvariantViolation(f"domain {name!r} listed twice")
        if apex_id not in store.nodes:
            raise InvariantViolation(f"domain {name!r} apex {apex_id} missing")
        store.domains[name] = apex_id
        l = store.nodes[apex_id].coord.l
        if l in store._domain_of_l:
            raise InvariantViolation(f"two domains share l={l}")
        store._domain_of_l[l] = name

    links = []
    for lineno, fields in link_rows:
        if len(fields) != 10:
            raise CorruptRecord(lineno, f"link row has {len(fields)} fields, expected 10")
        link_id = _nat(fields[0], lineno, "id")
        src = _nat(fields[1], lineno, "source")
        dst = _nat(fields[2], lineno, "destination")
        relation = fields[3]
        if not RELATION_RE.match(relation):
            raise CorruptRecord(lineno, f"bad relation name {relation!r}")
        descriptor = LinkDescriptor(
            src,
            dst,
            _enum(Inclusivity, fields[4], lineno),
            _enum(Additivity, fields[5], lineno),
            _enum(Integrativity, fields[6], lineno),
            relation,
        )
        links.append(
            Link(
                link_id,
                descriptor,
                usage=_nat(fields[7], lineno, "usage"),
                last_used=_nat(fields[8], lineno, "last_used"),
                state=_enum(LinkState, fields[9], lineno),
            )
        )
    for link in sorted(links, key=lambda lk: lk.id):
        store._insert_link(link)
    store.tick = max((lk.last_used for lk in store.links.values()), default=0)

    store.check_invariants()
    return store
