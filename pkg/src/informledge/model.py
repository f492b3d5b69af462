"""Domain types: nodes, coordinates, strands and multi-strand links."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, NamedTuple

from .errors import DuplicateAxis, MissingAxis, SelfLink

KnnId = int
LinkId = int


class Coordinate(NamedTuple):
    """Position of a node: domain ``l``, level ``m``, index ``n`` within the level."""

    l: int
    m: int
    n: int

    @property
    def is_apex(self) -> bool:
        return self.m == 0 and self.n == 0

    def __str__(self) -> str:
        return f"({self.l},{self.m},{self.n})"


class Axis(Enum):
    DIRECTIONAL = "directional"
    INCLUSIVITY = "inclusivity"
    ADDITIVITY = "additivity"
    INTEGRATIVITY = "integrativity"


# canonical strand order inside a descriptor
AXIS_ORDER = (Axis.DIRECTIONAL, Axis.INCLUSIVITY, Axis.ADDITIVITY, Axis.INTEGRATIVITY)


class Inclusivity(Enum):
    INCLUSIVE = "inclusive"
    EXCLUSIVE = "exclusive"


class Additivity(Enum):
    ADDITIVE = "additive"
    SUBTRACTIVE = "subtractive"


class Integrativity(Enum):
    INTEGRATIVE = "integrative"
    DIFFERENTIATIVE = "differentiative"


class LinkState(Enum):
    ACTIVE = "active"
    FADED = "faded"


_AXIS_OF_ENUM = {
    Inclusivity: Axis.INCLUSIVITY,
    Additivity: Axis.ADDITIVITY,
    Integrativity: Axis.INTEGRATIVITY,
}


@dataclass(frozen=True)
class Strand:
    """One property channel of a link.

    Directional strands carry a ``(source, destination)`` pair; the
    performance strands carry one member of their dichotomy.
    """

    axis: Axis
    value: tuple[KnnId, KnnId] | Inclusivity | Additivity | Integrativity

    @classmethod
    def directional(cls, source: KnnId, destination: KnnId) -> Strand:
        return cls(Axis.DIRECTIONAL, (source, destination))

    @classmethod
    def of(cls, value: Inclusivity | Additivity | Integrativity) -> Strand:
        return cls(_AXIS_OF_ENUM[type(value)], value)


@dataclass
class Knn:
    id: KnnId
    label: str
    coord: Coordinate
    usage: int = 0

    def __post_init__(self) -> None:
        if not self.label.strip():
            raise ValueError("node label must not be blank")


@dataclass(frozen=True)
class LinkDescriptor:
    source: KnnId
    destination: KnnId
    inclusivity: Inclusivity
    additivity: Additivity
    integrativity: Integrativity
    relation: str

    @property
    def directional(self) -> tuple[KnnId, KnnId]:
        return (self.source, self.destination)

    @property
    def triple(self) -> tuple[KnnId, KnnId, str]:
        return (self.source, self.destination, self.relation)

    def strands(self) -> tuple[Strand, ...]:
        """The four strands in canonical axis order."""
        return (
            Strand.directional(self.source, self.destination),
            Strand.of(self.inclusivity),
            Strand.of(self.additivity),
            Strand.of(self.integrativity),
        )


@dataclass
class Link:
    """A stored link: descriptor plus usage bookkeeping and lifecycle state."""

    id: LinkId
    descriptor: LinkDescriptor
    usage: int = 0
    last_used: int = 0
    state: LinkState = LinkState.ACTIVE

    @property
    def active(self) -> bool:
        return self.state is LinkState.ACTIVE

    @property
    def source(self) -> KnnId:
        return self.descriptor.source

    @property
    def destination(self) -> KnnId:
        return self.descriptor.destination


@dataclass(frozen=True)
class Statement:
    """A parsed assertion: ``units[0] relations[0] units[1] ...``."""

    domain: str
    units: tuple[str, ...]
    relations: tuple[str, ...]
    line: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if len(self.units) < 2 or len(self.relations) != len(self.units) - 1:
            raise ValueError("statement needs n >= 2 units and n - 1 relations")

    def hops(self) -> list[tuple[str, str, str]]:
        """``(unit, relation, next_unit)`` triples in statement order."""
        return [
            (self.units[i], rel, self.units[i + 1])
            for i, rel in enumerate(self.relations)
        ]


def integrativity_of(src: Coordinate, dst: Coordinate) -> Integrativity:
    """Cross-domain links are integrative, same-domain links differentiative."""
    if src.l != dst.l:
        return Integrativity.INTEGRATIVE
    return Integrativity.DIFFERENTIATIVE


def compose_link(strands: Iterable[Strand], relation: str) -> LinkDescriptor:
    """Fold a strand bundle into a canonical :class:`LinkDescriptor`.

    Input order is irrelevant. Exactly one strand per axis is required.
    """
    by_axis: dict[Axis, Strand] = {}
    for strand in strands:
        if strand.axis in by_axis and by_axis[strand.axis] != strand:
            raise DuplicateAxis(f"more than one {strand.axis.value} strand")
        by_axis[strand.axis] = strand
    missing = [a.value for a in AXIS_ORDER if a not in by_axis]
    if missing:
        raise MissingAxis(f"missing strand axis: {', '.join(missing)}")

    source, destination = by_axis[Axis.DIRECTIONAL].value  # type: ignore[misc]
    if source == destination:
        raise SelfLink(f"link from node {source} to itself")
    return LinkDescriptor(
        source=source,
        destination=destination,
        inclusivity=by_axis[Axis.INCLUSIVITY].value,  # type: ignore[arg-type]
        additivity=by_axis[Axis.ADDITIVITY].value,  # type: ignore[arg-type]
        integrativity=by_axis[Axis.INTEGRATIVITY].value,  # type: ignore[arg-type]
        relation=relation,
    )
