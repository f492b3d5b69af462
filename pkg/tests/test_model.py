import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from informledge.errors import DuplicateAxis, MissingAxis, SelfLink
from informledge.model import (
    Additivity,
    Coordinate,
    Inclusivity,
    Integrativity,
    LinkDescriptor,
    Strand,
    compose_link,
    integrativity_of,
)

STRANDS = [
    Strand.directional(1, 2),
    Strand.of(Inclusivity.INCLUSIVE),
    Strand.of(Additivity.ADDITIVE),
    Strand.of(Integrativity.DIFFERENTIATIVE),
]


def test_compose_link_canonical_assembly():
    d = compose_link(STRANDS, "IS_A")
    assert d == LinkDescriptor(
        1, 2, Inclusivity.INCLUSIVE, Additivity.ADDITIVE, Integrativity.DIFFERENTIATIVE, "IS_A"
    )
    assert d.strands() == tuple(STRANDS)


def test_compose_link_order_independent():
    forward = compose_link(STRANDS, "IS_A")
    for perm in itertools.permutations(STRANDS):
        assert repr(compose_link(perm, "IS_A")) == repr(forward)


def test_compose_link_self_link():
    with pytest.raises(SelfLink):
        compose_link([Strand.directional(3, 3)] + STRANDS[1:], "IS_A")


def test_compose_link_missing_axis():
    with pytest.raises(MissingAxis, match="additivity"):
        compose_link([STRANDS[0], STRANDS[1], STRANDS[3]], "IS_A")


def test_compose_link_duplicate_axis():
    with pytest.raises(DuplicateAxis):
        compose_link(STRANDS + [Strand.of(Inclusivity.EXCLUSIVE)], "IS_A")


@pytest.mark.parametrize(
    "src, dst, expected",
    [
        ((1, 2, 0), (1, 3, 1), Integrativity.DIFFERENTIATIVE),
        ((1, 2, 0), (4, 1, 0), Integrativity.INTEGRATIVE),
        ((7, 3, 5), (7, 0, 0), Integrativity.DIFFERENTIATIVE),
    ],
)
def test_integrativity_of(src, dst, expected):
    assert integrativity_of(Coordinate(*src), Coordinate(*dst)) is expected


def test_apex_coordinate():
    assert Coordinate(1, 0, 0).is_apex
    assert not Coordinate(1, 0, 1).is_apex


coords = st.builds(Coordinate, st.integers(1, 5), st.integers(0, 5), st.integers(0, 5))


@given(
    st.permutations(range(4)),
    st.sampled_from(list(Inclusivity)),
    st.sampled_from(list(Additivity)),
    coords,
    coords,
)
def test_compose_link_is_pure(order, inc, add, c1, c2):
    strands = [
        Strand.directional(0, 1),
        Strand.of(inc),
        Strand.of(add),
        Strand.of(integrativity_of(c1, c2)),
    ]
    shuffled = [strands[i] for i in order]
    assert compose_link(shuffled, "R") == compose_link(set(strands), "R")
