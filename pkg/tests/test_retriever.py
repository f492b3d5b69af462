import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load_corpus
from informledge import (
    Store,
    Thread,
    build_cone,
    cone_metrics,
    dataset_projection,
    embed_statement,
    expand_threads,
    find_thread,
    parse_statement,
    snapshot,
)
from informledge.errors import UnknownNode
from informledge.model import Coordinate, Inclusivity, LinkDescriptor, LinkState
from oracles import brute_force_threads, random_store


def _id(store, label, domain=None):
    (hit,) = store.resolve_label(label, domain)
    return hit


def test_isolated_node_single_thread():
    store = Store()
    store.add_domain("d")
    x = store.add_node("x", Coordinate(1, 1, 0))
    assert expand_threads(store, x) == [Thread((x,))]
    cone = build_cone(store, x)
    assert cone.height == 0
    assert cone_metrics(cone).height == 0


def test_african_lion_thread(lion_store):
    africa = _id(lion_store, "Africa")
    threads = expand_threads(lion_store, africa)
    assert [t.labels(lion_store) for t in threads] == [("Africa", "lion", "strong")]


def test_subtractive_link_ends_thread(table):
    # strong links onwards, but the thread still stops at strong
    store, _ = load_corpus("african_lion.ils")
    embed_statement(store, parse_statement("strong IS_A quality", "geo"), table)
    threads = expand_threads(store, _id(store, "Africa"))
    assert [t.labels(store) for t in threads] == [("Africa", "lion", "strong")]
    onward = expand_threads(store, _id(store, "strong"))
    assert [t.labels(store) for t in onward] == [("strong", "quality")]


def test_find_thread(lion_store):
    thread = find_thread(lion_store, "Africa", "strong")
    assert thread.render(lion_store) == "Africa -> lion -> strong"
    assert find_thread(lion_store, "Africa", "lion").render(lion_store) == "Africa -> lion"
    assert find_thread(lion_store, "Africa", "penguin") is None
    with pytest.raises(UnknownNode):
        find_thread(lion_store, "Europe", "strong")


def test_find_thread_homonyms_scans_all_domains():
    store, _ = load_corpus("homonym.ils")
    assert len(store.resolve_label("apple")) == 2
    thread = find_thread(store, "apple", "fruit")
    assert thread.render(store) == "apple -> fruit"
    assert store.nodes[thread.nodes[0]].coord.l == store.domain_l("food")
    tech = find_thread(store, "apple", "company")
    assert tech.render(store) == "apple -> Apple Inc -> company"
    assert find_thread(store, "apple", "fruit", domain="tech") is None


def test_star_cone_height_counts_property_links():
    store, _ = load_corpus("degree.ils")
    for label, k in [("lion", 3), ("cat", 2), ("dog", 1), ("strong", 0)]:
        assert build_cone(store, _id(store, label)).height == k


def test_cone_level_widths(lion_store):
    row = cone_metrics(build_cone(lion_store, _id(lion_store, "Africa")))
    assert row.apex == "Africa"
    assert row.height == 1
    assert row.levels == ((1, 1), (2, 1), (3, 1))


def test_cone_metrics_batch_consistent():
    store, _ = load_corpus("degree.ils")
    apexes = ["lion", "cat", "dog", "strong", "fast"]
    rows = [cone_metrics(build_cone(store, _id(store, a), record=False)) for a in apexes]
    assert len(rows) == len(apexes)
    for apex, row in zip(apexes, rows):
        assert row.height == build_cone(store, _id(store, apex), record=False).height


@pytest.mark.parametrize(
    "coord, expected",
    [((7, 3, 5), (3, 5)), ((1, 0, 0), (0, 0)), ((2, 4, 9), (4, 9))],
)
def test_dataset_projection(coord, expected):
    assert dataset_projection(Coordinate(*coord)) == expected


def test_unknown_start():
    with pytest.raises(UnknownNode):
        expand_threads(Store(), 5)


def test_children_in_coordinate_order():
    store, _ = load_corpus("degree.ils")
    threads = expand_threads(store, _id(store, "lion"), record=False)
    coords = [store.nodes[t.nodes[-1]].coord for t in threads]
    assert coords == sorted(coords)


def test_usage_is_recorded_once_per_batch(lion_store):
    africa = _id(lion_store, "Africa")
    expand_threads(lion_store, africa)
    assert lion_store.tick == 1
    assert {lk.usage for lk in lion_store.links.values()} == {1}
    assert {lk.last_used for lk in lion_store.links.values()} == {1}
    assert lion_store.nodes[africa].usage == 1


def test_max_depth_cuts_threads(lion_store):
    threads = expand_threads(lion_store, _id(lion_store, "Africa"), max_depth=1)
    assert [t.labels(lion_store) for t in threads] == [("Africa", "lion")]


# -- properties against the brute-force oracle ----------------------------------


def _as_set(threads):
    return {(t.nodes, t.links) for t in threads}


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False), st.integers(1, 6))
def test_oracle_equivalence(rng: random.Random, max_depth):
    store = random_store(rng)
    for start in store.nodes:
        got = expand_threads(store, start, max_depth, record=False)
        assert len(got) == len(_as_set(got))
        assert _as_set(got) == brute_force_threads(store, start, max_depth)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_threads_never_repeat_or_cross_dead_links(rng: random.Random):
    store = random_store(rng)
    for start in store.nodes:
        for t in expand_threads(store, start, record=False):
            assert len(set(t.nodes)) == len(t.nodes)
            for a, b, link_id in zip(t.nodes, t.nodes[1:], t.links):
                link = store.links[link_id]
                assert link.descriptor.directional == (a, b)
                assert link.state is LinkState.ACTIVE
                assert link.descriptor.inclusivity is Inclusivity.INCLUSIVE


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_retrieval_only_touches_usage(rng: random.Random):
    store = random_store(rng)
    before = snapshot(store)
    for start in list(store.nodes):
        expand_threads(store, start)

    def strip(snap):
        # drop usage / last_used columns, keep everything structural
        out = []
        section = None
        for line in snap.splitlines():
            if line.startswith("["):
                section = line
            fields = line.split("\t")
            if section == "[nodes]" and len(fields) == 6:
                fields = fields[:5]
            elif section == "[links]" and len(fields) == 10:
                fields = fields[:7] + fields[9:]
            out.append("\t".join(fields))
        return out

    assert strip(snapshot(store)) == strip(before)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_retrieval_is_deterministic(rng: random.Random):
    store = random_store(rng)
    twin = store.copy()
    for start in store.nodes:
        a = expand_threads(store, start)
        b = expand_threads(twin, start)
        assert a == b
    assert snapshot(store) == snapshot(twin)


def _mark_exclusive(store: Store, link_id: int) -> Store:
    copy = store.copy()
    link = copy.links[link_id]
    d = link.descriptor
    link.descriptor = LinkDescriptor(
        d.source, d.destination, Inclusivity.EXCLUSIVE, d.additivity, d.integrativity, d.relation
    )
    return copy


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_exclusive_link_removes_exactly_its_threads(rng: random.Random):
    store = random_store(rng, faded=False)
    for start in store.nodes:
        before = expand_threads(store, start, record=False)
        crossed = sorted({i for t in before for i in t.links})
        if not crossed:
            continue
        victim = rng.choice(crossed)
        after = expand_threads(_mark_exclusive(store, victim), start, record=False)
        kept = [t for t in before if victim not in t.links]
        removed = [t for t in before if victim in t.links]
        assert all(victim not in t.links for t in after)
        assert set(kept) <= set(after)
        # anything new is a cut-short prefix of a removed thread, stopping at the victim's source
        src = store.links[victim].source
        for t in set(after) - set(kept):
            assert t.nodes[-1] == src
            assert any(r.nodes[: len(t.nodes)] == t.nodes for r in removed)
