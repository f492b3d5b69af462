"""Link usage tracking, fading of rarely used links and their recreation.

Faded links stay in the store with their descriptor intact; they are only
invisible to traversal until recreated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import FadedLink, NotFaded
from .model import Link, LinkId, LinkState
from .store import Store


@dataclass(frozen=True)
class FadePolicy:
    window: int
    min_usage: int

    def __post_init__(self) -> None:
        if self.window < 1 or self.min_usage < 1:
            raise ValueError("window and min_usage must both be >= 1")


@dataclass(frozen=True)
class FadeReport:
    now: int
    faded: list[LinkId] = field(default_factory=list)


def touch_link(store: Store, link_id: LinkId, now: int) -> None:
    link = store.link(link_id)
    if not link.active:
        raise FadedLink(f"link {link_id} is faded")
    link.usage += 1
    link.last_used = now
    store.tick = max(store.tick, now)


def fade_tick(store: Store, policy: FadePolicy, now: int) -> FadeReport:
    """Fade every active link used fewer than ``min_usage`` times and idle for
    at least ``window`` ticks."""
    faded = []
    for link in store.links.values():
        if (
            link.active
            and link.usage < policy.min_usage
            and now - link.last_used >= policy.window
        ):
            store.set_state(link.id, LinkState.FADED)
            faded.append(link.id)
    return FadeReport(now, faded)


def recreate_link(store: Store, link_id: LinkId) -> Link:
    link = store.link(link_id)
    if link.active:
        raise NotFaded(f"link {link_id} is active")
    store.set_state(link_id, LinkState.ACTIVE)
    link.usage = 0
    return link
