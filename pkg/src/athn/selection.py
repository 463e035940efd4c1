"""Choosing, per order, between a direct round trip and routing through the hubs."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping

from .model import Config, Network, Order


class Mode(str, Enum):
    DIRECT = "direct"
    ATHN = "athn"


@dataclass(frozen=True)
class ModeDecision:
    order_id: str
    mode: Mode
    direct_cost: Fraction
    athn_cost: Fraction


@dataclass(frozen=True)
class SelectionSummary:
    athn_count: int
    direct_count: int
    athn_cost: Fraction
    direct_cost: Fraction
    baseline_cost: Fraction

    @property
    def athn_share(self) -> float:
        total = self.athn_count + self.direct_count
        return self.athn_count / total if total else 0.0


def select_mode(order: Order, network: Network, hub_of: Mapping[int, int],
                config: Config) -> ModeDecision:
    """Compare a direct trip (with its empty return) against the hub route.

    The hub route pays the first and last mile at full rate and the hub to
    hub leg at the autonomous discount, with no empty return. Ties and
    orders whose endpoints share a hub stay direct.
    """
    o, d = order.origin, order.destination
    h1, h2 = hub_of[o], hub_of[d]
    direct = Fraction(network.cost(o, d) + network.cost(d, o))
    athn = (network.cost(o, h1) + (1 - config.alpha) * network.cost(h1, h2)
            + network.cost(h2, d))
    athn = Fraction(athn)
    mode = Mode.ATHN if h1 != h2 and athn < direct else Mode.DIRECT
    return ModeDecision(order.id, mode, direct, athn)


def select_all(orders: Iterable[Order], network: Network, hub_of: Mapping[int, int],
               config: Config) -> tuple[list[Order], list[Order], SelectionSummary]:
    """Partition orders into hub-routed and direct; decisions are ordered by order id."""
    athn, direct = [], []
    athn_cost = direct_cost = baseline = Fraction(0)
    for order in sorted(orders, key=lambda o: o.id):
        dec = select_mode(order, network, hub_of, config)
        baseline += dec.direct_cost
        if dec.mode is Mode.ATHN:
            athn.append(order)
            athn_cost += dec.athn_cost
        else:
            direct.append(order)
            direct_cost += dec.direct_cost
    return athn, direct, SelectionSummary(len(athn), len(direct), athn_cost, direct_cost, baseline)
