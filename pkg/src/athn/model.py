"""
Domain types for scheduling freight on an autonomous transfer hub network,
together with order-to-task generation and the decomposition into
independently solvable subproblems.

Locations are identified by their integer index into the network matrices.
Times are integer minutes from the start of the horizon, costs are integer
milli-dollars and distances integer miles.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import ConfigError, NoTrucksError, SameHubError

WEEK_MINUTES = 7 * 24 * 60


class LocationKind(str, Enum):
    HUB = "hub"
    CUSTOMER = "customer"


class Leg(str, Enum):
    FIRST_MILE = "F"
    AUTONOMOUS = "A"
    LAST_MILE = "L"
    DIRECT = "D"


class SubproblemKind(str, Enum):
    AUTONOMOUS = "autonomous"
    HUB_LOCAL = "hub"


class TruckClass(str, Enum):
    AUTONOMOUS = "autonomous"
    REGULAR = "regular"


@dataclass(frozen=True)
class Location:
    id: int
    kind: LocationKind
    label: str = ""
    x: float = 0.0
    y: float = 0.0


def _frozen_matrix(values, n: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.int64)
    if arr.shape != (n, n):
        raise ConfigError(f"{name} must be {n}x{n}, got {arr.shape}")
    if (arr < 0).any():
        raise ConfigError(f"{name} has negative entries")
    if np.diag(arr).any():
        raise ConfigError(f"{name} must have a zero diagonal")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Network:
    """Locations plus complete travel time / cost (and optional mileage) matrices.

    ``travel_cost`` is the per-arc cost for a human-driven truck; autonomous
    discounts are applied where costs are compared or reported, never here.
    """

    locations: tuple[Location, ...]
    travel_time: np.ndarray
    travel_cost: np.ndarray
    distance: np.ndarray | None = None

    def __post_init__(self):
        locs = tuple(self.locations)
        object.__setattr__(self, "locations", locs)
        n = len(locs)
        if [loc.id for loc in locs] != list(range(n)):
            raise ConfigError("location ids must be 0..n-1 in order")
        object.__setattr__(self, "travel_time", _frozen_matrix(self.travel_time, n, "travel_time"))
        object.__setattr__(self, "travel_cost", _frozen_matrix(self.travel_cost, n, "travel_cost"))
        if self.distance is not None:
            object.__setattr__(self, "distance", _frozen_matrix(self.distance, n, "distance"))

    @property
    def size(self) -> int:
        return len(self.locations)

    @property
    def hubs(self) -> list[int]:
        return [loc.id for loc in self.locations if loc.kind is LocationKind.HUB]

    @property
    def customers(self) -> list[int]:
        return [loc.id for loc in self.locations if loc.kind is LocationKind.CUSTOMER]

    def travel_minutes(self, i: int, j: int) -> int:
        return int(self.travel_time[i, j])

    def cost(self, i: int, j: int) -> int:
        return int(self.travel_cost[i, j])

    def miles(self, i: int, j: int, cost_per_mile: int) -> Fraction:
        """Distance in miles; falls back to cost / rate when no mileage matrix is present."""
        if self.distance is not None:
            return Fraction(int(self.distance[i, j]))
        return Fraction(int(self.travel_cost[i, j]), cost_per_mile)

    def scaled(self, k: int) -> "Network":
        """Copy with every travel cost multiplied by ``k``."""
        return Network(self.locations, self.travel_time, self.travel_cost * k, self.distance)


@dataclass(frozen=True)
class Order:
    id: str
    origin: int
    destination: int
    pickup_time: int

    def __post_init__(self):
        if self.origin == self.destination:
            raise ConfigError(f"order {self.id}: origin equals destination")
        if self.pickup_time < 0:
            raise ConfigError(f"order {self.id}: negative pickup time")


@dataclass(frozen=True)
class Task:
    id: str
    order_id: str
    leg: Leg
    origin: int
    destination: int
    pickup_time: int

    def duration(self, network: Network, service_time: int) -> int:
        return network.travel_minutes(self.origin, self.destination) + 2 * service_time


@dataclass(frozen=True)
class Fleet:
    autonomous_count: int = 50
    hub_counts: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.autonomous_count < 0 or any(v < 0 for v in self.hub_counts.values()):
            raise ConfigError("truck counts must be >= 0")


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True)
class Config:
    service_time: int = 30
    flexibility: int = 60
    alpha: Fraction = Fraction(1, 4)
    cost_per_mile: int = 2000
    horizon: int = WEEK_MINUTES
    fl_empty_ratio: Fraction = Fraction(1, 4)

    def __post_init__(self):
        object.__setattr__(self, "alpha", _as_fraction(self.alpha))
        object.__setattr__(self, "fl_empty_ratio", _as_fraction(self.fl_empty_ratio))
        if self.service_time < 0 or self.flexibility < 0:
            raise ConfigError("service time and flexibility must be >= 0")
        if not 0 <= self.alpha < 1:
            raise ConfigError(f"alpha must lie in [0, 1), got {self.alpha}")
        if self.horizon <= 0:
            raise ConfigError("horizon must be positive")
        if self.cost_per_mile <= 0:
            raise ConfigError("cost_per_mile must be positive")

    def replace(self, **changes) -> "Config":
        from dataclasses import replace

        return replace(self, **changes)


@dataclass(frozen=True, eq=False)
class Subproblem:
    kind: SubproblemKind
    tasks: tuple[Task, ...]
    truck_count: int
    network: Network
    config: Config
    hub: int | None = None

    @property
    def truck_class(self) -> TruckClass:
        if self.kind is SubproblemKind.AUTONOMOUS:
            return TruckClass.AUTONOMOUS
        return TruckClass.REGULAR

    @property
    def name(self) -> str:
        if self.kind is SubproblemKind.AUTONOMOUS:
            return "autonomous"
        return f"hub-{self.hub}"

    def with_tasks(self, tasks: Sequence[Task]) -> "Subproblem":
        return Subproblem(self.kind, tuple(tasks), self.truck_count, self.network, self.config, self.hub)


def nearest_hubs(network: Network) -> dict[int, int]:
    """Map every customer to its cheapest hub (ties go to the lowest hub id)."""
    hubs = network.hubs
    if not hubs:
        raise ConfigError("network has no hubs")
    out = {}
    for c in network.customers:
        out[c] = min(hubs, key=lambda h: (network.cost(c, h), h))
    return out


def generate_tasks(order: Order, network: Network, hub_of: Mapping[int, int],
                   config: Config) -> list[Task]:
    """Split an order into its first-mile, autonomous and last-mile tasks.

    Each downstream pickup time is the moment the freight becomes available,
    i.e. the upstream pickup plus its travel time and two service times.

    Raises:
        SameHubError: origin and destination share a transfer hub.
    """
    h1 = hub_of[order.origin]
    h2 = hub_of[order.destination]
    if h1 == h2:
        raise SameHubError(order.id, h1)
    s2 = 2 * config.service_time
    p_first = order.pickup_time
    p_auto = p_first + network.travel_minutes(order.origin, h1) + s2
    p_last = p_auto + network.travel_minutes(h1, h2) + s2
    oid = order.id
    return [
        Task(f"{oid}/F", oid, Leg.FIRST_MILE, order.origin, h1, p_first),
        Task(f"{oid}/A", oid, Leg.AUTONOMOUS, h1, h2, p_auto),
        Task(f"{oid}/L", oid, Leg.LAST_MILE, h2, order.destination, p_last),
    ]


def task_hub(task: Task) -> int | None:
    if task.leg is Leg.FIRST_MILE:
        return task.destination
    if task.leg is Leg.LAST_MILE:
        return task.origin
    return None


def _task_key(t: Task):
    return (t.pickup_time, t.id)


def decompose(tasks: Sequence[Task], fleet: Fleet, network: Network,
              config: Config) -> list[Subproblem]:
    """Partition tasks into the autonomous subproblem and one subproblem per busy hub.

    Tasks inside a subproblem are ordered by (pickup time, id); that order
    is the task index the solvers use for tie-breaking.
    """
    auto = []
    by_hub = defaultdict(list)
    for t in tasks:
        if t.leg is Leg.AUTONOMOUS:
            auto.append(t)
        elif t.leg is Leg.DIRECT:
            continue
        else:
            by_hub[task_hub(t)].append(t)
    subs = []
    if auto:
        if fleet.autonomous_count == 0:
            raise NoTrucksError("autonomous subproblem has tasks but no trucks")
        subs.append(Subproblem(SubproblemKind.AUTONOMOUS, tuple(sorted(auto, key=_task_key)),
                               fleet.autonomous_count, network, config))
    for h in sorted(by_hub):
        count = fleet.hub_counts.get(h, 0)
        if count == 0:
            raise NoTrucksError(f"hub {h} has tasks but no trucks")
        subs.append(Subproblem(SubproblemKind.HUB_LOCAL, tuple(sorted(by_hub[h], key=_task_key)),
                               count, network, config, hub=h))
    return subs


@dataclass(frozen=True, eq=False)
class Instance:
    """A self-contained problem: network, orders, fleet and parameters."""

    network: Network
    orders: tuple[Order, ...]
    fleet: Fleet
    config: Config

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(self.orders))
        n = self.network.size
        for o in self.orders:
            if not (0 <= o.origin < n and 0 <= o.destination < n):
                raise ConfigError(f"order {o.id} references an unknown location")
        for h in self.fleet.hub_counts:
            if not 0 <= h < n or self.network.locations[h].kind is not LocationKind.HUB:
                raise ConfigError(f"fleet references {h}, which is not a hub")

    @property
    def hub_of(self) -> dict[int, int]:
        return nearest_hubs(self.network)

    def with_config(self, **changes) -> "Instance":
        return Instance(self.network, self.orders, self.fleet, self.config.replace(**changes))

    def with_autonomous_trucks(self, count: int) -> "Instance":
        return Instance(self.network, self.orders, Fleet(count, dict(self.fleet.hub_counts)), self.config)
