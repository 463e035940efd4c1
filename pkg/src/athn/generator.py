"""
Synthetic instances: whole networks with orders (the stand-in for proprietary
order data) and small random subproblems for solver cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import GenerationError
from .ingest import AccessPointHistogram, place_hubs
from .model import (
    WEEK_MINUTES,
    Config,
    Fleet,
    Instance,
    Location,
    LocationKind,
    Network,
    Order,
    Subproblem,
    SubproblemKind,
    Task,
    Leg,
    nearest_hubs,
)

# Monday..Sunday pickup weights; weekend appointments are rare.
DAY_WEIGHTS = (1.0, 1.0, 1.0, 1.0, 1.0, 0.2, 0.1)


@dataclass(frozen=True)
class SyntheticSpec:
    hub_count: int = 17
    order_count: int = 494
    customer_count: int = 120
    region: tuple[float, float] = (600.0, 500.0)
    horizon: int = WEEK_MINUTES
    seed: int = 0
    target_trip_miles: float = 431.0
    speed_mph: float = 50.0
    min_hub_separation: float = 50.0
    min_trip_fraction: float = 0.25
    autonomous_trucks: int = 50
    candidate_count: int = 400
    corridors: int = 4
    hub_tasks_per_truck: int = 4
    config: Config = field(default_factory=Config)

    def __post_init__(self):
        if self.hub_count < 1 or self.order_count < 0 or self.customer_count < 2:
            raise GenerationError("hub_count >= 1, order_count >= 0 and customer_count >= 2 required")


def _travel_minutes(miles: np.ndarray, speed_mph: float) -> np.ndarray:
    return np.rint(miles * 60.0 / speed_mph).astype(np.int64)


def generate_instance(spec: SyntheticSpec) -> Instance:
    """Build a seeded synthetic instance.

    Hubs are placed greedily at the busiest of a set of random highway
    access candidates, subject to the minimum separation. Distances are
    Euclidean, scaled so the mean round trip (delivery plus empty return)
    hits ``target_trip_miles``, then rounded to whole miles.

    Raises:
        GenerationError: the region cannot hold ``hub_count`` separated hubs.
    """
    rng = np.random.default_rng(spec.seed)
    w, h = spec.region

    # Highway access candidates scattered along a few random corridors, with
    # heavy-tailed usage counts.
    n_cand = max(spec.candidate_count, spec.hub_count)
    ends = []
    while len(ends) < spec.corridors:
        a, b = rng.uniform((0, 0), (w, h), size=(2, 2))
        if math.dist(a, b) >= 0.6 * math.hypot(w, h):
            ends.append((a, b))
    ends = np.array(ends)
    which = rng.integers(0, spec.corridors, size=n_cand)
    frac = rng.uniform(0, 1, size=(n_cand, 1))
    cand_xy = ends[which, 0] + frac * (ends[which, 1] - ends[which, 0])
    cand_xy = np.clip(cand_xy + rng.normal(0, 10.0, size=(n_cand, 2)), (0, 0), (w, h))
    freq = rng.zipf(1.6, size=n_cand).clip(max=10_000)
    cand_dist = np.hypot(*(cand_xy[:, None, :] - cand_xy[None, :, :]).transpose(2, 0, 1))
    hist = AccessPointHistogram({i: int(f) for i, f in enumerate(freq)})
    chosen = place_hubs(hist, spec.hub_count, spec.min_hub_separation, cand_dist)
    if len(chosen) < spec.hub_count:
        raise GenerationError(
            f"only {len(chosen)} of {spec.hub_count} hubs fit with separation "
            f"{spec.min_hub_separation} in a {w}x{h} region")
    hub_xy = cand_xy[chosen]

    cust_xy = rng.uniform((0, 0), (w, h), size=(spec.customer_count, 2))
    xy = np.vstack([hub_xy, cust_xy])
    n_loc = len(xy)
    euclid = np.hypot(*(xy[:, None, :] - xy[None, :, :]).transpose(2, 0, 1))

    n_h = spec.hub_count
    customers = np.arange(n_h, n_loc)
    diag = math.hypot(w, h)
    pairs = []
    while len(pairs) < spec.order_count:
        o, d = rng.choice(customers, size=2, replace=False)
        if euclid[o, d] >= spec.min_trip_fraction * diag:
            pairs.append((int(o), int(d)))
    mean_trip = float(np.mean([euclid[o, d] + euclid[d, o] for o, d in pairs])) if pairs else 1.0
    scale = spec.target_trip_miles / mean_trip

    miles = np.rint(euclid * scale).astype(np.int64)
    np.fill_diagonal(miles, 0)
    minutes = _travel_minutes(miles, spec.speed_mph)
    cost = miles * spec.config.cost_per_mile

    locations = [Location(i, LocationKind.HUB, f"H{i}", round(float(xy[i, 0]), 1), round(float(xy[i, 1]), 1))
                 for i in range(n_h)]
    locations += [Location(i, LocationKind.CUSTOMER, f"C{i - n_h}", round(float(xy[i, 0]), 1),
                           round(float(xy[i, 1]), 1)) for i in range(n_h, n_loc)]
    network = Network(tuple(locations), minutes, cost, miles)

    weights = np.array(DAY_WEIGHTS) / sum(DAY_WEIGHTS)
    days = max(1, spec.horizon // 1440)
    wts = np.resize(weights, days)
    wts = wts / wts.sum()
    orders = []
    for i, (o, d) in enumerate(pairs):
        day = int(rng.choice(days, p=wts))
        minute = int(rng.integers(4 * 60, 20 * 60))
        p = min(day * 1440 + minute, spec.horizon - 1)
        orders.append((p, o, d))
    orders.sort()
    orders = tuple(Order(f"R{i:04d}", o, d, p) for i, (p, o, d) in enumerate(orders))

    # Regular trucks per hub scale with the orders it serves.
    hub_of = nearest_hubs(network)
    touching = {hb: 0 for hb in range(n_h)}
    for od in orders:
        touching[hub_of[od.origin]] += 1
        touching[hub_of[od.destination]] += 1
    fleet = Fleet(spec.autonomous_trucks, {hb: max(2, -(-c // spec.hub_tasks_per_truck))
                                            for hb, c in touching.items()})
    config = spec.config.replace(horizon=spec.horizon)
    return Instance(network, orders, fleet, config)


def random_subproblem(seed: int, n_tasks: int, n_trucks: int, n_sites: int = 5,
                      extent: float = 300.0, span: int = 1440, service_time: int = 30,
                      flexibility: int = 60, speed_mph: float = 50.0) -> Subproblem:
    """A small random subproblem over metric site-to-site matrices."""
    rng = np.random.default_rng(seed)
    xy = rng.uniform(0, extent, size=(n_sites, 2))
    miles = np.rint(np.hypot(*(xy[:, None, :] - xy[None, :, :]).transpose(2, 0, 1))).astype(np.int64)
    np.fill_diagonal(miles, 0)
    cfg = Config(service_time=service_time, flexibility=flexibility)
    net = Network(tuple(Location(i, LocationKind.HUB, f"S{i}") for i in range(n_sites)),
                  _travel_minutes(miles, speed_mph), miles * cfg.cost_per_mile, miles)
    tasks = []
    for j in range(n_tasks):
        o, d = (int(v) for v in rng.choice(n_sites, size=2, replace=False))
        tasks.append(Task(f"T{j}", f"R{j}", Leg.AUTONOMOUS, o, d, int(rng.integers(0, span))))
    tasks.sort(key=lambda t: (t.pickup_time, t.id))
    return Subproblem(SubproblemKind.AUTONOMOUS, tuple(tasks), n_trucks, net, cfg)
