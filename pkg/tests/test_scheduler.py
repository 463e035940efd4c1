import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from athn.errors import NoTrucksError, TooLargeError
from athn.generator import random_subproblem
from athn.model import Config, Leg, Order, Subproblem, SubproblemKind, Task, generate_tasks
from athn.scheduler import (
    Schedule,
    ScheduledTask,
    Status,
    ViolationKind,
    apply_rechain,
    brute_force_oracle,
    rechain_downstream,
    solve_exact,
    solve_heuristic,
    validate,
)

from conftest import line_network
from mutation import KINDS, independent_ok, mutate

HUBS4 = line_network([0, 100, 200, 300], [])  # 60 mph: minutes equal miles


def sub_of(net, specs, trucks, service=0, flex=60):
    """specs: (id, origin, destination, pickup)."""
    tasks = tuple(Task(i, i, Leg.AUTONOMOUS, o, d, p) for i, o, d, p in specs)
    cfg = Config(service_time=service, flexibility=flex)
    return Subproblem(SubproblemKind.AUTONOMOUS, tasks, trucks, net, cfg)


# --- exact and oracle examples -------------------------------------------------

def test_single_task():
    sub = sub_of(HUBS4, [("A", 0, 1, 30)], 1, service=30)
    s = solve_exact(sub)
    assert s.status is Status.OPTIMAL and s.empty_cost == 0
    (a,) = s.assignments
    assert a.start == 0  # 30 - 60 clamped to 0
    assert a.end == 100 + 60
    assert validate(s) == []


def test_two_chained_tasks():
    # A: h0 -> h1 at 0 and B: h1 -> h0 when A ends
    dur_a = 100 + 2 * 30
    sub = sub_of(HUBS4, [("A", 0, 1, 0), ("B", 1, 0, dur_a)], 1, service=30, flex=0)
    s = solve_exact(sub)
    assert s.empty_cost == 0 and s.status is Status.OPTIMAL
    assert brute_force_oracle(sub) == 0
    assert validate(s) == []


def test_oracle_trivial_and_limits():
    assert brute_force_oracle(sub_of(HUBS4, [], 1)) == 0
    big = sub_of(HUBS4, [(f"T{i}", 0, 1, 1000 * i) for i in range(9)], 2)
    with pytest.raises(TooLargeError):
        brute_force_oracle(big)


# Three tasks, one truck, distinct hubs; relocation miles per ordering, by hand:
#   A: 0->1 (100 min), B: 2->3 (100 min), C: 3->0 (300 min)
#   wide windows:  ABC 100+0  ACB 200+200  BAC 300+200  BCA 0+0  CAB 0+100  CBA 200+300
#   tight windows A@0, C@400, B@800, flex 60: only ACB fits (C starts 340, B starts 840)
HAND_WIDE = min(100, 400, 500, 0, 100, 500)
HAND_TIGHT = 400


def test_three_tasks_hand_enumeration():
    wide = sub_of(HUBS4, [("A", 0, 1, 0), ("B", 2, 3, 0), ("C", 3, 0, 0)], 1, flex=5000)
    assert brute_force_oracle(wide) == HAND_WIDE * 2000
    assert solve_exact(wide).empty_cost == HAND_WIDE * 2000
    tight = sub_of(HUBS4, [("A", 0, 1, 0), ("C", 3, 0, 400), ("B", 2, 3, 800)], 1, flex=60)
    assert brute_force_oracle(tight) == HAND_TIGHT * 2000
    s = solve_exact(tight)
    assert s.empty_cost == HAND_TIGHT * 2000
    assert [a.task_id for a in s.routes()[0]] == ["A", "C", "B"]
    assert [a.start for a in s.routes()[0]] == [0, 340, 840]


def test_infeasible_reported():
    sub = sub_of(HUBS4, [("A", 0, 3, 0), ("B", 0, 3, 10)], 1, flex=0)
    assert brute_force_oracle(sub) is None
    s = solve_exact(sub)
    assert s.status is Status.INFEASIBLE and not s.feasible
    h = solve_heuristic(sub, time_limit=1)
    assert h.status is Status.INFEASIBLE and h.blocking_task in {"A", "B"}


def test_no_trucks():
    sub = sub_of(HUBS4, [("A", 0, 1, 0)], 0)
    for solve in (solve_exact, solve_heuristic):
        with pytest.raises(NoTrucksError):
            solve(sub)


def test_exact_is_deterministic():
    sub = random_subproblem(11, 7, 2)
    a, b = solve_exact(sub), solve_exact(sub)
    assert a.assignments == b.assignments


# --- heuristic ---------------------------------------------------------------

def test_heuristic_shared_od_pair_costs_nothing():
    sub = sub_of(HUBS4, [(f"T{i}", 1, 2, 50 * i) for i in range(12)], 12)
    s = solve_heuristic(sub, time_limit=2)
    assert s.empty_cost == 0 and validate(s) == []


@pytest.mark.parametrize("seed", range(15))
def test_heuristic_bounded_by_exact(seed):
    sub = random_subproblem(seed, 6, 2, extent=200, span=2880)
    ex = solve_exact(sub)
    h = solve_heuristic(sub, time_limit=5, seed=seed)
    if ex.feasible:
        assert h.feasible and h.empty_cost >= ex.empty_cost
        assert validate(h) == []


def test_heuristic_seed_reproducible():
    sub = random_subproblem(4, 30, 4, extent=200, span=4320)
    a = solve_heuristic(sub, time_limit=30, seed=3)
    b = solve_heuristic(sub, time_limit=30, seed=3)
    assert a.assignments == b.assignments and a.empty_cost == b.empty_cost


# --- validator -----------------------------------------------------------------

def test_window_fault_gives_one_violation():
    sub = sub_of(HUBS4, [("A", 0, 1, 500), ("B", 2, 3, 500)], 2)
    s = solve_exact(sub)
    a = next(x for x in s.assignments if x.task_id == "A")
    moved = ScheduledTask("A", a.truck, a.position, a.start + 200, a.end + 200)
    bad = Schedule(sub, tuple(moved if x is a else x for x in s.assignments), s.empty_cost,
                   s.empty_miles, s.status)
    v = validate(bad)
    assert [x.kind for x in v] == [ViolationKind.WINDOW]
    assert v[0].task_id == "A"


@pytest.mark.parametrize("kind", KINDS)
def test_each_mutation_kind_detected(kind):
    rng = random.Random(kind)
    seen = 0
    for seed in range(60):
        sub = random_subproblem(seed, 5, 2, extent=200, span=2880)
        s = solve_exact(sub)
        if not s.feasible or len(s.assignments) < 2:
            continue
        assert validate(s) == []
        m = mutate(s, rng, kind)
        assert (validate(m) == []) == independent_ok(m)
        seen += 1
    assert seen > 10


# --- re-chaining ----------------------------------------------------------------

def _auto_schedule(net, order, cfg, start_offset):
    hub_of = {2: 0, 3: 1}
    f, a, l = generate_tasks(order, net, hub_of, cfg)
    sub = Subproblem(SubproblemKind.AUTONOMOUS, (a,), 1, net, cfg)
    start = a.pickup_time + start_offset
    st_ = ScheduledTask(a.id, 0, 0, start, start + a.duration(net, cfg.service_time))
    return Schedule(sub, (st_,), 0, Fraction(0), Status.FEASIBLE), (f, a, l)


def test_rechain_identity_and_shift():
    net = line_network([0, 300], [-40, 330])
    cfg = Config()
    order = Order("R1", 2, 3, 100)
    sched, (f, a, l) = _auto_schedule(net, order, cfg, 0)
    pickups = rechain_downstream(sched, [order], net, cfg)
    assert pickups == {"R1": l.pickup_time}
    sched, _ = _auto_schedule(net, order, cfg, cfg.flexibility)
    pickups = rechain_downstream(sched, [order], net, cfg)
    assert pickups["R1"] == l.pickup_time + cfg.flexibility
    f2, l2 = apply_rechain([f, l], pickups)
    assert f2 == f
    assert l2.pickup_time == l.pickup_time + cfg.flexibility


def test_rechain_batch_against_recomputation():
    from athn.generator import SyntheticSpec, generate_instance
    from athn.model import decompose

    inst = generate_instance(SyntheticSpec(order_count=40, seed=5))
    hub_of = inst.hub_of
    orders = [o for o in inst.orders if hub_of[o.origin] != hub_of[o.destination]]
    tasks = [t for o in orders for t in generate_tasks(o, inst.network, hub_of, inst.config)]
    auto = decompose(tasks, inst.fleet, inst.network, inst.config)[0]
    sched = solve_heuristic(auto, time_limit=10, seed=1)
    pickups = rechain_downstream(sched)
    service = inst.config.service_time
    for o in orders:
        a = next(x for x in sched.assignments if x.task_id == f"{o.id}/A")
        h1, h2 = hub_of[o.origin], hub_of[o.destination]
        assert pickups[o.id] == a.start + inst.network.travel_minutes(h1, h2) + 2 * service
    subset = rechain_downstream(sched, orders[:3])
    assert set(subset) == {o.id for o in orders[:3]}


# --- properties ------------------------------------------------------------------

small = st.tuples(st.integers(0, 10**6), st.integers(1, 6), st.integers(1, 3),
                  st.sampled_from([1440, 2880]))


@settings(max_examples=40, deadline=None)
@given(small)
def test_soundness_and_oracle_equivalence(params):
    seed, n, k, span = params
    sub = random_subproblem(seed, n, k, extent=200, span=span)
    ex = solve_exact(sub)
    oracle = brute_force_oracle(sub)
    if oracle is None:
        assert ex.status is Status.INFEASIBLE
    else:
        assert ex.status is Status.OPTIMAL and ex.empty_cost == oracle
        assert validate(ex) == []
        assert ex.empty_miles * sub.config.cost_per_mile == ex.empty_cost
    h = solve_heuristic(sub, time_limit=5, seed=seed)
    if h.feasible:
        assert validate(h) == []
        assert h.empty_miles * sub.config.cost_per_mile == h.empty_cost


def _with(sub, flexibility=None, trucks=None, network=None):
    cfg = sub.config if flexibility is None else sub.config.replace(flexibility=flexibility)
    return Subproblem(sub.kind, sub.tasks, trucks or sub.truck_count, network or sub.network, cfg)


@settings(max_examples=25, deadline=None)
@given(small)
def test_flexibility_and_truck_monotonicity(params):
    seed, n, k, span = params
    sub = random_subproblem(seed, n, k, extent=200, span=span)
    prev = None
    for d in (0, 30, 60, 90, 120):
        s = solve_exact(_with(sub, flexibility=d))
        if prev is not None and prev.feasible:
            assert s.feasible and s.empty_cost <= prev.empty_cost
        prev = s
    base = solve_exact(sub)
    more = solve_exact(_with(sub, trucks=k + 1))
    if base.feasible:
        assert more.feasible and more.empty_cost <= base.empty_cost


@settings(max_examples=25, deadline=None)
@given(small, st.integers(2, 12))
def test_cost_scaling(params, factor):
    seed, n, k, span = params
    sub = random_subproblem(seed, n, k, extent=200, span=span)
    base = solve_exact(sub)
    big = solve_exact(_with(sub, network=sub.network.scaled(factor)))
    assert base.status is big.status
    if base.feasible:
        assert big.empty_cost == factor * base.empty_cost
        assert big.assignments == base.assignments
