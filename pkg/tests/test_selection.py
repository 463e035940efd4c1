from fractions import Fraction

from hypothesis import given, settings, strategies as st

from athn.generator import SyntheticSpec, generate_instance
from athn.model import Config, Order, nearest_hubs
from athn.selection import Mode, select_all, select_mode

from conftest import line_network


def test_endpoints_at_hubs_choose_athn():
    # customers sit exactly on the hubs, D = 300 miles
    net = line_network([0, 300], [0, 300])
    dec = select_mode(Order("R1", 2, 3, 0), net, {2: 0, 3: 1}, Config(alpha=Fraction(1, 4)))
    rate = 2000
    assert dec.direct_cost == 2 * 300 * rate
    assert dec.athn_cost == Fraction(3, 4) * 300 * rate
    assert dec.mode is Mode.ATHN


def test_no_discount_long_detour_is_direct():
    # customers 100 apart, each 200 from its hub on the far side
    net = line_network([-200, 300], [0, 100])
    hub_of = {2: 0, 3: 1}
    dec = select_mode(Order("R1", 2, 3, 0), net, hub_of, Config(alpha=0))
    assert dec.mode is Mode.DIRECT
    assert dec.athn_cost > dec.direct_cost


def test_exact_tie_goes_direct():
    # hubs at -50 and 250, customers at 0 and 200: hub route 50 + 300 + 50 = 400 = 2 * 200
    net = line_network([-50, 250], [0, 200])
    hub_of = nearest_hubs(net)
    dec = select_mode(Order("R1", 2, 3, 0), net, hub_of, Config(alpha=0))
    assert dec.athn_cost == dec.direct_cost
    assert dec.mode is Mode.DIRECT
    # any discount breaks the tie
    assert select_mode(Order("R1", 2, 3, 0), net, hub_of, Config(alpha=0.01)).mode is Mode.ATHN


def test_empty_and_same_hub():
    net = line_network([0, 300], [-40, 20, 330, 260])
    hub_of = nearest_hubs(net)
    athn, direct, summary = select_all([], net, hub_of, Config())
    assert athn == [] and direct == [] and summary.athn_count == 0
    orders = [Order("R1", 2, 3, 0), Order("R2", 4, 5, 0)]  # both pairs share a hub
    athn, direct, summary = select_all(orders, net, hub_of, Config())
    assert athn == [] and [o.id for o in direct] == ["R1", "R2"]


def _recheck(order, net, hub_of, alpha):
    o, d = order.origin, order.destination
    h1, h2 = hub_of[o], hub_of[d]
    direct = int(net.travel_cost[o, d]) + int(net.travel_cost[d, o])
    athn = (int(net.travel_cost[o, h1]) + (1 - alpha) * int(net.travel_cost[h1, h2])
            + int(net.travel_cost[h2, d]))
    return h1 != h2 and athn < direct


def test_synthetic_494_orders_match_per_order_recheck():
    inst = generate_instance(SyntheticSpec())
    hub_of = inst.hub_of
    athn, direct, summary = select_all(inst.orders, inst.network, hub_of, inst.config)
    expected = {o.id for o in inst.orders if _recheck(o, inst.network, hub_of, Fraction(1, 4))}
    assert {o.id for o in athn} == expected
    assert summary.athn_count + summary.direct_count == 494
    assert summary.baseline_cost == sum(
        int(inst.network.travel_cost[o.origin, o.destination])
        + int(inst.network.travel_cost[o.destination, o.origin]) for o in inst.orders)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 9))
def test_monotone_in_alpha_and_scale_invariant(seed, k):
    inst = generate_instance(SyntheticSpec(order_count=60, customer_count=40, seed=seed % 50))
    hub_of = inst.hub_of
    prev = set()
    for a in (0, Fraction(1, 10), Fraction(1, 4), Fraction(2, 5), Fraction(3, 5)):
        athn, _, _ = select_all(inst.orders, inst.network, hub_of, Config(alpha=a))
        ids = {o.id for o in athn}
        assert prev <= ids
        prev = ids
        big = inst.network.scaled(k)
        athn_k, _, _ = select_all(inst.orders, big, nearest_hubs(big), Config(alpha=a))
        assert {o.id for o in athn_k} == ids
