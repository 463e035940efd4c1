import numpy as np
import pytest

from athn.model import Config, Location, LocationKind, Network


def line_network(hub_positions, customer_positions, rate=2000, speed=60):
    """Locations on a line; miles = |x_i - x_j|, minutes = miles at ``speed`` mph."""
    xs = list(hub_positions) + list(customer_positions)
    n = len(xs)
    miles = np.array([[abs(a - b) for b in xs] for a in xs], dtype=np.int64)
    minutes = miles * 60 // speed
    locs = [Location(i, LocationKind.HUB, f"H{i}", x=float(x)) for i, x in enumerate(hub_positions)]
    locs += [Location(len(hub_positions) + i, LocationKind.CUSTOMER, f"C{i}", x=float(x))
             for i, x in enumerate(customer_positions)]
    assert len(locs) == n
    return Network(tuple(locs), minutes, miles * rate, miles)


@pytest.fixture
def config():
    return Config()


@pytest.fixture
def small_net():
    # hubs at 0 and 300, customers at -40, 20, 330, 260
    return line_network([0, 300], [-40, 20, 330, 260])
