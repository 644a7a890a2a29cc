import itertools

import numpy as np

from travelbid.completion import solve_completion


def oracle_completion(utilities, incidence, prices, owned):
    """Assignment enumeration with exact purchase accounting."""
    n_clients, n_trips = utilities.shape
    best = 0.0
    for assign in itertools.product(range(-1, n_trips), repeat=n_clients):
        demand = np.zeros(incidence.shape[1], dtype=np.int64)
        value = 0.0
        for c, t in enumerate(assign):
            if t >= 0:
                value += utilities[c, t]
                demand += incidence[t]
        buy = np.maximum(demand - owned, 0)
        if np.any(buy[~np.isfinite(prices)] > 0):
            continue
        finite = np.isfinite(prices)
        value -= float(np.dot(buy[finite], prices[finite]))
        best = max(best, value)
    return best


def random_instance(rng, n_clients, n_trips, n_goods):
    utilities = rng.integers(0, 30, size=(n_clients, n_trips)).astype(float)
    incidence = rng.integers(0, 2, size=(n_trips, n_goods))
    prices = rng.integers(0, 12, size=n_goods).astype(float)
    prices[rng.random(n_goods) < 0.2] = np.inf
    owned = rng.integers(0, 3, size=n_goods)
    return utilities, incidence, prices, owned


def test_matches_enumeration_on_random_instances():
    rng = np.random.default_rng(0)
    for _ in range(150):
        n_clients = int(rng.integers(1, 4))
        n_trips = int(rng.integers(1, 4))
        n_goods = int(rng.integers(1, 4))
        utilities, incidence, prices, owned = random_instance(
            rng, n_clients, n_trips, n_goods
        )
        got = solve_completion(utilities, incidence, prices, owned)
        want = oracle_completion(utilities, incidence, prices, owned)
        assert got.value == want


def test_fast_paths_agree_with_ilp():
    rng = np.random.default_rng(1)
    for _ in range(100):
        n_clients = int(rng.integers(1, 5))
        n_trips = int(rng.integers(1, 5))
        n_goods = int(rng.integers(1, 5))
        utilities, incidence, prices, owned = random_instance(
            rng, n_clients, n_trips, n_goods
        )
        # force the single-contested layout sometimes
        if rng.random() < 0.5:
            owned[:] = 0
            g = int(rng.integers(0, n_goods))
            owned[g] = int(rng.integers(1, n_clients + 1))
        got = solve_completion(utilities, incidence, prices, owned)
        want = oracle_completion(utilities, incidence, prices, owned)
        assert got.value == want


def test_owned_units_are_free():
    utilities = np.array([[10.0]])
    incidence = np.array([[1]])
    prices = np.array([7.0])
    unowned = solve_completion(utilities, incidence, prices, np.array([0]))
    owned = solve_completion(utilities, incidence, prices, np.array([1]))
    assert unowned.value == 3.0
    assert owned.value == 10.0
    assert owned.purchases[0] == 0


def test_infinite_price_blocks_purchase():
    utilities = np.array([[10.0, 4.0]])
    incidence = np.array([[1, 0], [0, 1]])
    prices = np.array([np.inf, 1.0])
    result = solve_completion(utilities, incidence, prices, np.array([0, 0]))
    assert result.value == 3.0
    assert result.assignment[0] == 1
    # with a unit of the blocked good in hand the better trip opens up
    result = solve_completion(utilities, incidence, prices, np.array([1, 0]))
    assert result.value == 10.0


def test_contested_good_goes_to_highest_gain():
    # two clients want the same single owned unit; one values it more
    utilities = np.array([[10.0], [6.0]])
    incidence = np.array([[1]])
    prices = np.array([np.inf])
    result = solve_completion(utilities, incidence, prices, np.array([1]))
    assert result.value == 10.0
    assert result.assignment[0] == 0
    assert result.assignment[1] == -1


def test_negative_surplus_stays_home():
    utilities = np.array([[5.0]])
    incidence = np.array([[1]])
    result = solve_completion(utilities, incidence, np.array([9.0]), np.array([0]))
    assert result.value == 0.0
    assert result.assignment[0] == -1
