import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from travelbid.domain import (
    CATALOG,
    ClientPreference,
    DomainError,
    Package,
    Trip,
    agent_value,
    client_utility,
    clients_from_text,
    clients_to_text,
    enumerate_trips,
    package_add,
    package_sub,
    sample_client,
    sample_clients,
)


def test_catalog_layout():
    assert len(CATALOG) == 28
    assert CATALOG.flight_indices == tuple(range(8))
    assert CATALOG.hotel_indices == tuple(range(8, 16))
    assert CATALOG.event_indices == tuple(range(16, 28))
    assert list(CATALOG.supply[8:16]) == [16] * 8
    assert list(CATALOG.supply[16:]) == [8] * 12


def test_catalog_lookups_are_total_ordered():
    seen = set()
    for good in CATALOG.goods:
        assert good not in seen
        seen.add(good)
    assert CATALOG.hotel("bad", 1) == 8
    assert CATALOG.hotel("good", 4) == 15
    assert CATALOG.event(1, 1) == 16
    assert CATALOG.event(3, 4) == 27


def test_package_add_sub():
    a = Package((0, 1, 2))
    b = Package((1, 1, 1))
    assert package_add(a, b).qty == (1, 2, 3)
    assert package_sub(a, b) == (-1, 0, 1)
    zero = Package.zeros(3)
    assert package_add(a, zero).qty == a.qty
    assert package_sub(a, a) == (0, 0, 0)


def test_package_rejects_negative_and_mismatch():
    with pytest.raises(DomainError):
        Package((1, -1))
    with pytest.raises(DomainError):
        package_add(Package((1,)), Package((1, 2)))


def test_trip_goods_well_formed():
    trip = Trip(2, 4, "good", ((2, 1), (3, 3)))
    pkg = trip.goods()
    assert pkg.qty[CATALOG.inflight(2)] == 1
    assert pkg.qty[CATALOG.outflight(4)] == 1
    assert pkg.qty[CATALOG.hotel("good", 2)] == 1
    assert pkg.qty[CATALOG.hotel("good", 3)] == 1
    assert pkg.qty[CATALOG.event(1, 2)] == 1
    assert pkg.qty[CATALOG.event(3, 3)] == 1
    assert sum(pkg.qty) == 6


def test_trip_validation():
    with pytest.raises(DomainError):
        Trip(3, 2, "bad")
    with pytest.raises(DomainError):
        Trip(1, 2, "luxury")
    with pytest.raises(DomainError):
        Trip(1, 2, "bad", ((3, 1),))  # event outside the stay
    with pytest.raises(DomainError):
        Trip(1, 4, "bad", ((1, 1), (2, 1)))  # repeated type
    with pytest.raises(DomainError):
        Trip(1, 4, "bad", ((1, 1), (1, 2)))  # two events one night


def test_client_utility_values():
    pref = ClientPreference(2, 4, 85, (120, 0, 40))
    exact = Trip(2, 4, "bad")
    assert client_utility(pref, exact) == 1000
    assert client_utility(pref, None) == 0
    shifted = Trip(1, 4, "good")
    assert client_utility(pref, shifted) == 1000 - 100 + 85
    with_events = Trip(2, 4, "bad", ((2, 1), (3, 3)))
    assert client_utility(pref, with_events) == 1000 + 120 + 40


def test_client_utility_premium_monotone():
    low = ClientPreference(1, 2, 50, (0, 0, 0))
    high = ClientPreference(1, 2, 150, (0, 0, 0))
    good = Trip(1, 2, "good")
    bad = Trip(1, 2, "bad")
    assert client_utility(high, good) > client_utility(low, good)
    assert client_utility(high, bad) == client_utility(low, bad)


def test_agent_value_additive():
    prefs = [ClientPreference(1, 3, 60, (10, 20, 30)) for _ in range(8)]
    trip = Trip(2, 3, "good")
    single = client_utility(prefs[0], trip)
    assert agent_value(prefs, [trip] * 8) == 8 * single
    assert agent_value(prefs, [None] * 8) == 0
    with pytest.raises(DomainError):
        agent_value(prefs, [None] * 7)


def test_enumerate_trips_no_events():
    trips = enumerate_trips(include_events=False)
    assert len(trips) == 20
    assert len(set(trips)) == 20
    pairs = {(t.arrival, t.departure) for t in trips}
    assert len(pairs) == 10


def test_enumerate_trips_event_counts():
    trips = enumerate_trips(include_events=True)
    assert len(trips) == len(set(trips))
    # injective partial schedules for a 4-night stay on one hotel
    four = [t for t in trips if t.arrival == 1 and t.departure == 5 and t.quality == "bad"]
    # empty + C(4,1)*3 singles + C(4,2)*6 pairs + C(4,3)*6 triples = 73
    assert len(four) == 1 + 4 * 3 + 6 * 6 + 4 * 6
    # 1-night stays admit the empty schedule plus three single events
    one = [t for t in trips if t.arrival == 1 and t.departure == 2 and t.quality == "bad"]
    assert len(one) == 1 + 3
    for t in trips:
        for night, _ in t.events:
            assert t.arrival <= night < t.departure


def test_sample_client_ranges():
    rng = np.random.default_rng(7)
    for _ in range(200):
        c = sample_client(rng)
        assert 1 <= c.preferred_arrival <= 4
        assert c.preferred_arrival < c.preferred_departure <= 5
        assert 50 <= c.hotel_premium <= 150
        assert all(0 <= v <= 200 for v in c.event_values)


def test_sample_clients_batch_ranges():
    rng = np.random.default_rng(11)
    for c in sample_clients(rng, 300):
        assert 1 <= c.preferred_arrival <= 4
        assert c.preferred_arrival < c.preferred_departure <= 5
        assert 50 <= c.hotel_premium <= 150
        assert all(0 <= v <= 200 for v in c.event_values)


def test_clients_text_roundtrip():
    rng = np.random.default_rng(3)
    clients = sample_clients(rng, 8)
    text = clients_to_text(clients)
    assert clients_from_text(text) == clients
    with pytest.raises(DomainError):
        clients_from_text("1,2,3\n")


@given(
    st.integers(1, 4),
    st.integers(2, 5),
    st.integers(0, 300),
    st.tuples(st.integers(0, 200), st.integers(0, 200), st.integers(0, 200)),
)
def test_utility_formula_property(arrival, departure, premium, values):
    if departure <= arrival:
        return
    pref = ClientPreference(arrival, departure, premium, values)
    for trip in enumerate_trips(include_events=False):
        got = client_utility(pref, trip)
        expected = (
            1000
            - 100 * (abs(trip.arrival - arrival) + abs(trip.departure - departure))
            + (premium if trip.quality == "good" else 0)
        )
        assert got == expected


def test_event_goods_never_outside_stay():
    for trip in enumerate_trips(include_events=True):
        pkg = trip.goods()
        for etype, day in itertools.product((1, 2, 3), (1, 2, 3, 4)):
            if pkg.qty[CATALOG.event(etype, day)]:
                assert trip.arrival <= day < trip.departure
