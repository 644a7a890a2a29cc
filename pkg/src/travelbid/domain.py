"""Core travel-market domain: goods, packages, trips, and client preferences.

The market sells 28 goods: inbound flights for days 1-4, outbound flights
for days 2-5, two hotels (good/bad) for nights 1-4, and three entertainment
event types for days 1-4.  A trip is a feasible bundle of these goods for
one client; an agent serves eight clients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DAYS = (1, 2, 3, 4, 5)
ARRIVAL_DAYS = (1, 2, 3, 4)
DEPARTURE_DAYS = (2, 3, 4, 5)
NIGHTS = (1, 2, 3, 4)
EVENT_TYPES = (1, 2, 3)
HOTEL_QUALITIES = ("bad", "good")

BASE_TRIP_UTILITY = 1000
TRAVEL_PENALTY_PER_DAY = 100

N_GOODS = 28
FLIGHT_SUPPLY = 8   # per-agent cap; market supply is effectively unbounded
HOTEL_SUPPLY = 16
EVENT_SUPPLY = 8


class DomainError(ValueError):
    """Raised for malformed trips, preferences, or packages."""


@dataclass(frozen=True)
class Good:
    kind: str        # "inflight" | "outflight" | "hotel" | "event"
    day: int         # flight day, hotel night, or event day
    quality: str = ""   # hotels only
    event_type: int = 0  # events only

    def label(self) -> str:
        if self.kind == "inflight":
            return f"in{self.day}"
        if self.kind == "outflight":
            return f"out{self.day}"
        if self.kind == "hotel":
            return f"{self.quality}{self.day}"
        return f"ev{self.event_type}d{self.day}"


class GoodCatalog:
    """The fixed, totally ordered set of 28 goods and their supply."""

    def __init__(self) -> None:
        goods: list[Good] = []
        for d in ARRIVAL_DAYS:
            goods.append(Good("inflight", d))
        for d in DEPARTURE_DAYS:
            goods.append(Good("outflight", d))
        for quality in HOTEL_QUALITIES:
            for n in NIGHTS:
                goods.append(Good("hotel", n, quality=quality))
        for e in EVENT_TYPES:
            for d in ARRIVAL_DAYS:
                goods.append(Good("event", d, event_type=e))
        self.goods: tuple[Good, ...] = tuple(goods)
        self._index = {g: i for i, g in enumerate(goods)}
        supply = np.empty(N_GOODS, dtype=np.int64)
        supply[:8] = FLIGHT_SUPPLY
        supply[8:16] = HOTEL_SUPPLY
        supply[16:] = EVENT_SUPPLY
        self.supply = supply
        self.flight_indices = tuple(range(0, 8))
        self.hotel_indices = tuple(range(8, 16))
        self.event_indices = tuple(range(16, 28))

    def __len__(self) -> int:
        return N_GOODS

    def inflight(self, day: int) -> int:
        return self._index[Good("inflight", day)]

    def outflight(self, day: int) -> int:
        return self._index[Good("outflight", day)]

    def hotel(self, quality: str, night: int) -> int:
        return self._index[Good("hotel", night, quality=quality)]

    def event(self, event_type: int, day: int) -> int:
        return self._index[Good("event", day, event_type=event_type)]

    def kind_codes(self) -> np.ndarray:
        """Per-good kind code: 'f' flights, 'h' hotels, 'e' events."""
        codes = np.empty(N_GOODS, dtype="U1")
        codes[:8] = "f"
        codes[8:16] = "h"
        codes[16:] = "e"
        return codes


CATALOG = GoodCatalog()


@dataclass(frozen=True)
class Package:
    """An integer multiset over the catalog's goods."""

    qty: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(q < 0 for q in self.qty):
            raise DomainError("package quantities must be nonnegative")

    @staticmethod
    def zeros(n: int = N_GOODS) -> "Package":
        return Package((0,) * n)

    @staticmethod
    def from_counts(counts: Iterable[int]) -> "Package":
        return Package(tuple(int(q) for q in counts))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.qty, dtype=np.int64)

    def is_submultiset_of(self, supply: Sequence[int]) -> bool:
        return all(q <= s for q, s in zip(self.qty, supply))


def package_add(a: Package, b: Package) -> Package:
    if len(a.qty) != len(b.qty):
        raise DomainError("packages are over different catalogs")
    return Package(tuple(x + y for x, y in zip(a.qty, b.qty)))


def package_sub(a: Package, b: Package) -> tuple[int, ...]:
    """Componentwise difference; entries may be negative."""
    if len(a.qty) != len(b.qty):
        raise DomainError("packages are over different catalogs")
    return tuple(x - y for x, y in zip(a.qty, b.qty))


@dataclass(frozen=True)
class Trip:
    """A feasible itinerary: dates, hotel quality, and an event schedule.

    ``events`` maps a night of the stay to an event type; at most one event
    per night and each type at most once.
    """

    arrival: int
    departure: int
    quality: str
    events: tuple[tuple[int, int], ...] = ()   # sorted (night, event_type)

    def __post_init__(self) -> None:
        if self.arrival not in ARRIVAL_DAYS or self.departure not in DEPARTURE_DAYS:
            raise DomainError(f"bad travel dates {self.arrival}->{self.departure}")
        if self.arrival >= self.departure:
            raise DomainError("departure must follow arrival")
        if self.quality not in HOTEL_QUALITIES:
            raise DomainError(f"unknown hotel quality {self.quality!r}")
        nights = [n for n, _ in self.events]
        types = [e for _, e in self.events]
        if len(set(nights)) != len(nights) or len(set(types)) != len(types):
            raise DomainError("event schedule must be injective")
        for n, e in self.events:
            if not (self.arrival <= n < self.departure):
                raise DomainError(f"event night {n} outside stay")
            if e not in EVENT_TYPES:
                raise DomainError(f"unknown event type {e}")
        if tuple(sorted(self.events)) != self.events:
            raise DomainError("event schedule must be sorted by night")

    @property
    def n_nights(self) -> int:
        return self.departure - self.arrival

    def goods(self, catalog: GoodCatalog = CATALOG) -> Package:
        qty = [0] * N_GOODS
        qty[catalog.inflight(self.arrival)] = 1
        qty[catalog.outflight(self.departure)] = 1
        for night in range(self.arrival, self.departure):
            qty[catalog.hotel(self.quality, night)] = 1
        for night, etype in self.events:
            qty[catalog.event(etype, night)] = 1
        return Package(tuple(qty))


@dataclass(frozen=True)
class ClientPreference:
    preferred_arrival: int
    preferred_departure: int
    hotel_premium: int
    event_values: tuple[int, int, int]

    def __post_init__(self) -> None:
        if self.preferred_arrival not in ARRIVAL_DAYS:
            raise DomainError("preferred arrival out of range")
        if self.preferred_departure not in DEPARTURE_DAYS:
            raise DomainError("preferred departure out of range")
        if self.preferred_departure <= self.preferred_arrival:
            raise DomainError("preferred departure must follow arrival")
        if self.hotel_premium < 0 or any(v < 0 for v in self.event_values):
            raise DomainError("monetary preference fields must be nonnegative")


def client_utility(pref: ClientPreference, trip: Trip | None) -> int:
    """Value a client assigns a trip; a client staying home is worth 0."""
    if trip is None:
        return 0
    penalty = TRAVEL_PENALTY_PER_DAY * (
        abs(trip.arrival - pref.preferred_arrival)
        + abs(trip.departure - pref.preferred_departure)
    )
    bonus = pref.hotel_premium if trip.quality == "good" else 0
    event_bonus = sum(pref.event_values[etype - 1] for _, etype in trip.events)
    return BASE_TRIP_UTILITY - penalty + bonus + event_bonus


def agent_value(
    prefs: Sequence[ClientPreference], assignment: Sequence[Trip | None]
) -> int:
    if len(prefs) != len(assignment):
        raise DomainError("one assignment per client required")
    return sum(client_utility(p, t) for p, t in zip(prefs, assignment))


def _event_schedules(nights: range) -> list[tuple[tuple[int, int], ...]]:
    schedules: list[tuple[tuple[int, int], ...]] = [()]
    night_list = list(nights)
    for k in range(1, min(len(night_list), 3) + 1):
        for chosen in itertools.combinations(night_list, k):
            for types in itertools.permutations(EVENT_TYPES, k):
                schedules.append(tuple(sorted(zip(chosen, types))))
    return schedules


def enumerate_trips(include_events: bool = False) -> list[Trip]:
    """All feasible trips in a stable order.

    Without events there are exactly 20 (10 date pairs x 2 hotels).
    """
    trips: list[Trip] = []
    for arrival in ARRIVAL_DAYS:
        for departure in DEPARTURE_DAYS:
            if departure <= arrival:
                continue
            for quality in HOTEL_QUALITIES:
                if not include_events:
                    trips.append(Trip(arrival, departure, quality))
                    continue
                for schedule in _event_schedules(range(arrival, departure)):
                    trips.append(Trip(arrival, departure, quality, schedule))
    return trips


def sample_client(rng: np.random.Generator) -> ClientPreference:
    """Draw a client from the standard preference distribution."""
    arrival = int(rng.integers(1, 5))
    departure = int(rng.integers(arrival + 1, 6))
    premium = int(rng.integers(50, 151))
    values = tuple(int(rng.integers(0, 201)) for _ in range(3))
    return ClientPreference(arrival, departure, premium, values)  # type: ignore[arg-type]


def sample_clients(rng: np.random.Generator, n: int) -> list[ClientPreference]:
    """Batch draw from the same distribution as ``sample_client``."""
    arrival = rng.integers(1, 5, size=n)
    departure = rng.integers(arrival + 1, 6)
    premium = rng.integers(50, 151, size=n)
    values = rng.integers(0, 201, size=(n, 3))
    return [
        ClientPreference(
            int(arrival[i]),
            int(departure[i]),
            int(premium[i]),
            (int(values[i, 0]), int(values[i, 1]), int(values[i, 2])),
        )
        for i in range(n)
    ]


def clients_to_text(clients: Sequence[ClientPreference]) -> str:
    """One client per line: arrival,departure,premium,ev1,ev2,ev3."""
    lines = []
    for c in clients:
        vals = ",".join(str(v) for v in c.event_values)
        lines.append(f"{c.preferred_arrival},{c.preferred_departure},{c.hotel_premium},{vals}")
    return "\n".join(lines) + "\n"


def clients_from_text(text: str) -> list[ClientPreference]:
    clients = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 6:
            raise DomainError(f"line {lineno}: expected 6 fields, got {len(parts)}")
        a, d, prem, e1, e2, e3 = (int(p) for p in parts)
        clients.append(ClientPreference(a, d, prem, (e1, e2, e3)))
    return clients
