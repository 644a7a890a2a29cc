"""Hotel price prediction via simulated simultaneous ascending auctions.

Cumulative client demand is simulated against a candidate price vector;
over-demanded hotels have their prices raised until excess demand is
nonpositive (SimAA), or adjusted by signed excess demand (tatonnement,
the baseline).  Demand models combine the agent's own eight clients with
either sampled, expected, or exactly known other clients.  Entertainment
enters only as a fixed per-trip-length utility bonus; flight prices are
frozen at their predicted minima.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .domain import ClientPreference, enumerate_trips, sample_clients

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore
        def wrap(f):
            return f

        return wrap(args[0]) if args and callable(args[0]) else wrap


N_HOTELS = 8
CLOSED_PRICE = 1e12  # stand-in for +inf inside the numeric loops


@dataclass(frozen=True)
class CEConfig:
    alpha: float = 1.0 / 24.0
    max_iters: int = 10_000
    hotel_supply: int = 16
    flight_prices: tuple[float, ...] = (350.0,) * 8   # per flight good
    length_bonus: tuple[float, float, float, float] = (100.0, 200.0, 300.0, 400.0)
    event_price: float = 80.0   # abstracted into length_bonus; kept for reference
    n_other_clients: int = 56


@dataclass
class HotelPriceVector:
    prices: np.ndarray                 # per hotel good, length 8
    converged: bool
    iterations: int
    lower_bounds: np.ndarray | None = None
    closed: np.ndarray | None = None   # bool mask of goods excluded from adjustment


@dataclass(frozen=True)
class InterimState:
    """What is known mid-game: closed hotels' closing prices and current asks."""

    closing_prices: dict[int, float] = field(default_factory=dict)  # hotel idx 0..7
    asks: tuple[float, ...] = (0.0,) * N_HOTELS
    use_distribution: bool = False


_TRIPS = enumerate_trips(include_events=False)
_TRIP_ARRIVAL = np.array([t.arrival for t in _TRIPS])
_TRIP_DEPARTURE = np.array([t.departure for t in _TRIPS])
_TRIP_GOOD = np.array([t.quality == "good" for t in _TRIPS])
_TRIP_NIGHTS = _TRIP_DEPARTURE - _TRIP_ARRIVAL
# hotel incidence in local indexing: bad nights 0..3, good nights 4..7
_INCIDENCE = np.zeros((len(_TRIPS), N_HOTELS), dtype=np.int8)
for _i, _t in enumerate(_TRIPS):
    _off = 4 if _t.quality == "good" else 0
    for _n in range(_t.arrival, _t.departure):
        _INCIDENCE[_i, _off + (_n - 1)] = 1

ce_trips = list(_TRIPS)
ce_incidence = _INCIDENCE


def _flight_cost_per_trip(flight_prices: Sequence[float]) -> np.ndarray:
    fp = np.asarray(flight_prices, dtype=float)
    return fp[_TRIP_ARRIVAL - 1] + fp[4 + _TRIP_DEPARTURE - 2]


def base_utilities(clients: Sequence[ClientPreference], config: CEConfig) -> np.ndarray:
    """Per client x trip: utility plus length bonus minus flight cost."""
    pa = np.array([c.preferred_arrival for c in clients])[:, None]
    pd = np.array([c.preferred_departure for c in clients])[:, None]
    prem = np.array([c.hotel_premium for c in clients])[:, None]
    penalty = 100.0 * (
        np.abs(_TRIP_ARRIVAL[None, :] - pa) + np.abs(_TRIP_DEPARTURE[None, :] - pd)
    )
    bonus = np.asarray(config.length_bonus)[_TRIP_NIGHTS - 1][None, :]
    hotel = np.where(_TRIP_GOOD[None, :], prem, 0.0)
    return 1000.0 - penalty + hotel + bonus - _flight_cost_per_trip(config.flight_prices)[None, :]


def expected_base_utilities(config: CEConfig) -> np.ndarray:
    """Trip utilities of the synthetic expected client: exact expectation of
    the per-client formula over the preference distribution."""
    pairs = [(a, d) for a in range(1, 5) for d in range(a + 1, 6)]
    pen = np.zeros(len(_TRIPS))
    for a, d in pairs:
        pen += 100.0 * (np.abs(_TRIP_ARRIVAL - a) + np.abs(_TRIP_DEPARTURE - d))
    pen /= len(pairs)
    bonus = np.asarray(config.length_bonus)[_TRIP_NIGHTS - 1]
    hotel = np.where(_TRIP_GOOD, 100.0, 0.0)  # E[premium] on U[50,150]
    return (1000.0 - pen + hotel + bonus - _flight_cost_per_trip(config.flight_prices))[None, :]


@njit(cache=True)
def _ce_kernel(
    base, inc, weights, owned, has_owned, prices, lower, adjustable,
    supply, alpha, max_iters, ascending_only,
):  # pragma: no cover - exercised via wrappers
    n, T = base.shape
    G = inc.shape[1]
    p = prices.copy()
    cost = np.empty(T)
    demand = np.empty(G)
    it = 0
    converged = False
    while it <= max_iters:
        for t in range(T):
            s = 0.0
            for g in range(G):
                if inc[t, g]:
                    s += p[g]
            cost[t] = s
        for g in range(G):
            demand[g] = 0.0
        for c in range(n):
            best = -1e30
            bt = -1
            for t in range(T):
                v = base[c, t] - cost[t]
                if has_owned[c]:
                    for g in range(G):
                        if inc[t, g] and owned[c, g]:
                            v += p[g]
                if v > best:
                    best = v
                    bt = t
            if bt >= 0 and best >= 0.0:
                w = weights[c]
                for g in range(G):
                    if inc[bt, g]:
                        demand[g] += w
        done = True
        for g in range(G):
            if adjustable[g] and demand[g] - supply[g] > 1e-9:
                done = False
                break
        if done:
            converged = True
            break
        if it == max_iters:
            break
        for g in range(G):
            if not adjustable[g]:
                continue
            z = demand[g] - supply[g]
            if ascending_only:
                if z > 0.0:
                    p[g] += alpha * z
            else:
                p[g] += alpha * z
                if p[g] < lower[g]:
                    p[g] = lower[g]
        it += 1
    return p, converged, it


class DemandSystem:
    """Client population plus price-independent utility precomputation."""

    def __init__(
        self,
        clients: Sequence[ClientPreference],
        config: CEConfig,
        weights: Sequence[float] | None = None,
        expected_weight: float = 0.0,
    ) -> None:
        self.config = config
        self.clients = list(clients)
        base = base_utilities(self.clients, config) if self.clients else np.zeros((0, len(_TRIPS)))
        w = list(weights) if weights is not None else [1.0] * len(self.clients)
        if expected_weight > 0:
            base = np.vstack([base, expected_base_utilities(config)])
            w = w + [expected_weight]
        self.base = np.ascontiguousarray(base, dtype=np.float64)
        self.weights = np.asarray(w, dtype=np.float64)
        self.incidence = np.ascontiguousarray(_INCIDENCE)
        n = self.base.shape[0]
        self.owned = np.zeros((n, N_HOTELS), dtype=np.int8)

    @property
    def n_clients(self) -> int:
        return self.base.shape[0]

    def demand(self, hotel_prices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Cumulative hotel demand and each client's chosen trip (-1 = home)."""
        p = np.asarray(hotel_prices, dtype=float)
        cost = self.incidence.astype(float) @ p
        surplus = self.base - cost[None, :]
        refund = (self.owned * p[None, :]) @ self.incidence.T.astype(float)
        surplus = surplus + refund
        choice = np.argmax(surplus, axis=1)
        best = surplus[np.arange(self.n_clients), choice]
        choice = np.where(best >= 0, choice, -1)
        demand = np.zeros(N_HOTELS)
        active = choice >= 0
        if active.any():
            demand = (self.weights[active, None] * self.incidence[choice[active]]).sum(axis=0)
        return demand, choice

    def solve_ce(
        self,
        method: str = "simaa",
        init: np.ndarray | None = None,
        lower: np.ndarray | None = None,
        closed: np.ndarray | None = None,
        alpha: float | None = None,
        max_iters: int | None = None,
    ) -> HotelPriceVector:
        alpha = self.config.alpha if alpha is None else alpha
        max_iters = self.config.max_iters if max_iters is None else max_iters
        lower = np.zeros(N_HOTELS) if lower is None else np.asarray(lower, dtype=float)
        prices = lower.copy() if init is None else np.asarray(init, dtype=float).copy()
        closed = np.zeros(N_HOTELS, dtype=bool) if closed is None else closed
        prices = np.where(closed, CLOSED_PRICE, np.maximum(prices, lower))
        supply = np.full(N_HOTELS, float(self.config.hotel_supply))
        has_owned = np.ascontiguousarray(self.owned.any(axis=1).astype(np.uint8))
        p, converged, iters = _ce_kernel(
            self.base,
            self.incidence,
            self.weights,
            self.owned,
            has_owned,
            np.ascontiguousarray(prices),
            np.ascontiguousarray(lower),
            np.ascontiguousarray(~closed),
            supply,
            float(alpha),
            int(max_iters),
            method == "simaa",
        )
        return HotelPriceVector(
            prices=np.asarray(p),
            converged=bool(converged),
            iterations=int(iters),
            lower_bounds=lower,
            closed=closed,
        )


def client_demand(
    client: ClientPreference, hotel_prices: np.ndarray, config: CEConfig
) -> np.ndarray:
    """One client's demanded hotel units at the given prices."""
    system = DemandSystem([client], config)
    demand, _ = system.demand(np.asarray(hotel_prices, dtype=float))
    return demand.astype(np.int64)


def expected_client_demand(hotel_prices: np.ndarray, config: CEConfig) -> np.ndarray:
    """Demand of the 56-weighted expected client at the given prices."""
    system = DemandSystem([], config, expected_weight=float(config.n_other_clients))
    demand, _ = system.demand(np.asarray(hotel_prices, dtype=float))
    return demand


def simaa(
    demand_fn: Callable[[np.ndarray], np.ndarray],
    supply: np.ndarray,
    alpha: float,
    init: np.ndarray,
    max_iters: int = 10_000,
    lower: np.ndarray | None = None,
) -> HotelPriceVector:
    """Generic ascending price adjustment: p += alpha * max(excess, 0)."""
    supply = np.asarray(supply, dtype=float)
    p = np.asarray(init, dtype=float).copy()
    if lower is not None:
        p = np.maximum(p, lower)
    for it in range(max_iters + 1):
        z = np.asarray(demand_fn(p), dtype=float) - supply
        if np.all(z <= 1e-9):
            return HotelPriceVector(p, True, it)
        if it == max_iters:
            break
        p = p + alpha * np.maximum(z, 0.0)
    return HotelPriceVector(p, False, max_iters)


def tatonnement(
    demand_fn: Callable[[np.ndarray], np.ndarray],
    supply: np.ndarray,
    alpha: float | Callable[[int], float],
    init: np.ndarray,
    max_iters: int = 10_000,
    lower: np.ndarray | None = None,
) -> HotelPriceVector:
    """Signed price adjustment: p += alpha_n * excess, clipped below."""
    supply = np.asarray(supply, dtype=float)
    p = np.asarray(init, dtype=float).copy()
    floor = np.zeros_like(p) if lower is None else np.asarray(lower, dtype=float)
    p = np.maximum(p, floor)
    rate = alpha if callable(alpha) else (lambda n: alpha)
    for it in range(max_iters + 1):
        z = np.asarray(demand_fn(p), dtype=float) - supply
        if np.all(z <= 1e-9):
            return HotelPriceVector(p, True, it)
        if it == max_iters:
            break
        p = np.maximum(p + rate(it) * z, floor)
    return HotelPriceVector(p, False, max_iters)


def distribute(
    model: DemandSystem,
    closed_goods: Sequence[int],
    rng: np.random.Generator,
    method: str = "simaa",
) -> tuple[DemandSystem, HotelPriceVector]:
    """Hand the closed hotels' units to the clients who demand them.

    Runs a fresh price computation from zero with full supply, gives each
    closed good's units to the clients demanding it at those prices, and
    assigns leftovers uniformly at random.  Returns a model whose owned
    mask reflects the assignment; closed goods should be excluded (priced
    out) in subsequent computations.
    """
    fresh = DemandSystem([], model.config)
    fresh.base = model.base
    fresh.weights = model.weights
    fresh.incidence = model.incidence
    fresh.owned = np.zeros_like(model.owned)
    ce = fresh.solve_ce(method=method)
    _, choice = fresh.demand(ce.prices)
    owned = np.zeros_like(model.owned)
    supply = model.config.hotel_supply
    n = fresh.n_clients
    for g in closed_goods:
        demanders = [c for c in range(n) if choice[c] >= 0 and fresh.incidence[choice[c], g]]
        if len(demanders) > supply:
            picked = rng.choice(len(demanders), size=supply, replace=False)
            demanders = [demanders[i] for i in np.sort(picked)]
        for c in demanders:
            owned[c, g] = 1
        leftovers = supply - min(len(demanders), supply)
        if leftovers > 0:
            empty = np.flatnonzero(owned[:, g] == 0)
            take = rng.choice(len(empty), size=min(leftovers, len(empty)), replace=False)
            for i in np.sort(take):
                owned[empty[i], g] = 1
    result = DemandSystem([], model.config)
    result.base = model.base
    result.weights = model.weights
    result.incidence = model.incidence
    result.owned = owned
    return result, ce


def _interim_run(
    model: DemandSystem,
    interim: InterimState | None,
    rng: np.random.Generator,
    method: str = "simaa",
) -> HotelPriceVector:
    if interim is None or not interim.closing_prices:
        return model.solve_ce(method=method)
    closed_idx = sorted(interim.closing_prices)
    lower = np.asarray(interim.asks, dtype=float).copy()
    for g in closed_idx:
        lower[g] = interim.closing_prices[g]
    if interim.use_distribution:
        residual, _ = distribute(model, closed_idx, rng, method=method)
        closed = np.zeros(N_HOTELS, dtype=bool)
        closed[closed_idx] = True
        out = residual.solve_ce(method=method, lower=lower, closed=closed)
        prices = out.prices.copy()
        for g in closed_idx:  # report closing prices, not the +inf sentinel
            prices[g] = interim.closing_prices[g]
        return HotelPriceVector(prices, out.converged, out.iterations, lower, closed)
    return model.solve_ce(method=method, lower=lower)


def generate_hotel_scenarios(
    own_clients: Sequence[ClientPreference],
    n_scenarios: int,
    mode: str,
    rng: np.random.Generator,
    config: CEConfig | None = None,
    interim: InterimState | None = None,
    other_clients: Sequence[ClientPreference] | None = None,
    method: str = "simaa",
    n_other: int | None = None,
) -> list[HotelPriceVector]:
    """S draws from the hotel price distribution.

    random mode samples fresh other-agent clients per scenario; expected and
    exact modes are deterministic, so all S vectors coincide.
    """
    if n_scenarios < 1:
        raise ValueError("need at least one scenario")
    config = config or CEConfig()
    n_other = config.n_other_clients if n_other is None else n_other
    if mode == "random":
        out = []
        for _ in range(n_scenarios):
            others = sample_clients(rng, n_other)
            model = DemandSystem(list(own_clients) + others, config)
            out.append(_interim_run(model, interim, rng, method))
        return out
    if mode == "expected":
        model = DemandSystem(list(own_clients), config, expected_weight=float(n_other))
        vec = _interim_run(model, interim, rng, method)
    elif mode == "exact":
        if other_clients is None:
            raise ValueError("exact mode needs the true other clients")
        model = DemandSystem(list(own_clients) + list(other_clients), config)
        vec = _interim_run(model, interim, rng, method)
    else:
        raise ValueError(f"unknown prediction mode {mode!r}")
    return [replace_prices(vec) for _ in range(n_scenarios)]


def replace_prices(vec: HotelPriceVector) -> HotelPriceVector:
    return HotelPriceVector(
        vec.prices.copy(), vec.converged, vec.iterations, vec.lower_bounds, vec.closed
    )


def rounded_prices(vec: HotelPriceVector) -> np.ndarray:
    """Integral money for pricelines: round half-up."""
    return np.floor(vec.prices + 0.5).astype(np.int64)
