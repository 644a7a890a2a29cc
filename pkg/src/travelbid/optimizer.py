"""Bid optimization: the two-stage stochastic bidding program and heuristics.

The core problem: choose hotel bid prices, immediate flight/event trades,
and per-scenario future trades to maximize expected client value minus net
cost over a set of sampled future-price scenarios.  ``solve_bid_saa``
solves it exactly (linear prices per scenario) through an integer linear
program; ``solve_evm`` first collapses the scenarios to their mean;
``mu_strategy`` implements six marginal-utility baselines; and
``make_saa_star_scenarios`` builds the upper-limit-seeded scenario sets
that keep high clearing prices biddable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csc_matrix

from .completion import solve_completion

Number = int | float | Fraction

MAX_CLIENTS = 8
MAX_SCENARIOS = 100
MAX_TRIPS_PER_CLIENT = 680


class OptimizerError(ValueError):
    """Malformed or out-of-guardrail bid instances."""


@dataclass(frozen=True)
class ScenarioPrices:
    """Linear future prices: one buy and one sell price per good."""

    buy: tuple[Number, ...]
    sell: tuple[Number, ...]
    weight: Fraction = Fraction(1)


@dataclass
class BidInstance:
    kinds: tuple[str, ...]            # per good: 'f' flight, 'h' hotel, 'e' event
    utilities: np.ndarray             # clients x trips, integral money
    incidence: np.ndarray             # trips x goods, units required
    owned: np.ndarray                 # per good
    scenarios: list[ScenarioPrices]
    hqw: np.ndarray | None = None     # hotels: units the agent must keep bidding on
    current_buy: np.ndarray | None = None    # flights/events
    current_sell: np.ndarray | None = None   # events
    hotel_ask: np.ndarray | None = None      # lower bound on hotel bid prices
    max_units: int = 8

    def __post_init__(self) -> None:
        g = len(self.kinds)
        self.utilities = np.asarray(self.utilities)
        self.incidence = np.asarray(self.incidence)
        self.owned = np.asarray(self.owned, dtype=np.int64)
        if self.hqw is None:
            self.hqw = np.zeros(g, dtype=np.int64)
        if self.current_buy is None:
            self.current_buy = np.zeros(g)
        if self.current_sell is None:
            self.current_sell = np.zeros(g)
        if self.hotel_ask is None:
            self.hotel_ask = np.zeros(g)
        self.hqw = np.asarray(self.hqw, dtype=np.int64)
        c, t = self.utilities.shape
        if c > MAX_CLIENTS:
            raise OptimizerError(f"at most {MAX_CLIENTS} clients supported, got {c}")
        if len(self.scenarios) > MAX_SCENARIOS:
            raise OptimizerError(f"at most {MAX_SCENARIOS} scenarios supported")
        if not self.scenarios:
            raise OptimizerError("need at least one scenario")
        if t > MAX_TRIPS_PER_CLIENT:
            raise OptimizerError("trip enumeration exceeds the supported bound")
        if self.incidence.shape != (t, g):
            raise OptimizerError("incidence shape does not match trips x goods")
        for a in range(g):
            if self.hqw[a] and self.kinds[a] != "h":
                raise OptimizerError("hqw applies to hotel goods only")
            if self.hqw[a] > self.max_units:
                raise OptimizerError(
                    f"hqw {self.hqw[a]} exceeds the priceline length {self.max_units}"
                )
        for sc in self.scenarios:
            if len(sc.buy) != g or len(sc.sell) != g:
                raise OptimizerError("scenario prices do not cover every good")

    @property
    def n_goods(self) -> int:
        return len(self.kinds)

    @property
    def n_clients(self) -> int:
        return self.utilities.shape[0]


@dataclass
class BidSolution:
    hotel_bids: dict[int, tuple[int, ...]]       # good -> unit bid prices, descending
    buy_now: np.ndarray                          # per good (flights/events)
    sell_now: np.ndarray                         # per good (events)
    buy_later: list[np.ndarray]                  # per original scenario
    sell_later: list[np.ndarray]
    assignment: list[np.ndarray]                 # per original scenario, trip per client
    objective: Fraction                          # per-scenario weighted mean value

    @property
    def objective_float(self) -> float:
        return float(self.objective)


def _dedupe(scenarios: Sequence[ScenarioPrices]):
    """Merge identical price vectors, keeping the original->group mapping."""
    total = sum((s.weight for s in scenarios), Fraction(0))
    groups: dict[tuple, int] = {}
    reps: list[ScenarioPrices] = []
    weights: list[Fraction] = []
    mapping = []
    for s in scenarios:
        key = (tuple(s.buy), tuple(s.sell))
        if key not in groups:
            groups[key] = len(reps)
            reps.append(s)
            weights.append(Fraction(0))
        gi = groups[key]
        weights[gi] += Fraction(s.weight) / total
        mapping.append(gi)
    return reps, weights, mapping


def hotel_candidate_prices(inst: BidInstance) -> dict[int, list[int]]:
    """Distinct scenario prices per hotel, floored at the current ask."""
    cands: dict[int, list[int]] = {}
    for g, kind in enumerate(inst.kinds):
        if kind != "h":
            continue
        ask = _as_int(inst.hotel_ask[g])
        prices = {ask}
        for sc in inst.scenarios:
            p = _as_int(sc.buy[g])
            if p >= ask:
                prices.add(p)
        cands[g] = sorted(prices)
    return cands


def _as_int(x: Number) -> int:
    r = int(math.floor(float(x) + 0.5))
    return r


def solve_bid_saa(inst: BidInstance) -> BidSolution:
    """Exact optimum of the two-stage bidding program over the given scenarios.

    The reported objective is the weighted per-scenario mean.
    """
    reps, weights, mapping = _dedupe(inst.scenarios)
    S = len(reps)
    C, T = inst.utilities.shape
    G = inst.n_goods
    flights = [g for g in range(G) if inst.kinds[g] == "f"]
    hotels = [g for g in range(G) if inst.kinds[g] == "h"]
    events = [g for g in range(G) if inst.kinds[g] == "e"]
    cands = hotel_candidate_prices(inst)
    units = {g: max(int(inst.hqw[g]), min(inst.max_units, C * int(inst.incidence[:, g].max(initial=0)) or 1)) for g in hotels}

    # -- variable layout -------------------------------------------------
    n_gamma = S * C * T
    idx = n_gamma
    phi_cols: dict[tuple[int, int, int], int] = {}
    for g in hotels:
        for q in range(units[g]):
            for p in cands[g]:
                phi_cols[(g, q, p)] = idx
                idx += 1
    mu_cols = {g: idx + i for i, g in enumerate(flights + events)}
    idx += len(mu_cols)
    nu_cols = {g: idx + i for i, g in enumerate(events)}
    idx += len(nu_cols)
    ups_cols = {(g, s): idx + i for i, (s, g) in enumerate((s, g) for s in range(S) for g in flights + events)}
    idx += len(ups_cols)
    zeta_cols = {(g, s): idx + i for i, (s, g) in enumerate((s, g) for s in range(S) for g in events)}
    idx += len(zeta_cols)
    n_vars = idx

    w = [float(x) for x in weights]
    obj = np.zeros(n_vars)
    for s in range(S):
        for c in range(C):
            base = s * C * T + c * T
            obj[base : base + T] = -w[s] * inst.utilities[c].astype(float)
    for (g, q, p), col in phi_cols.items():
        obj[col] = sum(
            w[s] * float(reps[s].buy[g]) for s in range(S) if p >= _as_int(reps[s].buy[g])
        )
    for g, col in mu_cols.items():
        sign = 1.0  # buying now always costs
        obj[col] = sign * float(inst.current_buy[g])
    for g, col in nu_cols.items():
        obj[col] = -float(inst.current_sell[g])
    for (g, s), col in ups_cols.items():
        obj[col] = w[s] * float(reps[s].buy[g])
    for (g, s), col in zeta_cols.items():
        obj[col] = -w[s] * float(reps[s].sell[g])

    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    lo: list[float] = []
    hi: list[float] = []
    r = 0

    def add(row_entries, lower, upper):
        nonlocal r
        for col, v in row_entries:
            rows.append(r)
            cols.append(col)
            vals.append(v)
        lo.append(lower)
        hi.append(upper)
        r += 1

    # one trip per client per scenario
    for s in range(S):
        for c in range(C):
            base = s * C * T + c * T
            add([(base + t, 1.0) for t in range(T)], -np.inf, 1.0)
    # allocation <= own + buys (- sells) per good per scenario
    for s in range(S):
        for g in range(G):
            used = np.flatnonzero(inst.incidence[:, g])
            # flights are only ever bought, so an unused flight needs no row;
            # events can be sold short without one
            if len(used) == 0 and inst.kinds[g] == "f":
                continue
            entries = []
            for c in range(C):
                base = s * C * T + c * T
                for t in used:
                    entries.append((base + int(t), float(inst.incidence[t, g])))
            if inst.kinds[g] == "f":
                entries.append((mu_cols[g], -1.0))
                entries.append((ups_cols[(g, s)], -1.0))
            elif inst.kinds[g] == "h":
                y = _as_int(reps[s].buy[g])
                for q in range(units[g]):
                    for p in cands[g]:
                        if p >= y:
                            entries.append((phi_cols[(g, q, p)], -1.0))
            else:
                entries.append((mu_cols[g], -1.0))
                entries.append((ups_cols[(g, s)], -1.0))
                entries.append((nu_cols[g], 1.0))
                entries.append((zeta_cols[(g, s)], 1.0))
            if entries:
                add(entries, -np.inf, float(inst.owned[g]))
    # hotel bid structure: at least hqw units, one price per unit
    for g in hotels:
        if inst.hqw[g] > 0:
            add(
                [(phi_cols[(g, q, p)], 1.0) for q in range(units[g]) for p in cands[g]],
                float(inst.hqw[g]),
                np.inf,
            )
        for q in range(units[g]):
            add([(phi_cols[(g, q, p)], 1.0) for p in cands[g]], -np.inf, 1.0)

    A = csc_matrix((vals, (rows, cols)), shape=(r, n_vars))
    upper = np.empty(n_vars)
    upper[:n_gamma] = 1.0
    for col in phi_cols.values():
        upper[col] = 1.0
    cap = float(inst.max_units)
    for col in mu_cols.values():
        upper[col] = cap
    for g, col in nu_cols.items():
        upper[col] = cap + float(inst.owned[g])
    for col in ups_cols.values():
        upper[col] = cap
    for (g, s), col in zeta_cols.items():
        upper[col] = cap + float(inst.owned[g])
    res = milp(
        obj,
        constraints=LinearConstraint(A, np.asarray(lo), np.asarray(hi)),
        integrality=np.ones(n_vars),
        bounds=Bounds(np.zeros(n_vars), upper),
        options={"mip_rel_gap": 0.0},
    )
    if res.status != 0:
        raise OptimizerError(f"bid solve failed: {res.message}")
    x = np.round(res.x).astype(np.int64)

    hotel_bids: dict[int, tuple[int, ...]] = {}
    for g in hotels:
        chosen = [p for (gg, q, p), col in phi_cols.items() if gg == g and x[col]]
        if chosen:
            hotel_bids[g] = tuple(sorted(chosen, reverse=True))
    buy_now = np.zeros(G, dtype=np.int64)
    sell_now = np.zeros(G, dtype=np.int64)
    for g, col in mu_cols.items():
        buy_now[g] = x[col]
    for g, col in nu_cols.items():
        sell_now[g] = x[col]
    rep_buy_later = [np.zeros(G, dtype=np.int64) for _ in range(S)]
    rep_sell_later = [np.zeros(G, dtype=np.int64) for _ in range(S)]
    for (g, s), col in ups_cols.items():
        rep_buy_later[s][g] = x[col]
    for (g, s), col in zeta_cols.items():
        rep_sell_later[s][g] = x[col]
    rep_assign = []
    for s in range(S):
        a = np.full(C, -1, dtype=np.int64)
        for c in range(C):
            base = s * C * T + c * T
            chosen = np.flatnonzero(x[base : base + T])
            if len(chosen):
                a[c] = chosen[0]
        rep_assign.append(a)

    objective = _exact_objective(
        inst, reps, weights, hotel_bids, buy_now, sell_now,
        rep_buy_later, rep_sell_later, rep_assign,
    )
    return BidSolution(
        hotel_bids=hotel_bids,
        buy_now=buy_now,
        sell_now=sell_now,
        buy_later=[rep_buy_later[mapping[i]] for i in range(len(inst.scenarios))],
        sell_later=[rep_sell_later[mapping[i]] for i in range(len(inst.scenarios))],
        assignment=[rep_assign[mapping[i]] for i in range(len(inst.scenarios))],
        objective=objective,
    )


def _exact_objective(
    inst, reps, weights, hotel_bids, buy_now, sell_now, buy_later, sell_later, assign
) -> Fraction:
    total = Fraction(0)
    for s, rep in enumerate(reps):
        value = Fraction(0)
        for c, t in enumerate(assign[s]):
            if t >= 0:
                value += Fraction(int(inst.utilities[c, t]))
        for g, kind in enumerate(inst.kinds):
            if kind == "f":
                value -= Fraction(inst.current_buy[g]) * int(buy_now[g])
                value -= Fraction(rep.buy[g]) * int(buy_later[s][g])
            elif kind == "h":
                y = _as_int(rep.buy[g])
                won = sum(1 for p in hotel_bids.get(g, ()) if p >= y)
                value -= Fraction(rep.buy[g]) * won
            else:
                value += Fraction(inst.current_sell[g]) * int(sell_now[g])
                value += Fraction(rep.sell[g]) * int(sell_later[s][g])
                value -= Fraction(inst.current_buy[g]) * int(buy_now[g])
                value -= Fraction(rep.buy[g]) * int(buy_later[s][g])
        total += weights[s] * value
    return total


def average_scenario(scenarios: Sequence[ScenarioPrices]) -> ScenarioPrices:
    total = sum((s.weight for s in scenarios), Fraction(0))
    g = len(scenarios[0].buy)
    buy = tuple(
        sum((Fraction(s.weight) * Fraction(s.buy[a]) for s in scenarios), Fraction(0)) / total
        for a in range(g)
    )
    sell = tuple(
        sum((Fraction(s.weight) * Fraction(s.sell[a]) for s in scenarios), Fraction(0)) / total
        for a in range(g)
    )
    return ScenarioPrices(buy=buy, sell=sell, weight=Fraction(1))


def solve_evm(inst: BidInstance) -> BidSolution:
    """Expected value method: solve against the single average scenario."""
    collapsed = BidInstance(
        kinds=inst.kinds,
        utilities=inst.utilities,
        incidence=inst.incidence,
        owned=inst.owned,
        scenarios=[average_scenario(inst.scenarios)],
        hqw=inst.hqw,
        current_buy=inst.current_buy,
        current_sell=inst.current_sell,
        hotel_ask=inst.hotel_ask,
        max_units=inst.max_units,
    )
    sol = solve_bid_saa(collapsed)
    n = len(inst.scenarios)
    return BidSolution(
        hotel_bids=sol.hotel_bids,
        buy_now=sol.buy_now,
        sell_now=sol.sell_now,
        buy_later=[sol.buy_later[0]] * n,
        sell_later=[sol.sell_later[0]] * n,
        assignment=[sol.assignment[0]] * n,
        objective=sol.objective,
    )


# -- marginal-utility baselines ------------------------------------------


def _completion_prices(inst: BidInstance, scenario: ScenarioPrices) -> np.ndarray:
    """Linear purchase price per good for deterministic completion: hotels at
    the scenario price, flights/events at the cheaper of now and later."""
    prices = np.empty(inst.n_goods)
    for g, kind in enumerate(inst.kinds):
        if kind == "h":
            prices[g] = float(scenario.buy[g])
        else:
            prices[g] = min(float(inst.current_buy[g]), float(scenario.buy[g]))
    return prices


def marginal_utility(
    inst: BidInstance, scenario: ScenarioPrices, good: int, unit: int,
    prices: np.ndarray | None = None,
) -> float:
    """Completion value gain from holding the unit-th copy of ``good`` free."""
    if prices is None:
        prices = _completion_prices(inst, scenario)
    caps = np.full(inst.n_goods, inst.max_units)
    with_k = inst.owned.copy()
    with_k[good] += unit
    without = inst.owned.copy()
    without[good] += unit - 1
    v1 = solve_completion(inst.utilities, inst.incidence, prices, with_k, caps).value
    v0 = solve_completion(inst.utilities, inst.incidence, prices, without, caps).value
    return v1 - v0


def _mu_bid_vector(
    inst: BidInstance,
    prices: np.ndarray,
    goods: Sequence[int],
    unit_caps: dict[int, int],
) -> dict[int, tuple[int, ...]]:
    """Per-good descending marginal utilities at the given completion prices."""
    caps = np.full(inst.n_goods, inst.max_units)
    bids: dict[int, tuple[int, ...]] = {}
    values: dict[int, float] = {}

    def completion_value(owned):
        return solve_completion(inst.utilities, inst.incidence, prices, owned, caps).value

    base = completion_value(inst.owned)
    for g in goods:
        mus = []
        prev = base
        owned = inst.owned.copy()
        for k in range(1, unit_caps.get(g, inst.max_units) + 1):
            owned[g] += 1
            cur = completion_value(owned)
            mu = cur - prev
            prev = cur
            if mu <= 0:
                break
            mus.append(_as_int(mu))
        if mus:
            bids[g] = tuple(sorted(mus, reverse=True))
    return bids


def _target_set(inst: BidInstance, scenario: ScenarioPrices) -> dict[int, int]:
    """Hotel units needed by the optimal completion of a scenario."""
    prices = _completion_prices(inst, scenario)
    caps = np.full(inst.n_goods, inst.max_units)
    result = solve_completion(inst.utilities, inst.incidence, prices, inst.owned, caps)
    demand = np.zeros(inst.n_goods, dtype=np.int64)
    for c, t in enumerate(result.assignment):
        if t >= 0:
            demand += inst.incidence[t]
    targets = {}
    for g, kind in enumerate(inst.kinds):
        if kind == "h":
            need = int(max(0, demand[g] - inst.owned[g]))
            if need:
                targets[g] = need
    return targets


def evaluate_hotel_bids(
    inst: BidInstance, bids: dict[int, tuple[int, ...]]
) -> Fraction:
    """Expected profit of a hotel bid vector over the instance's scenarios.

    Per scenario: second-price winnings per hotel, then optimal completion
    with the winnings held and hotels otherwise unavailable.
    """
    reps, weights, _ = _dedupe(inst.scenarios)
    caps = np.full(inst.n_goods, inst.max_units)
    total = Fraction(0)
    for s, rep in enumerate(reps):
        owned = inst.owned.copy()
        payment = Fraction(0)
        prices = np.empty(inst.n_goods)
        for g, kind in enumerate(inst.kinds):
            if kind == "h":
                y = _as_int(rep.buy[g])
                won = sum(1 for p in bids.get(g, ()) if p >= y)
                owned[g] += won
                payment += Fraction(rep.buy[g]) * won
                prices[g] = float("inf")
            else:
                prices[g] = min(float(inst.current_buy[g]), float(rep.buy[g]))
        value = solve_completion(inst.utilities, inst.incidence, prices, owned, caps).value
        total += weights[s] * (Fraction(value) - payment)
    return total


MU_KINDS = ("SMU", "AMU", "TMU", "BE", "TMU*", "BE*")


def mu_strategy(kind: str, inst: BidInstance) -> BidSolution:
    """Marginal-utility bidding heuristics (hotel bids only)."""
    if kind not in MU_KINDS:
        raise OptimizerError(f"unknown marginal-utility strategy {kind!r}")
    hotels = [g for g in range(inst.n_goods) if inst.kinds[g] == "h"]
    avg = average_scenario(inst.scenarios)
    all_caps = {g: inst.max_units for g in hotels}

    if kind == "SMU":
        bids = _mu_bid_vector(inst, _completion_prices(inst, avg), hotels, all_caps)
    elif kind == "AMU":
        reps, weights, _ = _dedupe(inst.scenarios)
        acc: dict[int, list[Fraction]] = {g: [Fraction(0)] * inst.max_units for g in hotels}
        for s, rep in enumerate(reps):
            vec = _mu_bid_vector(inst, _completion_prices(inst, rep), hotels, all_caps)
            for g, mus in vec.items():
                for k, mu in enumerate(mus):
                    acc[g][k] += weights[s] * mu
        bids = {}
        for g, mus in acc.items():
            vals = [_as_int(m) for m in mus if m > 0]
            if vals:
                bids[g] = tuple(sorted(vals, reverse=True))
    elif kind in ("TMU", "TMU*"):
        bids = _tmu_bids(inst, avg, starred=kind.endswith("*"))
    else:  # BE / BE*
        starred = kind.endswith("*")
        reps, _, _ = _dedupe(inst.scenarios)
        best_bids: dict[int, tuple[int, ...]] = {}
        best_score: Fraction | None = None
        for rep in reps:
            cand = _tmu_bids(inst, rep, starred=starred)
            score = evaluate_hotel_bids(inst, cand)
            if best_score is None or score > best_score:
                best_score = score
                best_bids = cand
        bids = best_bids

    n = len(inst.scenarios)
    return BidSolution(
        hotel_bids=bids,
        buy_now=np.zeros(inst.n_goods, dtype=np.int64),
        sell_now=np.zeros(inst.n_goods, dtype=np.int64),
        buy_later=[np.zeros(inst.n_goods, dtype=np.int64)] * n,
        sell_later=[np.zeros(inst.n_goods, dtype=np.int64)] * n,
        assignment=[np.full(inst.n_clients, -1, dtype=np.int64)] * n,
        objective=evaluate_hotel_bids(inst, bids),
    )


def _tmu_bids(
    inst: BidInstance, scenario: ScenarioPrices, starred: bool
) -> dict[int, tuple[int, ...]]:
    targets = _target_set(inst, scenario)
    prices = _completion_prices(inst, scenario)
    if starred:
        prices = prices.copy()
        for g, kind in enumerate(inst.kinds):
            if kind == "h" and g not in targets:
                prices[g] = float("inf")
    return _mu_bid_vector(inst, prices, sorted(targets), targets)


# -- SAA* scenario construction and the tail-probability check ------------


def make_saa_star_scenarios(
    sampler: Callable[[np.random.Generator], ScenarioPrices],
    n_scenarios: int,
    unit_counts: Sequence[int],
    rng: np.random.Generator,
    aux_factor: int = 10,
    top_fraction: float = 0.1,
) -> list[ScenarioPrices]:
    """Scenario set seeded with per-unit upper-limit scenarios.

    For each unit of each bid-relevant good, one synthetic scenario pins
    that good's price at the upper limit of its observed range (empirical
    max over an auxiliary sample) and sets every other good to its mean
    conditioned on the pinned good being in its top decile.  The remaining
    scenarios are sampled from the given distribution.
    """
    unit_counts = np.asarray(unit_counts, dtype=np.int64)
    n_units = int(unit_counts.sum())
    if n_scenarios < n_units:
        raise OptimizerError(
            f"need at least {n_units} scenarios to seed every good unit, got {n_scenarios}"
        )
    aux = [sampler(rng) for _ in range(max(aux_factor * n_scenarios, 50))]
    buy = np.array([[float(p) for p in s.buy] for s in aux])
    sell = np.array([[float(p) for p in s.sell] for s in aux])
    synthetic: list[ScenarioPrices] = []
    for g, count in enumerate(unit_counts):
        if count == 0:
            continue
        upper = buy[:, g].max()
        cutoff = np.quantile(buy[:, g], 1.0 - top_fraction)
        mask = buy[:, g] >= cutoff
        buy_mean = buy[mask].mean(axis=0)
        sell_mean = sell[mask].mean(axis=0)
        b = [_as_int(x) for x in buy_mean]
        a = [_as_int(x) for x in sell_mean]
        b[g] = _as_int(upper)
        a[g] = _as_int(sell[mask, g].mean())
        sc = ScenarioPrices(buy=tuple(b), sell=tuple(a))
        synthetic.extend([sc] * int(count))
    sampled = [sampler(rng) for _ in range(n_scenarios - n_units)]
    return synthetic + sampled


def instance_to_dict(inst: BidInstance) -> dict:
    return {
        "kinds": list(inst.kinds),
        "utilities": inst.utilities.tolist(),
        "incidence": inst.incidence.tolist(),
        "owned": inst.owned.tolist(),
        "hqw": inst.hqw.tolist(),
        "current_buy": np.asarray(inst.current_buy, dtype=float).tolist(),
        "current_sell": np.asarray(inst.current_sell, dtype=float).tolist(),
        "hotel_ask": np.asarray(inst.hotel_ask, dtype=float).tolist(),
        "max_units": inst.max_units,
        "scenarios": [
            {"buy": [float(p) for p in s.buy], "sell": [float(p) for p in s.sell],
             "weight": str(s.weight)}
            for s in inst.scenarios
        ],
    }


def instance_from_dict(data: dict) -> BidInstance:
    try:
        scenarios = [
            ScenarioPrices(
                buy=tuple(s["buy"]),
                sell=tuple(s["sell"]),
                weight=Fraction(s.get("weight", 1)),
            )
            for s in data["scenarios"]
        ]
        return BidInstance(
            kinds=tuple(data["kinds"]),
            utilities=np.asarray(data["utilities"]),
            incidence=np.asarray(data["incidence"]),
            owned=np.asarray(data["owned"]),
            scenarios=scenarios,
            hqw=np.asarray(data["hqw"]) if "hqw" in data else None,
            current_buy=np.asarray(data["current_buy"]) if "current_buy" in data else None,
            current_sell=np.asarray(data["current_sell"]) if "current_sell" in data else None,
            hotel_ask=np.asarray(data["hotel_ask"]) if "hotel_ask" in data else None,
            max_units=int(data.get("max_units", 8)),
        )
    except (KeyError, TypeError) as exc:
        raise OptimizerError(f"malformed bid instance: {exc}") from exc


def solution_to_dict(sol: BidSolution) -> dict:
    return {
        "hotel_bids": {str(g): list(v) for g, v in sorted(sol.hotel_bids.items())},
        "buy_now": sol.buy_now.tolist(),
        "sell_now": sol.sell_now.tolist(),
        "buy_later": [b.tolist() for b in sol.buy_later],
        "sell_later": [s.tolist() for s in sol.sell_later],
        "assignment": [a.tolist() for a in sol.assignment],
        "objective": str(sol.objective),
        "objective_float": sol.objective_float,
    }


def saa_tail_probability(
    n_samples: int,
    sample_draw: Callable[[np.random.Generator], float] | None = None,
    clearing_draw: Callable[[np.random.Generator], float] | None = None,
    trials: int = 100_000,
    rng: np.random.Generator | None = None,
) -> float:
    """Monte Carlo estimate of P(max of S sampled prices < clearing price).

    With perfect prediction (same distribution on both sides) the true
    value is 1/(S+1).
    """
    rng = rng or np.random.default_rng(0)
    if sample_draw is None and clearing_draw is None:
        samples = rng.random((trials, n_samples)).max(axis=1)
        clearing = rng.random(trials)
        return float(np.mean(samples < clearing))
    sample_draw = sample_draw or (lambda r: float(r.random()))
    clearing_draw = clearing_draw or (lambda r: float(r.random()))
    hits = 0
    for _ in range(trials):
        top = max(sample_draw(rng) for _ in range(n_samples))
        if top < clearing_draw(rng):
            hits += 1
    return hits / trials
