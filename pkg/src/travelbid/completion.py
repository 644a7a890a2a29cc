"""Deterministic optimal allocation of held and purchasable goods to clients.

Given per-client trip utilities, trip/good incidence, linear good prices
(possibly infinite for goods that cannot be bought), owned units (free),
and purchase caps, find the assignment of at most one trip per client that
maximizes total utility minus purchase cost.

Every trip uses at most one unit of any good, which admits two exact fast
paths (no contested good; a single contested good) covering the hot loops
of demand simulation and bid evaluation.  The general case falls back to
an exact integer program.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csc_matrix

INF_PRICE = float("inf")


@dataclass
class CompletionResult:
    value: float                 # integral when all prices are integral
    assignment: np.ndarray       # per client: trip index, or -1 for staying home
    purchases: np.ndarray        # per good: units bought beyond owned


def _effective_prices(prices: np.ndarray, owned: np.ndarray, n_clients: int) -> np.ndarray:
    """Per-good price seen by an individual client, ignoring contention.

    A good with owned units covering every client is free; otherwise the
    listed price applies.
    """
    eff = prices.astype(float).copy()
    eff[owned >= n_clients] = 0.0
    return eff


def _contested_goods(prices: np.ndarray, owned: np.ndarray, n_clients: int) -> np.ndarray:
    nonfree = prices != 0
    return np.flatnonzero(nonfree & (owned > 0) & (owned < n_clients))


def _best_per_client(
    utilities: np.ndarray, trip_costs: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Each client's best trip (or -1) against a shared trip cost vector."""
    surplus = utilities - trip_costs[None, :]
    choice = np.argmax(surplus, axis=1)
    best = surplus[np.arange(len(utilities)), choice]
    choice = np.where(best >= 0, choice, -1)
    best = np.maximum(best, 0.0)
    return best, choice


def solve_completion(
    utilities: np.ndarray,
    incidence: np.ndarray,
    prices: np.ndarray,
    owned: np.ndarray,
    caps: np.ndarray | None = None,
) -> CompletionResult:
    utilities = np.asarray(utilities, dtype=float)
    incidence = np.asarray(incidence)
    prices = np.asarray(prices, dtype=float)
    owned = np.asarray(owned, dtype=np.int64)
    n_clients, n_trips = utilities.shape
    n_goods = incidence.shape[1]
    if caps is None:
        caps = np.full(n_goods, 8, dtype=np.int64)

    contested = _contested_goods(prices, owned, n_clients)
    if len(contested) == 0:
        return _solve_uncontested(utilities, incidence, prices, owned, n_clients)
    if len(contested) == 1:
        return _solve_single_contested(
            utilities, incidence, prices, owned, n_clients, int(contested[0])
        )
    return _solve_ilp(utilities, incidence, prices, owned, caps)


def _finish(
    utilities: np.ndarray,
    incidence: np.ndarray,
    prices: np.ndarray,
    owned: np.ndarray,
    assignment: np.ndarray,
) -> CompletionResult:
    """Recompute exact value and purchases from a final assignment."""
    n_goods = incidence.shape[1]
    demand = np.zeros(n_goods, dtype=np.int64)
    value = 0.0
    for c, t in enumerate(assignment):
        if t >= 0:
            value += utilities[c, t]
            demand += incidence[t]
    purchases = np.maximum(demand - owned, 0)
    finite = np.isfinite(prices)
    value -= float(np.dot(purchases[finite], prices[finite]))
    if np.any(purchases[~finite] > 0):
        raise AssertionError("allocation bought an unbuyable good")
    return CompletionResult(value, assignment, purchases)


def _solve_uncontested(utilities, incidence, prices, owned, n_clients) -> CompletionResult:
    eff = _effective_prices(prices, owned, n_clients)
    trip_costs = incidence @ np.where(np.isfinite(eff), eff, 0.0)
    blocked = (incidence @ (~np.isfinite(eff)).astype(int)) > 0
    trip_costs = np.where(blocked, INF_PRICE, trip_costs)
    _, choice = _best_per_client(utilities, trip_costs)
    # owned>0 goods here are either free-for-all or unused by assumption
    return _finish(utilities, incidence, prices, np.maximum(owned, 0), choice)


def _solve_single_contested(
    utilities, incidence, prices, owned, n_clients, g
) -> CompletionResult:
    eff = _effective_prices(prices, owned, n_clients)
    fin = np.where(np.isfinite(eff), eff, 0.0)
    base_costs = incidence @ fin
    blocked = (incidence @ (~np.isfinite(eff)).astype(int)) > 0
    base_costs = np.where(blocked, INF_PRICE, base_costs)
    best_without, choice_without = _best_per_client(utilities, base_costs)

    # best when a free unit of g is granted: a trip using g pays only for
    # its other goods (and becomes feasible even if g itself is unbuyable)
    uses_g = incidence[:, g].astype(bool)
    other = incidence.copy()
    other[:, g] = 0
    other_blocked = (other @ (~np.isfinite(eff)).astype(int)) > 0
    cost_free = np.where(other_blocked, INF_PRICE, other @ fin)
    free_costs = np.where(uses_g, cost_free, base_costs)
    best_with, choice_with = _best_per_client(utilities, free_costs)

    gains = best_with - best_without
    order = np.argsort(-gains, kind="stable")
    assignment = choice_without.copy()
    units = int(owned[g])
    for c in order:
        if units == 0 or gains[c] <= 0:
            break
        # only grant the unit if the with-choice actually uses g
        t = choice_with[c]
        if t >= 0 and uses_g[t]:
            assignment[c] = t
            units -= 1
    return _finish(utilities, incidence, prices, owned, assignment)


def _solve_ilp(utilities, incidence, prices, owned, caps) -> CompletionResult:
    n_clients, n_trips = utilities.shape
    n_goods = incidence.shape[1]
    buyable = np.flatnonzero(np.isfinite(prices))
    n_gamma = n_clients * n_trips
    n_vars = n_gamma + len(buyable)
    buy_col = {int(g): n_gamma + j for j, g in enumerate(buyable)}

    obj = np.zeros(n_vars)
    for c in range(n_clients):
        obj[c * n_trips : (c + 1) * n_trips] = -utilities[c]
    for g, col in buy_col.items():
        obj[col] = prices[g]

    rows, cols, vals = [], [], []
    ub = []
    r = 0
    for c in range(n_clients):  # one trip per client
        for t in range(n_trips):
            rows.append(r)
            cols.append(c * n_trips + t)
            vals.append(1.0)
        ub.append(1.0)
        r += 1
    for g in range(n_goods):  # capacity: allocation <= owned + buy
        used = np.flatnonzero(incidence[:, g])
        if len(used) == 0:
            continue
        for c in range(n_clients):
            for t in used:
                rows.append(r)
                cols.append(c * n_trips + t)
                vals.append(1.0)
        if g in buy_col:
            rows.append(r)
            cols.append(buy_col[g])
            vals.append(-1.0)
        ub.append(float(owned[g]))
        r += 1
    A = csc_matrix((vals, (rows, cols)), shape=(r, n_vars))
    constraints = LinearConstraint(A, -np.inf, np.asarray(ub))
    upper = np.ones(n_vars)
    for g, col in buy_col.items():
        upper[col] = float(caps[g])
    res = milp(
        obj,
        constraints=constraints,
        integrality=np.ones(n_vars),
        bounds=Bounds(np.zeros(n_vars), upper),
        options={"mip_rel_gap": 0.0},
    )
    if res.status != 0:
        raise RuntimeError(f"completion solve failed: {res.message}")
    x = np.round(res.x).astype(np.int64)
    assignment = np.full(n_clients, -1, dtype=np.int64)
    for c in range(n_clients):
        chosen = np.flatnonzero(x[c * n_trips : (c + 1) * n_trips])
        if len(chosen):
            assignment[c] = chosen[0]
    return _finish(utilities, incidence, prices, owned, assignment)
