"""Prediction evaluation on self-generated market games.

A ground-truth game is produced by the market process itself: every
minute a simulated ascending-auction equilibrium is computed over the
true client population, one randomly chosen open hotel closes at its
equilibrium price, and its sixteen units are handed to the clients who
demand them.  The eight closing prices are the actual prices.

Predictors are then scored at each minute: at minute zero the six
combinations of price adjustment (ascending vs signed) and client model
(expected, sampled, exactly known), and mid-game the two ways of using
known closing prices (as lower bounds only, or by also distributing the
closed hotels' units).  Errors are reported over the still-open hotels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import ClientPreference, sample_clients
from .hotels import (
    CEConfig,
    DemandSystem,
    InterimState,
    N_HOTELS,
    _interim_run,
    rounded_prices,
)
from .metrics import euclidean, evpp

MINUTE_ZERO_METHODS = (
    "simaa_expected",
    "simaa_random",
    "simaa_exact",
    "tatonnement_expected",
    "tatonnement_random",
    "tatonnement_exact",
)
INTERIM_METHODS = ("interim_lower_bound", "interim_distribution")


@dataclass
class PredictEvalConfig:
    n_games: int = 60
    seed: int = 0
    n_other_clients: int = 56
    n_random_samples: int = 1
    alpha: float = 1.0 / 24.0
    max_iters: int = 10_000
    minutes: tuple[int, ...] = tuple(range(8))

    def ce_config(self) -> CEConfig:
        return CEConfig(alpha=self.alpha, max_iters=self.max_iters)


@dataclass
class MarketGame:
    own_clients: list[ClientPreference]
    other_clients: list[ClientPreference]
    closing_order: list[int]            # hotel index closed at minute 1, 2, ...
    closing_prices: np.ndarray          # per hotel, integral


@dataclass
class MetricRow:
    game: int
    minute: int
    method: str
    euclid: float
    evpp: float


def _assign_closed_units(
    model: DemandSystem, g: int, prices: np.ndarray, rng: np.random.Generator
) -> None:
    """Give hotel g's units to its demanders at the given prices, leftovers
    uniformly at random among clients not yet holding the good."""
    supply = model.config.hotel_supply
    _, choice = model.demand(prices)
    demanders = [
        c for c in range(model.n_clients)
        if choice[c] >= 0 and model.incidence[choice[c], g] and not model.owned[c, g]
    ]
    if len(demanders) > supply:
        picked = rng.choice(len(demanders), size=supply, replace=False)
        demanders = [demanders[i] for i in np.sort(picked)]
    for c in demanders:
        model.owned[c, g] = 1
    leftovers = supply - len(demanders)
    if leftovers > 0:
        empty = np.flatnonzero(model.owned[:, g] == 0)
        take = rng.choice(len(empty), size=min(leftovers, len(empty)), replace=False)
        for i in np.sort(take):
            model.owned[empty[i], g] = 1


def simulate_market_game(rng: np.random.Generator, config: CEConfig) -> MarketGame:
    """One market cascade over the true population.

    Each minute the ascending-auction equilibrium of the still-open goods
    is recomputed over the post-distribution demand state, a random open
    hotel closes at its equilibrium price, and its units go to the clients
    demanding them.
    """
    own = sample_clients(rng, 8)
    others = sample_clients(rng, config.n_other_clients)
    model = DemandSystem(own + others, config)
    order = [int(g) for g in rng.permutation(N_HOTELS)]
    closed = np.zeros(N_HOTELS, dtype=bool)
    closing = np.zeros(N_HOTELS, dtype=np.int64)
    for g in order:
        ce = model.solve_ce(method="simaa", closed=closed)
        closing[g] = int(np.floor(ce.prices[g] + 0.5))
        _assign_closed_units(model, g, ce.prices, rng)
        closed[g] = True
    return MarketGame(own, others, order, closing)


def _predict(
    game: MarketGame,
    method: str,
    minute: int,
    rng: np.random.Generator,
    config: CEConfig,
    sampled_others: list[list[ClientPreference]],
) -> np.ndarray:
    """One rounded price prediction at the start of the given minute.

    The random client model averages the equilibria of a handful of
    sampled opponent populations; the samples are drawn once per game and
    shared by both adjustment methods, so their comparison is paired.
    """
    closed_goods = game.closing_order[:minute]
    if method in INTERIM_METHODS:
        # closing prices of closed hotels are public; open asks are not
        # assumed known here, so open goods keep a zero lower bound
        interim = InterimState(
            closing_prices={g: float(game.closing_prices[g]) for g in closed_goods},
            use_distribution=(method == "interim_distribution"),
        )
        model = DemandSystem(game.own_clients + game.other_clients, config)
        return rounded_prices(_interim_run(model, interim, rng, method="simaa"))
    ce_method, mode = method.split("_", 1)
    if mode == "random":
        stack = [
            DemandSystem(game.own_clients + others, config)
            .solve_ce(method=ce_method)
            .prices
            for others in sampled_others
        ]
        return np.floor(np.mean(stack, axis=0) + 0.5).astype(np.int64)
    if mode == "expected":
        model = DemandSystem(
            game.own_clients, config, expected_weight=float(config.n_other_clients)
        )
    else:
        model = DemandSystem(game.own_clients + game.other_clients, config)
    return rounded_prices(model.solve_ce(method=ce_method))


def _score(
    game: MarketGame, minute: int, predicted: np.ndarray
) -> tuple[float, float]:
    """Euclidean error over the open hotels and the planning regret with
    closed hotels pinned at their closing prices in both vectors."""
    open_goods = np.ones(N_HOTELS, dtype=bool)
    open_goods[game.closing_order[:minute]] = False
    actual = game.closing_prices.astype(float)
    pred_full = predicted.astype(float).copy()
    pred_full[~open_goods] = actual[~open_goods]
    e = euclidean(pred_full[open_goods], actual[open_goods])
    v = evpp(pred_full, actual)
    return e, v


def run_predict_eval(cfg: PredictEvalConfig) -> list[MetricRow]:
    config = CEConfig(
        alpha=cfg.alpha, max_iters=cfg.max_iters, n_other_clients=cfg.n_other_clients
    )
    rows: list[MetricRow] = []
    ss = np.random.SeedSequence(cfg.seed)
    seeds = ss.generate_state(cfg.n_games, dtype=np.uint64)
    for i in range(cfg.n_games):
        rng = np.random.default_rng(int(seeds[i]))
        game = simulate_market_game(rng, config)
        sampled_others = [
            sample_clients(rng, cfg.n_other_clients)
            for _ in range(cfg.n_random_samples)
        ]
        for minute in cfg.minutes:
            methods = MINUTE_ZERO_METHODS if minute == 0 else INTERIM_METHODS
            for method in methods:
                predicted = _predict(game, method, minute, rng, config, sampled_others)
                e, v = _score(game, minute, predicted)
                rows.append(MetricRow(i, minute, method, e, v))
    return rows


def mean_by_method(
    rows: list[MetricRow], minutes: tuple[int, ...] | None = None
) -> dict[str, tuple[float, float]]:
    """Per-method mean (euclidean, planning regret) over the given minutes."""
    acc: dict[str, list[tuple[float, float]]] = {}
    for r in rows:
        if minutes is None or r.minute in minutes:
            acc.setdefault(r.method, []).append((r.euclid, r.evpp))
    return {
        m: (float(np.mean([a for a, _ in v])), float(np.mean([b for _, b in v])))
        for m, v in acc.items()
    }
