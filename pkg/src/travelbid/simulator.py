"""Controlled bidding experiments: one-shot simultaneous hotel auctions.

Each game samples a population of agents, each serving eight clients and
running one bidding strategy.  Agents predict hotel prices by simulating
the market against sampled opponent clients, bid once on the eight hotel
auctions, and are scored by the value of an optimal allocation of their
winnings minus their payments.  Two market mechanisms are supported:

* ``game``: each hotel clears at the 16th-highest submitted bid price
  (zero when fewer than 16 bids arrive) and the top sixteen bids win.
* ``decision``: prices are fixed by a market simulation over the true
  client population; an agent wins a unit wherever it bids at least the
  price, and its bids never influence the price.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .domain import ClientPreference, sample_clients
from .completion import solve_completion
from .hotels import (
    CEConfig,
    DemandSystem,
    base_utilities,
    ce_incidence,
    rounded_prices,
)
from .optimizer import (
    BidInstance,
    ScenarioPrices,
    make_saa_star_scenarios,
    mu_strategy,
    solve_bid_saa,
    solve_evm,
)

N_HOTELS = 8
HOTEL_SUPPLY = 16
MAX_AGENTS = 32
AGENT_PROB = 0.5
CLIENTS_PER_AGENT = 8

DEFAULT_POOL = ("SAA", "SAA*", "SMU", "AMU", "TMU", "BE", "TMU*", "BE*")
ALL_STRATEGIES = ("SAA", "SAA*", "EVM", "SMU", "AMU", "TMU", "BE", "TMU*", "BE*")


@dataclass
class ExperimentConfig:
    mode: str = "game"                    # "game" or "decision"
    n_games: int = 500
    strategies: tuple[str, ...] = DEFAULT_POOL
    n_scenarios: int = 8
    star_aux_factor: int = 2              # auxiliary sample multiple for SAA*
    alpha: float = 1.0 / 24.0
    max_iters: int = 10_000
    seed: int = 0
    workers: int = 1

    def __post_init__(self) -> None:
        if self.mode not in ("game", "decision"):
            raise ValueError(f"unknown experiment mode {self.mode!r}")
        for s in self.strategies:
            if s not in ALL_STRATEGIES:
                raise ValueError(f"unknown strategy {s!r}")
        if self.n_games < 1 or self.n_scenarios < 1:
            raise ValueError("n_games and n_scenarios must be positive")

    def ce_config(self) -> CEConfig:
        return CEConfig(alpha=self.alpha, max_iters=self.max_iters)


@dataclass
class GameRecord:
    game_index: int
    mode: str
    n_agents: int
    strategies: list[str]
    scores: list[float]
    clearing_prices: list[int]

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @staticmethod
    def from_json(line: str) -> "GameRecord":
        return GameRecord(**json.loads(line))


@dataclass
class StrategySummary:
    strategy: str
    n_games: int
    mean: float
    ci95: float          # 1.96 * standard error of the per-game means


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[GameRecord]
    summaries: list[StrategySummary]


def _scenario_sampler(
    own_clients: Sequence[ClientPreference],
    n_other: int,
    config: CEConfig,
) -> Callable[[np.random.Generator], ScenarioPrices]:
    def draw(rng: np.random.Generator) -> ScenarioPrices:
        others = sample_clients(rng, n_other)
        model = DemandSystem(list(own_clients) + others, config)
        prices = rounded_prices(model.solve_ce(method="simaa"))
        return ScenarioPrices(buy=tuple(int(p) for p in prices), sell=(0,) * N_HOTELS)

    return draw


def _agent_bids(
    strategy: str,
    clients: Sequence[ClientPreference],
    rng: np.random.Generator,
    cfg: ExperimentConfig,
) -> dict[int, tuple[int, ...]]:
    """One agent's hotel bid vectors for the eight hotel auctions."""
    ce_cfg = cfg.ce_config()
    # the agent's belief about the number of competitors, drawn once
    believed = max(1, int(rng.binomial(MAX_AGENTS, AGENT_PROB)))
    n_other = CLIENTS_PER_AGENT * max(0, believed - 1)
    sampler = _scenario_sampler(clients, n_other, ce_cfg)
    if strategy == "SAA*":
        n = max(cfg.n_scenarios, N_HOTELS * CLIENTS_PER_AGENT)
        scenarios = make_saa_star_scenarios(
            sampler, n, (CLIENTS_PER_AGENT,) * N_HOTELS, rng,
            aux_factor=cfg.star_aux_factor,
        )
    else:
        scenarios = [sampler(rng) for _ in range(cfg.n_scenarios)]

    inst = BidInstance(
        kinds=("h",) * N_HOTELS,
        utilities=base_utilities(clients, ce_cfg),
        incidence=np.asarray(ce_incidence, dtype=np.int64),
        owned=np.zeros(N_HOTELS, dtype=np.int64),
        scenarios=scenarios,
    )
    if strategy in ("SAA", "SAA*"):
        sol = solve_bid_saa(inst)
    elif strategy == "EVM":
        sol = solve_evm(inst)
    else:
        sol = mu_strategy(strategy, inst)
    return sol.hotel_bids


def clear_hotel_auction(
    bids: Sequence[Sequence[int]],
    rng: np.random.Generator,
    supply: int = HOTEL_SUPPLY,
) -> tuple[int, np.ndarray]:
    """Clear one multi-unit auction: top ``supply`` bids win at the price of
    the last winning rank (zero when under-subscribed); margin ties random."""
    entries = []
    for agent, vec in enumerate(bids):
        for price in vec:
            entries.append((int(price), rng.random(), agent))
    entries.sort(key=lambda e: (-e[0], e[1]))
    won = np.zeros(len(bids), dtype=np.int64)
    if len(entries) < supply:
        price = 0
        winners = entries
    else:
        price = entries[supply - 1][0]
        winners = entries[:supply]
    for p, _, agent in winners:
        if p >= price:
            won[agent] += 1
    return price, won


def _score_agent(
    clients: Sequence[ClientPreference],
    won: np.ndarray,
    prices: np.ndarray,
    config: CEConfig,
) -> float:
    """Allocation value of the winnings minus the payments."""
    utilities = base_utilities(clients, config)
    unavailable = np.full(N_HOTELS, np.inf)
    caps = np.zeros(N_HOTELS, dtype=np.int64)
    result = solve_completion(
        utilities, np.asarray(ce_incidence, dtype=np.int64), unavailable, won, caps
    )
    return float(result.value) - float(np.dot(won, prices))


def run_game(cfg: ExperimentConfig, game_index: int, seed_state: int) -> GameRecord:
    rng = np.random.default_rng(seed_state)
    n_agents = max(1, int(rng.binomial(MAX_AGENTS, AGENT_PROB)))
    strat_idx = rng.integers(0, len(cfg.strategies), size=n_agents)
    strategies = [cfg.strategies[int(i)] for i in strat_idx]
    clients = [sample_clients(rng, CLIENTS_PER_AGENT) for _ in range(n_agents)]
    bids = [_agent_bids(strategies[a], clients[a], rng, cfg) for a in range(n_agents)]

    ce_cfg = cfg.ce_config()
    prices = np.zeros(N_HOTELS, dtype=np.int64)
    won = np.zeros((n_agents, N_HOTELS), dtype=np.int64)
    if cfg.mode == "decision":
        population = [c for cl in clients for c in cl]
        truth = DemandSystem(population, ce_cfg)
        prices = rounded_prices(truth.solve_ce(method="simaa"))
        for a in range(n_agents):
            for g in range(N_HOTELS):
                won[a, g] = sum(1 for p in bids[a].get(g, ()) if p >= prices[g])
    else:
        for g in range(N_HOTELS):
            per_agent = [bids[a].get(g, ()) for a in range(n_agents)]
            prices[g], won[:, g] = clear_hotel_auction(per_agent, rng)

    scores = [
        _score_agent(clients[a], won[a], prices.astype(float), ce_cfg)
        for a in range(n_agents)
    ]
    return GameRecord(
        game_index=game_index,
        mode=cfg.mode,
        n_agents=n_agents,
        strategies=strategies,
        scores=scores,
        clearing_prices=[int(p) for p in prices],
    )


def _game_seeds(seed: int, n_games: int) -> list[int]:
    """Per-game seeds independent of the worker count."""
    ss = np.random.SeedSequence(seed)
    return [int(s) for s in ss.generate_state(n_games, dtype=np.uint64)]


def _worker(args) -> GameRecord:
    cfg, i, s = args
    return run_game(cfg, i, s)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    seeds = _game_seeds(cfg.seed, cfg.n_games)
    jobs = [(cfg, i, seeds[i]) for i in range(cfg.n_games)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(_worker, jobs, chunksize=4))
    else:
        records = [_worker(j) for j in jobs]
    return ExperimentResult(cfg, records, summarize(records))


def summarize(records: Sequence[GameRecord]) -> list[StrategySummary]:
    """Per-strategy mean of per-game average scores with a 95% interval."""
    per_game: dict[str, list[float]] = {}
    for rec in records:
        totals: dict[str, list[float]] = {}
        for strat, score in zip(rec.strategies, rec.scores):
            totals.setdefault(strat, []).append(score)
        for strat, vals in totals.items():
            per_game.setdefault(strat, []).append(float(np.mean(vals)))
    out = []
    for strat in sorted(per_game):
        vals = np.asarray(per_game[strat])
        n = len(vals)
        se = float(vals.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
        out.append(StrategySummary(strat, n, float(vals.mean()), 1.96 * se))
    return out


def records_to_jsonl(records: Sequence[GameRecord]) -> str:
    return "\n".join(r.to_json() for r in records) + "\n"


def records_from_jsonl(text: str) -> list[GameRecord]:
    return [GameRecord.from_json(line) for line in text.splitlines() if line.strip()]
