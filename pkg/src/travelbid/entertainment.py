"""Entertainment price prediction by historical replay.

Buy and sell prices for event tickets are predicted optimistically from
stored price histories of recent games: the future buy price is the lowest
ask-or-last-trade seen after the current time in a sampled historical game,
the future sell price the highest bid-or-last-trade.  Current prices are
the best seen inside the current bid interval of the sampled game.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

N_EVENT_AUCTIONS = 12
QUOTES_PER_GAME = 18        # one quote every 30 seconds of a 9-minute game
QUOTES_PER_INTERVAL = 2     # a one-minute bid interval
BUY_INIT = 200              # last-trade stand-in before any trade, buy side
SELL_INIT = 0               # and sell side
HISTORY_CAPACITY = 40


@dataclass(frozen=True)
class QuotePoint:
    time: int
    bid: int | None      # best standing buy offer
    ask: int | None      # best standing sell offer
    trade: int | None    # last transaction price at or before this time


@dataclass(frozen=True)
class PriceHistory:
    """One auction's quote series for one game; times strictly increasing."""

    points: tuple[QuotePoint, ...]

    def __post_init__(self) -> None:
        times = [p.time for p in self.points]
        if any(a >= b for a, b in zip(times, times[1:])):
            raise ValueError("quote times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class GameHistory:
    game_id: str
    auctions: tuple[PriceHistory, ...]   # one per event auction


def future_buy(history: PriceHistory, t: int) -> int:
    """Lowest min(last trade, ask) over quotes strictly after index t."""
    if t >= len(history):
        raise ValueError(f"t={t} is at or past the history end ({len(history)})")
    best = None
    for point in history.points[t + 1 :]:
        trade = BUY_INIT if point.trade is None else point.trade
        ask = float("inf") if point.ask is None else point.ask
        candidate = min(trade, ask)
        if best is None or candidate < best:
            best = candidate
    return int(BUY_INIT if best is None else best)


def future_sell(history: PriceHistory, t: int) -> int:
    """Highest max(last trade, bid) over quotes strictly after index t."""
    if t >= len(history):
        raise ValueError(f"t={t} is at or past the history end ({len(history)})")
    best = None
    for point in history.points[t + 1 :]:
        trade = SELL_INIT if point.trade is None else point.trade
        bid = float("-inf") if point.bid is None else point.bid
        candidate = max(trade, bid)
        if best is None or candidate > best:
            best = candidate
    return int(SELL_INIT if best is None else best)


@dataclass(frozen=True)
class EventQuote:
    current_buy: int
    current_sell: int
    future_buy: int
    future_sell: int


class HistoryStore:
    """FIFO ring of the most recent completed games' price histories."""

    def __init__(self, capacity: int = HISTORY_CAPACITY) -> None:
        self._games: deque[GameHistory] = deque(maxlen=capacity)

    def __len__(self) -> int:
        return len(self._games)

    def add(self, game: GameHistory) -> None:
        self._games.append(game)

    def games(self) -> tuple[GameHistory, ...]:
        return tuple(self._games)

    def sample_scenario(self, t: int, rng: np.random.Generator) -> list[EventQuote]:
        """One per-auction price scenario drawn from a random stored game.

        ``t`` is the quote index at which the current bid interval starts.
        Falls back to the initialization constants on an empty store.
        """
        if not self._games:
            return [
                EventQuote(BUY_INIT, SELL_INIT, BUY_INIT, SELL_INIT)
                for _ in range(N_EVENT_AUCTIONS)
            ]
        game = self._games[int(rng.integers(0, len(self._games)))]
        quotes = []
        for history in game.auctions:
            end = min(t + QUOTES_PER_INTERVAL, len(history) - 1)
            cur_buy, cur_sell = BUY_INIT, SELL_INIT
            for point in history.points[t : end + 1]:
                trade = BUY_INIT if point.trade is None else point.trade
                ask = float("inf") if point.ask is None else point.ask
                cur_buy = min(cur_buy, int(min(trade, ask)))
                trade_s = SELL_INIT if point.trade is None else point.trade
                bid = float("-inf") if point.bid is None else point.bid
                cur_sell = max(cur_sell, int(max(trade_s, bid)))
            if end >= len(history) - 1:
                fb, fs = cur_buy, cur_sell
            else:
                fb = future_buy(history, end)
                fs = future_sell(history, end)
            quotes.append(EventQuote(cur_buy, cur_sell, fb, fs))
        return quotes


def sample_event_scenario(
    store: HistoryStore, t: int, rng: np.random.Generator
) -> list[EventQuote]:
    return store.sample_scenario(t, rng)


def synthetic_history(
    rng: np.random.Generator, game_id: str = "synthetic"
) -> GameHistory:
    """A plausible bootstrap game: per-auction mean-reverting walks in [0, 200]."""
    auctions = []
    for _ in range(N_EVENT_AUCTIONS):
        mid = float(rng.uniform(40, 140))
        points = []
        trade: int | None = None
        for i in range(QUOTES_PER_GAME):
            mid += float(rng.normal(0, 12))
            mid = min(190.0, max(10.0, mid))
            spread = float(rng.uniform(4, 30))
            bid = int(max(0, round(mid - spread / 2)))
            ask = int(min(200, round(mid + spread / 2)))
            if rng.random() < 0.4:
                trade = int(round(rng.uniform(bid, ask)))
            points.append(QuotePoint(i, bid, ask, trade))
        auctions.append(PriceHistory(tuple(points)))
    return GameHistory(game_id, tuple(auctions))


def bootstrap_store(seed: int = 0, n_games: int = HISTORY_CAPACITY) -> HistoryStore:
    rng = np.random.default_rng(seed)
    store = HistoryStore()
    for i in range(n_games):
        store.add(synthetic_history(rng, game_id=f"bootstrap-{i}"))
    return store


def history_to_rows(game: GameHistory) -> list[str]:
    """Rows of (game id, auction id, time, bid, ask, trade-or-blank)."""
    rows = []
    for a, history in enumerate(game.auctions):
        for p in history.points:
            bid = "" if p.bid is None else p.bid
            ask = "" if p.ask is None else p.ask
            trade = "" if p.trade is None else p.trade
            rows.append(f"{game.game_id},{a},{p.time},{bid},{ask},{trade}")
    return rows


def history_from_rows(rows: Iterable[str]) -> list[GameHistory]:
    games: dict[str, dict[int, list[QuotePoint]]] = {}
    for row in rows:
        row = row.strip()
        if not row or row.startswith("game"):
            continue
        gid, a, t, bid, ask, trade = row.split(",")
        point = QuotePoint(
            int(t),
            int(bid) if bid else None,
            int(ask) if ask else None,
            int(trade) if trade else None,
        )
        games.setdefault(gid, {}).setdefault(int(a), []).append(point)
    out = []
    for gid, auctions in games.items():
        hist = tuple(
            PriceHistory(tuple(sorted(auctions[a], key=lambda p: p.time)))
            for a in sorted(auctions)
        )
        out.append(GameHistory(gid, hist))
    return out
