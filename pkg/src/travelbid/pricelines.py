"""Pricelines, bids, settlement, and pseudo-auction winner determination.

A pseudo-auction summarizes all other-agent behavior by per-unit price
curves: a buyer priceline gives the marginal cost of the k-th unit bought,
a seller priceline the marginal revenue of the k-th unit sold.  Settlement
is second-price: the bid decides whether a unit trades, the priceline
decides the money.

Money is integral (minor units); prediction engines round half-up before
emitting pricelines so that settlement replays bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .domain import Package

PRICELINE_LEN = 8  # an agent never needs more than 8 units of any good


class PricelineError(ValueError):
    """Raised for malformed pricelines or bids."""


def _check_int(prices: Sequence[int], what: str) -> tuple[int, ...]:
    out = []
    for p in prices:
        if int(p) != p:
            raise PricelineError(f"{what} must be integral money, got {p!r}")
        if p < 0:
            raise PricelineError(f"{what} must be nonnegative, got {p}")
        out.append(int(p))
    return tuple(out)


@dataclass(frozen=True)
class BuyerPriceline:
    """Marginal cost of the k-th unit bought; nondecreasing."""

    prices: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "prices", _check_int(self.prices, "buyer priceline"))
        if any(a > b for a, b in zip(self.prices, self.prices[1:])):
            raise PricelineError("buyer priceline must be nondecreasing")

    @staticmethod
    def flat(unit_price: int, length: int = PRICELINE_LEN) -> "BuyerPriceline":
        return BuyerPriceline((unit_price,) * length)

    def __len__(self) -> int:
        return len(self.prices)


@dataclass(frozen=True)
class SellerPriceline:
    """Marginal revenue of the k-th unit sold; nonincreasing."""

    prices: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "prices", _check_int(self.prices, "seller priceline"))
        if any(a < b for a, b in zip(self.prices, self.prices[1:])):
            raise PricelineError("seller priceline must be nonincreasing")

    @staticmethod
    def flat(unit_price: int, length: int = PRICELINE_LEN) -> "SellerPriceline":
        return SellerPriceline((unit_price,) * length)

    def __len__(self) -> int:
        return len(self.prices)


@dataclass(frozen=True)
class Bid:
    """Buy/sell offers per good: ``buy[g]`` nonincreasing, ``sell[g]`` nondecreasing.

    Goods absent from a mapping carry no offer.
    """

    buy: Mapping[int, tuple[int, ...]] = field(default_factory=dict)
    sell: Mapping[int, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        buy = {g: _check_int(v, "buy offer") for g, v in self.buy.items() if v}
        sell = {g: _check_int(v, "sell offer") for g, v in self.sell.items() if v}
        for g, v in buy.items():
            if any(a < b for a, b in zip(v, v[1:])):
                raise PricelineError(f"buy offers for good {g} must be nonincreasing")
        for g, v in sell.items():
            if any(a > b for a, b in zip(v, v[1:])):
                raise PricelineError(f"sell offers for good {g} must be nondecreasing")
        for g in set(buy) & set(sell):
            if not buy[g][0] < sell[g][0]:
                raise PricelineError(
                    f"good {g}: first sell offer must exceed first buy offer"
                )
        object.__setattr__(self, "buy", buy)
        object.__setattr__(self, "sell", sell)


@dataclass(frozen=True)
class Scenario:
    """One sampled joint realization of future prices for every good."""

    buy: tuple[BuyerPriceline, ...]
    sell: tuple[SellerPriceline, ...]
    weight: float = 1.0

    def __post_init__(self) -> None:
        if len(self.buy) != len(self.sell):
            raise PricelineError("scenario must price every good on both sides")
        if self.weight <= 0:
            raise PricelineError("scenario weight must be positive")


def cost(package: Package, pricelines: Sequence[BuyerPriceline]) -> int:
    """Sum of the first ``Y_g`` entries of each buyer priceline."""
    total = 0
    for g, y in enumerate(package.qty):
        if y == 0:
            continue
        line = pricelines[g].prices
        if y > len(line):
            raise PricelineError(
                f"good {g}: requested {y} units but priceline has {len(line)}"
            )
        total += sum(line[:y])
    return total


def revenue(package: Package, pricelines: Sequence[SellerPriceline]) -> int:
    """Sum of the first ``Z_g`` entries of each seller priceline."""
    total = 0
    for g, z in enumerate(package.qty):
        if z == 0:
            continue
        line = pricelines[g].prices
        if z > len(line):
            raise PricelineError(
                f"good {g}: selling {z} units but priceline has {len(line)}"
            )
        total += sum(line[:z])
    return total


def winner_determination(
    bid: Bid,
    buyer: Sequence[BuyerPriceline],
    seller: Sequence[SellerPriceline],
) -> tuple[Package, Package]:
    """Per good: buy the largest k with b_gk >= p_gk, sell the largest k
    with a_gk <= pi_gk."""
    n = len(buyer)
    bought = [0] * n
    sold = [0] * n
    for g, offers in bid.buy.items():
        line = buyer[g].prices
        best = 0
        for k, b in enumerate(offers[: len(line)], start=1):
            if b >= line[k - 1]:
                best = k
        bought[g] = best
    for g, offers in bid.sell.items():
        line = seller[g].prices
        best = 0
        for k, a in enumerate(offers[: len(line)], start=1):
            if a <= line[k - 1]:
                best = k
        sold[g] = best
    return Package(tuple(bought)), Package(tuple(sold))


def second_price_settlement(
    bid: Bid,
    buyer: Sequence[BuyerPriceline],
    seller: Sequence[SellerPriceline],
) -> int:
    """Net payment under the second-price rule: priceline prices prevail."""
    bought, sold = winner_determination(bid, buyer, seller)
    return cost(bought, buyer) - revenue(sold, seller)


def scenarios_to_text(scenarios: Sequence[Scenario]) -> str:
    """Columnar form: scenario id, good id, unit index, buy price, sell price."""
    lines = ["scenario,good,unit,buy,sell"]
    for s, sc in enumerate(scenarios):
        for g, (bl, sl) in enumerate(zip(sc.buy, sc.sell)):
            for k in range(max(len(bl), len(sl))):
                b = bl.prices[k] if k < len(bl) else ""
                a = sl.prices[k] if k < len(sl) else ""
                lines.append(f"{s},{g},{k},{b},{a}")
    return "\n".join(lines) + "\n"


def scenarios_from_text(text: str) -> list[Scenario]:
    rows: dict[int, dict[int, dict[int, tuple[int, int]]]] = {}
    lines = [ln for ln in text.splitlines() if ln.strip()]
    for line in lines[1:]:
        s, g, k, b, a = line.split(",")
        rows.setdefault(int(s), {}).setdefault(int(g), {})[int(k)] = (int(b), int(a))
    scenarios = []
    for s in sorted(rows):
        goods = rows[s]
        n = max(goods) + 1
        buy, sell = [], []
        for g in range(n):
            units = goods.get(g, {})
            ks = sorted(units)
            buy.append(BuyerPriceline(tuple(units[k][0] for k in ks)))
            sell.append(SellerPriceline(tuple(units[k][1] for k in ks)))
        scenarios.append(Scenario(tuple(buy), tuple(sell)))
    return scenarios
