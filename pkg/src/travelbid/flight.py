"""Flight price process, Bayesian drift-bound filter, and expected minima.

Flight prices follow a biased random walk: every ten-second quote perturbs
the price by an integer drawn uniformly from a range whose upper (or
lower) end drifts linearly from +-c toward a hidden per-flight bound z as
game time t approaches the horizon.  Observing the perturbations lets an
agent maintain a discrete posterior over z and project the expected
minimum price over any future window.

Times are in seconds of game time; one tick is one quote interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class InconsistentObservation(Exception):
    """Every candidate drift bound assigns the observation zero likelihood."""


@dataclass(frozen=True)
class FlightParams:
    c: int = 10
    d: int = 30
    horizon: int = 540          # seconds of game time
    floor: int = 150
    cap: int = 800
    initial_low: int = 250
    initial_high: int = 400
    quote_interval: int = 10    # seconds between perturbations

    def __post_init__(self) -> None:
        if self.c <= 0 or self.d <= 0 or self.horizon <= 0:
            raise ValueError("c, d, and horizon must be positive")
        if self.floor >= self.cap:
            raise ValueError("floor must be below cap")
        if self.quote_interval <= 0 or self.horizon % self.quote_interval:
            raise ValueError("horizon must be a whole number of quote intervals")

    @property
    def n_quotes(self) -> int:
        return self.horizon // self.quote_interval

    @property
    def z_values(self) -> np.ndarray:
        return np.arange(-self.c, self.d + 1)

    def uniform_prior(self) -> np.ndarray:
        n = self.c + self.d + 1
        return np.full(n, 1.0 / n)


def get_range(params: FlightParams, t: int, z: int) -> tuple[int, int]:
    """Integer perturbation range at tick t for drift bound z."""
    x = params.c + (t / params.horizon) * (z - params.c)
    if x > 0:
        return -params.c, math.ceil(x)
    if x < 0:
        return math.floor(x), params.c
    return -params.c, params.c


@dataclass(frozen=True)
class FlightWalk:
    prices: tuple[int, ...]          # one per quote; index j is time j*interval
    perturbations: tuple[int, ...]   # pre-clamp draws, one per quote
    z: int


def sample_walk(
    params: FlightParams,
    z: int,
    rng: np.random.Generator,
    initial_price: int | None = None,
) -> FlightWalk:
    if not -params.c <= z <= params.d:
        raise ValueError(f"z={z} outside [-c, d]")
    if initial_price is None:
        initial_price = int(rng.integers(params.initial_low, params.initial_high + 1))
    prices = [initial_price]
    draws = []
    p = initial_price
    for j in range(1, params.n_quotes + 1):
        a, b = get_range(params, j * params.quote_interval, z)
        delta = int(rng.integers(a, b + 1))
        draws.append(delta)
        p = max(params.floor, min(params.cap, p + delta))
        prices.append(p)
    return FlightWalk(tuple(prices), tuple(draws), z)


def bayes_update(
    params: FlightParams, t: int, y: int, weights: np.ndarray
) -> np.ndarray:
    """One filtering step: reweight each z by the likelihood of perturbation y.

    ``weights`` are the (possibly unnormalized) masses before observing the
    perturbation drawn at tick ``t``.  Raises InconsistentObservation when the
    update annihilates all mass; the caller decides how to recover.
    """
    zs = params.z_values
    if len(weights) != len(zs):
        raise ValueError("weight vector does not match the z grid")
    out = np.zeros_like(weights, dtype=float)
    for i, z in enumerate(zs):
        a, b = get_range(params, t, int(z))
        if a <= y <= b:
            like = 1.0 if b == a else 1.0 / (b - a)
            out[i] = like * weights[i]
    if not out.any():
        raise InconsistentObservation(f"perturbation {y} at tick {t} fits no z")
    return out


def normalize(weights: np.ndarray) -> np.ndarray:
    total = weights.sum()
    if total <= 0:
        raise ValueError("cannot normalize all-zero weights")
    return weights / total


def expected_min_price(
    params: FlightParams,
    t: int,
    t_end: int,
    price: float,
    posterior: np.ndarray,
) -> float:
    """Expected minimum price over the quotes in (t, t_end] under the posterior.

    For each z the walk is rolled forward one quote at a time with the
    expected perturbation (b - a) / 2, clamped to [floor, cap]; the minima
    are then averaged.  Times are in seconds.
    """
    if not t < t_end <= params.horizon:
        raise ValueError("need t < t_end <= horizon")
    step = params.quote_interval
    first = (t // step + 1) * step
    if first > t_end:
        raise ValueError("the window (t, t_end] contains no quote times")
    zs = params.z_values
    minima = np.empty(len(zs))
    for i, z in enumerate(zs):
        p = price
        lowest = math.inf
        for tau in range(first, t_end + 1, step):
            a, b = get_range(params, tau, int(z))
            p = p + (b - a) / 2.0
            p = max(params.floor, min(params.cap, p))
            if p < lowest:
                lowest = p
        minima[i] = lowest
    return float(np.dot(normalize(np.asarray(posterior, dtype=float)), minima))


@dataclass
class FlightFilter:
    """Stateful posterior over z for one flight auction.

    Tracks the last quote so it can turn a price series into perturbation
    observations.  Ticks where the prior price sat clamped at the floor or
    cap are skipped (the observed difference is not the raw perturbation
    there), and an all-zero update resets the posterior to the prior.
    """

    params: FlightParams = field(default_factory=FlightParams)
    weights: np.ndarray | None = None
    last_price: int | None = None
    last_tick: int = 0
    resets: int = 0

    def __post_init__(self) -> None:
        if self.weights is None:
            self.weights = self.params.uniform_prior()

    @property
    def posterior(self) -> np.ndarray:
        return normalize(self.weights)

    def observe_price(self, t: int, price: int) -> None:
        if self.last_price is None:
            self.last_price = price
            self.last_tick = t
            return
        clamped = self.last_price in (self.params.floor, self.params.cap)
        y = price - self.last_price
        self.last_price = price
        self.last_tick = t
        if clamped:
            return
        self.observe_perturbation(t, y)

    def observe_perturbation(self, t: int, y: int) -> None:
        try:
            self.weights = bayes_update(self.params, t, y, self.weights)
        except InconsistentObservation:
            self.weights = self.params.uniform_prior()
            self.resets += 1

    def mode(self) -> int:
        return int(self.params.z_values[int(np.argmax(self.weights))])

    def predict_min(self, t_end: int | None = None) -> float:
        if self.last_price is None:
            raise ValueError("no price observed yet")
        t_end = self.params.horizon if t_end is None else t_end
        return expected_min_price(
            self.params, self.last_tick, t_end, self.last_price, self.posterior
        )
