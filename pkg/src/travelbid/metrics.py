"""Prediction quality metrics for hotel price vectors.

Euclidean distance measures raw accuracy; value-of-perfect-prediction
(VPP) measures what a prediction error costs a client who plans a trip
against the predicted prices but pays the actual ones.
"""

from __future__ import annotations

import numpy as np

from .domain import ClientPreference, sample_clients
from .hotels import CEConfig, base_utilities, ce_incidence

METRIC_CLIENT_SEED = 20060612
N_METRIC_CLIENTS = 1000


def euclidean(predicted: np.ndarray, actual: np.ndarray) -> float:
    predicted = np.asarray(predicted, dtype=float)
    actual = np.asarray(actual, dtype=float)
    if predicted.shape != actual.shape:
        raise ValueError("price vectors have different shapes")
    return float(np.linalg.norm(predicted - actual))


def _surplus(utilities: np.ndarray, hotel_prices: np.ndarray) -> np.ndarray:
    cost = np.asarray(ce_incidence, dtype=float) @ np.asarray(hotel_prices, dtype=float)
    return utilities - cost[None, :]


def vpp(
    predicted: np.ndarray,
    actual: np.ndarray,
    client: ClientPreference,
    config: CEConfig | None = None,
) -> float:
    """Regret of trip-planning under predicted hotel prices.

    The client picks its best trip (or stays home) at the predicted prices
    and pays the actual ones; VPP is the value lost relative to planning
    at the actual prices.  Always nonnegative, zero for a perfect ranking.
    """
    return evpp_for_clients(predicted, actual, [client], config)


def evpp_for_clients(
    predicted: np.ndarray,
    actual: np.ndarray,
    clients: list[ClientPreference],
    config: CEConfig | None = None,
) -> float:
    config = config or CEConfig()
    utilities = base_utilities(clients, config)
    s_pred = _surplus(utilities, predicted)
    s_act = _surplus(utilities, actual)
    n = len(clients)
    choice = np.argmax(s_pred, axis=1)
    planned_ok = s_pred[np.arange(n), choice] >= 0  # else the client stays home
    realized = np.where(planned_ok, s_act[np.arange(n), choice], 0.0)
    best = np.maximum(s_act.max(axis=1), 0.0)
    return float(np.mean(best - realized))


def evpp(
    predicted: np.ndarray,
    actual: np.ndarray,
    config: CEConfig | None = None,
    n_clients: int = N_METRIC_CLIENTS,
    seed: int = METRIC_CLIENT_SEED,
) -> float:
    """Mean VPP over a fixed sample of clients from the standard distribution."""
    rng = np.random.default_rng(seed)
    clients = sample_clients(rng, n_clients)
    return evpp_for_clients(predicted, actual, clients, config)
