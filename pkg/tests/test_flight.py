import math

import numpy as np
import pytest

from travelbid.flight import (
    FlightFilter,
    FlightParams,
    InconsistentObservation,
    bayes_update,
    expected_min_price,
    get_range,
    normalize,
    sample_walk,
)


def oracle_range(c, t, horizon, z):
    """Re-derivation of the perturbation range, kept separate on purpose."""
    x = c + (z - c) * t / horizon
    if x > 0:
        return (-c, int(math.ceil(x)))
    if x < 0:
        return (int(math.floor(x)), c)
    return (-c, c)


def oracle_expected_min(params, t, t_end, price, posterior):
    """Independent walk-forward minimum, one expected step per quote."""
    posterior = np.asarray(posterior, dtype=float)
    posterior = posterior / posterior.sum()
    step = params.quote_interval
    first = (t // step + 1) * step
    minima = []
    for z in range(-params.c, params.d + 1):
        p = float(price)
        low = float("inf")
        for tau in range(first, t_end + 1, step):
            a, b = oracle_range(params.c, tau, params.horizon, z)
            p = min(params.cap, max(params.floor, p + (b - a) / 2.0))
            low = min(low, p)
        minima.append(low)
    return float(np.dot(posterior, np.asarray(minima)))


def test_get_range_examples():
    params = FlightParams()
    assert get_range(params, 0, 30) == (-10, 10)
    assert get_range(params, 270, -10) == (-10, 10)
    assert get_range(params, 540, -5) == (-5, 10)
    assert get_range(params, 540, 30) == (-10, 30)


def test_get_range_endpoint_bounds():
    params = FlightParams()
    for t in range(0, 541, 27):
        for z in range(-10, 31):
            a, b = get_range(params, t, z)
            x = params.c + (t / params.horizon) * (z - params.c)
            assert a <= b
            assert a >= -params.c
            assert b <= max(params.c, math.ceil(x))


def test_params_validation():
    with pytest.raises(ValueError):
        FlightParams(c=0)
    with pytest.raises(ValueError):
        FlightParams(floor=900, cap=800)


def test_sample_walk_stays_in_bounds_and_replays():
    params = FlightParams()
    walk = sample_walk(params, 30, np.random.default_rng(5))
    assert len(walk.prices) == params.n_quotes + 1
    assert all(params.floor <= p <= params.cap for p in walk.prices)
    again = sample_walk(params, 30, np.random.default_rng(5))
    assert walk.prices == again.prices
    for j, delta in enumerate(walk.perturbations, start=1):
        a, b = get_range(params, j * params.quote_interval, 30)
        assert a <= delta <= b
    with pytest.raises(ValueError):
        sample_walk(params, 31, np.random.default_rng(0))


def test_bayes_update_support():
    params = FlightParams()
    prior = params.uniform_prior()
    post = normalize(bayes_update(params, 270, 15, prior))
    zs = params.z_values
    support = zs[post > 0]
    # delta=+15 at midgame requires ceil(10 + (z-10)/2) >= 15
    assert support.min() == 19
    assert support.max() == 30
    widths = []
    for z in support:
        a, b = get_range(params, 270, int(z))
        widths.append(b - a)
    expected = np.array([1.0 / w for w in widths])
    np.testing.assert_allclose(post[post > 0], expected / expected.sum())


def test_bayes_update_flat_likelihood_is_identity():
    params = FlightParams(c=10, d=10)
    prior = normalize(np.arange(1.0, 22.0))
    post = normalize(bayes_update(params, 0, 0, prior))
    np.testing.assert_allclose(post, prior)


def test_bayes_update_inconsistent_raises():
    params = FlightParams()
    prior = params.uniform_prior()
    with pytest.raises(InconsistentObservation):
        bayes_update(params, 0, 99, prior)


def test_expected_min_price_point_mass():
    params = FlightParams()
    posterior = np.zeros(41)
    posterior[-1] = 1.0  # point mass on z = 30
    got = expected_min_price(params, 0, 10, 300.0, posterior)
    # all expected perturbations are positive, so the minimum is the first quote
    a, b = get_range(params, 10, 30)
    assert got == pytest.approx(300.0 + (b - a) / 2.0)


def test_expected_min_price_monotone_in_horizon():
    params = FlightParams()
    posterior = params.uniform_prior()
    prev = None
    for t_end in (10, 50, 150, 300, 540):
        cur = expected_min_price(params, 0, t_end, 320.0, posterior)
        if prev is not None:
            assert cur <= prev + 1e-9
        prev = cur


def test_expected_min_price_matches_oracle():
    params = FlightParams()
    rng = np.random.default_rng(42)
    for _ in range(25):
        t = int(rng.integers(0, 500))
        first = (t // params.quote_interval + 1) * params.quote_interval
        t_end = int(rng.integers(first, 541))
        price = float(rng.integers(params.floor, params.cap + 1))
        post = rng.random(41)
        got = expected_min_price(params, t, t_end, price, post)
        want = oracle_expected_min(params, t, t_end, price, post)
        assert got == want
        assert got >= params.floor


def test_filter_mode_recovery_smoke():
    # thirty quotes spread across the whole horizon pin z down well;
    # early quotes alone cannot, since their ranges barely depend on z
    params = FlightParams(quote_interval=18)
    rng = np.random.default_rng(1)
    hits = 0
    for _ in range(50):
        z = int(rng.integers(-params.c, params.d + 1))
        walk = sample_walk(params, z, rng, initial_price=325)
        filt = FlightFilter(params)
        for j, price in enumerate(walk.prices):
            filt.observe_price(j * params.quote_interval, price)
        if abs(filt.mode() - z) <= 2:
            hits += 1
    assert hits >= 40


def test_filter_skips_clamped_ticks_and_resets():
    params = FlightParams()
    filt = FlightFilter(params)
    filt.observe_price(0, params.floor)
    filt.observe_price(1, params.floor + 3)  # prior price clamped: skipped
    np.testing.assert_allclose(filt.weights, params.uniform_prior())
    filt.observe_perturbation(2, 99)  # impossible: reset, not an exception
    assert filt.resets == 1
    np.testing.assert_allclose(filt.weights, params.uniform_prior())


def test_filter_predict_min_requires_observation():
    filt = FlightFilter(FlightParams())
    with pytest.raises(ValueError):
        filt.predict_min()
    filt.observe_price(0, 300)
    assert filt.predict_min() >= 150
