from fractions import Fraction

import numpy as np
import pytest

from travelbid.optimizer import (
    BidInstance,
    MU_KINDS,
    OptimizerError,
    ScenarioPrices,
    average_scenario,
    evaluate_hotel_bids,
    hotel_candidate_prices,
    instance_from_dict,
    instance_to_dict,
    make_saa_star_scenarios,
    marginal_utility,
    mu_strategy,
    saa_tail_probability,
    solution_to_dict,
    solve_bid_saa,
    solve_evm,
)

from enum_oracle import random_micro_case, solve_by_enumeration


def golden_instance(trip_value=120):
    """One client, one hotel, flights owned; future price 50 or 150.

    At value 120 the optimal bid is 50 (profit 70 in the cheap scenario,
    nothing in the dear one, mean 35), while bidding the mean price 100
    wins both scenarios for a mean of only 20.
    """
    return BidInstance(
        kinds=("h",),
        utilities=np.array([[trip_value]]),
        incidence=np.array([[1]]),
        owned=np.array([0]),
        scenarios=[
            ScenarioPrices(buy=(50,), sell=(0,)),
            ScenarioPrices(buy=(150,), sell=(0,)),
        ],
    )


def case_to_instance(case):
    return BidInstance(
        kinds=case["kinds"],
        utilities=np.array(case["utilities"]),
        incidence=np.array(case["incidence"]),
        owned=np.array(case["owned"]),
        scenarios=[
            ScenarioPrices(buy=b, sell=s, weight=w)
            for b, s, w in case["scenarios"]
        ],
        hqw=np.array(case["hqw"]),
        current_buy=np.array(case["current_buy"], dtype=float),
        current_sell=np.array(case["current_sell"], dtype=float),
        hotel_ask=np.array(case["hotel_ask"], dtype=float),
        max_units=case["max_units"],
    )


def test_golden_saa():
    sol = solve_bid_saa(golden_instance())
    assert sol.objective == Fraction(35)
    assert sol.hotel_bids == {0: (50,)}


def test_golden_evm():
    # average price 100 against value 120: bid 100, win both scenarios
    sol = solve_evm(golden_instance(trip_value=120))
    assert sol.objective == Fraction(20)
    assert sol.hotel_bids == {0: (100,)}
    # value 100 leaves EVM indifferent at surplus zero
    indifferent = solve_evm(golden_instance(trip_value=100))
    assert indifferent.objective == Fraction(0)


def test_golden_saa_beats_evm():
    saa = solve_bid_saa(golden_instance(trip_value=120))
    evm = solve_evm(golden_instance(trip_value=120))
    assert saa.objective == Fraction(35)
    assert evm.objective == Fraction(20)


def test_single_scenario_evm_equals_saa():
    inst = golden_instance()
    single = BidInstance(
        kinds=inst.kinds,
        utilities=inst.utilities,
        incidence=inst.incidence,
        owned=inst.owned,
        scenarios=[ScenarioPrices(buy=(50,), sell=(0,))],
    )
    assert solve_evm(single).objective == solve_bid_saa(single).objective


def test_zero_value_clients_bid_nothing():
    inst = golden_instance(trip_value=0)
    sol = solve_bid_saa(inst)
    assert sol.objective == Fraction(0)
    total_won = sum(
        1
        for sc in inst.scenarios
        for g, bids in sol.hotel_bids.items()
        for p in bids
        if p >= sc.buy[g]
    )
    assert total_won == 0


def test_flight_timing_buy_now_when_cheaper():
    inst = BidInstance(
        kinds=("f", "h"),
        utilities=np.array([[1000]]),
        incidence=np.array([[1, 1]]),
        owned=np.array([0, 0]),
        scenarios=[
            ScenarioPrices(buy=(320, 10), sell=(0, 0)),
            ScenarioPrices(buy=(320, 10), sell=(0, 0)),
        ],
        current_buy=np.array([300.0, 0.0]),
    )
    sol = solve_bid_saa(inst)
    assert sol.buy_now[0] == 1
    assert all(b[0] == 0 for b in sol.buy_later)
    assert sol.objective == Fraction(1000 - 300 - 10)


def test_candidate_prices_filtered_by_ask():
    inst = BidInstance(
        kinds=("h",),
        utilities=np.array([[10]]),
        incidence=np.array([[1]]),
        owned=np.array([0]),
        scenarios=[
            ScenarioPrices(buy=(2,), sell=(0,)),
            ScenarioPrices(buy=(8,), sell=(0,)),
        ],
        hotel_ask=np.array([5.0]),
    )
    assert hotel_candidate_prices(inst) == {0: [5, 8]}


def test_duplicate_scenarios_leave_objective_unchanged():
    inst = golden_instance()
    doubled = BidInstance(
        kinds=inst.kinds,
        utilities=inst.utilities,
        incidence=inst.incidence,
        owned=inst.owned,
        scenarios=inst.scenarios + inst.scenarios,
    )
    assert solve_bid_saa(doubled).objective == solve_bid_saa(inst).objective


def test_guardrails():
    inst = golden_instance()
    with pytest.raises(OptimizerError):
        BidInstance(
            kinds=inst.kinds,
            utilities=inst.utilities,
            incidence=inst.incidence,
            owned=inst.owned,
            scenarios=[],
        )
    with pytest.raises(OptimizerError):
        BidInstance(
            kinds=("h",),
            utilities=np.zeros((9, 1)),
            incidence=np.array([[1]]),
            owned=np.array([0]),
            scenarios=inst.scenarios,
        )
    with pytest.raises(OptimizerError):
        BidInstance(
            kinds=("f",),
            utilities=inst.utilities,
            incidence=inst.incidence,
            owned=inst.owned,
            scenarios=inst.scenarios,
            hqw=np.array([1]),
        )
    with pytest.raises(OptimizerError):
        BidInstance(
            kinds=("h",),
            utilities=inst.utilities,
            incidence=inst.incidence,
            owned=inst.owned,
            scenarios=inst.scenarios,
            hqw=np.array([9]),
        )


def test_hqw_floor_enforced():
    inst = BidInstance(
        kinds=("h",),
        utilities=np.array([[0]]),
        incidence=np.array([[1]]),
        owned=np.array([0]),
        scenarios=[ScenarioPrices(buy=(30,), sell=(0,))],
        hqw=np.array([2]),
    )
    sol = solve_bid_saa(inst)
    assert len(sol.hotel_bids.get(0, ())) >= 2


def test_marginal_utility_example():
    inst = BidInstance(
        kinds=("h",),
        utilities=np.array([[100]]),
        incidence=np.array([[1]]),
        owned=np.array([0]),
        scenarios=[ScenarioPrices(buy=(60,), sell=(0,))],
    )
    sc = inst.scenarios[0]
    assert marginal_utility(inst, sc, 0, 1) == 60.0  # 100 - (100 - 60)
    irrelevant = BidInstance(
        kinds=("h", "h"),
        utilities=np.array([[100]]),
        incidence=np.array([[1, 0]]),
        owned=np.array([0, 0]),
        scenarios=[ScenarioPrices(buy=(60, 10), sell=(0, 0))],
    )
    assert marginal_utility(irrelevant, irrelevant.scenarios[0], 1, 1) == 0.0


def test_mu_second_unit_weakly_smaller():
    rng = np.random.default_rng(0)
    for _ in range(40):
        case = random_micro_case(rng)
        if "h" not in case["kinds"]:
            continue
        inst = case_to_instance(case)
        sc = average_scenario(inst.scenarios)
        for g, kind in enumerate(inst.kinds):
            if kind != "h":
                continue
            first = marginal_utility(inst, sc, g, 1)
            second = marginal_utility(inst, sc, g, 2)
            assert second <= first + 1e-9


def test_mu_strategies_on_golden_instance():
    inst = golden_instance()
    smu = mu_strategy("SMU", inst)
    assert smu.hotel_bids == {0: (100,)}   # 120 less the surplus 20 at price 100
    amu = mu_strategy("AMU", inst)
    assert amu.hotel_bids == {0: (85,)}    # mean of per-scenario MUs 50 and 120
    for kind in ("TMU", "TMU*"):
        assert mu_strategy(kind, inst).hotel_bids == {0: (100,)}
    for kind in ("BE", "BE*"):
        sol = mu_strategy(kind, inst)
        assert sol.hotel_bids == {0: (50,)}
        assert sol.objective == Fraction(35)
    with pytest.raises(OptimizerError):
        mu_strategy("XMU", inst)


def test_single_scenario_mu_degeneracies():
    rng = np.random.default_rng(1)
    for _ in range(20):
        case = random_micro_case(rng)
        case["scenarios"] = case["scenarios"][:1]
        inst = case_to_instance(case)
        assert mu_strategy("SMU", inst).hotel_bids == mu_strategy("AMU", inst).hotel_bids
        assert mu_strategy("TMU", inst).hotel_bids == mu_strategy("BE", inst).hotel_bids
        assert mu_strategy("TMU*", inst).hotel_bids == mu_strategy("BE*", inst).hotel_bids


def test_tmu_bids_subset_of_smu_goods():
    rng = np.random.default_rng(2)
    for _ in range(30):
        case = random_micro_case(rng)
        if "h" not in case["kinds"]:
            continue
        inst = case_to_instance(case)
        smu = set(mu_strategy("SMU", inst).hotel_bids)
        tmu = set(mu_strategy("TMU", inst).hotel_bids)
        assert tmu <= smu


def test_mu_objective_matches_evaluator():
    rng = np.random.default_rng(3)
    for _ in range(20):
        inst = case_to_instance(random_micro_case(rng))
        for kind in MU_KINDS:
            sol = mu_strategy(kind, inst)
            assert sol.objective == evaluate_hotel_bids(inst, sol.hotel_bids)


def test_emitted_bids_are_normalized_descending():
    rng = np.random.default_rng(4)
    for _ in range(30):
        inst = case_to_instance(random_micro_case(rng))
        sol = solve_bid_saa(inst)
        for bids in sol.hotel_bids.values():
            assert tuple(sorted(bids, reverse=True)) == bids


def test_oracle_equivalence_sample():
    rng = np.random.default_rng(5)
    for _ in range(40):
        case = random_micro_case(rng)
        inst = case_to_instance(case)
        got = solve_bid_saa(inst).objective
        want = solve_by_enumeration(
            case["kinds"], case["utilities"], case["incidence"], case["owned"],
            case["scenarios"], case["hqw"], case["current_buy"],
            case["current_sell"], case["hotel_ask"], case["max_units"],
        )
        assert got == want


def test_saa_star_scenarios_structure():
    rng = np.random.default_rng(6)

    def sampler(r):
        return ScenarioPrices(
            buy=(int(r.integers(10, 40)), int(r.integers(50, 90))),
            sell=(0, 0),
        )

    scenarios = make_saa_star_scenarios(sampler, 10, (1, 2), rng)
    assert len(scenarios) == 10
    aux = [sampler(np.random.default_rng(7)) for _ in range(500)]
    # pinned scenarios put each good at an upper-range price
    assert scenarios[0].buy[0] >= 35
    assert scenarios[1].buy[1] >= 80
    assert scenarios[1].buy == scenarios[2].buy  # one per unit of good 1
    with pytest.raises(OptimizerError):
        make_saa_star_scenarios(sampler, 2, (1, 2), rng)


def test_saa_star_max_bid_at_least_plain_saa():
    rng = np.random.default_rng(8)

    def sampler(r):
        return ScenarioPrices(buy=(int(r.integers(20, 80)),), sell=(0,))

    star = make_saa_star_scenarios(sampler, 5, (1,), np.random.default_rng(9))
    plain = [sampler(np.random.default_rng(9)) for _ in range(5)]

    def best_bid(scenarios):
        inst = BidInstance(
            kinds=("h",),
            utilities=np.array([[100]]),
            incidence=np.array([[1]]),
            owned=np.array([0]),
            scenarios=scenarios,
        )
        sol = solve_bid_saa(inst)
        return max((p for b in sol.hotel_bids.values() for p in b), default=0)

    assert max(p for s in star for p in s.buy) >= max(p for s in plain for p in s.buy)


def test_instance_serialization_roundtrip():
    rng = np.random.default_rng(10)
    case = random_micro_case(rng)
    inst = case_to_instance(case)
    back = instance_from_dict(instance_to_dict(inst))
    assert back.kinds == inst.kinds
    assert np.array_equal(back.utilities, inst.utilities)
    assert np.array_equal(back.owned, inst.owned)
    assert solve_bid_saa(back).objective == solve_bid_saa(inst).objective
    payload = solution_to_dict(solve_bid_saa(inst))
    assert "objective" in payload and "hotel_bids" in payload
    with pytest.raises(OptimizerError):
        instance_from_dict({"kinds": ["h"]})


def test_tail_probability_s1():
    p = saa_tail_probability(1, trials=100_000, rng=np.random.default_rng(0))
    assert abs(p - 0.5) < 0.01


def test_tail_probability_shifted_distribution():
    # sampled prices stochastically dominate the clearing draw
    p = saa_tail_probability(
        5,
        sample_draw=lambda r: float(r.random()) + 0.5,
        clearing_draw=lambda r: float(r.random()),
        trials=20_000,
        rng=np.random.default_rng(1),
    )
    assert p < 1.0 / 6.0
