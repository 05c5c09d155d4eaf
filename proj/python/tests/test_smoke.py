import math

import pytest

import osig


def test_beer_quiche_value_and_strategy():
    spec = osig.beer_quiche()
    solved = osig.solve(spec)
    # root value at the classic prior, maximizer-convention sign flip
    v = solved.value_at(0, [0.0], 1.0 / 3.0)
    assert abs(-v - (-1.0 / 6.0)) < 1e-9
    phat = solved.init_dual([0.0], [1.0 / 3.0, 2.0 / 3.0])
    assert abs(-phat[0] - 1.5) < 1e-9
    assert abs(-phat[1] + 1.0) < 1e-9


def test_value_array_shapes_and_convexity():
    spec = osig.corridor(nodes=7, steps=2, horizon=0.4, belief_count=11)
    solved = osig.solve(spec, with_dual=False)
    v = solved.value(0)
    assert v.shape == (spec.state_nodes, spec.belief_count)
    grid = solved.belief_grid()
    assert len(grid) == spec.belief_count
    for row in v:
        for j in range(1, len(row) - 1):
            assert row[j - 1] + row[j + 1] - 2 * row[j] >= -1e-9


def test_rollout_determinism_and_payoff():
    spec = osig.beer_quiche()
    solved = osig.solve(spec)
    a = solved.rollout([0.0], [1.0 / 3.0, 2.0 / 3.0], seed=7)
    b = solved.rollout([0.0], [1.0 / 3.0, 2.0 / 3.0], seed=7)
    assert a == b
    assert len(a["steps"]) == 2
    mc = solved.monte_carlo([0.0], [1.0 / 3.0, 2.0 / 3.0], 2000, 3)
    se = mc["payoff_std"] / math.sqrt(mc["runs"])
    assert abs(-mc["payoff_mean"] - (-1.0 / 6.0)) <= 3 * se
    assert mc["violations"] == 0


def test_critical_time():
    assert abs(osig.critical_time(1000) - 0.4) <= 1e-3


def test_advantage_nonnegative():
    spec = osig.beer_quiche()
    solved = osig.solve(spec, with_dual=False)
    adv = solved.advantage(0, [0.0], 1.0 / 3.0)
    assert abs(adv - 1.0 / 6.0) < 1e-9


def test_spec_parsing_rejects_unknown_keys():
    with pytest.raises(ValueError):
        osig.parse_spec('{"bogus": 1}')
