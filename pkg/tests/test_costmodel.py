import math
from fractions import Fraction

import pytest

from capvrp import CostModelInput, cost_estimate, speedup, speedup_curve, time_estimate


def test_speedup_identity_at_one():
    assert speedup(1) == 1.0
    assert speedup(1, f=7) == 1.0


def test_speedup_frozen_values():
    # S(g) = g / (1 + log2(g)/f); at f=50: S(2) = 2/(1+1/50) = 100/51,
    # S(4) = 4/(1+2/50) = 50/13. Exact fractions computed by hand.
    assert speedup(2, f=50) == pytest.approx(float(Fraction(100, 51)), abs=1e-12)
    assert speedup(4, f=50) == pytest.approx(float(Fraction(50, 13)), abs=1e-12)
    assert abs(speedup(2, f=50) - 1.9607843137254901) < 1e-9
    assert abs(speedup(4, f=50) - 3.8461538461538461) < 1e-9


def test_speedup_sublinear():
    for g in range(2, 65):
        assert speedup(g, f=50) < g


def test_speedup_monotone_in_g():
    values = [speedup(g, f=50) for g in range(1, 65)]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_speedup_curve_tabulates():
    curve = speedup_curve(5, f=50)
    assert [g for g, _ in curve] == [1, 2, 3, 4, 5]
    assert curve[0][1] == 1.0
    assert curve[3][1] == pytest.approx(speedup(4, f=50))


def test_speedup_rejects_bad_inputs():
    with pytest.raises(ValueError):
        speedup(0)
    with pytest.raises(ValueError):
        speedup(2, f=0)
    with pytest.raises(ValueError):
        speedup_curve(0)


def test_time_estimate_full_hand_point():
    # g=1, c=2, n=1, i=1, f=1, e=0, both probabilities zero:
    # T = n + i*(0 + 0 + n + log2(c)) + (i/f)*log2(c) = 1 + 2 + 1 = 4.
    inp = CostModelInput(g=1, c=2, n=1, i=1, f=1, e=0, pr_cross=0.0, pr_mut=0.0)
    assert time_estimate(inp, mode="full") == pytest.approx(4.0)


def test_time_estimate_simplified_hand_point():
    # i*n + (i/f)*n*log2(c+g) = 100*10 + 2*10*log2(20).
    inp = CostModelInput(g=4, c=16, n=10, i=100, f=50)
    expected = 1000 + 20 * math.log2(20)
    assert time_estimate(inp, mode="simplified") == pytest.approx(expected)


def test_time_estimate_grows_with_iterations():
    a = time_estimate(CostModelInput(i=100))
    b = time_estimate(CostModelInput(i=200))
    assert b > a


def test_cost_estimate_simplified_hand_point():
    # c*(g*i*n + (i/f)*g^2) = 8*(2*50*10 + 1*4) = 8032.
    inp = CostModelInput(g=2, c=8, n=10, i=50, f=50)
    assert cost_estimate(inp, mode="simplified") == pytest.approx(8032.0)


def test_cost_estimate_full_is_g_c_times_time():
    inp = CostModelInput(g=3, c=8, n=20, i=40, f=10, e=2)
    assert cost_estimate(inp) == pytest.approx(3 * 8 * time_estimate(inp))


def test_unknown_mode_rejected():
    with pytest.raises(ValueError):
        time_estimate(CostModelInput(), mode="quick")


def test_cost_model_input_validation():
    with pytest.raises(ValueError):
        CostModelInput(g=0)
    with pytest.raises(ValueError):
        CostModelInput(pr_mut=1.5)
    with pytest.raises(ValueError):
        CostModelInput(e=-1)
