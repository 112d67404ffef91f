import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holocalc.measure import (
    LevelMeasure,
    add_measures,
    dirac,
    dirac_tower,
    lp_norm,
    pair,
    pushforward,
    scale_measure,
    series_measure,
)
from holocalc.series import PowerSeries, eval_scalar
from holocalc.tower import INFINITY, TowerPoint

EXP = PowerSeries.builtin("exp")
COS = PowerSeries.builtin("cos")
Z5 = PowerSeries.from_coeffs([0, 0, 0, 0, 0, 1])

# independently verified (40-digit arithmetic): sum_n (1/n!)^(1/2)
C0_EXP_P1 = 3.4695063145210476


# ---------------------------------------------------------------- level basics

def test_lp_norm_zero_measure():
    m = LevelMeasure(3, np.zeros(5))
    assert lp_norm(m, 0.5) == 0.0
    assert lp_norm(m, 1.0) == 0.0


def test_lp_norm_dirac_is_one_for_all_p():
    m = dirac(TowerPoint.finite(3), 5)
    for p in (0.25, 0.5, 0.75, 1.0):
        assert lp_norm(m, p) == 1.0


def test_lp_norm_half_exponent_value():
    m = LevelMeasure(0, np.array([1.0, 0.5]))
    assert lp_norm(m, 0.5) == pytest.approx(1.7071067811865475, abs=1e-14)


def test_lp_norm_rejects_bad_exponent():
    m = dirac(INFINITY, 2)
    for p in (0.0, -0.5, 1.5):
        with pytest.raises(ValueError):
            lp_norm(m, p)


def test_dirac_layouts():
    assert np.array_equal(dirac(TowerPoint.finite(0), 0).weights, [1, 0])
    assert np.array_equal(dirac(INFINITY, 2).weights, [0, 0, 0, 1])
    with pytest.raises(ValueError, match="point outside level"):
        dirac(TowerPoint.finite(4), 2)


def test_pushforward_definition():
    m = LevelMeasure(3, np.array([1.0, 2.0, 3.0, 4.0, 5.0]))  # 5.0 at infinity
    out = pushforward(m, 1)
    assert np.array_equal(out.weights, [1.0, 2.0, 3.0 + (4.0 + 5.0)])
    assert np.array_equal(pushforward(m, 3).weights, m.weights)
    with pytest.raises(ValueError):
        pushforward(m, 4)


@settings(deadline=None, max_examples=50)
@given(st.integers(2, 9), st.data())
def test_pushforward_functorial(j, data):
    k = data.draw(st.integers(0, j))
    i = data.draw(st.integers(0, k))
    weights = data.draw(
        st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                 min_size=j + 2, max_size=j + 2))
    m = LevelMeasure(j, np.array(weights))
    via = pushforward(pushforward(m, k), i)
    direct = pushforward(m, i)
    assert np.array_equal(via.weights, direct.weights)  # exact, by the fold order


# ---------------------------------------------------------------- series measures

def test_monomial_measure_is_dirac():
    mu = series_measure(PowerSeries.from_coeffs([0, 0, 1]), 1.0, 4)
    deep = mu.level(4)
    assert deep.weights[2] == 1.0
    assert np.all(deep.weights[[0, 1, 3, 4]] == 0)
    assert deep.weights[-1] == 0
    assert mu.bound_c == 1.0


def test_zero_function_measure():
    mu = series_measure(PowerSeries.from_coeffs([0.0]), 1.0, 6)
    assert mu.bound_c == 0.0
    for lv in mu.levels:
        assert np.all(lv.weights == 0)


def test_exp_measure_weights_and_bound():
    mu = series_measure(EXP, 1.0, 50)
    deep = mu.level(50)
    for n in (0, 1, 2, 5, 10):
        assert deep.weights[n] == pytest.approx(math.sqrt(EXP.coeff(n).real), rel=1e-15)
    assert mu.bound_c == pytest.approx(C0_EXP_P1, abs=1e-12)
    assert mu.witness_p == 0.5


def test_measure_not_summable_errors():
    ones = PowerSeries.from_recurrence(1.0, [1.0], [1.0])
    with pytest.raises(ValueError, match="not p-summable"):
        series_measure(ones, 1.0, 10, term_budget=500)


SIN = PowerSeries.builtin("sin")
POLY = PowerSeries.from_coeffs([2.0, 0.0, -1.0, 0.5])


@pytest.mark.parametrize("f", [EXP, SIN, COS, Z5, POLY],
                         ids=["exp", "sin", "cos", "z5", "poly"])
@pytest.mark.parametrize("p", [0.5, 0.75, 1.0])
def test_tower_coherent_and_lp_bounded(f, p):
    mu = series_measure(f, p, 120)
    assert mu.is_coherent()
    c0 = mu.bound_c
    for norm in mu.level_norms():
        assert norm <= c0 + 1e-9
    # spot-check long-range pushforwards for exact coherence
    rng = np.random.default_rng(3)
    for _ in range(25):
        j = int(rng.integers(1, 121))
        i = int(rng.integers(0, j))
        pushed = pushforward(mu.level(j), i)
        assert np.array_equal(pushed.weights, mu.level(i).weights)


def test_lp_monotone_membership_on_small_weights():
    # finiteness at p implies finiteness at larger exponents; the norm of the
    # |w| <= 1 part is monotone nonincreasing in p (shallow-level tail masses
    # can exceed 1, so monotonicity only binds past that head)
    for f in (EXP, COS):
        mu = series_measure(f, 0.5, 40)
        for lv in mu.levels:
            for p in (0.5, 0.75, 1.0):
                assert math.isfinite(lp_norm(lv, p))
            small = np.abs(lv.weights[np.abs(lv.weights) <= 1.0])
            n_half, n_three_q, n_one = (float(np.sum(small ** p))
                                        for p in (0.5, 0.75, 1.0))
            assert n_one <= n_three_q + 1e-12
            assert n_three_q <= n_half + 1e-12


# ---------------------------------------------------------------- pairing

def _scalar_orbit(fn):
    def orbit(x):
        return np.asarray(0j if x.is_infinity else fn(x.index), dtype=complex)
    return orbit


def test_pair_dirac_tower_evaluates_orbit():
    mu = dirac_tower(TowerPoint.finite(7), 1.0, 20)
    res = pair(mu, _scalar_orbit(lambda n: complex(n * n)))
    assert res.value == 49


def test_pair_zero_measure():
    mu = series_measure(PowerSeries.from_coeffs([0.0]), 1.0, 10)
    res = pair(mu, _scalar_orbit(lambda n: 1.0 + 0j))
    assert res.value == 0


def test_pair_recovers_exp_of_one():
    mu = series_measure(EXP, 1.0, 50)
    deep = mu.level(50)
    res = pair(mu, _scalar_orbit(lambda n: deep.weights[n]))
    assert abs(res.value - eval_scalar(EXP, 1.0, 1e-14, 200)) <= 1e-10
    assert abs(res.value - 2.718281828459045) <= 1e-10


def test_pair_requires_vanishing_at_infinity():
    mu = series_measure(EXP, 1.0, 10)
    with pytest.raises(ValueError, match="vanish at infinity"):
        pair(mu, lambda x: np.asarray(1.0 + 0j))


def test_pair_rejects_mixed_shapes():
    mu = series_measure(EXP, 1.0, 10)

    def orbit(x):
        if x.is_infinity:
            return np.zeros(2, dtype=complex)
        return np.zeros(3 if x.index == 4 else 2, dtype=complex)

    with pytest.raises(ValueError, match="same shape"):
        pair(mu, orbit)


def test_pair_linear_in_the_measure():
    mu = series_measure(EXP, 1.0, 30)
    nu = series_measure(COS, 1.0, 30)
    alpha, beta = 0.7 - 0.2j, -1.3 + 0.4j
    orbit = _scalar_orbit(lambda n: complex(1 / (1 + n)))
    combo = add_measures(scale_measure(mu, alpha), scale_measure(nu, beta))
    lhs = pair(combo, orbit).value
    rhs = alpha * pair(mu, orbit).value + beta * pair(nu, orbit).value
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(rhs))


def test_pair_truncation_estimate_reported():
    mu = series_measure(EXP, 1.0, 5)
    res = pair(mu, _scalar_orbit(lambda n: 1.0 + 0j))
    assert res.terms_used == 6
    assert res.truncation_estimate > 0  # depth 5 leaves visible tail mass
    deep_tail = abs(mu.level(5).weights[-1])
    assert res.truncation_estimate == pytest.approx(deep_tail, rel=1e-12)
