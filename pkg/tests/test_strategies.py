import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from guessing_games.errors import DomainError, UnsupportedError
from guessing_games.strategies import (
    ClosedFormPir2,
    DiscreteStrategy,
    PointMass,
    SeriesStrategy,
    Uniform,
    evaluate,
    quantile,
)


def test_uniform_midpoint():
    F = Uniform(0.25, 0.75)
    assert evaluate(F, 0.5) == 0.5
    assert quantile(F, 0.5) == 0.5


def test_closed_form_value():
    assert evaluate(ClosedFormPir2(), 0.5) == pytest.approx(np.sqrt(2) - 1, abs=1e-15)


def test_point_mass_below_location():
    assert evaluate(PointMass(0.5), 0.4) == 0.0
    assert evaluate(PointMass(0.5), 0.5) == 1.0


def test_clamping_outside_support():
    F = ClosedFormPir2()
    assert evaluate(F, -0.3) == 0.0
    assert evaluate(F, 0.9) == 1.0
    np.testing.assert_array_equal(evaluate(Uniform(0.2, 0.4), [0.0, 0.1, 0.5, 1.0]), [0, 0, 1, 1])


def test_closed_form_quantile_at_one():
    assert quantile(ClosedFormPir2(), 1.0) == pytest.approx(0.75, abs=1e-15)


def test_quantile_domain():
    with pytest.raises(DomainError):
        quantile(Uniform(0, 1), 1.5)
    with pytest.raises(DomainError):
        quantile(Uniform(0, 1), -0.1)


def test_closed_form_quantile_round_trip_matches_bisection():
    rng = np.random.default_rng(3)
    F = ClosedFormPir2()
    for p in rng.random(20):
        x = quantile(F, p)
        assert evaluate(F, x) == pytest.approx(p, abs=1e-12)
        # the generic bisection path agrees with the closed-form inverse
        assert SeriesStrategy.quantile(F, p) == pytest.approx(x, abs=1e-10)


def _pir2_series(order=160):
    # 1/sqrt(1-x) - 1 = sum_k binom(2k, k) / 4**k x**k, k >= 1
    from math import comb

    return SeriesStrategy([0.0] + [comb(2 * k, k) / 4**k for k in range(1, order + 1)], 0.0, 0.75)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.001, 0.99))
def test_series_quantile_is_right_inverse(p):
    F = _pir2_series()
    x = quantile(F, p)
    assert evaluate(F, x) == pytest.approx(p, abs=1e-10)


def test_series_evaluation_and_derivatives():
    F = _pir2_series()
    x = np.linspace(0, 0.6, 13)
    np.testing.assert_allclose(F.cdf(x), 1 / np.sqrt(1 - x) - 1, atol=1e-12)
    np.testing.assert_allclose(F.pdf(x), 0.5 * (1 - x) ** -1.5, atol=1e-10)
    np.testing.assert_allclose(F.pdf_prime(x), 0.75 * (1 - x) ** -2.5, atol=1e-8)


def test_shifted_series():
    F = SeriesStrategy([0.0, 0.5], 0.0, 1.0, center=0.5, scale=2.0, offset=0.5)
    np.testing.assert_allclose(F.cdf([0.0, 0.25, 0.5, 1.0]), [0.0, 0.25, 0.5, 1.0])
    assert F.pdf(0.3) == pytest.approx(1.0)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=2, max_size=50))
def test_cdfs_monotone_and_bounded(xs):
    xs = np.sort(np.asarray(xs))
    for F in (ClosedFormPir2(), Uniform(0.25, 0.75), PointMass(0.5), DiscreteStrategy([0.2, 0.3, 0.5])):
        v = np.asarray(F.cdf(xs))
        assert np.all(np.diff(v) >= 0)
        assert np.all((v >= 0) & (v <= 1))


def test_discrete_strategy():
    F = DiscreteStrategy([0.2, 0.0, 0.8])
    np.testing.assert_allclose(F.cdf([0.2, 1 / 3, 0.5, 2 / 3, 0.99, 1.0]), [0, 0.2, 0.2, 0.2, 0.2, 1.0])
    assert quantile(F, 0.0) == pytest.approx(1 / 3)
    assert quantile(F, 0.2) == pytest.approx(1 / 3)
    assert quantile(F, 0.21) == pytest.approx(1.0)
    assert F.mass_at(1 / 3) == pytest.approx(0.2)
    with pytest.raises(DomainError):
        DiscreteStrategy([0.5, 0.6])


def test_no_density_for_atoms():
    with pytest.raises(UnsupportedError):
        PointMass(0.5).pdf(0.5)


def test_means():
    assert ClosedFormPir2().mean() == pytest.approx(0.5, abs=1e-14)
    assert Uniform(0.25, 0.75).mean() == pytest.approx(0.5, abs=1e-14)
    assert PointMass(0.3).mean() == pytest.approx(0.3)
