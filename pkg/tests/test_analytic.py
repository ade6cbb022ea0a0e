from fractions import Fraction

import numpy as np
import pytest

from guessing_games.analytic import (
    both_too_high_integrand,
    compose_with_target,
    pir2_ode_residual,
    prob_both_too_high,
    pull_back,
    three_player_cw_strategy,
    two_player_cw_strategy,
    two_player_pir_cdf,
    upper_bound,
)
from guessing_games.errors import DomainError, UnsupportedError
from guessing_games.game import GameRule, GameSpec, TargetModel, expected_payoffs
from guessing_games.quadrature import integrate
from guessing_games.strategies import ClosedFormPir2, PointMass, Uniform, evaluate, quantile
from guessing_games.verify import best_response_curve

PIR2 = GameSpec.of("pir", 2)
CW3 = GameSpec.of("cw", 3)


def test_pir2_boundary_values():
    F = two_player_pir_cdf().strategy
    assert evaluate(F, 0.0) == 0.0
    assert evaluate(F, 0.75) == pytest.approx(1.0, abs=1e-15)
    assert F.pdf(0.0) == pytest.approx(0.5)
    assert two_player_pir_cdf().value_per_player == 0.0


def test_pir2_residual_examples():
    assert abs(pir2_ode_residual(ClosedFormPir2(), 0.5)) <= 1e-12
    assert pir2_ode_residual(Uniform(0.0, 1.0), 0.5) == pytest.approx(0.5)
    with pytest.raises(UnsupportedError):
        pir2_ode_residual(PointMass(0.5), 0.5)


def test_pir2_residual_with_finite_difference_derivative():
    F = ClosedFormPir2()
    xs = np.linspace(0.01, 0.74, 50)
    h = 1e-6
    fd = (F.cdf(xs + h) - F.cdf(xs - h)) / (2 * h)
    residual = 2 * (xs - 1) * fd + 1 + F.cdf(xs)
    assert np.max(np.abs(residual)) < 1e-8
    assert np.max(np.abs(pir2_ode_residual(F, xs))) < 1e-12


@pytest.mark.parametrize("n, want", [(2, Fraction(3, 4)), (3, Fraction(7, 9)), (4, Fraction(13, 16))])
def test_upper_bound(n, want):
    assert upper_bound(n) == want
    assert isinstance(upper_bound(n), Fraction)


def test_upper_bound_domain():
    with pytest.raises(DomainError):
        upper_bound(1)


def test_both_too_high():
    assert prob_both_too_high() == pytest.approx(np.log(4) - 1, abs=1e-8)
    assert both_too_high_integrand(0.0) == pytest.approx(1.0)
    assert both_too_high_integrand(0.75) == pytest.approx(0.0, abs=1e-15)


def test_cw2_saddle_point():
    F = two_player_cw_strategy().strategy
    assert quantile(F, 0.5) == 0.5
    assert expected_payoffs(GameSpec.of("cw", 2), (0.5, 0.5)).tolist() == [0, 0]
    for y in np.linspace(0, 1, 41):
        if y == 0.5:
            continue
        # the guess at 1/2 owns everything on its side of the midpoint (y + 1/2)/2
        win = 1 - (y + 0.5) / 2 if y < 0.5 else (y + 0.5) / 2
        assert expected_payoffs(GameSpec.of("cw", 2), (0.5, y))[0] == pytest.approx(2 * win - 1)
        assert 2 * win - 1 > 0


def test_cw3_uniform():
    sol = three_player_cw_strategy()
    F = sol.strategy
    assert evaluate(F, 0.5) == 0.5
    np.testing.assert_allclose(F.pdf(np.linspace(0.25, 0.75, 9)), 2.0)
    # double integral of the three-branch payoff against the uniform density
    for x in (0.3, 0.5, 0.7):
        def inner(y, x=x):
            return np.array([
                integrate(lambda z: np.array([expected_payoffs(CW3, (x, yy, zz))[0] for zz in z]) * 2.0,
                          0.25, 0.75, cuts=(x, yy), n=16)
                for yy in y
            ]) * 2.0
        assert integrate(inner, 0.25, 0.75, cuts=(x,), n=16) == pytest.approx(0.0, abs=1e-12)


def test_help1_identity_two_players():
    F = ClosedFormPir2()
    assert integrate(lambda x: x * F.pdf(x), 0.0, 0.75) == pytest.approx(0.5, abs=1e-8)


def test_pir2_best_response_flat_on_support():
    F = ClosedFormPir2()
    xs = np.linspace(0, 0.75, 100)
    assert np.max(np.abs(best_response_curve(F, PIR2, xs))) <= 1e-8


def test_pir2_best_response_above_support():
    F = ClosedFormPir2()
    mean = F.mean()
    assert mean == pytest.approx(0.5, abs=1e-12)
    xs = np.linspace(0.75, 1.0, 26)
    np.testing.assert_allclose(best_response_curve(F, PIR2, xs), 1 + mean - 2 * xs, atol=1e-12)


def test_compose_support_mapping():
    G = TargetModel.from_table([0.0, 2.0], [0.0, 1.0])
    H = compose_with_target(ClosedFormPir2(), G)
    assert H.support == (0.0, 1.5)
    assert evaluate(H, 1.0) == pytest.approx(evaluate(ClosedFormPir2(), 0.5))


def test_compose_identity_is_noop():
    F = ClosedFormPir2()
    assert compose_with_target(F, TargetModel.uniform()) is F
    G = TargetModel.from_table(np.linspace(0, 1, 11), np.linspace(0, 1, 11))
    assert compose_with_target(F, G) is F


def test_compose_square_target():
    xs = np.linspace(0, 1, 2001)
    G = TargetModel.from_table(xs, xs**2)
    H = compose_with_target(Uniform(0.25, 0.75), G)
    assert evaluate(H, np.sqrt(0.5)) == pytest.approx(0.5, abs=1e-6)
    assert H.support[0] == pytest.approx(0.5, abs=1e-6)


def test_compose_monotone_and_bounded():
    xs = np.linspace(0, 3, 301)
    G = TargetModel.from_table(xs, (np.exp(xs) - 1) / (np.exp(3) - 1))
    for F in (ClosedFormPir2(), Uniform(0.25, 0.75), PointMass(0.5)):
        H = compose_with_target(F, G)
        v = H.cdf(np.linspace(-1, 4, 500))
        assert np.all(np.diff(v) >= 0) and v.min() >= 0 and v.max() <= 1


def test_pull_back_recovers_strategy():
    G = TargetModel.from_table([0.0, 0.5, 2.0], [0.0, 0.6, 1.0])
    F = ClosedFormPir2()
    back = pull_back(compose_with_target(F, G), G)
    xs = np.linspace(0, 1, 101)
    np.testing.assert_allclose(back.cdf(xs), F.cdf(xs), atol=1e-14)
    np.testing.assert_allclose(back.quantile(np.linspace(0, 1, 11)), F.quantile(np.linspace(0, 1, 11)), atol=1e-14)


def test_solution_games():
    assert two_player_pir_cdf().game.rule is GameRule.PRICE_IS_RIGHT
    assert three_player_cw_strategy().game.players == 3
