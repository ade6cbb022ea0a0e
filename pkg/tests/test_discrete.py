import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from guessing_games.discrete import (
    ApproxConfig,
    DiscreteProfile,
    best_response_values,
    cdf_distance,
    discrete_expected_payoff,
    run,
    step,
)
from guessing_games.errors import DimensionError, DomainError
from guessing_games.game import GameRule
from guessing_games.strategies import ClosedFormPir2, Uniform

PIR = GameRule.PRICE_IS_RIGHT
CW = GameRule.CLOSEST_WINS


def brute_force_values(probs, rule, n):
    """Enumerate every opponent tuple; the reference for best_response_values."""
    N = len(probs)
    out = np.zeros(N)
    for i in range(1, N + 1):
        for others in itertools.product(range(1, N + 1), repeat=n - 1):
            w = np.prod([probs[j - 1] for j in others])
            if w:
                out[i - 1] += w * discrete_expected_payoff(rule, n, N, (i, *others))
    return out


def test_payoff_table_examples():
    a = {g: discrete_expected_payoff(PIR, 3, 2, g) for g in itertools.product((1, 2), repeat=3)}
    assert a[(1, 1, 1)] == 0 and a[(2, 2, 2)] == 0
    assert a[(2, 1, 1)] == 0.5 and a[(1, 2, 2)] == 0.5
    assert a[(1, 1, 2)] == a[(1, 2, 1)] == -0.25
    assert a[(2, 1, 2)] == a[(2, 2, 1)] == -0.25


def test_payoff_rejects_bad_guesses():
    with pytest.raises(DomainError):
        discrete_expected_payoff(PIR, 3, 2, (1, 2, 3))
    with pytest.raises(DomainError):
        discrete_expected_payoff(PIR, 2, 4, (1.5, 2))
    with pytest.raises(DimensionError):
        discrete_expected_payoff(PIR, 3, 4, (1, 2))


def test_payoff_invariant_under_opponent_permutation():
    rng = np.random.default_rng(1)
    for _ in range(50):
        rule = (PIR, CW)[rng.integers(2)]
        g = rng.integers(1, 9, size=4)
        base = discrete_expected_payoff(rule, 4, 8, g)
        for perm in itertools.permutations(g[1:]):
            assert discrete_expected_payoff(rule, 4, 8, (g[0], *perm)) == base


def test_values_half_half():
    cfg = ApproxConfig(N=2, players=3)
    np.testing.assert_allclose(best_response_values(DiscreteProfile([0.5, 0.5]), cfg), [0, 0], atol=1e-15)


def test_values_dimension_mismatch():
    with pytest.raises(DimensionError):
        best_response_values(DiscreteProfile([0.5, 0.5]), ApproxConfig(N=3))


@pytest.mark.parametrize("rule", [PIR, CW])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_values_match_brute_force(rule, n):
    rng = np.random.default_rng(n)
    for N in range(2, 7 if n < 4 else 5):
        for trial in range(3):
            probs = rng.dirichlet(np.ones(N))
            if trial == 2:
                probs = np.zeros(N)
                probs[rng.integers(N)] = 1.0
            cfg = ApproxConfig(N=N, players=n, rule=rule)
            got = best_response_values(DiscreteProfile(probs), cfg)
            np.testing.assert_allclose(got, brute_force_values(probs, rule, n), atol=1e-13)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([PIR, CW]), st.integers(2, 5), st.integers(2, 30), st.integers(0, 2**32 - 1))
def test_profile_value_is_zero(rule, n, N, seed):
    probs = np.random.default_rng(seed).dirichlet(np.ones(N))
    v = best_response_values(DiscreteProfile(probs), ApproxConfig(N=N, players=n, rule=rule))
    assert abs(np.dot(probs, v)) < 1e-12


def test_step_fixed_point():
    cfg = ApproxConfig(N=2, players=3)
    p = DiscreteProfile([0.5, 0.5])
    np.testing.assert_allclose(step(p, cfg).probs, [0.5, 0.5], atol=1e-15)


def test_step_clips_negative_values():
    cfg = ApproxConfig(N=3)
    p = DiscreteProfile([0.2, 0.3, 0.5])
    assert step(p, cfg, values=np.array([-1.0, -0.5, 0.0])).probs.tolist() == p.probs.tolist()


def test_step_hand_example():
    cfg = ApproxConfig(N=2, players=3, epsilon=0.001)
    p = DiscreteProfile([1.0, 0.0])
    v = best_response_values(p, cfg)
    assert v[1] == pytest.approx(0.5, abs=1e-15)
    new = step(p, cfg)
    np.testing.assert_allclose(new.probs, np.array([1.0, 0.0005]) / 1.0005, atol=1e-15)
    assert new.iteration == 1


def test_simplex_preserved_under_fuzz():
    rng = np.random.default_rng(99)
    for _ in range(300):
        N = int(rng.integers(2, 20))
        cfg = ApproxConfig(N=N, players=int(rng.integers(2, 5)), rule=(PIR, CW)[rng.integers(2)],
                           epsilon=float(10 ** rng.uniform(-4, 0)))
        p = step(DiscreteProfile(rng.dirichlet(np.ones(N) * 0.3)), cfg)
        assert np.all(p.probs >= 0) and abs(p.probs.sum() - 1) <= 1e-12


def test_config_validation():
    for bad in ({"N": 1}, {"epsilon": 0}, {"iterations": 0}, {"players": 1}, {"log_every": 0}, {"N": 2.5}):
        with pytest.raises(DomainError):
            ApproxConfig(**bad)
    with pytest.raises(DomainError):
        DiscreteProfile([0.5, 0.6])


def test_defaults_follow_reference_experiment():
    cfg = ApproxConfig()
    assert (cfg.N, cfg.epsilon, cfg.iterations, cfg.players, cfg.rule) == (50, 0.001, 5000, 3, PIR)


def test_run_pir2_near_closed_form():
    result = run(ApproxConfig(players=2))
    assert cdf_distance(result.profile, ClosedFormPir2()) <= 0.05


def test_run_is_deterministic_and_logs():
    cfg = ApproxConfig(N=20, iterations=250, log_every=50)
    a, b = run(cfg, record_trajectory=True), run(cfg, record_trajectory=True)
    assert a.profile.probs.tobytes() == b.profile.probs.tobytes()
    assert [it for it, _ in a.history] == [0, 50, 100, 150, 200, 250]
    assert a.trajectory == b.trajectory and len(a.trajectory) == 6 * 20
    assert a.profile.iteration == 250


def test_run_rejects_wrong_initial():
    with pytest.raises(DimensionError):
        run(ApproxConfig(N=5, iterations=1), DiscreteProfile.uniform(4))


def test_early_stop():
    cfg = ApproxConfig(N=2, iterations=100, early_stop=1e-9)
    result = run(cfg, DiscreteProfile([0.5, 0.5]))
    assert result.stopped_early and result.profile.iteration == 0


def test_cw2_median_is_best_early():
    cfg = ApproxConfig(N=51, players=2, rule=CW, iterations=20)
    p = DiscreteProfile.uniform(51)
    for _ in range(20):
        v = best_response_values(p, cfg)
        assert int(np.argmax(v)) == 25
        p = step(p, cfg, v)
    assert p.probs[25] == p.probs.max()


def test_cdf_distance_examples():
    for N in (5, 10, 50):
        assert cdf_distance(DiscreteProfile.uniform(N), Uniform(0.0, 1.0)) <= 1 / N + 1e-15
    F = ClosedFormPir2()
    N = 200
    exact = np.diff(F.cdf(np.arange(N + 1) / N))
    assert cdf_distance(DiscreteProfile(exact), F) <= 1e-15
    # a custom grid map shifts the comparison points
    assert cdf_distance(DiscreteProfile.uniform(4), Uniform(0.0, 1.0), grid_map=lambda i: (i - 0.5) / 4) == 0.125
