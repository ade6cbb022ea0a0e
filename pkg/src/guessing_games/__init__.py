"""Solvers and verifiers for n-player guessing games with a uniform target."""

from .analytic import (
    ClosedFormSolution,
    compose_with_target,
    pir2_ode_residual,
    prob_both_too_high,
    three_player_cw_strategy,
    two_player_cw_strategy,
    two_player_pir_cdf,
    upper_bound,
)
from .discrete import ApproxConfig, DiscreteProfile, best_response_values, cdf_distance, run, step
from .errors import ConvergenceError, DimensionError, DomainError, GuessingGameError, UnsupportedError
from .game import GameRule, GameSpec, TargetModel, expected_payoffs, realized_payoffs
from .series import Cw4Constants, SeriesSolution, pir3_strategy, solve_cw4, solve_pir3, unfold_symmetric
from .strategies import StrategyCdf, evaluate, quantile
from .verify import EquilibriumReport, best_response_curve, certify, monte_carlo_value, profile_value

__version__ = "0.1.0"

__all__ = [
    "ApproxConfig",
    "ClosedFormSolution",
    "ConvergenceError",
    "Cw4Constants",
    "DimensionError",
    "DiscreteProfile",
    "DomainError",
    "EquilibriumReport",
    "GameRule",
    "GameSpec",
    "GuessingGameError",
    "SeriesSolution",
    "StrategyCdf",
    "TargetModel",
    "UnsupportedError",
    "best_response_curve",
    "best_response_values",
    "cdf_distance",
    "certify",
    "compose_with_target",
    "evaluate",
    "expected_payoffs",
    "monte_carlo_value",
    "pir2_ode_residual",
    "pir3_strategy",
    "prob_both_too_high",
    "profile_value",
    "quantile",
    "realized_payoffs",
    "run",
    "solve_cw4",
    "solve_pir3",
    "step",
    "three_player_cw_strategy",
    "two_player_cw_strategy",
    "two_player_pir_cdf",
    "unfold_symmetric",
    "upper_bound",
]
