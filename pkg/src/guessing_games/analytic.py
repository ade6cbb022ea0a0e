"""Closed-form optimal strategies and the identities they satisfy."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, UnsupportedError
from .game import GameRule, GameSpec, TargetModel
from .quadrature import integrate
from .strategies import ClosedFormPir2, MappedStrategy, PointMass, StrategyCdf, Uniform


@dataclass(frozen=True)
class ClosedFormSolution:
    strategy: StrategyCdf
    game: GameSpec
    value_per_player: float = 0.0


def two_player_pir_cdf() -> ClosedFormSolution:
    return ClosedFormSolution(ClosedFormPir2(), GameSpec.of(GameRule.PRICE_IS_RIGHT, 2))


def pir2_ode_residual(F: StrategyCdf, x):
    """``2(x - 1) F'(x) + 1 + F(x)``, which vanishes for the two-player solution."""
    if not F.differentiable:
        raise UnsupportedError(f"{F.kind} strategy is not differentiable")
    x = np.asarray(x, dtype=float)
    return 2.0 * (x - 1.0) * F.pdf(x) + 1.0 + F.cdf(x)


def upper_bound(n: int) -> Fraction:
    """Least upper bound of optimal Price Is Right guesses with n players."""
    if int(n) != n or n < 2:
        raise DomainError(f"upper bound is defined for n >= 2, got {n}")
    n = int(n)
    return 1 - Fraction(1, n) + Fraction(1, n * n)


def both_too_high_integrand(r):
    """``(1 - F(r))**2`` for the two-player closed form."""
    return (1.0 - ClosedFormPir2().cdf(r)) ** 2


def prob_both_too_high() -> float:
    """Chance that both players of the optimal two-player game overshoot."""
    return integrate(both_too_high_integrand, 0.0, 0.75)


def two_player_cw_strategy() -> ClosedFormSolution:
    return ClosedFormSolution(PointMass(0.5), GameSpec.of(GameRule.CLOSEST_WINS, 2))


def three_player_cw_strategy() -> ClosedFormSolution:
    return ClosedFormSolution(Uniform(0.25, 0.75), GameSpec.of(GameRule.CLOSEST_WINS, 3))


def compose_with_target(F: StrategyCdf, G: TargetModel) -> StrategyCdf:
    """Strategy ``x -> F(G(x))`` for a target with CDF ``G``.

    An identity target returns ``F`` itself.
    """
    if not isinstance(G, TargetModel):
        raise DomainError("target must be a TargetModel")
    if G.is_identity:
        return F
    return MappedStrategy(F, G.cdf, G.inverse)


def pull_back(F: StrategyCdf, G: TargetModel) -> StrategyCdf:
    """Inverse of :func:`compose_with_target`: guesses mapped back to [0, 1]."""
    if G.is_identity:
        return F
    return MappedStrategy(F, G.inverse, G.cdf)
