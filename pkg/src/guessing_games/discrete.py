"""Discrete approximation on the target grid {1, ..., N}.

Starting from the uniform vector, each step raises ``p_i`` by ``epsilon``
times the positive part of the payoff ``v_i`` that guess ``i`` earns
against opponents drawing from ``p``, then renormalizes. The iteration is
deterministic and uses a fixed number of steps.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError
from .game import GameRule, payoff_table
from .strategies import DiscreteStrategy, StrategyCdf
from .verify import win_share

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DiscreteProfile:
    probs: np.ndarray
    iteration: int = 0

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.ndim != 1 or len(p) < 1:
            raise DimensionError("probability vector must be one-dimensional")
        if np.any(p < 0) or not np.all(np.isfinite(p)) or abs(p.sum() - 1.0) > 1e-12:
            raise DomainError("not a probability vector")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def N(self) -> int:
        return len(self.probs)

    @classmethod
    def uniform(cls, N: int) -> "DiscreteProfile":
        return cls(np.full(N, 1.0 / N))

    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.probs)

    def as_strategy(self) -> DiscreteStrategy:
        """The profile as a CDF on [0, 1] with grid point i at i/N."""
        return DiscreteStrategy(self.probs)


@dataclass(frozen=True)
class ApproxConfig:
    N: int = 50
    epsilon: float = 0.001
    iterations: int = 5000
    players: int = 3
    rule: GameRule = GameRule.PRICE_IS_RIGHT
    log_every: int = 100
    early_stop: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "rule", GameRule.parse(self.rule))
        if int(self.N) != self.N or self.N < 2:
            raise DomainError("N must be an integer >= 2")
        if not self.epsilon > 0:
            raise DomainError("epsilon must be positive")
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise DomainError("iterations must be an integer >= 1")
        if int(self.players) != self.players or self.players < 2:
            raise DomainError("players must be an integer >= 2")
        if self.log_every < 1:
            raise DomainError("log_every must be >= 1")


def discrete_expected_payoff(rule, n: int, N: int, guesses) -> float:
    """Player 1's payoff for fixed integer guesses, averaged over targets 1..N."""
    rule = GameRule.parse(rule)
    g = np.asarray(guesses)
    if g.shape != (n,):
        raise DimensionError(f"expected {n} guesses, got shape {g.shape}")
    if np.any(g != np.round(g)) or np.any(g < 1) or np.any(g > N):
        raise DomainError(f"guesses must be integers in 1..{N}")
    targets = np.arange(1, N + 1)
    table = payoff_table(rule, np.broadcast_to(g.astype(float), (N, n)), targets)
    return float(table[:, 0].mean())


def best_response_values(p: DiscreteProfile, cfg: ApproxConfig) -> np.ndarray:
    """Payoff ``v_i`` of each pure guess i against ``n - 1`` opponents drawing from p.

    For every (guess, target) pair the opponents split into those that beat
    the guess, tie with it, or lose to it; ``win_share`` sums over the number
    of ties. Cost is O(n N^2) per call for any number of players.
    """
    probs = p.probs if isinstance(p, DiscreteProfile) else np.asarray(p, dtype=float)
    if probs.shape != (cfg.N,):
        raise DimensionError(f"profile has {probs.shape[0]} entries, config expects {cfg.N}")
    N, n = cfg.N, cfg.players
    cum = np.concatenate(([0.0], np.cumsum(probs)))  # cum[k] = P(guess <= k)
    padded = np.concatenate(([0.0], probs, [0.0]))  # padded[k] = p_k, zero off-grid
    i = np.arange(1, N + 1)[:, None]
    r = np.arange(1, N + 1)[None, :]
    if cfg.rule is GameRule.PRICE_IS_RIGHT:
        eligible = i <= r
        m = np.broadcast_to(probs[:, None], (N, N))
        q = 1.0 - cum[r] + cum[i - 1]
        won = win_share(q, m, n) - 1.0
        nobody = (1.0 - cum[r]) ** (n - 1) - 1.0
        return np.where(eligible, won, nobody).mean(axis=1)
    d = np.abs(i - r)
    left, right = r - d, r + d
    beats = np.where(
        d > 0,
        cum[np.clip(right - 1, 0, N)] - cum[np.clip(left, 0, N)],
        0.0,
    )
    tie_left = np.where((left >= 1), padded[np.clip(left, 0, N + 1)], 0.0)
    tie_right = np.where((right <= N) & (d > 0), padded[np.clip(right, 0, N + 1)], 0.0)
    m = tie_left + tie_right
    q = 1.0 - beats - m
    return (win_share(q, m, n) - 1.0).mean(axis=1)


def step(p: DiscreteProfile, cfg: ApproxConfig, values=None) -> DiscreteProfile:
    """One update ``r_i = p_i + eps * max(0, v_i)`` followed by rescaling."""
    if values is None:
        values = best_response_values(p, cfg)
    raised = p.probs + cfg.epsilon * np.maximum(0.0, values)
    return DiscreteProfile(raised / raised.sum(), p.iteration + 1)


@dataclass
class RunResult:
    profile: DiscreteProfile
    config: ApproxConfig
    history: list[tuple[int, float]] = field(default_factory=list)
    trajectory: list[tuple[int, int, float, float]] = field(default_factory=list)
    stopped_early: bool = False


def run(cfg: ApproxConfig, initial: DiscreteProfile | None = None, record_trajectory: bool = False) -> RunResult:
    """Iterate :func:`step` ``cfg.iterations`` times.

    ``history`` gets ``(iteration, max_i v_i)`` every ``cfg.log_every``
    steps and at the end; ``trajectory`` (optional) gets every
    ``(iteration, i, p_i, v_i)`` at the same cadence.
    """
    p = initial if initial is not None else DiscreteProfile.uniform(cfg.N)
    if p.N != cfg.N:
        raise DimensionError(f"initial profile has {p.N} entries, config expects {cfg.N}")
    result = RunResult(p, cfg)
    for it in range(cfg.iterations):
        values = best_response_values(p, cfg)
        top = float(values.max())
        if it % cfg.log_every == 0:
            result.history.append((it, top))
            if record_trajectory:
                result.trajectory.extend(
                    (it, k + 1, float(pk), float(vk)) for k, (pk, vk) in enumerate(zip(p.probs, values))
                )
            log.debug("iteration %d: max v = %.3e", it, top)
        if cfg.early_stop is not None and top < cfg.early_stop:
            result.stopped_early = True
            break
        p = step(p, cfg, values)
    values = best_response_values(p, cfg)
    result.history.append((p.iteration, float(values.max())))
    if record_trajectory:
        result.trajectory.extend(
            (p.iteration, k + 1, float(pk), float(vk)) for k, (pk, vk) in enumerate(zip(p.probs, values))
        )
    result.profile = p
    return result


def cdf_distance(p: DiscreteProfile, F: StrategyCdf, grid_map=None) -> float:
    """Largest gap between the cumulative sums of p and F at the grid points."""
    probs = p.probs if isinstance(p, DiscreteProfile) else np.asarray(p, dtype=float)
    N = len(probs)
    xs = np.arange(1, N + 1) / N if grid_map is None else np.array([grid_map(i) for i in range(1, N + 1)])
    return float(np.max(np.abs(np.cumsum(probs) - F.cdf(xs))))
