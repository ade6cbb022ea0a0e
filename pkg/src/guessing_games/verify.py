"""Best-response curves, equilibrium certificates and a Monte Carlo oracle.

A player who guesses ``x`` against ``n - 1`` opponents drawing i.i.d. from
``F`` faces, for each target ``r``, opponents that either beat ``x``, tie
with it, or lose to it. With ``q`` the losing probability and ``m`` the
tying probability, the expected share of the pot collected is

    W(q, m) = sum_t C(n-1, t) m**t q**(n-1-t) * n / (t + 1)

(zero tying mass gives ``n q**(n-1)``). Integrating ``W - 1`` over the
target collapses the ``(n-1)``-fold integral over opponents into a single
integral in ``r``, whatever ``n`` is.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import UnsupportedError
from .game import GameRule, GameSpec, payoff_table
from .quadrature import integrate, nodes_and_weights
from .strategies import StrategyCdf

SUPPORT_POINTS = 512
OFF_SUPPORT_POINTS = 64


def win_share(q, m, n: int):
    """Expected ``n / (winners)`` restricted to the event that nobody beats us."""
    q = np.asarray(q, dtype=float)
    total = np.zeros(np.broadcast(q, m).shape)
    for t in range(n):
        total = total + comb(n - 1, t) * m**t * q ** (n - 1 - t) * (n / (t + 1))
    return total


def _check(F, spec: GameSpec):
    if not isinstance(F, StrategyCdf):
        raise UnsupportedError(f"unsupported strategy object {type(F).__name__}")
    if not spec.target.is_uniform:
        raise UnsupportedError("best responses need a uniform target; pull the strategy back first")


def _deviation_value(F: StrategyCdf, n: int, rule: GameRule, x: float) -> float:
    m = F.mass_at(x)
    fx = float(F.cdf(x))
    locs, _ = F.atoms()
    kinks = np.concatenate(([x, F.lo, F.hi], locs))
    if rule is GameRule.PRICE_IS_RIGHT:

        def eligible(r):
            return win_share(1.0 - F.cdf(r) + fx - m, m, n)

        def nobody_eligible(r):
            return (1.0 - F.cdf(r)) ** (n - 1)

        return (
            integrate(eligible, x, 1.0, cuts=kinks)
            - 1.0
            + integrate(nobody_eligible, 0.0, x, cuts=kinks)
        )

    def share(r):
        mirror = F.cdf(2.0 * r - x)
        q = np.where(r > x, 1.0 - mirror + fx - m, 1.0 - fx + mirror)
        return win_share(q, m, n)

    return integrate(share, 0.0, 1.0, cuts=(kinks + x) / 2.0) - 1.0


def best_response_curve(F: StrategyCdf, spec: GameSpec, grid) -> np.ndarray:
    """Expected payoff of each pure guess in ``grid`` against ``n - 1`` copies of F."""
    _check(F, spec)
    return np.array([_deviation_value(F, spec.players, spec.rule, float(x)) for x in np.ravel(grid)])


def profile_value(F: StrategyCdf, spec: GameSpec) -> float:
    """Per-player expected payoff when every player draws from F.

    Computed as the integral of the best-response curve against dF, taken in
    probability space (``x = F^{-1}(p)``) so atoms need no special casing.
    """
    _check(F, spec)
    locs, masses = F.atoms()
    levels = np.cumsum(masses)[:-1] if len(masses) else ()
    ps, ws = nodes_and_weights(0.0, 1.0, cuts=levels, n=32)
    xs = np.atleast_1d(F.quantile(ps))
    uniq, inverse = np.unique(xs, return_inverse=True)
    values = best_response_curve(F, spec, uniq)
    return float(np.dot(ws, values[inverse]))


@dataclass
class EquilibriumReport:
    game: GameSpec
    grid: np.ndarray
    values: np.ndarray
    on_support: np.ndarray
    max_abs_on_support: float
    max_positive_off_support: float
    game_value_per_player: float
    tol: float
    method: str = "quadrature"
    samples: int | None = None
    seed: int | None = None
    stderr: np.ndarray | None = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return self.max_abs_on_support <= self.tol and self.max_positive_off_support <= self.tol

    def to_dict(self) -> dict:
        method = {"name": self.method}
        if self.method == "montecarlo":
            method.update(samples=self.samples, seed=self.seed)
        return {
            "game": {"rule": self.game.rule.value, "players": self.game.players},
            "method": method,
            "tol": self.tol,
            "grid": [
                {"x": float(x), "v": float(v), "on_support": bool(s)}
                for x, v, s in zip(self.grid, self.values, self.on_support)
            ],
            "max_abs_on_support": self.max_abs_on_support,
            "max_positive_off_support": self.max_positive_off_support,
            "game_value_per_player": self.game_value_per_player,
            "pass": self.passed,
        }


def certification_grid(F: StrategyCdf, grid_size: int = SUPPORT_POINTS, off_size: int = OFF_SUPPORT_POINTS):
    """Deviation points on the support and on either side of it."""
    locs, masses = F.atoms()
    if len(locs):
        support = locs[masses > 0]
    else:
        support = np.linspace(F.lo, F.hi, grid_size)
    left = np.linspace(0.0, F.lo, off_size + 1)[:-1] if F.lo > 0 else np.empty(0)
    right = np.linspace(F.hi, 1.0, off_size + 1)[1:] if F.hi < 1 else np.empty(0)
    off = np.concatenate((left, right))
    if len(locs):
        off = np.concatenate((off, locs[masses == 0]))
        between = np.linspace(F.lo, F.hi, off_size + 2)[1:-1]
        off = np.concatenate((off, between[np.min(np.abs(between[:, None] - support[None, :]), axis=1) > 1e-9]))
    grid = np.concatenate((support, off))
    on = np.concatenate((np.ones(len(support), bool), np.zeros(len(off), bool)))
    order = np.argsort(grid, kind="stable")
    return grid[order], on[order]


def certify(
    F: StrategyCdf,
    spec: GameSpec,
    tol: float = 1e-6,
    grid_size: int = SUPPORT_POINTS,
    off_size: int = OFF_SUPPORT_POINTS,
) -> EquilibriumReport:
    """Check that no pure deviation beats F when all opponents play F.

    Passes iff ``|v(x)| <= tol`` on the support and ``v(x) <= tol`` off it.
    """
    grid, on = certification_grid(F, grid_size, off_size)
    values = best_response_curve(F, spec, grid)
    return _report(F, spec, grid, on, values, tol)


def _report(F, spec, grid, on, values, tol, **extra):
    on_vals, off_vals = values[on], values[~on]
    return EquilibriumReport(
        game=spec,
        grid=grid,
        values=values,
        on_support=on,
        max_abs_on_support=float(np.max(np.abs(on_vals))) if len(on_vals) else 0.0,
        max_positive_off_support=float(max(0.0, off_vals.max())) if len(off_vals) else 0.0,
        game_value_per_player=profile_value(F, spec),
        tol=tol,
        **extra,
    )


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    stderr: float
    samples: int


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based Philox stream, reproducible across platforms."""
    return np.random.Generator(np.random.Philox(seed))


def monte_carlo_value(
    F: StrategyCdf,
    spec: GameSpec,
    deviation: float | None = None,
    samples: int = 1_000_000,
    seed: int = 0,
    batch: int = 250_000,
) -> MonteCarloEstimate:
    """Simulated payoff to player 1, by inverse-transform sampling and the raw payoff rule.

    With ``deviation`` set, player 1 always guesses it; otherwise all
    ``n`` players draw from F.
    """
    _check(F, spec)
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = make_rng(seed)
    n = spec.players
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        size = min(batch, samples - done)
        draws = rng.random((size, n))
        if deviation is None:
            draws = np.asarray(F.quantile(draws), dtype=float).reshape(size, n)
        else:
            # the stream is consumed identically; only the deviator's column is not inverted
            draws[:, 1:] = np.asarray(F.quantile(draws[:, 1:]), dtype=float).reshape(size, n - 1)
            draws[:, 0] = deviation
        r = rng.random(size)
        pay = payoff_table(spec.rule, draws, r)[:, 0]
        total += pay.sum()
        total_sq += np.dot(pay, pay)
        done += size
    mean = total / samples
    var = max(total_sq / samples - mean**2, 0.0)
    stderr = np.sqrt(var / max(samples - 1, 1)) if samples > 1 else float("inf")
    return MonteCarloEstimate(float(mean), float(stderr), samples)


def certify_monte_carlo(
    F: StrategyCdf,
    spec: GameSpec,
    tol: float,
    grid_size: int = 32,
    off_size: int = 8,
    samples: int = 200_000,
    seed: int = 0,
) -> EquilibriumReport:
    """Sampling-based certificate; each point passes if it is within tol after
    allowing three standard errors of noise."""
    grid, on = certification_grid(F, grid_size, off_size)
    est = [monte_carlo_value(F, spec, x, samples, seed + i) for i, x in enumerate(grid)]
    values = np.array([e.mean for e in est])
    err = np.array([e.stderr for e in est])
    shrunk = np.sign(values) * np.maximum(np.abs(values) - 3 * err, 0.0)
    report = _report(F, spec, grid, on, shrunk, tol, method="montecarlo", samples=samples, seed=seed)
    report.values = values
    report.stderr = err
    return report
