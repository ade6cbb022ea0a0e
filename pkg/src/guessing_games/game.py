"""Game definitions: rules, target models, guess profiles and payoffs.

Every player antes 1 and the winners split the pot, so ``k`` tied winners
each net ``n/k - 1`` and everyone else nets ``-1``. Under the Price Is Right
rule a guess above the target is ineligible; if every guess is above the
target nobody pays anything.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError, UnsupportedError


class GameRule(enum.Enum):
    PRICE_IS_RIGHT = "pir"
    CLOSEST_WINS = "cw"

    @classmethod
    def parse(cls, value) -> "GameRule":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {
            "pir": cls.PRICE_IS_RIGHT,
            "price_is_right": cls.PRICE_IS_RIGHT,
            "priceisright": cls.PRICE_IS_RIGHT,
            "cw": cls.CLOSEST_WINS,
            "closest_wins": cls.CLOSEST_WINS,
            "closestwins": cls.CLOSEST_WINS,
        }
        try:
            return aliases[key]
        except KeyError:
            raise DomainError(f"unknown game rule {value!r}") from None


@dataclass(frozen=True)
class TargetModel:
    """Distribution of the target number.

    ``knots`` is ``None`` for the uniform distribution on [0, 1]. Otherwise
    it holds a table of ``(x, G(x))`` pairs, linearly interpolated, with
    ``G`` strictly increasing from 0 to 1.
    """

    knots: tuple[tuple[float, float], ...] | None = None
    _xs: np.ndarray = field(init=False, repr=False, compare=False)
    _gs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.knots is None:
            xs = np.array([0.0, 1.0])
            gs = np.array([0.0, 1.0])
        else:
            table = np.asarray(self.knots, dtype=float)
            if table.ndim != 2 or table.shape[1] != 2 or len(table) < 2:
                raise DomainError("target table needs at least two (x, G) rows")
            xs, gs = table[:, 0], table[:, 1]
            if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(gs))):
                raise DomainError("target table contains non-finite values")
            if np.any(np.diff(xs) <= 0):
                raise DomainError("target table x column must be strictly increasing")
            if np.any(np.diff(gs) <= 0):
                raise DomainError("target CDF must be strictly increasing (no flat pieces)")
            if gs[0] != 0.0 or gs[-1] != 1.0:
                raise DomainError("target CDF must start at 0 and end at 1")
            object.__setattr__(self, "knots", tuple(map(tuple, table.tolist())))
        xs.setflags(write=False)
        gs.setflags(write=False)
        object.__setattr__(self, "_xs", xs)
        object.__setattr__(self, "_gs", gs)

    @classmethod
    def uniform(cls) -> "TargetModel":
        return cls(None)

    @classmethod
    def from_table(cls, xs, gs) -> "TargetModel":
        return cls(tuple(zip(map(float, xs), map(float, gs))))

    @property
    def is_uniform(self) -> bool:
        return self.knots is None

    @property
    def is_identity(self) -> bool:
        """True when the map x -> G(x) is the identity on [0, 1]."""
        return self.is_uniform or (
            self._xs[0] == 0.0 and self._xs[-1] == 1.0 and np.array_equal(self._xs, self._gs)
        )

    @property
    def range(self) -> tuple[float, float]:
        return float(self._xs[0]), float(self._xs[-1])

    def cdf(self, x):
        return np.interp(x, self._xs, self._gs)

    def inverse(self, p):
        return np.interp(p, self._gs, self._xs)


@dataclass(frozen=True)
class GameSpec:
    players: int
    rule: GameRule
    target: TargetModel = field(default_factory=TargetModel.uniform)

    def __post_init__(self):
        if int(self.players) != self.players or self.players < 2:
            raise DomainError(f"need at least two players, got {self.players}")
        object.__setattr__(self, "players", int(self.players))
        object.__setattr__(self, "rule", GameRule.parse(self.rule))

    @classmethod
    def of(cls, rule, players: int) -> "GameSpec":
        return cls(players=players, rule=GameRule.parse(rule))


def _check_profile(spec: GameSpec, guesses) -> np.ndarray:
    g = np.asarray(guesses, dtype=float)
    if g.ndim != 1 or len(g) != spec.players:
        raise DimensionError(f"expected {spec.players} guesses, got shape {g.shape}")
    lo, hi = spec.target.range
    if np.any(~np.isfinite(g)) or np.any(g < lo) or np.any(g > hi):
        raise DomainError(f"guesses must lie in [{lo}, {hi}]")
    return g


def payoff_table(rule: GameRule, guesses, targets) -> np.ndarray:
    """Realized payoffs for a batch of rounds.

    ``guesses`` has shape ``(m, n)`` and ``targets`` shape ``(m,)``; no range
    checks are done here, so integer grids work as well as [0, 1].
    """
    g = np.asarray(guesses, dtype=float)
    r = np.asarray(targets, dtype=float)[:, None]
    n = g.shape[1]
    if rule is GameRule.PRICE_IS_RIGHT:
        eligible = g <= r
        best = np.where(eligible, g, -np.inf).max(axis=1, keepdims=True)
        winners = eligible & (g == best)
    else:
        dist = np.abs(g - r)
        winners = dist == dist.min(axis=1, keepdims=True)
    k = winners.sum(axis=1, keepdims=True)
    share = np.divide(n, k, out=np.zeros(k.shape), where=k > 0) - 1.0
    out = np.where(winners, share, -1.0)
    return np.where(k > 0, out, 0.0)


def realized_payoffs(spec: GameSpec, guesses, r: float) -> np.ndarray:
    """Payoffs to every player for one round with target ``r``."""
    g = _check_profile(spec, guesses)
    lo, hi = spec.target.range
    if not (lo <= r <= hi):
        raise DomainError(f"target {r} outside [{lo}, {hi}]")
    return payoff_table(spec.rule, g[None, :], np.array([r]))[0]


def expected_payoffs(spec: GameSpec, guesses) -> np.ndarray:
    """Exact expected payoffs when the target is uniform on [0, 1].

    Equal guesses are pooled; each pool owns the set of targets it wins
    (an interval) and shares ``n`` times its length. Under Price Is Right the
    targets below the lowest guess pay nobody.
    """
    if not spec.target.is_uniform:
        raise UnsupportedError(
            "expected_payoffs needs a uniform target; map guesses through G first"
        )
    g = _check_profile(spec, guesses)
    n = spec.players
    values, inverse, counts = np.unique(g, return_inverse=True, return_counts=True)
    if spec.rule is GameRule.PRICE_IS_RIGHT:
        right = np.append(values[1:], 1.0)
        cell = right - values
        live = 1.0 - values[0]
    else:
        mids = (values[1:] + values[:-1]) / 2
        left = np.concatenate(([0.0], mids))
        right = np.concatenate((mids, [1.0]))
        cell = right - left
        live = 1.0
    per_pool = n * cell / counts
    return per_pool[inverse] - live
