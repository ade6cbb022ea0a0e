"""Mixed strategies represented by their cumulative distribution functions.

All representations share one interface: ``cdf`` (clamped to 0 below the
support and 1 above it), ``quantile`` (least x with ``cdf(x) >= p``),
``atoms`` for point masses, and ``pdf``/``pdf_prime`` where the CDF is
differentiable. Instances are immutable once built.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, UnsupportedError

_BISECT_WIDTH = 1e-14
_TABLE_SIZE = 1025


class StrategyCdf:
    """Base class. Subclasses set ``lo``/``hi`` and implement ``_cdf_inside``."""

    kind = "abstract"
    lo: float
    hi: float

    def _cdf_inside(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = np.clip(self._cdf_inside(np.clip(x, self.lo, self.hi)), 0.0, 1.0)
        out = np.where(x < self.lo, 0.0, np.where(x > self.hi, 1.0, inside))
        return out if out.ndim else float(out)

    def pdf(self, x):
        raise UnsupportedError(f"{self.kind} strategy has no density")

    def pdf_prime(self, x):
        raise UnsupportedError(f"{self.kind} strategy has no smooth density")

    @property
    def support(self) -> tuple[float, float]:
        return self.lo, self.hi

    @property
    def differentiable(self) -> bool:
        return False

    def atoms(self) -> tuple[np.ndarray, np.ndarray]:
        """Locations and masses of point masses (empty for continuous CDFs)."""
        return np.empty(0), np.empty(0)

    def mass_at(self, x: float) -> float:
        locs, masses = self.atoms()
        hit = np.abs(locs - x) <= 1e-12
        return float(masses[hit].sum())

    def quantile(self, p):
        """Least x with ``cdf(x) >= p``, by vectorized bisection."""
        p = np.asarray(p, dtype=float)
        xs, fs = self._table()
        k = np.searchsorted(fs, p, side="left")
        b = xs[np.clip(k, 0, len(xs) - 1)]
        a = xs[np.clip(k - 1, 0, len(xs) - 1)]
        a = np.where(k == 0, self.lo, a)
        for _ in range(200):
            if np.all(b - a <= _BISECT_WIDTH):
                break
            mid = 0.5 * (a + b)
            ok = self.cdf(mid) >= p
            a, b = np.where(ok, a, mid), np.where(ok, mid, b)
        return b if b.ndim else float(b)

    def _table(self):
        cached = getattr(self, "_quantile_table", None)
        if cached is None:
            xs = np.linspace(self.lo, self.hi, _TABLE_SIZE)
            fs = np.maximum.accumulate(np.asarray(self.cdf(xs), dtype=float))
            cached = (xs, fs)
            object.__setattr__(self, "_quantile_table", cached)
        return cached

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        return np.asarray(self.quantile(rng.random(size)))

    def mean(self) -> float:
        """Expected guess, ``lo + integral of (1 - F)`` over the support."""
        from .quadrature import integrate

        locs, _ = self.atoms()
        return self.lo + integrate(lambda t: 1.0 - self.cdf(t), self.lo, self.hi, cuts=locs)


class ClosedFormPir2(StrategyCdf):
    """``F(x) = 1/sqrt(1 - x) - 1`` on [0, 3/4]."""

    kind = "closed_form_pir2"

    def __init__(self):
        self.lo, self.hi = 0.0, 0.75

    def _cdf_inside(self, x):
        return 1.0 / np.sqrt(1.0 - x) - 1.0

    @property
    def differentiable(self):
        return True

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.lo) & (x <= self.hi)
        return np.where(inside, 0.5 * (1.0 - np.clip(x, 0, self.hi)) ** -1.5, 0.0)

    def pdf_prime(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.lo) & (x <= self.hi)
        return np.where(inside, 0.75 * (1.0 - np.clip(x, 0, self.hi)) ** -2.5, 0.0)

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        out = 1.0 - 1.0 / (1.0 + p) ** 2
        return out if out.ndim else float(out)

    def __repr__(self):
        return "ClosedFormPir2()"


class Uniform(StrategyCdf):
    kind = "uniform"

    def __init__(self, lo: float, hi: float):
        if not (0.0 <= lo < hi <= 1.0):
            raise DomainError(f"uniform support [{lo}, {hi}] must be a proper subinterval of [0, 1]")
        self.lo, self.hi = float(lo), float(hi)

    def _cdf_inside(self, x):
        return (x - self.lo) / (self.hi - self.lo)

    @property
    def differentiable(self):
        return True

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.lo) & (x <= self.hi), 1.0 / (self.hi - self.lo), 0.0)

    def pdf_prime(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        out = self.lo + p * (self.hi - self.lo)
        return out if out.ndim else float(out)

    def __repr__(self):
        return f"Uniform({self.lo!r}, {self.hi!r})"


class PointMass(StrategyCdf):
    kind = "point_mass"

    def __init__(self, x: float):
        if not 0.0 <= x <= 1.0:
            raise DomainError(f"point mass location {x} outside [0, 1]")
        self.lo = self.hi = float(x)

    def cdf(self, x):
        out = np.where(np.asarray(x, dtype=float) >= self.lo, 1.0, 0.0)
        return out if out.ndim else float(out)

    def atoms(self):
        return np.array([self.lo]), np.array([1.0])

    def quantile(self, p):
        out = np.full(np.shape(p), self.lo)
        return out if out.ndim else float(out)

    def __repr__(self):
        return f"PointMass({self.lo!r})"


class SeriesStrategy(StrategyCdf):
    """Truncated power series ``offset + sum_k c_k (scale * (x - center))**k``.

    Evaluated by Horner's scheme on ``[lo, hi]``; ``coefficients[k]`` is the
    coefficient of the k-th power.
    """

    kind = "series"

    def __init__(self, coefficients, lo, hi, *, center=0.0, scale=1.0, offset=0.0):
        c = np.array(coefficients, dtype=float)
        if c.ndim != 1 or len(c) < 2 or not np.all(np.isfinite(c)):
            raise DomainError("series needs a finite coefficient vector of length >= 2")
        if not (0.0 <= lo < hi <= 1.0):
            raise DomainError(f"series support [{lo}, {hi}] must lie in [0, 1]")
        c.setflags(write=False)
        self.coefficients = c
        self.lo, self.hi = float(lo), float(hi)
        self.center, self.scale, self.offset = float(center), float(scale), float(offset)

    def _poly(self, coeffs, x):
        t = self.scale * (np.asarray(x, dtype=float) - self.center)
        acc = np.zeros_like(t)
        for ck in coeffs[::-1]:
            acc = acc * t + ck
        return acc

    def _derivative_coeffs(self, order):
        c = self.coefficients
        for _ in range(order):
            c = c[1:] * np.arange(1, len(c))
        return c * self.scale**order

    def _cdf_inside(self, x):
        return self.offset + self._poly(self.coefficients, x)

    def raw(self, x, derivative: int = 0):
        """Unclamped series value (or derivative) at x."""
        if derivative == 0:
            return self._cdf_inside(x)
        return self._poly(self._derivative_coeffs(derivative), x)

    @property
    def differentiable(self):
        return True

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.lo) & (x <= self.hi), self.raw(x, 1), 0.0)

    def pdf_prime(self, x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= self.lo) & (x <= self.hi), self.raw(x, 2), 0.0)

    def quantile(self, p):
        """Newton on the series, kept inside a shrinking bisection bracket."""
        p = np.asarray(p, dtype=float)
        xs, fs = self._table()
        k = np.clip(np.searchsorted(fs, p, side="left"), 1, len(xs) - 1)
        a, b = xs[k - 1], xs[k]
        fa, fb = fs[k - 1], fs[k]
        x = a + (b - a) * np.clip((p - fa) / np.where(fb > fa, fb - fa, 1.0), 0.0, 1.0)
        for _ in range(100):
            f = self.cdf(x) - p
            a, b = np.where(f < 0, x, a), np.where(f >= 0, x, b)
            d = self.pdf(x)
            new = x - np.where(d > 0, f / np.where(d > 0, d, 1.0), 0.0)
            new = np.where((new >= a) & (new <= b), new, 0.5 * (a + b))
            done = np.all((np.abs(new - x) <= _BISECT_WIDTH) | (b - a <= _BISECT_WIDTH))
            x = new
            if done:
                break
        return x if x.ndim else float(x)

    def __repr__(self):
        return (
            f"SeriesStrategy(order={len(self.coefficients) - 1}, support=[{self.lo:.6g}, {self.hi:.6g}], "
            f"center={self.center}, scale={self.scale}, offset={self.offset})"
        )


class DiscreteStrategy(StrategyCdf):
    """Probability vector over the grid points ``grid[i]`` (default ``(i+1)/N``)."""

    kind = "discrete"

    def __init__(self, probs, grid=None):
        p = np.array(probs, dtype=float)
        if p.ndim != 1 or len(p) < 1 or np.any(p < 0) or not np.all(np.isfinite(p)):
            raise DomainError("probabilities must be a finite nonnegative vector")
        if abs(p.sum() - 1.0) > 1e-9:
            raise DomainError(f"probabilities sum to {p.sum()}, not 1")
        n = len(p)
        g = np.arange(1, n + 1) / n if grid is None else np.array(grid, dtype=float)
        if g.shape != p.shape or np.any(np.diff(g) <= 0) or g[0] < 0 or g[-1] > 1:
            raise DomainError("grid must be strictly increasing inside [0, 1], one point per probability")
        p.setflags(write=False)
        g.setflags(write=False)
        self.probs, self.grid = p, g
        self._cum = np.cumsum(p)
        self.lo, self.hi = float(g[0]), float(g[-1])

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        k = np.searchsorted(self.grid, x + 1e-12, side="right")
        out = np.where(k == 0, 0.0, self._cum[np.maximum(k - 1, 0)])
        out = np.where(x >= self.hi, 1.0, np.minimum(out, 1.0))
        return out if out.ndim else float(out)

    def atoms(self):
        return self.grid, self.probs

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        k = np.clip(np.searchsorted(self._cum, p - 1e-15, side="left"), 0, len(self.grid) - 1)
        # p = 0 maps to the first grid point carrying mass
        first = int(np.argmax(self.probs > 0))
        out = self.grid[np.maximum(k, first)]
        return out if out.ndim else float(out)

    def __repr__(self):
        return f"DiscreteStrategy(N={len(self.probs)})"


class MappedStrategy(StrategyCdf):
    """``x -> base.cdf(forward(x))`` for an increasing bijection ``forward``."""

    kind = "mapped"

    def __init__(self, base: StrategyCdf, forward, inverse):
        self.base, self.forward, self.inverse = base, forward, inverse
        self.lo = float(inverse(base.lo))
        self.hi = float(inverse(base.hi))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.asarray(self.base.cdf(self.forward(x)), dtype=float)
        out = np.where(x < self.lo, 0.0, np.where(x > self.hi, 1.0, out))
        return out if out.ndim else float(out)

    def atoms(self):
        locs, masses = self.base.atoms()
        return np.asarray(self.inverse(locs), dtype=float), masses

    def quantile(self, p):
        out = np.asarray(self.inverse(self.base.quantile(p)), dtype=float)
        return out if out.ndim else float(out)

    def __repr__(self):
        return f"MappedStrategy({self.base!r})"


def evaluate(F: StrategyCdf, x):
    """Probability that a player using ``F`` guesses at most ``x``."""
    return F.cdf(x)


def quantile(F: StrategyCdf, p):
    p_arr = np.asarray(p, dtype=float)
    if np.any(~np.isfinite(p_arr)) or np.any(p_arr < 0) or np.any(p_arr > 1):
        raise DomainError("quantile level must lie in [0, 1]")
    return F.quantile(p)
