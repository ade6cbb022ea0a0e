"""Power-series solutions for the three-player Price Is Right game and the
four-player Closest Wins game.

Both solutions come from polynomial ODEs that the equilibrium condition
reduces to. Coefficients are produced order by order: with the unknown
leading coefficient set to zero, the residual's Taylor coefficient at the
matching order is linear in that unknown, which fixes it. Free constants
are then pinned by boundary conditions.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .game import GameRule, expected_payoffs, GameSpec
from .quadrature import integrate
from .strategies import SeriesStrategy

P = np.polynomial.polynomial

PIR3_SUPPORT = 7.0 / 9.0
PIR3_BRACKET = (0.5, 1.0)
# orders at which the ODE residual falls below 1e-6 across the support
PIR3_DEFAULT_ORDER = 80
CW4_DEFAULT_TERMS = 61


@dataclass(frozen=True)
class SeriesSolution:
    """Truncated power series ``sum_k coefficients[k] * x**k`` on ``[0, support_upper]``."""

    coefficients: np.ndarray
    support_upper: float
    truncation_order: int
    rule: GameRule
    players: int

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    def __call__(self, x, derivative: int = 0):
        c = self.coefficients
        for _ in range(derivative):
            c = P.polyder(c) if len(c) > 1 else np.zeros(1)
        return P.polyval(np.asarray(x, dtype=float), c)


@dataclass(frozen=True)
class Cw4Constants:
    a: float
    t_star: float
    u: float

    @property
    def folded_support(self) -> tuple[float, float]:
        return (1.0 - self.u) / 2.0, (1.0 + self.u) / 2.0


def _mul(*factors, degree):
    return functools.reduce(lambda p, q: np.convolve(p, q)[: degree + 1], factors)


def _der(c):
    d = np.zeros_like(c)
    d[:-1] = c[1:] * np.arange(1, len(c))
    return d


# ---------------------------------------------------------------- PIR, n = 3


def _pir3_residual_coeffs(c):
    """Taylor coefficients of the three-player ODE numerator for series c."""
    K = len(c) - 1
    x = np.zeros(K + 1)
    x[1] = 1.0
    d1 = _der(c)
    d2 = _der(d1)
    d1sq = _mul(d1, d1, degree=K)
    d1cu = _mul(d1sq, d1, degree=K)
    return (
        8 * d1sq
        - 2 * _mul(c, d1sq, degree=K)
        - 6 * d1cu
        + 6 * _mul(x, d1cu, degree=K)
        - 2 * d2
        - 2 * _mul(c, d2, degree=K)
        + _mul(c, c, d2, degree=K)
    )


def pir3_coefficients(c1: float, order: int) -> np.ndarray:
    """Series coefficients c_0..c_order for a trial slope ``c1`` at the origin.

    The coefficient of x**k in the residual contains c_{k+2} only through
    the ``-2 F''`` term, so ``c_{k+2} = residual_k / (2 (k+1) (k+2))``
    once c_{k+2} is provisionally zero.
    """
    c = np.zeros(order + 1)
    c[1] = c1
    for k in range(order - 1):
        c[k + 2] = 0.0
        c[k + 2] = _pir3_residual_coeffs(c)[k] / (2.0 * (k + 1) * (k + 2))
    return c


def pir3_ode_residual(series, x):
    """Numerator of the three-player ODE evaluated with series derivatives."""
    c = np.asarray(getattr(series, "coefficients", series), dtype=float)
    if c.size == 0:
        raise DomainError("empty series")
    f = P.polyval(x, c)
    d1 = P.polyval(x, P.polyder(c)) if c.size > 1 else 0.0 * f
    d2 = P.polyval(x, P.polyder(c, 2)) if c.size > 2 else 0.0 * f
    x = np.asarray(x, dtype=float)
    return (
        8 * d1**2
        - 2 * f * d1**2
        - 6 * d1**3
        + 6 * x * d1**3
        - 2 * d2
        - 2 * f * d2
        + f**2 * d2
    )


def solve_pir3(order: int = PIR3_DEFAULT_ORDER, tol: float = 1e-9) -> SeriesSolution:
    """Shoot on the slope at 0 so that the series reaches 1 at 7/9."""
    if order < 5:
        raise DomainError("order must be at least 5")
    if tol <= 0:
        raise DomainError("tol must be positive")
    u = PIR3_SUPPORT

    def mismatch(c1):
        return P.polyval(u, pir3_coefficients(c1, order)) - 1.0

    lo, hi = PIR3_BRACKET
    probe = np.linspace(lo, hi, 17)
    curve = np.array([mismatch(s) for s in probe])
    diag = {"bracket": (lo, hi), "c1": probe.tolist(), "mismatch": curve.tolist()}
    if not np.all(np.isfinite(curve)) or curve[0] * curve[-1] > 0:
        raise ConvergenceError("boundary mismatch has no sign change on the shooting bracket", diag)
    if np.any(np.diff(curve) <= 0):
        raise ConvergenceError("boundary mismatch is not monotone in the slope", diag)

    f_lo = curve[0]
    for _ in range(200):
        if hi - lo <= 1e-15:
            break
        mid = 0.5 * (lo + hi)
        f_mid = mismatch(mid)
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    c1 = 0.5 * (lo + hi)
    coeffs = pir3_coefficients(c1, order)
    if abs(P.polyval(u, coeffs) - 1.0) > tol:
        diag["final_mismatch"] = float(P.polyval(u, coeffs) - 1.0)
        raise ConvergenceError(f"F(7/9) misses 1 by more than {tol}", diag)
    xs = np.linspace(0.0, u, 2001)
    if np.any(P.polyval(xs, P.polyder(coeffs)) < 0):
        raise ConvergenceError("series solution is not monotone on its support", diag)
    return SeriesSolution(coeffs, u, order, GameRule.PRICE_IS_RIGHT, 3)


def pir3_strategy(solution: SeriesSolution) -> SeriesStrategy:
    return SeriesStrategy(solution.coefficients, 0.0, solution.support_upper)


# ---------------------------------------------------------------- CW, n = 4


def cw4_symmetrized_payoff(x, y, z, w) -> float:
    """Payoff to the first player of the four-player game folded about 1/2.

    Each argument ``s`` stands for playing ``(1 + s)/2`` or ``(1 - s)/2``
    with equal chance; the game is symmetric in the opponents' arguments.
    """
    y, z, w = sorted((y, z, w))
    if x <= y:
        return (-8 + 16 * y + 8 * z + 4 * w) / 16
    if x <= z:
        return (-8 - 4 * x + 8 * z + 4 * w) / 16
    if x <= w:
        return (-8 * x - 8 * z + 8 * w) / 16
    return (16 - 16 * x - 4 * z - 8 * w) / 16


def cw4_symmetrized_payoff_average(x, y, z, w) -> float:
    """The same payoff as the average of the original game over 16 reflections."""
    spec = GameSpec.of(GameRule.CLOSEST_WINS, 4)
    total = 0.0
    for signs in np.ndindex(2, 2, 2, 2):
        pts = [(1 + (1 - 2 * s) * v) / 2 for s, v in zip(signs, (x, y, z, w))]
        total += expected_payoffs(spec, pts)[0]
    return total / 16


def _cw4_residual_coeffs(c):
    D = len(c) - 1
    x = np.zeros(D + 1)
    x[1] = 1.0
    f, f1 = c, _der(c)
    f2 = _der(f1)
    f3 = _der(f2)
    m = functools.partial(_mul, degree=D)
    return (
        -18 * m(f, f1, f1, f1, f1)
        - 12 * m(x, f1, f1, f1, f1, f1)
        + 21 * m(f1, f1, f2)
        + 9 * m(f, f, f1, f1, f2)
        - 9 * m(f, f2, f2)
        - 3 * m(f, f, f, f2, f2)
        + 3 * m(f, f1, f3)
        + m(f, f, f, f1, f3)
    )


def cw4_unit_coefficients(terms: int) -> np.ndarray:
    """Odd series ``t + c_3 t**3 + ...`` solving the folded ODE with unit slope.

    Any solution with slope ``a`` at 0 is this series evaluated at ``a t``.
    The residual coefficient at t**(m-2) contains c_m as
    ``3 m (m-1) (m+5) c_m`` (from the F'' and F''' terms), which gives the
    recurrence. Even coefficients vanish identically.
    """
    D = 2 * terms - 1
    c = np.zeros(D + 1)
    c[1] = 1.0
    for m in range(3, D + 1, 2):
        c[m] = 0.0
        c[m] = -_cw4_residual_coeffs(c)[m - 2] / (3.0 * m * (m - 1) * (m + 5))
    return c


def cw4_ode_residual(series, x):
    """Folded four-player ODE evaluated with series derivatives at x."""
    c = np.asarray(getattr(series, "coefficients", series), dtype=float)
    if c.size == 0:
        raise DomainError("empty series")
    f = P.polyval(x, c)
    f1, f2, f3 = (P.polyval(x, P.polyder(c, k)) for k in (1, 2, 3))
    x = np.asarray(x, dtype=float)
    return (
        -18 * f * f1**4
        - 12 * x * f1**5
        + 21 * f1**2 * f2
        + 9 * f**2 * f1**2 * f2
        - 9 * f * f2**2
        - 3 * f**3 * f2**2
        + 3 * f * f1 * f3
        + f**3 * f1 * f3
    )


def _bisect(fn, lo, hi, tol=1e-15):
    f_lo = fn(lo)
    if f_lo * fn(hi) > 0:
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def cw4_closure(fhat, u: float) -> float:
    """``1 - u - (3/2) * integral_0^u y F(y) F'(y) dy``, zero at the solution."""
    return 1.0 - u - 1.5 * integrate(lambda y: y * fhat(y) * fhat(y, 1), 0.0, u)


def solve_cw4(order: int = CW4_DEFAULT_TERMS, tol: float = 1e-12):
    """Folded series, its constants, and the unfolded CDF on [0, 1].

    ``order`` counts odd terms. The unit-slope series ``phi`` reaches 1 at
    ``t_star``; with ``F(x) = phi(a x)`` the support end is ``u = t_star / a``
    and the closure condition at ``x = u`` becomes
    ``0 = 1 - (t_star + 1.5 I) / a`` with ``I = integral_0^t_star t phi phi' dt``,
    which is linear in ``1/a``.
    """
    if order < 9:
        raise DomainError("order must be at least 9 odd terms")
    if tol <= 0:
        raise DomainError("tol must be positive")
    phi = cw4_unit_coefficients(order)
    t_star = _bisect(lambda t: P.polyval(t, phi) - 1.0, 0.0, 1.0)
    if t_star is None or abs(P.polyval(t_star, phi) - 1.0) > tol:
        ts = np.linspace(0, 1, 11)
        raise ConvergenceError(
            "unit-scale series does not cross 1 on [0, 1]",
            {"t": ts.tolist(), "phi_minus_1": (P.polyval(ts, phi) - 1).tolist()},
        )
    integral = P.polyval(t_star, P.polyint(P.polymul([0.0, 1.0], P.polymul(phi, P.polyder(phi)))))

    a = t_star + 1.5 * integral
    if not (np.isfinite(a) and a > t_star):
        raise ConvergenceError("closure equation gives no admissible slope", {"t_star": t_star, "integral": integral})
    u = t_star / a
    coeffs = phi * a ** np.arange(len(phi))
    fhat = SeriesSolution(coeffs, u, order, GameRule.CLOSEST_WINS, 4)
    constants = Cw4Constants(a=a, t_star=t_star, u=u)
    return fhat, constants, unfold_symmetric(fhat, u)


def unfold_symmetric(fhat: SeriesSolution, u: float) -> SeriesStrategy:
    """CDF ``1/2 + Fhat(2x - 1)/2`` on ``[(1-u)/2, (1+u)/2]`` for an odd Fhat."""
    c = np.asarray(getattr(fhat, "coefficients", fhat), dtype=float)
    even = c[0::2]
    if np.any(np.abs(even) > 1e-12 * max(1.0, np.abs(c).max())):
        raise DomainError("folded series must be odd")
    if not 0.0 < u <= 1.0:
        raise DomainError(f"support half-width {u} outside (0, 1]")
    unfolded = c / 2.0
    unfolded[0::2] = 0.0
    return SeriesStrategy(unfolded, (1.0 - u) / 2.0, (1.0 + u) / 2.0, center=0.5, scale=2.0, offset=0.5)
