"""Realized variance, the Hayashi-Yoshida estimator and asymptotic variances.

The Hayashi-Yoshida (HY) estimator sums products of increments over every
pair of observation intervals that overlap::

    HY_t = sum_{t1_i <= t} sum_{t2_j <= t} dX1_i dX2_j
           1{ min(t1_i, t2_j) > max(t1_{i-1}, t2_{j-1}) }

It is evaluated by a merge sweep. Three telescoped forms give the same value
apart from terminal end effects: tracing out component 1, tracing out
component 2, and refresh-time blocks. They are exposed through
:func:`hy_rep` together with the size of the end-effect discrepancy.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from hyjump import _kernels
from hyjump.sampling import IntervalStats, refresh_grid
from hyjump.simulate import ObservedPath


class Representation(str, enum.Enum):
    DOUBLE_SUM = "DoubleSum"
    REP1 = "Rep1"
    REP2 = "Rep2"
    REP3 = "Rep3"


@dataclass(frozen=True)
class EstimateResult:
    value: float
    t: float
    representation: Representation | None = None
    boundary_residual: float = 0.0


@dataclass(frozen=True)
class AvarBreakdown:
    continuous: float
    jump: float

    @property
    def total(self) -> float:
        return self.continuous + self.jump


def _last_index(path: ObservedPath, t: float) -> int:
    return int(np.searchsorted(path.times, t, side="right")) - 1


def rv(path: ObservedPath, t: float = 1.0) -> EstimateResult:
    """Sum of squared increments over observations up to ``t``."""
    m = _last_index(path, t)
    if m < 1:
        raise ValueError("fewer than 2 observations before t")
    dx = np.diff(path.values[: m + 1])
    return EstimateResult(float(_kernels.sequential_sum(dx * dx)), t)


def _check_pair(p1: ObservedPath, p2: ObservedPath, t: float) -> tuple[int, int]:
    m1, m2 = _last_index(p1, t), _last_index(p2, t)
    if m1 < 1 or m2 < 1:
        raise ValueError("degenerate grids: fewer than 2 observations before t")
    return m1, m2


def hy(p1: ObservedPath, p2: ObservedPath, t: float = 1.0) -> EstimateResult:
    m1, m2 = _check_pair(p1, p2, t)
    value = _kernels.hy_sweep(p1.times, p1.values, m1, p2.times, p2.values, m2)
    return EstimateResult(float(value), t, Representation.DOUBLE_SUM)


def _next_idx(times: np.ndarray, s) -> np.ndarray:
    # clamped: beyond the last observation the process is read at its last tick
    return np.minimum(np.searchsorted(times, s, side="left"), times.size - 1)


def _prev_idx(times: np.ndarray, s) -> np.ndarray:
    return np.searchsorted(times, s, side="right") - 1


def _trace_out(p: ObservedPath, q: ObservedPath, t: float) -> float:
    # sum_i dP_i (Q at next tick after p_i  -  Q at previous tick before p_{i-1})
    m = _last_index(p, t)
    tp, tq = p.times, q.times
    stop = m - 1
    # the terminal addend has no end effect when its interpolation stays within t
    nxt = tq[_next_idx(tq, tp[m])]
    if tp[m] <= nxt <= t:
        stop = m
    i = np.arange(1, stop + 1)
    dp = p.values[i] - p.values[i - 1]
    dq = q.values[_next_idx(tq, tp[i])] - q.values[_prev_idx(tq, tp[i - 1])]
    return float(_kernels.sequential_sum(dp * dq))


def _refresh_blocks(p1: ObservedPath, p2: ObservedPath, t: float) -> float:
    rg = refresh_grid(p1.grid, p2.grid)
    M = rg.count_upto(t)
    stop = M - 1
    if M >= 1:
        ok = all(
            nxt[M] < times.size and times[nxt[M]] <= t
            for times, nxt in ((p1.times, rg.next1), (p2.times, rg.next2))
        )
        if ok:
            stop = M
    k = np.arange(1, stop + 1)
    a = p1.values[np.minimum(rg.next1[k], p1.times.size - 1)] - p1.values[rg.prev1[k - 1]]
    b = p2.values[np.minimum(rg.next2[k], p2.times.size - 1)] - p2.values[rg.prev2[k - 1]]
    return float(_kernels.sequential_sum(a * b))


def hy_rep(p1: ObservedPath, p2: ObservedPath, t: float = 1.0, rep: int = 1) -> EstimateResult:
    """HY via a telescoped representation; ``boundary_residual = |rep - double sum|``.

    ``rep=1`` traces out the increments of component 1 against interpolated
    increments of component 2, ``rep=2`` the reverse, ``rep=3`` multiplies
    interpolated increments over refresh-time blocks. Each stops one addend
    short of the last observation (refresh time) before ``t`` unless that
    addend's interpolation ends at or before ``t``, as at a synchronous
    terminal observation.
    """
    _check_pair(p1, p2, t)
    if rep == 1:
        value = _trace_out(p1, p2, t)
    elif rep == 2:
        value = _trace_out(p2, p1, t)
    elif rep == 3:
        value = _refresh_blocks(p1, p2, t)
    else:
        raise ValueError("rep must be 1, 2 or 3")
    ref = hy(p1, p2, t).value
    return EstimateResult(value, t, Representation(f"Rep{rep}"), abs(value - ref))


def end_effect_bound(p1: ObservedPath, p2: ObservedPath, t: float = 1.0) -> float:
    """Upper bound on ``|hy_rep - hy|`` for all three representations.

    Sums ``|dX1_i dX2_j|`` over overlapping pairs, including the first
    interval past ``t`` in each grid, whose later right endpoint exceeds the
    smallest of the penultimate observation times before ``t`` and the
    penultimate refresh time before ``t``. Every addend in which the
    representations and the double sum can differ is such a pair.
    """
    m1, m2 = _check_pair(p1, p2, t)
    rg = refresh_grid(p1.grid, p2.grid)
    M = rg.count_upto(t)
    cut = min(p1.times[m1 - 1], p2.times[m2 - 1], rg.T[max(M - 1, 0)])
    e1 = min(m1 + 1, p1.times.size - 1)
    e2 = min(m2 + 1, p2.times.size - 1)
    return float(_kernels.hy_abs_tail(p1.times, p1.values, e1, p2.times, p2.values, e2, cut))


def _nonneg(**values: float) -> None:
    for name, v in values.items():
        if v < 0:
            raise ValueError(f"{name} must be nonnegative, got {v}")


def avar_continuous(sigma1, sigma2, rho, Gp, Fp, Hp, t=1.0) -> float:
    """Integrated variance process of the continuous part for constant coefficients.

    ``t * [G'(s1 s2)^2 (1 + rho^2) + F'(s1 s2)^2 + 2 H'(rho s1 s2)^2]``.
    """
    _nonneg(Gp=Gp, Fp=Fp, Hp=Hp, t=t)
    ss = (sigma1 * sigma2) ** 2
    return t * (Gp * ss * (1.0 + rho**2) + Fp * ss + 2.0 * Hp * rho**2 * ss)


def avar_cojump(dx1, dx2, sigma1, sigma2, rho, iv: IntervalStats) -> float:
    """Conditional variance added by one (co-)jump with interval statistics ``iv``."""
    return (
        dx1**2 * sigma2**2 * (iv.r1l1 + iv.r3 + iv.l3)
        + dx2**2 * sigma1**2 * (iv.r1l1 + iv.r2 + iv.l2)
        + 2.0 * rho * sigma1 * sigma2 * dx1 * dx2 * iv.r1l1
    )


def poisson_interval_cdf(lam1, lam2, u1, u2, u3) -> float:
    """Joint limit law ``P(R1 <= u1, R2 <= u2, R3 <= u3)`` under Poisson sampling."""
    _nonneg(u1=u1, u2=u2, u3=u3)
    if lam1 <= 0 or lam2 <= 0:
        raise ValueError("intensities must be positive")
    w1 = lam1 / (lam1 + lam2)
    w2 = lam2 / (lam1 + lam2)
    right = (1.0 - np.exp(-lam1 * u1)) * (1.0 - np.exp(-lam2 * u1))
    ext = 1.0 - w1 * np.exp(-lam1 * u2) - w2 * np.exp(-lam2 * u3)
    return float(right * ext)


def poisson_interval_moments(lam1: float, lam2: float) -> IntervalStats:
    """Expected rescaled interval statistics under independent Poisson sampling.

    ``E[R1] = 1/lam1 + 1/lam2 - 1/(lam1 + lam2)`` (mean of the larger of two
    exponentials) and ``E[R2] = E[R3] = 1/(lam1 + lam2)``; the left-hand
    vector has the same law, so ``r1l1`` carries ``2 E[R1]``.
    """
    if lam1 <= 0 or lam2 <= 0:
        raise ValueError("intensities must be positive")
    er1 = 1.0 / lam1 + 1.0 / lam2 - 1.0 / (lam1 + lam2)
    er2 = 1.0 / (lam1 + lam2)
    return IntervalStats(2.0 * er1, er2, er2, er2, er2)


def univariate_avar(sigma: float, Gp: float, jumps: Iterable[tuple[float, float]] = (), t: float = 1.0) -> float:
    """``2 sigma^4 G' t + 4 sum dX^2 sigma^2 E[eta]`` for jumps given as (dX, E[eta])."""
    _nonneg(Gp=Gp, t=t)
    jump_part = 0.0
    for dx, eta in jumps:
        _nonneg(eta=eta)
        jump_part += 4.0 * dx**2 * sigma**2 * eta
    return 2.0 * sigma**4 * Gp * t + jump_part
