"""Observation grids on [0, 1] and the statistics built from them.

Grids come from four schemes: regular ``i/n``, a transformed regular grid
``f(i/n)``, an alternating grid that shifts odd points by ``alpha/n``, and
Poisson arrivals with intensity ``n * lam``. On top of a grid (or a pair of
grids) this module provides previous/next-tick lookups, the mesh, refresh
times, the rescaled sums ``G_n``, ``F_n``, ``H_n`` and the five interval
lengths around a time point that govern the variance contributed by a jump
there.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from hyjump import _kernels

SeedLike = Union[int, np.random.SeedSequence, None]

# consulted when a jump time coincides with an observation time
COLLISION_SHIFT = 1e-12


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Strictly increasing observation times in [0, 1] starting at 0.

    ``n_nominal`` is the asymptotic index the grid was generated for; it is
    what CLT scalings refer to, not ``len(times)``.
    """

    times: np.ndarray
    n_nominal: int

    def __post_init__(self):
        t = _readonly(self.times)
        if t.ndim != 1 or t.size == 0:
            raise ValueError("grid must be a non-empty 1-d vector")
        if t[0] != 0.0:
            raise ValueError("grid must start at 0")
        if t[-1] > 1.0:
            raise ValueError("grid times must lie in [0, 1]")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("grid times must be strictly increasing")
        if int(self.n_nominal) < 1:
            raise ValueError("n_nominal must be positive")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "n_nominal", int(self.n_nominal))

    def __len__(self) -> int:
        return self.times.size

    @property
    def end(self) -> float:
        return float(self.times[-1])

    def to_text(self) -> str:
        """Two-column ``index time`` text; ``repr`` floats round-trip binary64."""
        lines = [f"# n_nominal={self.n_nominal}"]
        lines += [f"{i} {t!r}" for i, t in enumerate(self.times.tolist())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, n_nominal: int | None = None) -> "TimeGrid":
        n = n_nominal
        times = []
        for line in io.StringIO(text):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "n_nominal=" in line and n is None:
                    n = int(line.split("n_nominal=")[1])
                continue
            _, value = line.split()
            times.append(float(value))
        if n is None:
            n = max(len(times) - 1, 1)
        return cls(np.array(times), n)


# name -> (f, f') for transformed schemes; f strictly increasing, f(0)=0, f(1)=1
TRANSFORMS: dict[str, tuple[Callable, Callable]] = {
    "identity": (lambda x: x, lambda x: np.ones_like(x)),
    "square": (lambda x: x**2, lambda x: 2 * x),
    "smoothstep": (lambda x: 3 * x**2 - 2 * x**3, lambda x: 6 * x - 6 * x**2),
}


@dataclass(frozen=True)
class SamplingPlan:
    """Description of an observation scheme; turn into a grid with :func:`generate`."""

    kind: str
    n: int
    alpha: float = 0.5
    lam: float = 1.0
    transform: str | Callable = "identity"
    seed: SeedLike = None

    KINDS = ("regular", "transformed", "alternating", "poisson")

    def __post_init__(self):
        kind = self.kind.lower()
        object.__setattr__(self, "kind", kind)
        if kind not in self.KINDS:
            raise ValueError(f"unknown sampling kind {self.kind!r}")
        if int(self.n) < 2:
            raise ValueError("n must be >= 2")
        if kind == "alternating" and not (0.0 < self.alpha < 1.0):
            raise ValueError("alpha must lie in (0,1)")
        if kind == "poisson" and not (self.lam > 0):
            raise ValueError("lam must be positive")
        if kind == "transformed" and isinstance(self.transform, str) and self.transform not in TRANSFORMS:
            raise ValueError(f"unknown transform {self.transform!r}")

    @classmethod
    def regular(cls, n: int) -> "SamplingPlan":
        return cls("regular", n)

    @classmethod
    def transformed(cls, n: int, f: str | Callable) -> "SamplingPlan":
        return cls("transformed", n, transform=f)

    @classmethod
    def alternating(cls, n: int, alpha: float) -> "SamplingPlan":
        return cls("alternating", n, alpha=alpha)

    @classmethod
    def poisson(cls, lam: float, n: int, seed: SeedLike = None) -> "SamplingPlan":
        return cls("poisson", n, lam=lam, seed=seed)

    def with_seed(self, seed: SeedLike) -> "SamplingPlan":
        return SamplingPlan(self.kind, self.n, self.alpha, self.lam, self.transform, seed)

    @property
    def transform_fn(self) -> Callable:
        return TRANSFORMS[self.transform][0] if isinstance(self.transform, str) else self.transform


def _close_deterministic(times: np.ndarray) -> np.ndarray:
    times = times[times <= 1.0]
    if times[0] != 0.0:
        times = np.concatenate([[0.0], times])
    if times[-1] < 1.0:
        times = np.concatenate([times, [1.0]])
    return times


def poisson_times(rate: float, rng: np.random.Generator) -> np.ndarray:
    """Arrival times of a homogeneous Poisson process on [0, 1], with 0 prepended."""
    chunks = []
    last = 0.0
    size = int(rate + 6.0 * np.sqrt(rate) + 16)
    while last <= 1.0:
        arrivals = last + np.cumsum(rng.exponential(1.0 / rate, size=size))
        chunks.append(arrivals)
        last = arrivals[-1]
    arrivals = np.concatenate(chunks)
    return np.concatenate([[0.0], arrivals[arrivals <= 1.0]])


def generate(plan: SamplingPlan) -> TimeGrid:
    n = int(plan.n)
    i = np.arange(n + 1, dtype=np.float64)
    if plan.kind == "regular":
        times = i / n
    elif plan.kind == "transformed":
        times = np.asarray(plan.transform_fn(i / n), dtype=np.float64)
        if not np.all(np.diff(times) > 0):
            raise ValueError("transform must be strictly increasing on [0, 1]")
        times = _close_deterministic(times)
    elif plan.kind == "alternating":
        odd = (np.arange(n + 1) % 2) == 1
        times = _close_deterministic(np.where(odd, (i + plan.alpha) / n, i / n))
    else:
        rng = np.random.default_rng(plan.seed)
        times = poisson_times(n * plan.lam, rng)
    return TimeGrid(times, n)


def _check_span(grid: TimeGrid, s) -> None:
    s = np.asarray(s)
    if np.any(s < grid.times[0]) or np.any(s > grid.times[-1]):
        raise ValueError(f"time outside grid span [0, {grid.end}]")


def tau_bounds(grid: TimeGrid, s: float) -> tuple[float, float, int, int]:
    """Previous tick, next tick and their indices; both equal ``s`` on a grid point."""
    _check_span(grid, s)
    t = grid.times
    m_minus = int(np.searchsorted(t, s, side="right")) - 1
    m_plus = int(np.searchsorted(t, s, side="left"))
    return float(t[m_minus]), float(t[m_plus]), m_minus, m_plus


def mesh(grid: TimeGrid) -> float:
    if len(grid) < 2:
        raise ValueError("mesh of a degenerate grid")
    return float(np.max(np.diff(grid.times)))


@dataclass(frozen=True, eq=False)
class RefreshGrid:
    """Refresh times with previous/next-tick indices into both component grids.

    ``prev{l}[k]`` is the index of the last observation of component ``l`` at or
    before ``T[k]``; ``next{l}[k]`` the first at or after it. ``next{l}`` equals
    ``len(grid_l)`` where no such observation exists.
    """

    T: np.ndarray
    g1: TimeGrid
    g2: TimeGrid
    prev1: np.ndarray = field(repr=False)
    next1: np.ndarray = field(repr=False)
    prev2: np.ndarray = field(repr=False)
    next2: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        """Number of refresh times after ``T_0 = 0``."""
        return self.T.size - 1

    def count_upto(self, t: float) -> int:
        return int(np.searchsorted(self.T, t, side="right")) - 1

    @property
    def durations(self) -> np.ndarray:
        """``T_k - T_{k-1}`` for k = 1..M."""
        return np.diff(self.T)

    def plus_gap(self, component: int) -> np.ndarray:
        """``tau_+^(l)(T_k) - T_k`` for k = 0..M; nan where absent."""
        times, nxt = self._pick(component, "next")
        out = np.full(self.T.size, np.nan)
        ok = nxt < times.size
        out[ok] = times[nxt[ok]] - self.T[ok]
        return out

    def minus_gap(self, component: int) -> np.ndarray:
        """``T_k - tau_-^(l)(T_k)`` for k = 0..M."""
        times, prv = self._pick(component, "prev")
        return self.T - times[prv]

    def _pick(self, component: int, which: str):
        if component not in (1, 2):
            raise ValueError("component must be 1 or 2")
        grid = self.g1 if component == 1 else self.g2
        return grid.times, getattr(self, f"{which}{component}")


def refresh_grid(g1: TimeGrid, g2: TimeGrid) -> RefreshGrid:
    T = _kernels.refresh_times(g1.times, g2.times)
    T.setflags(write=False)
    idx = {}
    for name, g in (("1", g1), ("2", g2)):
        idx["prev" + name] = np.searchsorted(g.times, T, side="right") - 1
        idx["next" + name] = np.searchsorted(g.times, T, side="left")
    return RefreshGrid(T, g1, g2, **idx)


def grid_functionals(
    g1: TimeGrid, g2: TimeGrid, t: float = 1.0, n: float | None = None
) -> tuple[float, float, float]:
    """Rescaled refresh-interval sums ``(G_n, F_n, H_n)`` up to time ``t``.

    With ``D_k = T_k - T_{k-1}``, ``P_k^l = tau_+^l(T_k) - T_k`` and
    ``Q_k^l = T_k - tau_-^l(T_k)``::

        G_n = n * sum_{T_k <= t} D_k**2
        F_n = n * sum_{T_{k+1} <= t} (D_k + Q_{k-1}^2) P_k^1 + P_k^2 (D_k + Q_{k-1}^1)
                                      + D_{k+1} (Q_k^1 + Q_k^2)
        H_n = n * sum_{T_{k+1} <= t} Q_k^1 P_k^1 + Q_k^2 P_k^2

    ``H_n`` pairs the two interpolation gaps on either side of the same
    refresh time, the overlap shared by successive refresh-time addends.

    ``n`` defaults to the number of refresh times in the common span, the
    index relative to which the Poisson-sampling limits 14/9, 10/9 and 2/9
    hold for unit intensities.
    """
    rg = refresh_grid(g1, g2)
    if n is None:
        n = rg.count
    M = rg.count_upto(t)
    D = rg.durations  # D[k-1] = T_k - T_{k-1}
    G = n * float(np.sum(D[:M] ** 2))
    if M < 2:
        return G, 0.0, 0.0
    P1, P2 = rg.plus_gap(1), rg.plus_gap(2)
    Q1, Q2 = rg.minus_gap(1), rg.minus_gap(2)
    k = np.arange(1, M)  # T_{k+1} <= t
    Dk, Dk1 = D[k - 1], D[k]
    f_terms = (
        (Dk + Q2[k - 1]) * P1[k]
        + P2[k] * (Dk + Q1[k - 1])
        + Dk1 * (Q1[k] + Q2[k])
    )
    h_terms = Q1[k] * P1[k] + Q2[k] * P2[k]
    return G, n * float(np.sum(f_terms)), n * float(np.sum(h_terms))


def univariate_G(grid: TimeGrid, t: float = 1.0, n: float | None = None) -> float:
    """``n * sum_{t_i <= t} (t_i - t_{i-1})**2`` with ``n`` defaulting to the nominal index."""
    if n is None:
        n = grid.n_nominal
    m = int(np.searchsorted(grid.times, t, side="right"))
    return n * float(np.sum(np.diff(grid.times[:m]) ** 2))


@dataclass(frozen=True)
class IntervalStats:
    """Unscaled interval lengths around a time point (multiply by n to rescale).

    ``r1l1`` spans from the earliest previous tick to the latest next tick;
    ``r2``/``r3`` extend it to the right by the next tick of component 1 after
    component 2's next tick and vice versa, ``l2``/``l3`` likewise to the left.
    ``shifted`` records that the point hit an observation time and was moved
    right by ``COLLISION_SHIFT``.
    """

    r1l1: float
    r2: float
    l2: float
    r3: float
    l3: float
    shifted: bool = False

    def as_array(self) -> np.ndarray:
        return np.array([self.r1l1, self.r2, self.l2, self.r3, self.l3])

    def scaled(self, n: float) -> "IntervalStats":
        return IntervalStats(*(n * self.as_array()), shifted=self.shifted)


def interval_stats_array(s: np.ndarray, t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
    """Vectorised interval lengths, shape ``(len(s), 5)`` in IntervalStats field order.

    No collision handling; callers guarantee ``s`` avoids observation times.
    """
    s = np.asarray(s, dtype=np.float64)

    def plus(t, x):
        i = np.searchsorted(t, x, side="left")
        if np.any(i >= t.size):
            raise ValueError("interval statistics undefined near the end of a grid")
        return t[i]

    def minus(t, x):
        return t[np.searchsorted(t, x, side="right") - 1]

    p1, p2 = plus(t1, s), plus(t2, s)
    q1, q2 = minus(t1, s), minus(t2, s)
    right = np.maximum(p1, p2)
    left = np.minimum(q1, q2)
    out = np.empty((s.size, 5))
    out[:, 0] = right - left
    out[:, 1] = plus(t1, p2) - right  # tau_++^(1,2)
    out[:, 2] = left - minus(t1, q2)  # tau_--^(1,2)
    out[:, 3] = plus(t2, p1) - right  # tau_++^(2,1)
    out[:, 4] = left - minus(t2, q1)  # tau_--^(2,1)
    return out


def jump_interval_stats(s: float, g1: TimeGrid, g2: TimeGrid) -> IntervalStats:
    end = min(g1.end, g2.end)
    if not (0.0 < s < end):
        raise ValueError(f"s={s} must lie strictly inside (0, {end})")
    shifted = False
    if np.any(g1.times == s) or np.any(g2.times == s):
        s = s + COLLISION_SHIFT
        shifted = True
    row = interval_stats_array(np.array([s]), g1.times, g2.times)[0]
    return IntervalStats(*row.tolist(), shifted=shifted)
