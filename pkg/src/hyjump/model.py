"""Bivariate jump-diffusion model description and its quadratic covariation.

The continuous part has constant drift ``b``, volatilities ``vol1``, ``vol2``
and correlation ``rho``; it is driven through the lower-triangular factor

    sigma = [[vol1, 0], [rho * vol2, sqrt(1 - rho**2) * vol2]]

Jumps are a finite list of deterministic (time, size1, size2) triples.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np


class ModelError(ValueError):
    """Raised when a model or jump scenario violates an invariant."""


class ScenarioTag(str, enum.Enum):
    SC1 = "Sc1"  # one co-jump (1, 1)
    SC2 = "Sc2"  # co-jump plus one idiosyncratic jump per component
    SC3 = "Sc3"  # one idiosyncratic jump per component only
    CUSTOM = "Custom"

    @classmethod
    def parse(cls, value: "str | ScenarioTag") -> "ScenarioTag":
        if isinstance(value, ScenarioTag):
            return value
        for tag in cls:
            if tag.value.lower() == str(value).strip().lower():
                return tag
        raise ModelError(f"unknown scenario {value!r}")


@dataclass(frozen=True)
class Jump:
    time: float
    size1: float
    size2: float

    @property
    def is_cojump(self) -> bool:
        return self.size1 != 0.0 and self.size2 != 0.0


@dataclass(frozen=True)
class JumpScenario:
    jumps: tuple[Jump, ...] = ()

    @classmethod
    def from_triples(cls, triples: Iterable[tuple[float, float, float]]) -> "JumpScenario":
        return cls(tuple(Jump(float(t), float(a), float(b)) for t, a, b in triples))

    @property
    def times(self) -> np.ndarray:
        return np.array([j.time for j in self.jumps], dtype=float)

    def __len__(self) -> int:
        return len(self.jumps)

    def __iter__(self):
        return iter(self.jumps)


@dataclass(frozen=True)
class ModelSpec:
    """Constant-coefficient bivariate model on ``[0, horizon]``.

    Build instances directly and pass them through :func:`validate_model`
    before simulating; the dataclass itself does not check anything.
    """

    drift: tuple[float, float] = (0.0, 0.0)
    vol1: float = 1.0
    vol2: float = 1.0
    rho: float = 0.0
    horizon: float = 1.0
    jumps: JumpScenario = field(default_factory=JumpScenario)

    @property
    def spot_covariance(self) -> np.ndarray:
        return self.vol_factor @ self.vol_factor.T

    @property
    def vol_factor(self) -> np.ndarray:
        return np.array(
            [
                [self.vol1, 0.0],
                [self.rho * self.vol2, np.sqrt(max(0.0, 1.0 - self.rho**2)) * self.vol2],
            ]
        )

    def without_jumps(self) -> "ModelSpec":
        return ModelSpec(self.drift, self.vol1, self.vol2, self.rho, self.horizon, JumpScenario())

    def with_jumps(self, jumps: JumpScenario) -> "ModelSpec":
        return ModelSpec(self.drift, self.vol1, self.vol2, self.rho, self.horizon, jumps)


def validate_model(spec: ModelSpec) -> ModelSpec:
    """Return ``spec`` unchanged if every invariant holds.

    Raises
    ------
    ModelError
        Naming the first violated invariant.
    """
    if len(spec.drift) != 2 or not all(np.isfinite(spec.drift)):
        raise ModelError("drift must be a finite 2-vector")
    if not (np.isfinite(spec.vol1) and spec.vol1 > 0):
        raise ModelError("vol1 must be positive")
    if not (np.isfinite(spec.vol2) and spec.vol2 > 0):
        raise ModelError("vol2 must be positive")
    if not (np.isfinite(spec.rho) and -1.0 <= spec.rho <= 1.0):
        raise ModelError("rho out of [-1,1]")
    if not (0.0 < spec.horizon <= 1.0):
        raise ModelError("horizon out of (0,1]")
    # never fails given |rho| <= 1; kept as a guard on vol_factor
    if np.linalg.eigvalsh(spec.spot_covariance).min() < -1e-12:
        raise ModelError("spot covariance not positive semi-definite")
    previous = -np.inf
    for jump in spec.jumps:
        if not (0.0 < jump.time < spec.horizon):
            raise ModelError("jump time must be interior")
        if jump.time <= previous:
            raise ModelError("jump times must be strictly increasing")
        if not (np.isfinite(jump.size1) and np.isfinite(jump.size2)):
            raise ModelError("jump sizes must be finite")
        if jump.size1 == 0.0 and jump.size2 == 0.0:
            raise ModelError("jump must move at least one component")
        previous = jump.time
    return spec


def theoretical_qcov(spec: ModelSpec, t: float) -> float:
    """Quadratic covariation ``[X1, X2]_t``: integrated covolatility plus co-jump products."""
    if not (0.0 < t <= spec.horizon):
        raise ModelError(f"t={t} out of (0, {spec.horizon}]")
    continuous = spec.rho * spec.vol1 * spec.vol2 * t
    jumps = sum(j.size1 * j.size2 for j in spec.jumps if j.time <= t)
    return continuous + jumps
