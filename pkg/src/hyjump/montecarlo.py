"""Paired Monte Carlo study of HY with and without jumps.

Every replicate draws fresh observation grids, fresh scenario jump times
and one continuous path. HY is evaluated on the full path and on its
continuous part (HY(C)), so the two share grids and Brownian increments.
The jump variance is reported as ``n * (var(HY) - var(HY(C)))`` where ``n``
is the expected number of observations per component.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from hyjump.estimators import avar_continuous, avar_cojump, hy, poisson_interval_moments
from hyjump.model import ModelSpec, ScenarioTag, validate_model
from hyjump.sampling import IntervalStats, SamplingPlan, generate, refresh_grid
from hyjump.simulate import build_union_grid, draw_scenario_jumps, simulate_bivariate

DEFAULT_SEED = 20130101

CSV_FIELDS = (
    "rho", "mean_hy", "mean_hy_c", "nvar_hy_j", "nvar_hy_c",
    "theory_j", "theory_c", "se_mean", "reps", "n",
)

# Poisson(1, 1) refresh-index limits of G', F', H' and the ratio of
# per-component to refresh-time counts, E[T_k - T_{k-1}] = 3 / (2 N)
POISSON_GFH = (14.0 / 9.0, 10.0 / 9.0, 2.0 / 9.0)
POISSON_REFRESH_RATIO = 1.5


class McError(RuntimeError):
    pass


@dataclass(frozen=True)
class McConfig:
    scenario: ScenarioTag | str = ScenarioTag.SC1
    rho: float = 0.0
    expected_obs: int = 5000
    reps: int = 500
    base_seed: int = DEFAULT_SEED
    sampling: str = "poisson"
    lam: float = 1.0
    alpha: float = 0.5
    drift: tuple[float, float] = (0.1, 0.1)
    vol1: float = 1.0
    vol2: float = 1.0
    jump_size: float = 1.0
    stream: int = 0
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "scenario", ScenarioTag.parse(self.scenario))
        if self.scenario is ScenarioTag.CUSTOM:
            raise McError("Monte Carlo scenarios must be Sc1, Sc2 or Sc3")
        if self.reps < 2:
            raise McError("reps must be >= 2")
        if self.expected_obs < 100:
            raise McError("expected_obs must be >= 100")
        if self.sampling not in ("poisson", "regular", "alternating"):
            raise McError(f"unsupported sampling kind {self.sampling!r}")
        validate_model(self.model())

    def model(self) -> ModelSpec:
        return ModelSpec(tuple(self.drift), self.vol1, self.vol2, self.rho)

    def plan(self) -> SamplingPlan:
        if self.sampling == "poisson":
            return SamplingPlan.poisson(self.lam, max(2, round(self.expected_obs / self.lam)))
        if self.sampling == "alternating":
            return SamplingPlan.alternating(self.expected_obs, self.alpha)
        return SamplingPlan.regular(self.expected_obs)


@dataclass(frozen=True)
class McReport:
    scenario: ScenarioTag
    rho: float
    mean_hy: float
    mean_hy_c: float
    nvar_hy_j: float
    nvar_hy_c: float
    se_mean: float
    theory_qcov: float
    theory_j: float
    theory_c: float
    reps: int
    n: int
    normalization_used: str = "expected_obs"
    mean_refresh_count: float = math.nan
    nvar_hy_c_refresh: float = math.nan
    samples: dict = field(default_factory=dict, repr=False, compare=False)

    def csv_row(self) -> dict:
        return {k: getattr(self, k) for k in CSV_FIELDS}


def replicate_seeds(base_seed: int, stream: int, rep: int):
    """Independent (grid1, grid2, path, jumps) seed sequences for one replicate."""
    root = np.random.SeedSequence(base_seed, spawn_key=(stream, rep))
    grids, path, jumps = root.spawn(3)
    g1, g2 = grids.spawn(2)
    return g1, g2, path, jumps


def _one_replicate(cfg: McConfig, rep: int) -> tuple[float, float, int]:
    s1, s2, s_path, s_jump = replicate_seeds(cfg.base_seed, cfg.stream, rep)
    plan = cfg.plan()
    g1 = generate(plan.with_seed(s1))
    g2 = generate(plan.with_seed(s2)) if plan.kind == "poisson" else g1
    jumps = draw_scenario_jumps(cfg.scenario, s_jump, size=cfg.jump_size)
    spec = cfg.model().with_jumps(jumps)
    union = build_union_grid(g1, g2, jumps.times)
    sim = simulate_bivariate(spec, union, s_path, g1, g2)
    full = hy(sim.path1, sim.path2, 1.0).value
    cont = hy(sim.continuous1, sim.continuous2, 1.0).value
    return full, cont, refresh_grid(g1, g2).count


def _run_chunk(cfg: McConfig, reps: range) -> np.ndarray:
    out = np.empty((len(reps), 3))
    for row, rep in enumerate(reps):
        try:
            out[row] = _one_replicate(cfg, rep)
        except Exception as exc:  # noqa: BLE001 - re-raised with the replicate index
            raise McError(f"replicate {rep} failed: {exc}") from exc
    return out


def _expected_intervals(cfg: McConfig) -> IntervalStats | None:
    # rescaled by the per-component expected count
    if cfg.sampling == "poisson":
        return poisson_interval_moments(1.0, 1.0)
    if cfg.sampling == "regular":
        return IntervalStats(1.0, 0.0, 0.0, 0.0, 0.0)
    eta = 1.0 + cfg.alpha**2  # mean of the two-atom local interval law
    return IntervalStats(eta, 0.0, 0.0, 0.0, 0.0)


def theory(cfg: McConfig) -> tuple[float, float]:
    """Expected ``n * var`` of the jump cross term and of HY(C), in that order."""
    iv = _expected_intervals(cfg)
    sizes = [(j.size1, j.size2) for j in draw_scenario_jumps(cfg.scenario, 0, size=cfg.jump_size)]
    jump = sum(avar_cojump(a, b, cfg.vol1, cfg.vol2, cfg.rho, iv) for a, b in sizes)
    if cfg.sampling == "poisson":
        cont = POISSON_REFRESH_RATIO * avar_continuous(cfg.vol1, cfg.vol2, cfg.rho, *POISSON_GFH)
    else:
        G = 1.0 if cfg.sampling == "regular" else 1.0 + cfg.alpha**2
        cont = avar_continuous(cfg.vol1, cfg.vol2, cfg.rho, G, 0.0, 0.0)
    return float(jump), float(cont)


def run_experiment(cfg: McConfig) -> McReport:
    if cfg.threads > 1:
        bounds = np.linspace(0, cfg.reps, min(cfg.threads, cfg.reps) + 1).astype(int)
        chunks = [range(a, b) for a, b in zip(bounds[:-1], bounds[1:])]
        with ThreadPoolExecutor(cfg.threads) as pool:
            parts = list(pool.map(lambda r: _run_chunk(cfg, r), chunks))
        samples = np.concatenate(parts)
    else:
        samples = _run_chunk(cfg, range(cfg.reps))
    hy_full, hy_c, counts = samples[:, 0], samples[:, 1], samples[:, 2]
    n = cfg.expected_obs
    var_full = float(np.var(hy_full, ddof=1))
    var_c = float(np.var(hy_c, ddof=1))
    mean_m = float(np.mean(counts))
    theory_j, theory_c = theory(cfg)
    jumps = draw_scenario_jumps(cfg.scenario, 0, size=cfg.jump_size)
    return McReport(
        scenario=cfg.scenario,
        rho=cfg.rho,
        mean_hy=float(np.mean(hy_full)),
        mean_hy_c=float(np.mean(hy_c)),
        nvar_hy_j=n * (var_full - var_c),
        nvar_hy_c=n * var_c,
        se_mean=math.sqrt(var_full / cfg.reps),
        theory_qcov=cfg.rho * cfg.vol1 * cfg.vol2 + sum(j.size1 * j.size2 for j in jumps),
        theory_j=theory_j,
        theory_c=theory_c,
        reps=cfg.reps,
        n=n,
        mean_refresh_count=mean_m,
        nvar_hy_c_refresh=mean_m * var_c,
        samples={"hy": hy_full, "hy_c": hy_c, "refresh_count": counts},
    )


def sweep_rho(template: McConfig, rhos: Sequence[float]) -> list[McReport]:
    """One independent experiment per correlation, stream ``i`` for the i-th value."""
    return [run_experiment(replace(template, rho=float(r), stream=i)) for i, r in enumerate(rhos)]


TABLE1_RHOS = tuple(round(0.1 * k, 1) for k in range(11))
TABLE1_SCENARIOS = (ScenarioTag.SC1, ScenarioTag.SC2, ScenarioTag.SC3)


def table1(
    template: McConfig,
    scenarios: Sequence[ScenarioTag | str] = TABLE1_SCENARIOS,
    rhos: Sequence[float] = TABLE1_RHOS,
) -> list[McReport]:
    reports = []
    for sc in scenarios:
        reports += sweep_rho(replace(template, scenario=ScenarioTag.parse(sc)), rhos)
    return reports


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "nan" if math.isnan(x) else format(float(x), ".10g")


def write_reports(reports: Sequence[McReport], path: Path, fmt: str = "csv", with_scenario: bool = False) -> None:
    fields = (("scenario",) if with_scenario else ()) + CSV_FIELDS
    rows = []
    for r in reports:
        row = r.csv_row()
        if with_scenario:
            row = {"scenario": r.scenario.value, **row}
        rows.append(row)
    path = Path(path)
    if fmt == "json":
        clean = [{k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in row.items()} for row in rows]
        path.write_text(json.dumps(clean, indent=2) + "\n")
        return
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow([row[k] if k == "scenario" else _fmt(row[k]) for k in fields])


def summary_text(reports: Sequence[McReport]) -> str:
    """Per-scenario text table, theoretical values in parentheses."""
    lines = []
    for sc in dict.fromkeys(r.scenario for r in reports):
        sub = [r for r in reports if r.scenario is sc]
        lines.append(f"[{sc.value}]  n={sub[0].n}  reps={sub[0].reps}")
        lines.append(f"{'rho':>5} {'mean(HY)':>16} {'mean(HY(C))':>12} {'n var(HY(J))':>18} {'n var(HY(C))':>18}")
        for r in sub:
            lines.append(
                f"{r.rho:5.2f} {r.mean_hy:8.3f} ({r.theory_qcov:5.3f}) {r.mean_hy_c:12.3f} "
                f"{r.nvar_hy_j:8.2f} ({r.theory_j:6.2f}) {r.nvar_hy_c:8.2f} ({r.theory_c:6.2f})"
            )
        lines.append("")
    return "\n".join(lines)


def report_dict(report: McReport) -> dict:
    d = asdict(report)
    d.pop("samples")
    d["scenario"] = report.scenario.value
    return d
