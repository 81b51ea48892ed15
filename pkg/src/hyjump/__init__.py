"""Quadratic covariation of asynchronously observed jump diffusions.

Simulation of a bivariate constant-coefficient jump diffusion on irregular
observation grids, realized variance and Hayashi-Yoshida estimation, the
grid functionals entering their asymptotic variances, and a Monte Carlo
harness reproducing the co-jump/idiosyncratic-jump variance decomposition.
"""

from hyjump.model import (
    Jump,
    JumpScenario,
    ModelError,
    ModelSpec,
    ScenarioTag,
    theoretical_qcov,
    validate_model,
)
from hyjump.sampling import (
    IntervalStats,
    RefreshGrid,
    SamplingPlan,
    TimeGrid,
    generate,
    grid_functionals,
    jump_interval_stats,
    mesh,
    refresh_grid,
    tau_bounds,
    univariate_G,
)
from hyjump.simulate import (
    ObservedPath,
    SimulationOutput,
    build_union_grid,
    draw_scenario_jumps,
    simulate_bivariate,
)
from hyjump.estimators import (
    AvarBreakdown,
    EstimateResult,
    avar_cojump,
    avar_continuous,
    hy,
    hy_rep,
    poisson_interval_cdf,
    poisson_interval_moments,
    rv,
    univariate_avar,
)
from hyjump.montecarlo import McConfig, McReport, run_experiment, sweep_rho

__version__ = "0.1.0"
