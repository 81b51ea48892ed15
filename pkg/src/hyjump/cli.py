"""Command-line front end.

Configuration is resolved in increasing priority from built-in defaults, an
INI file (``--config``), environment variables ``HYJUMP_<SECTION>_<KEY>``
and command-line flags. Every run writes the fully resolved configuration
next to its output as ``<out>.config.ini``; on failure all outputs of the
run are removed.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from hyjump import estimators, montecarlo
from hyjump.model import JumpScenario, ModelSpec, ScenarioTag, validate_model
from hyjump.sampling import (
    SamplingPlan,
    TimeGrid,
    generate,
    grid_functionals,
    refresh_grid,
    univariate_G,
)
from hyjump.simulate import ObservedPath, build_union_grid, draw_scenario_jumps, simulate_bivariate

ENV_PREFIX = "HYJUMP_"
COMMANDS = ("simulate", "estimate", "functionals", "mc", "table1")

DEFAULTS = {
    "run": {"seed": str(montecarlo.DEFAULT_SEED), "format": "csv", "threads": "1"},
    "model": {"drift1": "0.1", "drift2": "0.1", "vol1": "1.0", "vol2": "1.0", "rho": "0.0", "jump_size": "1.0"},
    "sampling": {"kind": "poisson", "n": "5000", "lam": "1.0", "alpha": "0.5", "transform": "identity"},
    "simulate": {"scenario": "Sc1", "jumps": ""},
    "estimate": {"input": "", "t": "1.0"},
    "functionals": {"ns": "1000,10000,100000", "t": "1.0"},
    "mc": {"scenario": "Sc1", "expected_obs": "5000", "reps": "500"},
    "table1": {
        "scenarios": "Sc1,Sc2,Sc3",
        "rhos": ",".join(str(r) for r in montecarlo.TABLE1_RHOS),
        "expected_obs": "5000",
        "reps": "500",
    },
}


class CliError(Exception):
    def __init__(self, message: str, code: int = 1):
        super().__init__(message)
        self.code = code


@dataclass
class RunManifest:
    command: str
    config_path: Path | None
    output_path: Path
    seed: int
    format: str

    @property
    def sidecar(self) -> Path:
        return self.output_path.with_name(self.output_path.name + ".config.ini")


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def resolve_config(args: argparse.Namespace) -> configparser.ConfigParser:
    cfg = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    cfg.read_dict(DEFAULTS)
    if args.config is not None:
        if not Path(args.config).is_file():
            raise CliError(f"config not found: {args.config}", code=2)
        cfg.read(args.config)
    for key, value in os.environ.items():
        if not key.startswith(ENV_PREFIX):
            continue
        section, _, option = key[len(ENV_PREFIX):].lower().partition("_")
        if section in cfg and option:
            cfg[section][option] = value
    overrides = {
        ("run", "seed"): args.seed,
        ("run", "format"): args.format,
        ("run", "threads"): args.threads,
        ("mc", "scenario"): getattr(args, "scenario", None) if args.command == "mc" else None,
        ("model", "rho"): getattr(args, "rho", None),
        ("mc", "reps"): getattr(args, "reps", None) if args.command == "mc" else None,
        ("table1", "reps"): getattr(args, "reps", None) if args.command == "table1" else None,
        ("table1", "scenarios"): getattr(args, "scenario", None) if args.command == "table1" else None,
        ("table1", "rhos"): getattr(args, "rhos", None),
        ("simulate", "scenario"): getattr(args, "scenario", None) if args.command == "simulate" else None,
        ("sampling", "kind"): getattr(args, "kind", None),
        ("sampling", "n"): getattr(args, "n", None),
        ("sampling", "alpha"): getattr(args, "alpha", None),
        ("sampling", "lam"): getattr(args, "lam", None),
        ("functionals", "ns"): getattr(args, "ns", None),
        ("estimate", "input"): getattr(args, "input", None),
        ("estimate", "t"): getattr(args, "t", None),
    }
    exp_obs = getattr(args, "expected_obs", None)
    if exp_obs is not None:
        overrides[(args.command, "expected_obs")] = exp_obs
    for (section, option), value in overrides.items():
        if value is not None:
            cfg[section][option] = str(value)
    return cfg


def _model(cfg) -> ModelSpec:
    m = cfg["model"]
    return ModelSpec(
        (m.getfloat("drift1"), m.getfloat("drift2")), m.getfloat("vol1"), m.getfloat("vol2"), m.getfloat("rho")
    )


def _plan(cfg, n: int | None = None, seed=None) -> SamplingPlan:
    s = cfg["sampling"]
    return SamplingPlan(
        s["kind"], n if n is not None else s.getint("n"), alpha=s.getfloat("alpha"),
        lam=s.getfloat("lam"), transform=s["transform"], seed=seed,
    )


def _mc_template(cfg, scenario: str, expected_obs: int, reps: int) -> montecarlo.McConfig:
    m = cfg["model"]
    return montecarlo.McConfig(
        scenario=scenario,
        rho=m.getfloat("rho"),
        expected_obs=expected_obs,
        reps=reps,
        base_seed=cfg["run"].getint("seed"),
        sampling=cfg["sampling"]["kind"],
        lam=cfg["sampling"].getfloat("lam"),
        alpha=cfg["sampling"].getfloat("alpha"),
        drift=(m.getfloat("drift1"), m.getfloat("drift2")),
        vol1=m.getfloat("vol1"),
        vol2=m.getfloat("vol2"),
        jump_size=m.getfloat("jump_size"),
        threads=cfg["run"].getint("threads"),
    )


def _write_rows(path: Path, fields, rows, fmt: str) -> None:
    if fmt == "json":
        path.write_text(json.dumps([dict(zip(fields, r)) for r in rows], indent=2) + "\n")
        return
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(fields)
        for r in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])


def _parse_jumps(text: str) -> JumpScenario:
    triples = []
    for item in text.split(";"):
        if item.strip():
            t, a, b = (float(x) for x in item.split(":"))
            triples.append((t, a, b))
    return JumpScenario.from_triples(triples)


def cmd_simulate(cfg, man: RunManifest) -> list[Path]:
    root = np.random.SeedSequence(man.seed)
    s1, s2, s_path, s_jump = root.spawn(4)
    plan = _plan(cfg)
    g1 = generate(plan.with_seed(s1))
    g2 = generate(plan.with_seed(s2)) if plan.kind == "poisson" else g1
    sim = cfg["simulate"]
    if sim["jumps"].strip():
        jumps = _parse_jumps(sim["jumps"])
    elif sim["scenario"].lower() in ("none", ""):
        jumps = JumpScenario()
    else:
        jumps = draw_scenario_jumps(sim["scenario"], s_jump, size=cfg["model"].getfloat("jump_size"))
    spec = validate_model(_model(cfg).with_jumps(jumps))
    sim["jumps"] = ";".join(f"{j.time!r}:{j.size1!r}:{j.size2!r}" for j in jumps)
    out = simulate_bivariate(spec, build_union_grid(g1, g2, jumps.times), s_path, g1, g2)
    rows = []
    for full, cont in ((out.path1, out.continuous1), (out.path2, out.continuous2)):
        for i, (t, v, c) in enumerate(zip(full.times, full.values, cont.values)):
            rows.append((full.component, i, float(t), float(v), float(c)))
    _write_rows(man.output_path, ("component", "index", "time", "value", "continuous"), rows, man.format)
    return [man.output_path]


def _read_paths(path: Path) -> tuple[ObservedPath, ObservedPath]:
    if not path.is_file():
        raise CliError(f"input not found: {path}", code=2)
    data: dict[int, list[tuple[float, float]]] = {1: [], 2: []}
    with path.open() as fh:
        for row in csv.DictReader(fh):
            data[int(row["component"])].append((float(row["time"]), float(row["value"])))
    paths = []
    for comp in (1, 2):
        pts = sorted(data[comp])
        if len(pts) < 2:
            raise CliError(f"component {comp} needs at least two observations")
        times = np.array([p[0] for p in pts])
        paths.append(ObservedPath(TimeGrid(times, len(times) - 1), np.array([p[1] for p in pts]), comp))
    return paths[0], paths[1]


def cmd_estimate(cfg, man: RunManifest) -> list[Path]:
    src = cfg["estimate"]["input"]
    if not src:
        raise CliError("estimate needs an input file (--input or [estimate] input)", code=2)
    p1, p2 = _read_paths(Path(src))
    t = cfg["estimate"].getfloat("t")
    rows = [
        ("rv1", estimators.rv(p1, t).value, 0.0),
        ("rv2", estimators.rv(p2, t).value, 0.0),
        ("hy", estimators.hy(p1, p2, t).value, 0.0),
    ]
    for rep in (1, 2, 3):
        r = estimators.hy_rep(p1, p2, t, rep)
        rows.append((f"hy_rep{rep}", r.value, r.boundary_residual))
    _write_rows(man.output_path, ("estimator", "value", "boundary_residual"), rows, man.format)
    return [man.output_path]


def cmd_functionals(cfg, man: RunManifest) -> list[Path]:
    t = cfg["functionals"].getfloat("t")
    ns = [int(x) for x in _floats(cfg["functionals"]["ns"])]
    root = np.random.SeedSequence(man.seed)
    rows = []
    for n, ss in zip(ns, root.spawn(len(ns))):
        s1, s2 = ss.spawn(2)
        plan = _plan(cfg, n)
        g1 = generate(plan.with_seed(s1))
        g2 = generate(plan.with_seed(s2)) if plan.kind == "poisson" else g1
        count = refresh_grid(g1, g2).count
        G, F, H = grid_functionals(g1, g2, t, count)
        rows.append((n, G, F, H, univariate_G(g1, t, n), count))
    fields = ("n", "G_n", "F_n", "H_n", "univariate_G_n", "refresh_count")
    _write_rows(man.output_path, fields, rows, man.format)
    return [man.output_path]


def cmd_mc(cfg, man: RunManifest) -> list[Path]:
    mc = cfg["mc"]
    template = _mc_template(cfg, mc["scenario"], mc.getint("expected_obs"), mc.getint("reps"))
    report = montecarlo.run_experiment(template)
    montecarlo.write_reports([report], man.output_path, man.format)
    return [man.output_path]


def cmd_table1(cfg, man: RunManifest) -> list[Path]:
    tb = cfg["table1"]
    scenarios = [ScenarioTag.parse(s) for s in tb["scenarios"].split(",") if s.strip()]
    rhos = _floats(tb["rhos"])
    template = _mc_template(cfg, ScenarioTag.SC1, tb.getint("expected_obs"), tb.getint("reps"))
    reports = montecarlo.table1(template, scenarios, rhos)
    montecarlo.write_reports(reports, man.output_path, man.format, with_scenario=True)
    summary = man.output_path.with_name(man.output_path.name + ".summary.txt")
    summary.write_text(montecarlo.summary_text(reports))
    print(summary.read_text())
    return [man.output_path, summary]


HANDLERS = {
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "functionals": cmd_functionals,
    "mc": cmd_mc,
    "table1": cmd_table1,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="INI file with one section per subcommand")
    common.add_argument("--out", type=Path, help="output file (default <command>.<format>)")
    common.add_argument("--seed", type=int, help=f"base seed (default {montecarlo.DEFAULT_SEED})")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--threads", type=int, help="worker threads for Monte Carlo replicates")

    parser = argparse.ArgumentParser(
        prog="hyjump", description="Hayashi-Yoshida estimation with jumps: simulation, estimators and Monte Carlo."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="simulate one observed path pair")
    p.add_argument("--scenario", help="Sc1, Sc2, Sc3 or none")
    p.add_argument("--kind", help="sampling kind")
    p.add_argument("--n", type=int)
    p.add_argument("--rho", type=float)

    p = sub.add_parser("estimate", parents=[common], help="RV and HY from a path CSV")
    p.add_argument("--input", help="CSV with columns component,time,value")
    p.add_argument("--t", type=float)

    p = sub.add_parser("functionals", parents=[common], help="G_n, F_n, H_n over a range of n")
    p.add_argument("--kind")
    p.add_argument("--ns", help="comma-separated n values")
    p.add_argument("--alpha", type=float)
    p.add_argument("--lam", type=float)

    p = sub.add_parser("mc", parents=[common], help="one Monte Carlo configuration")
    p.add_argument("--scenario")
    p.add_argument("--rho", type=float)
    p.add_argument("--reps", type=int)
    p.add_argument("--expected-obs", dest="expected_obs", type=int)

    p = sub.add_parser("table1", parents=[common], help="scenario x correlation sweep")
    p.add_argument("--scenario", help="comma-separated scenarios")
    p.add_argument("--rhos", help="comma-separated correlations")
    p.add_argument("--reps", type=int)
    p.add_argument("--expected-obs", dest="expected_obs", type=int)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    written: list[Path] = []
    man = None
    try:
        cfg = resolve_config(args)
        fmt = cfg["run"]["format"]
        if fmt not in ("csv", "json"):
            raise CliError(f"unknown format {fmt!r}", code=2)
        out = args.out or Path(f"{args.command}.{fmt}")
        man = RunManifest(args.command, args.config, out, cfg["run"].getint("seed"), fmt)
        if not out.parent.exists() or not os.access(out.parent or Path("."), os.W_OK):
            raise CliError(f"output directory not writable: {out.parent}", code=2)
        with man.sidecar.open("w") as fh:
            written.append(man.sidecar)
            cfg.write(fh)  # resolved before running; rewritten below with derived values
        written += HANDLERS[args.command](cfg, man)
        with man.sidecar.open("w") as fh:
            cfg.write(fh)
    except Exception as exc:  # noqa: BLE001 - every failure maps to an exit code
        for path in written + ([man.output_path] if man else []):
            Path(path).unlink(missing_ok=True)
        code = exc.code if isinstance(exc, CliError) else 1
        print(f"error: {exc}", file=sys.stderr)
        return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
