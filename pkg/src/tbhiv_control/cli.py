"""Command-line entry point.

Subcommands:
  simulate  integrate the model under constant controls and dump the trajectory
  sweep     run an epsilon sweep for one MOP and dump the front artifacts
  slice     extract front points at given effort levels from an existing sweep

All artifacts are CSV (or JSON mirrors) with full round-trip float precision,
plus a manifest.json recording the resolved configuration and a content hash
of every output; re-running from a manifest reproduces identical bodies.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import shutil
import sys
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .model import COMPARTMENTS, Parameters, initial_state, is_admissible
from .nlp import Tolerances
from .objectives import f2_upper_bound
from .simulate import ControlGrid, TimeGrid, simulate
from .sweep import SURFACE_QUANTITIES, Scenario, surface_export, sweep


class UsageError(Exception):
    """Configuration error; maps to a nonzero exit status."""


@dataclass
class RunConfig:
    command: str = "sweep"
    mop: int = 1
    T: float = 10.0
    n_intervals: int = 100
    n_front_points: int = 100
    budget: int = 50_000
    params: dict = field(default_factory=dict)   # parameter name -> value
    init: dict = field(default_factory=dict)     # compartment name -> value
    u1: float = 0.0                              # constant controls (simulate)
    u2: float = 0.0
    slices: list = field(default_factory=list)   # target f2 values
    out: str = "out"
    format: str = "csv"
    parallel: bool = False

    def validate(self):
        if self.command not in ("simulate", "sweep", "slice"):
            raise UsageError(f"unknown command {self.command!r}")
        if self.mop not in (1, 2, 3):
            raise UsageError(f"--mop must be 1, 2 or 3, got {self.mop}")
        if self.T <= 0:
            raise UsageError(f"--T must be positive, got {self.T}")
        if self.n_intervals < 1:
            raise UsageError(f"--n-intervals must be >= 1, got {self.n_intervals}")
        if self.n_front_points < 2:
            raise UsageError(f"--front-points must be >= 2, got {self.n_front_points}")
        if self.budget < 1:
            raise UsageError(f"--budget must be >= 1, got {self.budget}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"--format must be csv or json, got {self.format!r}")
        if not is_admissible(self.u1, self.u2):
            raise UsageError(f"constant controls ({self.u1}, {self.u2}) are inadmissible")
        f2max = f2_upper_bound(self.T)
        for s in self.slices:
            if not 0.0 <= s <= f2max:
                raise UsageError(f"--slice {s} outside [0, {f2max}]")
        known_params = {f.name for f in fields(Parameters)}
        for k in self.params:
            if k not in known_params:
                raise UsageError(f"unknown parameter {k!r} in --param")
        for k in self.init:
            if k not in COMPARTMENTS:
                raise UsageError(f"unknown compartment {k!r} in --init")

    def resolved_parameters(self) -> Parameters:
        return Parameters(**{**self.params, "T": self.T})

    def resolved_initial_state(self, params: Parameters) -> np.ndarray:
        state = initial_state(params)
        for name, value in self.init.items():
            state[COMPARTMENTS.index(name)] = value
        return state


def _parse_override(token: str) -> tuple[str, float]:
    if "=" not in token:
        raise UsageError(f"expected name=value, got {token!r}")
    name, _, raw = token.partition("=")
    try:
        return name, float(raw)
    except ValueError:
        raise UsageError(f"unparsable number in {token!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tbhiv-control",
        description="Multiobjective optimal control of TB-HIV/AIDS coinfection",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config or manifest to start from")
        p.add_argument("--mop", type=int, choices=(1, 2, 3))
        p.add_argument("--T", type=float)
        p.add_argument("--n-intervals", type=int, dest="n_intervals")
        p.add_argument("--front-points", type=int, dest="n_front_points")
        p.add_argument("--budget", type=int)
        p.add_argument("--param", action="append", default=None, metavar="NAME=VALUE")
        p.add_argument("--init", action="append", default=None, metavar="COMPARTMENT=VALUE")
        p.add_argument("--slice", action="append", type=float, default=None, dest="slices")
        p.add_argument("--out")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--parallel", action="store_true", default=None)

    p_sim = sub.add_parser("simulate", help="integrate under constant controls")
    common(p_sim)
    p_sim.add_argument("--u1", type=float)
    p_sim.add_argument("--u2", type=float)

    p_sweep = sub.add_parser("sweep", help="epsilon sweep for one MOP")
    common(p_sweep)

    p_slice = sub.add_parser("slice", help="extract slices from an existing sweep")
    common(p_slice)
    return parser


def parse_config(argv: list[str]) -> RunConfig:
    """Build a RunConfig from command-line tokens; --config supplies file
    defaults and explicit flags override them. Unknown keys are rejected."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code not in (0, None):
            raise UsageError("invalid command line") from None
        raise

    config = RunConfig(command=ns.command)
    if ns.config:
        path = Path(ns.config)
        if not path.exists():
            raise UsageError(f"config file not found: {ns.config}")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed config {ns.config}: {exc}") from None
        if "config" in data and isinstance(data["config"], dict):
            data = data["config"]  # allow replaying a manifest
        known = {f.name for f in fields(RunConfig)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config key(s): {sorted(unknown)}")
        for k, v in data.items():
            setattr(config, k, v)
        config.command = ns.command

    for name in ("mop", "T", "n_intervals", "n_front_points", "budget", "out", "format"):
        v = getattr(ns, name, None)
        if v is not None:
            setattr(config, name, v)
    if ns.parallel is not None:
        config.parallel = ns.parallel
    if ns.slices is not None:
        config.slices = list(ns.slices)
    if ns.param is not None:
        config.params = {**config.params, **dict(_parse_override(t) for t in ns.param)}
    if ns.init is not None:
        config.init = {**config.init, **dict(_parse_override(t) for t in ns.init)}
    for name in ("u1", "u2"):
        v = getattr(ns, name, None)
        if v is not None:
            setattr(config, name, v)

    config.validate()
    return config


# ---------------------------------------------------------------------------
# output helpers


def _fmt(value) -> str:
    """Shortest decimal string that round-trips to the identical float."""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_table(path: Path, header: list[str], rows: list[list], fmt: str) -> None:
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        path.write_text("\n".join(lines) + "\n")
    else:
        records = [
            {k: (v.item() if isinstance(v, np.generic) else v) for k, v in zip(header, row)}
            for row in rows
        ]
        path.write_text(json.dumps(records, indent=1) + "\n")


def _table_name(stem: str, fmt: str) -> str:
    return f"{stem}.{'csv' if fmt == 'csv' else 'json'}"


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(out: Path, config: RunConfig, outputs: list[Path]) -> None:
    manifest = {
        "config": asdict(config),
        "created": datetime.now(timezone.utc).isoformat(),
        "outputs": {str(p.relative_to(out)): _sha256(p) for p in sorted(outputs)},
    }
    # a standalone slice run must not clobber the sweep's own manifest
    name = "slice_manifest.json" if config.command == "slice" else "manifest.json"
    (out / name).write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")


def _trajectory_rows(times, states):
    return [[t, *states[i]] for i, t in enumerate(times)]


def _controls_rows(times, controls: ControlGrid):
    return [[t, controls.u1[i], controls.u2[i]] for i, t in enumerate(times)]


# ---------------------------------------------------------------------------
# commands


def _run_simulate(config: RunConfig, out: Path) -> list[Path]:
    params = config.resolved_parameters()
    grid = TimeGrid(T=config.T, n_intervals=config.n_intervals)
    controls = ControlGrid.constant(config.u1, config.u2, grid)
    traj = simulate(config.resolved_initial_state(params), controls, grid, params)
    times = grid.times
    outputs = []
    p = out / _table_name("states_0", config.format)
    _write_table(p, ["time", *COMPARTMENTS], _trajectory_rows(times, traj.states), config.format)
    outputs.append(p)
    p = out / _table_name("controls_0", config.format)
    _write_table(p, ["time", "u1", "u2"], _controls_rows(times, controls), config.format)
    outputs.append(p)
    return outputs


def _run_sweep(config: RunConfig, out: Path) -> list[Path]:
    scenario = Scenario(
        mop=config.mop,
        T=config.T,
        n_intervals=config.n_intervals,
        n_front_points=config.n_front_points,
        params=config.resolved_parameters(),
    )
    front = sweep(scenario, budget=config.budget, parallel=config.parallel)
    times = scenario.grid.times
    fmt = config.format
    outputs = []

    front_rows = [
        [k, pt.epsilon, pt.objectives.f1, pt.objectives.f2, pt.converged,
         pt.evaluations, pt.constraint_violation]
        for k, pt in enumerate(front.points)
    ]
    p = out / _table_name("front", fmt)
    _write_table(
        p,
        ["index", "epsilon", "f1", "f2", "converged", "evaluations", "constraint_violation"],
        front_rows,
        fmt,
    )
    outputs.append(p)

    for k, pt in enumerate(front.points):
        p = out / _table_name(f"controls_{k}", fmt)
        _write_table(p, ["time", "u1", "u2"], _controls_rows(times, pt.controls), fmt)
        outputs.append(p)
        p = out / _table_name(f"states_{k}", fmt)
        _write_table(p, ["time", *COMPARTMENTS], _trajectory_rows(times, pt.trajectory.states), fmt)
        outputs.append(p)

    surfaces = surface_export(front)
    rows = []
    for quantity in SURFACE_QUANTITIES:
        grid_values = surfaces["values"][quantity]
        for i, eps in enumerate(surfaces["epsilons"]):
            for j, t in enumerate(surfaces["times"]):
                rows.append([quantity, eps, t, grid_values[i, j]])
    p = out / _table_name("surfaces", fmt)
    _write_table(p, ["quantity", "epsilon", "time", "value"], rows, fmt)
    outputs.append(p)

    outputs += _make_slices(config, out, front_rows)
    return outputs


def _slice_dirname(target: float) -> str:
    return f"slice_{target:g}"


def _make_slices(config: RunConfig, out: Path, front_rows: list[list]) -> list[Path]:
    """For each target f2, pick the front point with smallest epsilon >= target
    and copy its per-point files under slice_<value>/."""
    outputs = []
    for target in config.slices:
        candidates = [(row[1], int(row[0])) for row in front_rows if row[1] >= target]
        if not candidates:
            raise UsageError(f"no front point with epsilon >= {target}")
        _, k = min(candidates)
        sdir = out / _slice_dirname(target)
        sdir.mkdir(exist_ok=True)
        for stem in (f"controls_{k}", f"states_{k}"):
            src = out / _table_name(stem, config.format)
            if not src.exists():
                raise UsageError(f"missing sweep artifact: {src}")
            dst = sdir / src.name
            shutil.copyfile(src, dst)
            outputs.append(dst)
    return outputs


def _run_slice(config: RunConfig, out: Path) -> list[Path]:
    front_path = out / _table_name("front", config.format)
    if not front_path.exists():
        raise UsageError(f"no sweep output found at {front_path}")
    if config.format == "csv":
        lines = front_path.read_text().splitlines()
        header = lines[0].split(",")
        rows = []
        for line in lines[1:]:
            cells = line.split(",")
            rows.append([int(cells[0]), float(cells[1])] + cells[2:])
    else:
        records = json.loads(front_path.read_text())
        rows = [[r["index"], r["epsilon"]] for r in records]
    return _make_slices(config, out, rows)


def run(config: RunConfig) -> int:
    """Execute a validated RunConfig; returns the process exit status."""
    out = Path(config.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if config.command == "simulate":
            outputs = _run_simulate(config, out)
        elif config.command == "sweep":
            outputs = _run_sweep(config, out)
        else:
            outputs = _run_slice(config, out)
        _write_manifest(out, config, outputs)
    except OSError as exc:
        print(f"tbhiv-control: I/O error: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        config = parse_config(argv)
    except UsageError as exc:
        print(f"tbhiv-control: error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(config)
    except UsageError as exc:
        print(f"tbhiv-control: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
