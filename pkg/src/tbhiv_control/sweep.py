"""Epsilon sweep: builds the shared epsilon grid, solves the subproblem
sequence for a scenario, and assembles the discrete Pareto front with the
per-point controls and trajectories, plus the gridded optimal-surface view.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .model import A, A_T, Parameters
from .nlp import Solution, SubproblemSpec, Tolerances, solve_subproblem
from .objectives import ObjectivePair, f2_upper_bound
from .simulate import ControlGrid, TimeGrid, Trajectory

# MOP1: both controls free; MOP2: u1 only; MOP3: u2 only.
MOP_FREE_CONTROLS = {1: "both", 2: "u1", 3: "u2"}

SURFACE_QUANTITIES = ("u1", "u2", "u1+u2", "A", "A_T", "A+A_T")


@dataclass(frozen=True)
class Scenario:
    mop: int
    T: float = 10.0
    n_intervals: int = 100
    n_front_points: int = 100
    params: Parameters = field(default_factory=Parameters)

    def __post_init__(self):
        if self.mop not in MOP_FREE_CONTROLS:
            raise ValueError(f"mop must be 1, 2 or 3, got {self.mop}")
        if self.n_front_points < 2:
            raise ValueError("n_front_points must be >= 2")
        if self.params.T != self.T:
            object.__setattr__(self, "params", self.params.with_overrides(T=self.T))

    @property
    def free_controls(self) -> str:
        return MOP_FREE_CONTROLS[self.mop]

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid(T=self.T, n_intervals=self.n_intervals)


@dataclass(frozen=True)
class ParetoPoint:
    epsilon: float
    objectives: ObjectivePair
    controls: ControlGrid
    trajectory: Trajectory
    converged: bool
    evaluations: int
    constraint_violation: float
    message: str


@dataclass(frozen=True)
class ParetoFront:
    scenario: Scenario
    points: list[ParetoPoint]
    created: str
    settings_hash: str

    def epsilons(self) -> np.ndarray:
        return np.array([p.epsilon for p in self.points])

    def f1_values(self) -> np.ndarray:
        return np.array([p.objectives.f1 for p in self.points])

    def f2_values(self) -> np.ndarray:
        return np.array([p.objectives.f2 for p in self.points])


def epsilon_grid(scenario: Scenario) -> np.ndarray:
    """Evenly spaced epsilon values over [0, 0.95^2 * T].

    The upper end is the effort of the simplex vertex (0.95, 0), used for
    all three MOPs so fronts can be compared at identical epsilon values.
    """
    return np.linspace(0.0, f2_upper_bound(scenario.T), scenario.n_front_points)


def _make_point(eps: float, sol: Solution) -> ParetoPoint:
    return ParetoPoint(
        epsilon=float(eps),
        objectives=sol.objectives,
        controls=sol.controls,
        trajectory=sol.trajectory,
        converged=sol.converged,
        evaluations=sol.evaluations,
        constraint_violation=sol.constraint_violation,
        message=sol.message,
    )


def _settings_hash(scenario: Scenario, budget: int, tolerances: Tolerances) -> str:
    payload = json.dumps(
        {
            "mop": scenario.mop,
            "T": scenario.T,
            "n_intervals": scenario.n_intervals,
            "n_front_points": scenario.n_front_points,
            "params": {k: v for k, v in vars(scenario.params).items()},
            "budget": budget,
            "tolerances": vars(tolerances),
        },
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _solve_one(args) -> Solution:
    scenario, eps, budget, tolerances = args
    spec = SubproblemSpec(
        free_controls=scenario.free_controls,
        epsilon=float(eps),
        grid=scenario.grid,
        params=scenario.params,
        initial_guess=None,
        budget=budget,
        tolerances=tolerances,
    )
    return solve_subproblem(spec)


def sweep(
    scenario: Scenario,
    budget: int = 50_000,
    tolerances: Tolerances = Tolerances(),
    parallel: bool = False,
    max_workers: int | None = None,
) -> ParetoFront:
    """Solve all epsilon subproblems for one scenario.

    Sequential mode (default) warm-starts each subproblem from the previous
    solution, ascending in epsilon. Parallel mode cold-starts every
    subproblem independently; faster wall clock, possibly rougher fronts.
    Failed or non-converged points are retained and flagged, never dropped.
    """
    eps_values = epsilon_grid(scenario)
    created = datetime.now(timezone.utc).isoformat()
    shash = _settings_hash(scenario, budget, tolerances)

    points: list[ParetoPoint] = []
    if parallel:
        jobs = [(scenario, eps, budget, tolerances) for eps in eps_values]
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            for eps, sol in zip(eps_values, pool.map(_solve_one, jobs)):
                points.append(_make_point(eps, sol))
    else:
        warm: ControlGrid | None = None
        for eps in eps_values:
            spec = SubproblemSpec(
                free_controls=scenario.free_controls,
                epsilon=float(eps),
                grid=scenario.grid,
                params=scenario.params,
                initial_guess=warm,
                budget=budget,
                tolerances=tolerances,
            )
            sol = solve_subproblem(spec)
            points.append(_make_point(eps, sol))
            warm = sol.controls
    return ParetoFront(scenario=scenario, points=points, created=created, settings_hash=shash)


def surface_export(front: ParetoFront) -> dict:
    """Gridded optimal-surface samples for plotting.

    Returns {"epsilons": (m,), "times": (n+1,), "values": {quantity: (m, n+1)}}
    covering u1, u2, u1+u2, A, A_T and A+A_T; each row is one front point,
    so slicing a row recovers the corresponding trajectory or schedule.
    """
    if not front.points:
        raise ValueError("front is empty")
    times = front.scenario.grid.times
    eps = front.epsilons()
    u1 = np.array([p.controls.u1 for p in front.points])
    u2 = np.array([p.controls.u2 for p in front.points])
    a = np.array([p.trajectory.compartment(A) for p in front.points])
    at = np.array([p.trajectory.compartment(A_T) for p in front.points])
    values = {
        "u1": u1,
        "u2": u2,
        "u1+u2": u1 + u2,
        "A": a,
        "A_T": at,
        "A+A_T": a + at,
    }
    return {"epsilons": eps, "times": times, "values": values}
