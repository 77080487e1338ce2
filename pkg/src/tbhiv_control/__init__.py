"""Multiobjective optimal control of TB-HIV/AIDS coinfection via
epsilon-constraint sweeps over a direct single-shooting transcription."""

from .model import (
    COMPARTMENTS,
    ControlValue,
    Parameters,
    ZeroPopulationError,
    force_of_infection_hiv,
    force_of_infection_tb,
    initial_state,
    rhs,
    total,
)
from .nlp import Solution, SubproblemSpec, Tolerances, solve_subproblem
from .objectives import (
    ObjectivePair,
    WeightedObjectiveConfig,
    eval_f1,
    eval_f2,
    eval_weighted_J,
)
from .simulate import ControlGrid, TimeGrid, Trajectory, rk4_step, simulate, trapezoid
from .sweep import ParetoFront, ParetoPoint, Scenario, epsilon_grid, surface_export, sweep

__all__ = [
    "COMPARTMENTS",
    "ControlGrid",
    "ControlValue",
    "ObjectivePair",
    "Parameters",
    "ParetoFront",
    "ParetoPoint",
    "Scenario",
    "Solution",
    "SubproblemSpec",
    "TimeGrid",
    "Tolerances",
    "Trajectory",
    "WeightedObjectiveConfig",
    "ZeroPopulationError",
    "epsilon_grid",
    "eval_f1",
    "eval_f2",
    "eval_weighted_J",
    "force_of_infection_hiv",
    "force_of_infection_tb",
    "initial_state",
    "rhs",
    "rk4_step",
    "simulate",
    "solve_subproblem",
    "surface_export",
    "sweep",
    "total",
    "trapezoid",
]

__version__ = "0.1.0"
