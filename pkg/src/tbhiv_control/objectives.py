"""The two objectives of the multiobjective problem and the weighted
single-objective functional, all via trapezoidal quadrature on the
simulation grid.

f1 integrates the AIDS and AIDS-TB burden A(t) + A_T(t); f2 integrates
the quadratic control effort u1(t)^2 + u2(t)^2.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import A, A_T
from .simulate import ControlGrid, TimeGrid, Trajectory, trapezoid


@dataclass(frozen=True)
class ObjectivePair:
    f1: float  # person-years of AIDS and AIDS-TB burden
    f2: float  # control effort


@dataclass(frozen=True)
class WeightedObjectiveConfig:
    """Relative cost weights for the scalar functional
    integral of A + A_T + w1*u1^2 + w2*u2^2."""

    w1: float
    w2: float

    def __post_init__(self):
        if self.w1 <= 0 or self.w2 <= 0:
            raise ValueError("weights must be positive")


def eval_f1(traj: Trajectory, grid: TimeGrid) -> float:
    """Integral of A(t) + A_T(t) over [0, T]."""
    if traj.grid != grid:
        raise ValueError("trajectory grid does not match the quadrature grid")
    return float(trapezoid(traj.compartment(A) + traj.compartment(A_T), grid))


def eval_f2(controls: ControlGrid, grid: TimeGrid) -> float:
    """Integral of u1(t)^2 + u2(t)^2 over [0, T]."""
    if controls.n_nodes != grid.n_nodes:
        raise ValueError("control grid does not match the quadrature grid")
    return float(trapezoid(controls.u1**2 + controls.u2**2, grid))


def f2_upper_bound(T: float) -> float:
    """Largest attainable f2 over the admissible set: 0.95^2 * T, at the
    simplex vertex (one control at 0.95, the other at 0)."""
    return 0.95 * 0.95 * T


def eval_weighted_J(
    traj: Trajectory,
    controls: ControlGrid,
    grid: TimeGrid,
    cfg: WeightedObjectiveConfig,
) -> float:
    """Integral of A + A_T + w1*u1^2 + w2*u2^2; with w1 = w2 = w this equals
    eval_f1 + w * eval_f2 by linearity of the quadrature."""
    if traj.grid != grid or controls.n_nodes != grid.n_nodes:
        raise ValueError("trajectory/control grids do not match the quadrature grid")
    integrand = (
        traj.compartment(A)
        + traj.compartment(A_T)
        + cfg.w1 * controls.u1**2
        + cfg.w2 * controls.u2**2
    )
    return float(trapezoid(integrand, grid))
