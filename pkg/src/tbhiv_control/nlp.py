"""Single epsilon-constraint subproblem: minimize the AIDS burden f1 over
the gridded controls subject to the effort bound f2 <= epsilon, per-node
boxes, and the per-node coupling u1 + u2 <= 0.95.

The constrained scheme is an augmented Lagrangian on the single nonlinear
constraint, with inner projected-gradient iterations (Barzilai-Borwein
steps plus Armijo backtracking) and exact nodewise projection onto the
control simplex. f1 gradients come from forward finite differences, one
batched re-simulation per gradient; the f2 gradient is the exact
derivative of the trapezoidal quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import A, A_T, Parameters, U_MAX, initial_state
from .objectives import ObjectivePair, eval_f1, eval_f2
from .simulate import ControlGrid, TimeGrid, Trajectory, simulate, simulate_batch

# Which controls form the decision vector; the other is pinned at 0.
FREE_CONTROLS = {"both": ("u1", "u2"), "u1": ("u1",), "u2": ("u2",)}

_FD_STEP = 1e-6


@dataclass(frozen=True)
class Tolerances:
    constraint: float = 1e-6   # absolute violation of f2 <= epsilon
    stationarity: float = 1e-5  # projected-gradient norm, relative to max(1, |f1|)
    step: float = 1e-12        # minimum meaningful step length


@dataclass(frozen=True)
class SubproblemSpec:
    free_controls: str  # "both" | "u1" | "u2"
    epsilon: float
    grid: TimeGrid
    params: Parameters
    initial_guess: ControlGrid | None = None
    budget: int = 50_000
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if self.free_controls not in FREE_CONTROLS:
            raise ValueError(f"free_controls must be one of {sorted(FREE_CONTROLS)}")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")


@dataclass(frozen=True)
class Solution:
    controls: ControlGrid
    trajectory: Trajectory
    objectives: ObjectivePair
    converged: bool
    evaluations: int
    constraint_violation: float
    message: str


class BudgetExhausted(Exception):
    pass


def project_simplex_box(u1: np.ndarray, u2: np.ndarray):
    """Exact Euclidean projection, nodewise, onto
    {u1 >= 0, u2 >= 0, u1 + u2 <= U_MAX} (which implies the boxes)."""
    inside = (u1 >= 0.0) & (u2 >= 0.0) & (u1 + u2 <= U_MAX)
    # candidate projections onto the three edges; the nearest wins
    c1 = np.clip(u1, 0.0, U_MAX), np.zeros_like(u1)                 # edge u2 = 0
    c2 = np.zeros_like(u1), np.clip(u2, 0.0, U_MAX)                 # edge u1 = 0
    a = np.clip(0.5 * (u1 - u2 + U_MAX), 0.0, U_MAX)                # edge u1+u2 = U_MAX
    c3 = a, U_MAX - a
    best1, best2 = c1
    bestd = (u1 - best1) ** 2 + (u2 - best2) ** 2
    for p1, p2 in (c2, c3):
        d = (u1 - p1) ** 2 + (u2 - p2) ** 2
        better = d < bestd
        best1 = np.where(better, p1, best1)
        best2 = np.where(better, p2, best2)
        bestd = np.where(better, d, bestd)
    out1 = np.where(inside, u1, best1)
    out2 = np.where(inside, u2, best2)
    return out1, out2


class _Problem:
    """Packs the decision vector, counts simulations, evaluates f1/f2 and
    their gradients for one subproblem."""

    def __init__(self, spec: SubproblemSpec):
        self.spec = spec
        self.grid = spec.grid
        self.params = spec.params
        self.x0_state = initial_state(spec.params)
        self.free = FREE_CONTROLS[spec.free_controls]
        self.n_nodes = spec.grid.n_nodes
        self.dim = len(self.free) * self.n_nodes
        self.evaluations = 0
        # trapezoid node weights, scaled by h
        w = np.ones(self.n_nodes)
        w[0] = w[-1] = 0.5
        self.quad_w = w * spec.grid.h

    def unpack(self, x: np.ndarray):
        n = self.n_nodes
        if self.spec.free_controls == "both":
            return x[:n], x[n:]
        zero = np.zeros(n)
        if self.spec.free_controls == "u1":
            return x, zero
        return zero, x

    def pack(self, controls: ControlGrid) -> np.ndarray:
        parts = []
        if "u1" in self.free:
            parts.append(controls.u1)
        if "u2" in self.free:
            parts.append(controls.u2)
        return np.concatenate(parts)

    def to_controls(self, x: np.ndarray) -> ControlGrid:
        u1, u2 = self.unpack(x)
        return ControlGrid(u1.copy(), u2.copy())

    def project(self, x: np.ndarray) -> np.ndarray:
        if self.spec.free_controls == "both":
            n = self.n_nodes
            u1, u2 = project_simplex_box(x[:n], x[n:])
            return np.concatenate([u1, u2])
        return np.clip(x, 0.0, U_MAX)

    def _charge(self, n_sims: int):
        if self.evaluations + n_sims > self.spec.budget:
            raise BudgetExhausted()
        self.evaluations += n_sims

    def f1(self, x: np.ndarray) -> float:
        self._charge(1)
        u1, u2 = self.unpack(x)
        traj = simulate(self.x0_state, ControlGrid(u1, u2), self.grid, self.params)
        return eval_f1(traj, self.grid)

    def f1_and_grad(self, x: np.ndarray):
        """Forward finite differences, all perturbations in one batch."""
        self._charge(self.dim + 1)
        steps = np.maximum(_FD_STEP, _FD_STEP * np.abs(x))
        pert = np.broadcast_to(x, (self.dim, self.dim)).copy()
        pert[np.arange(self.dim), np.arange(self.dim)] += steps
        xs = np.vstack([x[None, :], pert])
        u1s = np.empty((self.dim + 1, self.n_nodes))
        u2s = np.empty_like(u1s)
        for i, xi in enumerate(xs):
            a, b = self.unpack(xi)
            u1s[i], u2s[i] = a, b
        states = simulate_batch(self.x0_state, u1s, u2s, self.grid, self.params)
        burden = states[:, :, A] + states[:, :, A_T]
        vals = burden @ self.quad_w
        f0 = float(vals[0])
        grad = (vals[1:] - f0) / steps
        return f0, grad

    def f2(self, x: np.ndarray) -> float:
        u1, u2 = self.unpack(x)
        return float(self.quad_w @ (u1**2 + u2**2))

    def f2_grad(self, x: np.ndarray) -> np.ndarray:
        u1, u2 = self.unpack(x)
        if self.spec.free_controls == "both":
            return np.concatenate([2.0 * self.quad_w * u1, 2.0 * self.quad_w * u2])
        u = u1 if self.spec.free_controls == "u1" else u2
        return 2.0 * self.quad_w * u


def objective_and_gradient(decision: ControlGrid, spec: SubproblemSpec):
    """f1 of a fresh simulation at `decision` plus its forward-difference
    gradient over the free decision variables."""
    prob = _Problem(spec)
    x = prob.pack(decision)
    return prob.f1_and_grad(x)


def _zero_control_solution(spec: SubproblemSpec, message: str, converged: bool) -> Solution:
    controls = ControlGrid.zeros(spec.grid)
    traj = simulate(initial_state(spec.params), controls, spec.grid, spec.params)
    f1 = eval_f1(traj, spec.grid)
    return Solution(
        controls=controls,
        trajectory=traj,
        objectives=ObjectivePair(f1=f1, f2=0.0),
        converged=converged,
        evaluations=1,
        constraint_violation=max(0.0, -spec.epsilon),
        message=message,
    )


def solve_subproblem(spec: SubproblemSpec) -> Solution:
    """Augmented-Lagrangian solve of one epsilon-constraint subproblem.

    Returns the best feasible iterate found; `converged` is set when the
    projected gradient of the augmented Lagrangian and the constraint
    violation both meet the spec tolerances within the evaluation budget.
    """
    tol = spec.tolerances
    if spec.epsilon < 0:
        sol = _zero_control_solution(spec, "infeasible: epsilon < 0", converged=False)
        return sol
    if spec.epsilon == 0.0:
        # f2 = 0 pins every control node at 0: the quadrature weights are
        # strictly positive, so the zero schedule is the only feasible point.
        return _zero_control_solution(spec, "epsilon = 0 pins all controls at 0", True)

    prob = _Problem(spec)
    if spec.initial_guess is not None:
        x = prob.project(prob.pack(spec.initial_guess))
    else:
        x = np.zeros(prob.dim)

    eps = spec.epsilon
    feas_slack = tol.constraint * max(1.0, eps)

    best_x = None
    best_f1 = np.inf
    best_f2 = 0.0

    def note(xv, f1v):
        nonlocal best_x, best_f1, best_f2
        f2v = prob.f2(xv)
        if f2v <= eps + feas_slack and f1v < best_f1:
            best_x, best_f1, best_f2 = xv.copy(), f1v, f2v

    lam = 0.0
    converged = False
    message = "budget exhausted"
    try:
        f1x, g1x = prob.f1_and_grad(x)
        note(x, f1x)
        mu = max(10.0, abs(f1x))
        viol_prev = np.inf
        for _outer in range(15):
            # ----- inner projected-gradient minimization of the AL -----
            def al_value(f1v, f2v):
                t = lam + mu * (f2v - eps)
                if t > 0.0:
                    return f1v + (t * t - lam * lam) / (2.0 * mu)
                return f1v - lam * lam / (2.0 * mu)

            def al_grad(xv, g1):
                t = lam + mu * (prob.f2(xv) - eps)
                if t > 0.0:
                    return g1 + t * prob.f2_grad(xv)
                return g1

            Lx = al_value(f1x, prob.f2(x))
            gx = al_grad(x, g1x)
            alpha = 1.0 / max(1.0, np.linalg.norm(gx))
            pg_norm = np.inf
            for _inner in range(60):
                pg = x - prob.project(x - gx)
                pg_norm = float(np.linalg.norm(pg, ord=np.inf))
                if pg_norm <= tol.stationarity * max(1.0, abs(f1x)):
                    break
                # backtracking Armijo search along the projection arc
                step = alpha
                accepted = False
                for _bt in range(30):
                    x_new = prob.project(x - step * gx)
                    d = x_new - x
                    dn = float(np.linalg.norm(d))
                    if dn <= tol.step:
                        break
                    f1_new = prob.f1(x_new)
                    L_new = al_value(f1_new, prob.f2(x_new))
                    if L_new <= Lx + 1e-4 * float(gx @ d):
                        accepted = True
                        break
                    step *= 0.5
                if not accepted:
                    break
                f1x_new, g1x_new = prob.f1_and_grad(x_new)
                note(x_new, f1x_new)
                g_new = al_grad(x_new, g1x_new)
                s = x_new - x
                y = g_new - gx
                sy = float(s @ y)
                if sy > 1e-16:
                    alpha = float(s @ s) / sy
                    alpha = min(max(alpha, 1e-10), 1e6)
                else:
                    alpha = min(step * 2.0, 1e6)
                x, f1x, g1x, gx = x_new, f1x_new, g1x_new, g_new
                Lx = al_value(f1x, prob.f2(x))
            # ----- multiplier / penalty update -----
            g = prob.f2(x) - eps
            viol = max(0.0, g)
            if viol <= tol.constraint and pg_norm <= tol.stationarity * max(1.0, abs(f1x)):
                converged = True
                message = "converged"
                note(x, f1x)
                break
            lam = max(0.0, lam + mu * g)
            if viol > 0.25 * viol_prev:
                mu *= 10.0
            viol_prev = viol
    except BudgetExhausted:
        message = "budget exhausted"

    if best_x is None:
        # the initial point is always feasible for epsilon >= 0, so this
        # only triggers if even the first evaluation exceeded the budget
        return _zero_control_solution(spec, "budget too small for one evaluation", False)

    controls = prob.to_controls(best_x)
    traj = simulate(initial_state(spec.params), controls, spec.grid, spec.params)
    f1_final = eval_f1(traj, spec.grid)
    f2_final = eval_f2(controls, spec.grid)
    return Solution(
        controls=controls,
        trajectory=traj,
        objectives=ObjectivePair(f1=f1_final, f2=f2_final),
        converged=converged,
        evaluations=prob.evaluations,
        constraint_violation=max(0.0, f2_final - eps),
        message=message,
    )
