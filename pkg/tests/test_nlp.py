import numpy as np
import pytest

from tbhiv_control.model import Parameters, U_MAX, initial_state
from tbhiv_control.nlp import (
    SubproblemSpec,
    Tolerances,
    _Problem,
    objective_and_gradient,
    project_simplex_box,
    solve_subproblem,
)
from tbhiv_control.objectives import eval_f1, eval_f2
from tbhiv_control.simulate import ControlGrid, TimeGrid, simulate


@pytest.fixture
def small_grid():
    return TimeGrid(T=2.0, n_intervals=10)


def make_spec(free="u1", epsilon=1.0, grid=None, **kwargs):
    grid = grid or TimeGrid(T=2.0, n_intervals=10)
    params = Parameters(T=grid.T)
    return SubproblemSpec(
        free_controls=free, epsilon=epsilon, grid=grid, params=params, **kwargs
    )


class TestProjection:
    def test_interior_fixed_points(self):
        u1 = np.array([0.1, 0.0, 0.95, 0.4])
        u2 = np.array([0.2, 0.0, 0.0, 0.5])
        p1, p2 = project_simplex_box(u1, u2)
        np.testing.assert_array_equal(p1, u1)
        np.testing.assert_array_equal(p2, u2)

    def test_near_boundary_point_barely_moves(self):
        # 0.4 + 0.55 exceeds 0.95 by one ulp; projection lands on the edge
        p1, p2 = project_simplex_box(np.array([0.4]), np.array([0.55]))
        np.testing.assert_allclose(p1, 0.4, atol=1e-15)
        np.testing.assert_allclose(p2, 0.55, atol=1e-15)

    def test_projection_is_feasible(self):
        rng = np.random.default_rng(17)
        u1 = rng.uniform(-1.0, 2.0, 1000)
        u2 = rng.uniform(-1.0, 2.0, 1000)
        p1, p2 = project_simplex_box(u1, u2)
        assert np.all(p1 >= 0.0) and np.all(p2 >= 0.0)
        assert np.all(p1 + p2 <= U_MAX + 1e-15)

    def test_variational_inequality(self):
        # (x - Px) . (z - Px) <= 0 for every feasible z characterizes the
        # Euclidean projection onto a convex set
        rng = np.random.default_rng(23)
        zs1 = rng.uniform(0.0, U_MAX, 300)
        zs2 = rng.uniform(0.0, 1.0, 300) * (U_MAX - zs1)
        for _ in range(50):
            a, b = rng.uniform(-1.5, 2.5, 2)
            p1, p2 = project_simplex_box(np.array([a]), np.array([b]))
            inner = (a - p1[0]) * (zs1 - p1[0]) + (b - p2[0]) * (zs2 - p2[0])
            assert inner.max() <= 1e-12


class TestGradients:
    def test_f1_gradient_nonpositive_at_zero_controls(self, small_grid):
        # more treatment cannot increase the AIDS burden at first order
        spec = make_spec("both", epsilon=1.0, grid=small_grid)
        decision = ControlGrid.zeros(small_grid)
        _, grad = objective_and_gradient(decision, spec)
        assert grad.max() <= 1e-10

    def test_f1_gradient_matches_central_differences(self, small_grid):
        spec = make_spec("u1", epsilon=1.0, grid=small_grid)
        prob = _Problem(spec)
        rng = np.random.default_rng(4)
        x = rng.uniform(0.1, 0.6, prob.dim)
        _, grad = prob.f1_and_grad(x)
        step = 1e-5
        for j in (0, 3, prob.dim - 1):
            xp, xm = x.copy(), x.copy()
            xp[j] += step
            xm[j] -= step
            central = (prob.f1(xp) - prob.f1(xm)) / (2.0 * step)
            assert grad[j] == pytest.approx(central, rel=5e-3, abs=1e-6)

    def test_f2_gradient_closed_form(self, small_grid):
        spec = make_spec("u1", epsilon=1.0, grid=small_grid)
        prob = _Problem(spec)
        rng = np.random.default_rng(6)
        x = rng.uniform(0.0, 0.9, prob.dim)
        grad = prob.f2_grad(x)
        w = np.ones(small_grid.n_nodes)
        w[0] = w[-1] = 0.5
        expected = 2.0 * w * small_grid.h * x
        np.testing.assert_allclose(grad, expected, rtol=1e-14)
        # cross-check against finite differences of f2 itself
        step = 1e-7
        for j in (0, 5):
            xp = x.copy()
            xp[j] += step
            fd = (prob.f2(xp) - prob.f2(x)) / step
            assert grad[j] == pytest.approx(fd, rel=1e-5)

    def test_scenario_masking(self, small_grid):
        n = small_grid.n_nodes
        assert _Problem(make_spec("both", grid=small_grid)).dim == 2 * n
        assert _Problem(make_spec("u1", grid=small_grid)).dim == n
        assert _Problem(make_spec("u2", grid=small_grid)).dim == n
        # the pinned control stays identically zero through pack/unpack
        prob = _Problem(make_spec("u2", grid=small_grid))
        u1, u2 = prob.unpack(np.full(n, 0.5))
        assert np.all(u1 == 0.0) and np.all(u2 == 0.5)


class TestSolveSubproblem:
    def test_epsilon_zero_pins_controls(self, small_grid):
        f1_values = []
        for free in ("both", "u1", "u2"):
            sol = solve_subproblem(make_spec(free, epsilon=0.0, grid=small_grid))
            assert sol.converged
            assert sol.objectives.f2 == 0.0
            assert np.all(sol.controls.u1 == 0.0) and np.all(sol.controls.u2 == 0.0)
            f1_values.append(sol.objectives.f1)
        assert f1_values[0] == f1_values[1] == f1_values[2]

    def test_negative_epsilon_infeasible(self, small_grid):
        sol = solve_subproblem(make_spec("u1", epsilon=-1.0, grid=small_grid))
        assert not sol.converged
        assert "infeasible" in sol.message

    def test_feasibility_of_converged_solution(self, small_grid):
        eps = 0.5
        sol = solve_subproblem(make_spec("u1", epsilon=eps, grid=small_grid))
        assert sol.converged
        assert sol.objectives.f2 <= eps + 1e-6 * max(1.0, eps)
        sol.controls.check_admissible(tol=1e-8)

    def test_budget_respected(self, small_grid):
        budget = 300
        sol = solve_subproblem(make_spec("u1", epsilon=0.5, grid=small_grid, budget=budget))
        assert sol.evaluations <= budget

    def test_tiny_budget_returns_gracefully(self, small_grid):
        sol = solve_subproblem(make_spec("u1", epsilon=0.5, grid=small_grid, budget=1))
        assert not sol.converged
        assert sol.objectives.f2 <= 0.5 + 1e-6

    def test_solution_objectives_reproducible(self, small_grid):
        spec = make_spec("both", epsilon=0.8, grid=small_grid)
        sol = solve_subproblem(spec)
        traj = simulate(initial_state(spec.params), sol.controls, small_grid, spec.params)
        assert eval_f1(traj, small_grid) == pytest.approx(sol.objectives.f1, rel=1e-10)
        assert eval_f2(sol.controls, small_grid) == pytest.approx(sol.objectives.f2, rel=1e-10)

    def test_improves_on_no_control(self, small_grid):
        spec = make_spec("u1", epsilon=0.5, grid=small_grid)
        sol = solve_subproblem(spec)
        baseline = solve_subproblem(make_spec("u1", epsilon=0.0, grid=small_grid))
        assert sol.objectives.f1 < baseline.objectives.f1

    def test_warm_start_no_worse_than_cold(self, small_grid):
        cold = solve_subproblem(make_spec("u1", epsilon=0.6, grid=small_grid))
        prior = solve_subproblem(make_spec("u1", epsilon=0.4, grid=small_grid))
        warm = solve_subproblem(
            make_spec("u1", epsilon=0.6, grid=small_grid, initial_guess=prior.controls)
        )
        # soft property per design: log, don't fail hard beyond a loose bound
        assert warm.objectives.f1 <= cold.objectives.f1 + 1e-3 * abs(cold.objectives.f1)

    def test_invalid_spec(self, small_grid):
        with pytest.raises(ValueError):
            make_spec("u3", grid=small_grid)
        with pytest.raises(ValueError):
            make_spec("u1", grid=small_grid, budget=0)

    def test_tolerances_defaults(self):
        t = Tolerances()
        assert t.constraint == 1e-6
        assert t.stationarity == 1e-5
