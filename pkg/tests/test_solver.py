import math

import numpy as np
import pytest

import oracles
from mobius_opt.errors import InfeasibleConstraint
from mobius_opt.geometry import (
    InversiveVector,
    Setting,
    hyperbolic_distance,
    klein_to_poincare,
)
from mobius_opt.objectives import (
    ball_sphere_radius_term,
    make_instance,
    orientation_barrier_term,
)
from mobius_opt.solver import (
    BARRIER,
    Instance,
    ObjectiveTerm,
    SolverConfig,
    active_terms,
    evaluate_max,
    minimize_max,
    term_values,
)
from util import klein_of_poincare, random_instance

BALL2 = Setting.ball(2)


def distance_bowl(c):
    c = np.asarray(c, float)

    def f(x):
        return hyperbolic_distance(klein_to_poincare(np.asarray(x)), c)

    return ObjectiveTerm(f, kind="distance")


class TestMinimizeMax:
    def test_single_bowl(self):
        c = np.array([0.3, -0.2])
        inst = Instance((distance_bowl(c),), 2)
        sol = minimize_max(inst)
        assert sol.t_star == pytest.approx(0.0, abs=1e-7)
        assert np.allclose(klein_to_poincare(sol.x_star.coords).coords, c, atol=1e-6)
        assert sol.converged

    def test_two_symmetric_circles(self):
        terms = [
            ball_sphere_radius_term(InversiveVector.from_center_radius([0.5, 0], 0.2)),
            ball_sphere_radius_term(InversiveVector.from_center_radius([-0.5, 0], 0.2)),
        ]
        sol = minimize_max(make_instance(terms))
        assert np.linalg.norm(sol.x_star.coords) < 1e-8
        assert set(sol.active) == {0, 1}

    def test_random_radius_instances_vs_grid(self):
        rng = np.random.default_rng(211)
        for _ in range(5):
            inst, _ = random_instance(rng, "ball_radius", n=10)
            sol = minimize_max(inst)
            t_grid, _ = oracles.grid_minimize(inst)
            assert abs(sol.t_star - t_grid) <= 1e-4

    def test_determinism(self):
        rng = np.random.default_rng(223)
        inst, _ = random_instance(rng, "ball_edge", n=12)
        cfg = SolverConfig(rng_seed=99)
        a = minimize_max(inst, cfg)
        b = minimize_max(inst, cfg)
        assert a.t_star == b.t_star
        assert np.array_equal(a.x_star.coords, b.x_star.coords)
        assert a.iterations == b.iterations
        assert a.active == b.active

    def test_glp_determinism(self):
        rng = np.random.default_rng(225)
        inst, _ = random_instance(rng, "ball_radius", n=400)
        cfg = SolverConfig(backend="glp", rng_seed=31)
        a = minimize_max(inst, cfg)
        b = minimize_max(inst, cfg)
        assert a.t_star == b.t_star
        assert np.array_equal(a.x_star.coords, b.x_star.coords)
        assert a.active == b.active

    def test_max_iters_flag(self):
        rng = np.random.default_rng(227)
        inst, _ = random_instance(rng, "ball_radius", n=8)
        sol = minimize_max(inst, SolverConfig(max_iters=3, polish=False))
        assert not sol.converged

    def test_infeasible_barriers(self):
        u, v, w = np.eye(3)
        inside = orientation_barrier_term(u, v, w, Setting.sphere(2))
        ref_out = 0.9 * np.ones(3) / math.sqrt(3)
        outside = orientation_barrier_term(
            u, v, w, Setting.sphere(2), reference_viewpoint=ref_out
        )
        inst = Instance((inside.term, outside.term), 3)
        with pytest.raises(InfeasibleConstraint):
            minimize_max(inst)

    def test_barrier_constrains_solution(self):
        # one circle pulls the viewpoint toward (0.6, 0, z>0) side; a barrier
        # through three S^2 points holds it in the reference halfspace
        rng = np.random.default_rng(229)
        from mobius_opt.objectives import cap_radius_term

        caps = [
            cap_radius_term(InversiveVector.from_cap([0, 0, 1], 0.4)),
            cap_radius_term(InversiveVector.from_cap([0, 0, -1], 1.2)),
        ]
        free = minimize_max(make_instance(caps))
        barrier = orientation_barrier_term(
            [1, 0, 0], [0, 1, 0], [math.sqrt(0.5), 0, math.sqrt(0.5)],
            Setting.sphere(2),
        )
        inst = make_instance(caps + [barrier])
        sol = minimize_max(inst)
        assert barrier.term.evaluate(sol.x_star.coords) == -BARRIER
        assert sol.t_star >= free.t_star - 1e-12

    def test_monotone_in_added_terms(self):
        rng = np.random.default_rng(233)
        for _ in range(20):
            inst_b, terms = random_instance(rng, "ball_radius", n=12)
            inst_a = inst_b.subset(np.arange(6))
            t_a = minimize_max(inst_a).t_star
            t_b = minimize_max(inst_b).t_star
            assert t_a <= t_b + 1e-9

    def test_backend_agreement(self):
        rng = np.random.default_rng(239)
        for fam in ("ball_radius", "point_size", "ball_edge"):
            for _ in range(5):
                inst, _ = random_instance(rng, fam, n=18)
                a = minimize_max(inst, SolverConfig(backend="local"))
                b = minimize_max(inst, SolverConfig(backend="glp", rng_seed=7))
                assert abs(a.t_star - b.t_star) <= 1e-6

    def test_glp_on_edge_instance(self):
        # exercises batch slicing with the shared endpoint table
        rng = np.random.default_rng(240)
        inst, _ = random_instance(rng, "ball_edge", n=800)
        a = minimize_max(inst, SolverConfig(backend="glp", rng_seed=11))
        b = minimize_max(inst, SolverConfig(backend="local"))
        assert abs(a.t_star - b.t_star) <= 1e-6

    def test_glp_large_instance(self):
        rng = np.random.default_rng(241)
        inst, _ = random_instance(rng, "ball_radius", n=3000)
        a = minimize_max(inst, SolverConfig(backend="glp", rng_seed=3))
        b = minimize_max(inst, SolverConfig(backend="local"))
        assert abs(a.t_star - b.t_star) <= 1e-6


class TestEvaluateMax:
    def test_equals_max_of_terms(self):
        rng = np.random.default_rng(251)
        inst, terms = random_instance(rng, "klein_width", n=9)
        for _ in range(20):
            x = rng.uniform(-0.5, 0.5, 2)
            direct = max(t.term.evaluate(x) for t in terms)
            assert evaluate_max(inst, x) == pytest.approx(direct, abs=1e-14)

    def test_barrier_sentinel(self):
        u, v, w = np.eye(3)
        t = orientation_barrier_term(u, v, w, Setting.sphere(2))
        inst = Instance((t.term,), 3)
        far = 0.9 * np.ones(3) / math.sqrt(3)
        assert evaluate_max(inst, far) == BARRIER

    def test_matches_solution_t_star(self):
        rng = np.random.default_rng(257)
        inst, _ = random_instance(rng, "ball_edge", n=10)
        sol = minimize_max(inst)
        assert evaluate_max(inst, sol.x_star) == pytest.approx(sol.t_star, abs=1e-12)


class TestActiveTerms:
    def test_single(self):
        inst = Instance((distance_bowl([0.1, 0.1]),), 2)
        assert active_terms(inst, np.zeros(2), 1e-9) == [0]

    def test_symmetric_pair(self):
        terms = [
            ball_sphere_radius_term(InversiveVector.from_center_radius([0.5, 0], 0.2)),
            ball_sphere_radius_term(InversiveVector.from_center_radius([-0.5, 0], 0.2)),
        ]
        inst = make_instance(terms)
        assert active_terms(inst, np.zeros(2), 1e-9) == [0, 1]

    def test_active_set_bounded_by_glp_dimension(self):
        rng = np.random.default_rng(263)
        for _ in range(20):
            inst, _ = random_instance(rng, "ball_radius", n=15)
            sol = minimize_max(inst)
            assert 1 <= len(sol.active) <= 2 * inst.dimension + 3


class TestConfigValidation:
    def test_tolerances_positive(self):
        with pytest.raises(ValueError):
            SolverConfig(tol_x=0)
        with pytest.raises(ValueError):
            SolverConfig(tol_f=-1)
        with pytest.raises(ValueError):
            SolverConfig(backend="annealing")

    def test_instance_needs_terms(self):
        with pytest.raises(ValueError):
            Instance((), 2)
