"""Strategy-space machinery exercised on analytic games where best responses,
stationary points, Jacobians, and learning behavior are known in closed form.
"""

import numpy as np
import pytest

from qwgames.equilibrium import (
    FunctionEvaluator,
    StrategyGrid,
    WalkEvaluator,
    best_responses,
    find_stationary,
    gradients,
    jacobian_at,
    learn,
    surface_from_evaluator,
    vector_field,
)
from qwgames.dynamics import WalkConfig
from qwgames.games import GameKind, GameSpec
from qwgames.hilbert import LatticeGeometry, ValidationError
from qwgames.interactions import InteractionKind, InteractionSpec

A_STAR, B_STAR = 1.5, 1.2


def quad_game(ta, tb):
    """Coupled concave quadratic with interior fixed point (1.5, 1.2) and
    gradient-dynamics Jacobian [[-2, 1], [1, -2]]."""
    da, db = ta - A_STAR, tb - B_STAR
    return -da * da + da * db, -db * db + da * db


QUAD = FunctionEvaluator(quad_game)


def test_grid_values_and_spacing():
    grid = StrategyGrid(5)
    np.testing.assert_allclose(grid.values, np.linspace(0, np.pi, 5))
    assert grid.spacing == pytest.approx(np.pi / 4)
    with pytest.raises(ValidationError):
        StrategyGrid(1)


def test_best_responses_ignore_payoff_scaling():
    grid = StrategyGrid(21)
    surface = surface_from_evaluator(QUAD, grid)
    scaled = surface_from_evaluator(
        FunctionEvaluator(lambda a, b: tuple(5.0 * u for u in quad_game(a, b))), grid
    )
    for got, want in zip(best_responses(scaled)[0], best_responses(surface)[0]):
        np.testing.assert_array_equal(got, want)


def test_gradients_match_analytic():
    pts = [[1.0, 2.0], [0.0, np.pi], [2.5, 0.3]]  # includes boundary stencils
    g = gradients(QUAD, pts, h=1e-4)
    for (ta, tb), (ga, gb) in zip(pts, g):
        assert ga == pytest.approx(-2 * (ta - A_STAR) + (tb - B_STAR), abs=1e-6)
        assert gb == pytest.approx(-2 * (tb - B_STAR) + (ta - A_STAR), abs=1e-6)


def test_vector_field_shapes_and_values():
    grid = StrategyGrid(5)
    ga, gb = vector_field(QUAD, grid, h=1e-4)
    assert ga.shape == gb.shape == (5, 5)
    ta = grid.values[2]
    tb = grid.values[1]
    assert ga[2, 1] == pytest.approx(-2 * (ta - A_STAR) + (tb - B_STAR), abs=1e-6)


def test_find_stationary_recovers_interior_fixed_point():
    surface = surface_from_evaluator(QUAD, StrategyGrid(61))
    points = find_stationary(surface, QUAD)
    interior = [p for p in points if p.interior]
    assert interior
    best = min(
        interior, key=lambda p: np.hypot(p.theta_a - A_STAR, p.theta_b - B_STAR)
    )
    assert best.status == "refined"
    assert best.theta_a == pytest.approx(A_STAR, abs=2e-3)
    assert best.theta_b == pytest.approx(B_STAR, abs=2e-3)
    assert max(np.abs(best.grad_residual)) < 1e-3


def test_find_stationary_flags_boundary_points():
    # both payoffs increase monotonically, pushing the argmax to theta = pi
    ev = FunctionEvaluator(lambda a, b: (a, b))
    surface = surface_from_evaluator(ev, StrategyGrid(21))
    points = find_stationary(surface, ev)
    assert points
    assert all(p.status == "boundary" for p in points)
    assert not points[0].interior


def test_jacobian_matches_analytic():
    rep = jacobian_at((A_STAR, B_STAR), QUAD, h=1e-2)
    np.testing.assert_allclose(rep.matrix, [[-2, 1], [1, -2]], atol=1e-4)
    assert rep.verdict == "stable"
    assert rep.stable
    np.testing.assert_allclose(sorted(rep.eigenvalues.real), [-3, -1], atol=1e-4)
    assert rep.spectral_radius == pytest.approx(0.95, abs=1e-3)
    assert not rep.boundary_caveat


def test_jacobian_near_boundary_carries_caveat():
    rep = jacobian_at((0.0, 1.0), QUAD, h=1e-2)
    assert rep.boundary_caveat


def test_jacobian_unstable_and_marginal_verdicts():
    unstable = jacobian_at((1.0, 1.0), FunctionEvaluator(lambda a, b: (a * a, b * b)))
    assert unstable.verdict == "unstable"
    flat = jacobian_at((1.0, 1.0), FunctionEvaluator(lambda a, b: (0.0, 0.0)))
    assert flat.verdict == "marginal"


def test_uncoupled_game_has_zero_cross_terms():
    ev = FunctionEvaluator(lambda a, b: (-((a - 1) ** 2), -((b - 2) ** 2)))
    rep = jacobian_at((1.0, 2.0), ev, h=1e-2)
    assert rep.matrix[0, 1] == pytest.approx(0.0, abs=1e-8)
    assert rep.matrix[1, 0] == pytest.approx(0.0, abs=1e-8)


def test_learn_converges_to_stable_fixed_point():
    for ang in np.linspace(0, 2 * np.pi, 8, endpoint=False):
        start = (A_STAR + 0.2 * np.cos(ang), B_STAR + 0.2 * np.sin(ang))
        res = learn(QUAD, start, eta=0.05, max_iters=500)
        assert res.converged, res.message
        ta, tb = res.trajectory[-1]
        assert ta == pytest.approx(A_STAR, abs=5e-3)
        assert tb == pytest.approx(B_STAR, abs=5e-3)


def test_learn_clamps_at_domain_edge():
    ev = FunctionEvaluator(lambda a, b: (a, b))  # constant unit gradient
    res = learn(ev, (3.0, 3.0), eta=0.1, max_iters=50)
    assert not res.converged
    assert res.clamp_events > 0
    np.testing.assert_allclose(res.trajectory[-1], [np.pi, np.pi], atol=1e-12)


def test_learn_detects_growing_oscillation():
    # eta * |J| > 2 makes the gradient iteration overshoot and blow up;
    # the clamp turns that into a persistent full-swing oscillation
    ev = FunctionEvaluator(lambda a, b: (-30 * (a - 1.5) ** 2, -30 * (b - 1.5) ** 2))
    res = learn(ev, (1.4, 1.4), eta=0.05, max_iters=500)
    assert not res.converged


def test_walk_evaluator_matches_surface_sweep():
    config = WalkConfig(
        LatticeGeometry(11),
        4,
        interaction=InteractionSpec(InteractionKind.COLLISION_PHASE, np.pi),
    )
    game = GameSpec(GameKind.RACE)
    ev = WalkEvaluator(config, game, seed=0)
    grid = StrategyGrid(5)
    surface = surface_from_evaluator(ev, grid)
    ua, ub = ev.evaluate(grid.values[1], grid.values[3])
    assert surface.u_a[1, 3] == pytest.approx(ua, abs=1e-12)
    assert surface.u_b[1, 3] == pytest.approx(ub, abs=1e-12)


def test_walk_evaluator_ensemble_averages_noise():
    spec = InteractionSpec(InteractionKind.NOISY_COLLISION, 1.0, noise_sigma=0.5)
    config = WalkConfig(LatticeGeometry(11), 4, interaction=spec)
    game = GameSpec(GameKind.RACE)
    one = WalkEvaluator(config, game, seed=0, ensemble=1).evaluate(1.0, 2.0)
    avg = WalkEvaluator(config, game, seed=0, ensemble=4).evaluate(1.0, 2.0)
    manual = np.mean(
        [WalkEvaluator(config, game, seed=s).evaluate(1.0, 2.0) for s in range(4)],
        axis=0,
    )
    assert avg != one
    np.testing.assert_allclose(avg, manual, atol=1e-12)
    with pytest.raises(ValidationError):
        WalkEvaluator(config, game, ensemble=0)
