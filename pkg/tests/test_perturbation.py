import numpy as np
import pytest

from qwgames.dynamics import StrategyProfile, WalkConfig
from qwgames.equilibrium import StrategyGrid
from qwgames.games import GameKind, GameSpec
from qwgames.hilbert import LatticeGeometry, ValidationError
from qwgames.interactions import InteractionKind, InteractionSpec
from qwgames.perturbation import (
    collision_weight,
    drift,
    drift_sweep,
    first_order_slope,
    nonseparability_certificate,
    separability_residual,
)

RACE = GameSpec(GameKind.RACE)


def test_drift_of_frozen_coin_is_ballistic():
    # theta = 0 keeps the coin on |R>, so the walker moves one site per step
    geom = LatticeGeometry(13)
    assert drift(geom, 5, 0.0, (1, 0)) == pytest.approx(5.0, abs=1e-12)
    assert drift(geom, 5, 0.0, (0, 1)) == pytest.approx(-5.0, abs=1e-12)


def test_drift_sweep_is_continuous():
    geom = LatticeGeometry(31)
    thetas = np.linspace(0, np.pi, 41)
    f = drift_sweep(geom, 8, thetas, (1, 0))
    assert f.shape == (41,)
    assert np.max(np.abs(np.diff(f))) < 1.0


def test_separability_residual_vanishes_without_interaction():
    config = WalkConfig(LatticeGeometry(21), 6)
    assert separability_residual(config, RACE, StrategyGrid(5)) < 1e-10


def test_separability_residual_small_at_tiny_coupling():
    spec = InteractionSpec(InteractionKind.COLLISION_PHASE, 1e-6)
    config = WalkConfig(LatticeGeometry(21), 6, interaction=spec)
    assert separability_residual(config, RACE, StrategyGrid(5)) < 1e-4


def test_separability_residual_large_at_full_coupling():
    spec = InteractionSpec(InteractionKind.COLLISION_PHASE, np.pi)
    config = WalkConfig(LatticeGeometry(31), 10, interaction=spec)
    assert separability_residual(config, RACE, StrategyGrid(5)) > 0.1


def test_first_order_slope_schedule_validation():
    config = WalkConfig(LatticeGeometry(21), 6, interaction=InteractionSpec(
        InteractionKind.COLLISION_PHASE, np.pi))
    profile = StrategyProfile(1.0, 2.0)
    with pytest.raises(ValidationError):
        first_order_slope(config, RACE, profile, lambda_schedule=(0.1,))
    with pytest.raises(ValidationError):
        first_order_slope(config, RACE, profile, lambda_schedule=(0.05, 0.1))
    with pytest.raises(ValidationError):
        first_order_slope(config, RACE, profile, lambda_schedule=(0.1, 0.0))


def test_first_order_slope_converges_linearly():
    spec = InteractionSpec(InteractionKind.COLLISION_PHASE, 1.0)
    config = WalkConfig(LatticeGeometry(31), 10, interaction=spec)
    est = first_order_slope(config, RACE, StrategyProfile(1.0, 2.0))
    assert est.in_perturbative_regime
    assert np.all((est.ratios > 0.35) & (est.ratios < 0.65))
    # Richardson limit sits beyond the smallest-lambda slope
    assert est.differences[-1] < est.differences[0]


def test_certificate_baseline_is_negligible():
    spec = InteractionSpec(InteractionKind.COLLISION_PHASE, np.pi)
    config = WalkConfig(LatticeGeometry(21), 6, interaction=spec)
    cert = nonseparability_certificate(config, RACE, lambda_schedule=(0.1, 0.05))
    assert abs(cert.baseline) < 1e-8
    assert cert.base_point == (np.pi / 3, 2 * np.pi / 3)


def test_collision_weight_bounds_and_extremes():
    geom = LatticeGeometry(13)
    spec = InteractionSpec(InteractionKind.COLLISION_PHASE, np.pi)
    # frozen coins moving in lockstep coincide after every step
    locked = WalkConfig(geom, 5, (1, 0), (1, 0), spec)
    assert collision_weight(locked, StrategyProfile(0.0, 0.0)) == pytest.approx(5.0)
    # frozen coins moving apart never coincide (T < L/2)
    apart = WalkConfig(geom, 5, (1, 0), (0, 1), spec)
    assert collision_weight(apart, StrategyProfile(0.0, 0.0)) == pytest.approx(0.0, abs=1e-12)
    # generic angles land strictly inside [0, T]
    mid = collision_weight(locked, StrategyProfile(1.0, 2.0))
    assert 0.0 < mid < 5.0


def test_collision_weight_ignores_interaction_strength():
    geom = LatticeGeometry(13)
    profile = StrategyProfile(1.2, 0.7)
    w_on = collision_weight(
        WalkConfig(geom, 4, interaction=InteractionSpec(InteractionKind.COLLISION_PHASE, np.pi)),
        profile,
    )
    w_off = collision_weight(WalkConfig(geom, 4), profile)
    assert w_on == pytest.approx(w_off, abs=1e-12)
