"""Interacting two-walker quantum walk games.

Two distinguishable coined walkers evolve on a 1D lattice; the players'
strategies are their coin rotation angles, an interaction phase operator
couples them, and payoffs are expectations of transport observables.  The
package simulates the dynamics, computes payoff landscapes, and locates and
classifies equilibria.
"""

from .dynamics import StrategyProfile, WalkConfig, evolve, evolve_single
from .equilibrium import (
    FunctionEvaluator,
    StrategyGrid,
    WalkEvaluator,
    best_responses,
    find_stationary,
    jacobian_at,
    learn,
    surface_from_evaluator,
    sweep_surface,
    vector_field,
)
from .games import GameKind, GameSpec, payoff
from .hilbert import (
    Boundary,
    JointDistribution,
    JointState,
    LatticeGeometry,
    SingleState,
    make_initial_state,
    marginals,
    measure_joint,
)
from .interactions import InteractionKind, InteractionSpec, race_default

__all__ = [
    "Boundary",
    "FunctionEvaluator",
    "GameKind",
    "GameSpec",
    "InteractionKind",
    "InteractionSpec",
    "JointDistribution",
    "JointState",
    "LatticeGeometry",
    "SingleState",
    "StrategyGrid",
    "StrategyProfile",
    "WalkConfig",
    "WalkEvaluator",
    "best_responses",
    "evolve",
    "evolve_single",
    "find_stationary",
    "jacobian_at",
    "learn",
    "make_initial_state",
    "marginals",
    "measure_joint",
    "payoff",
    "race_default",
    "surface_from_evaluator",
    "sweep_surface",
    "vector_field",
]
