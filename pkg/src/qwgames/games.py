"""Payoff observables over the final joint position distribution.

All payoffs are classical functions of the measured positions: the quantum
side of the model ends at measure_joint, and everything here works on the
(L, L) probability matrix.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .hilbert import JointDistribution, LatticeGeometry, marginals


class GameKind(Enum):
    RACE = "race"
    RENDEZVOUS = "rendezvous"
    TUG_OF_WAR = "tug_of_war"
    CUSTOM_TABLE = "custom_table"


class ShapeError(ValueError):
    """Raised when custom payoff tables do not match the lattice."""


@dataclass(frozen=True)
class GameSpec:
    kind: GameKind = GameKind.RACE
    table_a: np.ndarray | None = None
    table_b: np.ndarray | None = None

    def __post_init__(self):
        if self.kind is GameKind.CUSTOM_TABLE:
            if self.table_a is None or self.table_b is None:
                raise ShapeError("custom_table requires both payoff tables")
        elif self.table_a is not None or self.table_b is not None:
            raise ShapeError(f"{self.kind.value} takes no payoff tables")

    @property
    def zero_sum(self) -> bool:
        return self.kind in (GameKind.RACE, GameKind.TUG_OF_WAR)


@dataclass(frozen=True)
class PayoffPoint:
    u_a: float
    u_b: float
    aux: dict = field(default_factory=dict)


def payoff(dist: JointDistribution, game: GameSpec) -> PayoffPoint:
    """Expected utilities of both players plus named transport diagnostics."""
    p = dist.probabilities
    x = dist.geometry.positions.astype(float)
    xa = x[:, None]
    xb = x[None, :]

    p_a, p_b = marginals(dist)
    mean_a = float(p_a @ x)
    mean_b = float(p_b @ x)
    sep = float(np.sum(p * np.abs(xa - xb)))
    meet = float(np.trace(p))
    com = 0.5 * (mean_a + mean_b)
    aux = {
        "mean_x_A": mean_a,
        "mean_x_B": mean_b,
        "mean_separation": sep,
        "meeting_probability": meet,
        "center_of_mass": com,
    }

    if game.kind is GameKind.RACE:
        u_a = float(np.sum(p * (xa - xb)))
        return PayoffPoint(u_a, -u_a, aux)
    if game.kind is GameKind.RENDEZVOUS:
        return PayoffPoint(-sep, -sep, aux)
    if game.kind is GameKind.TUG_OF_WAR:
        u_a = float(np.sum(p * 0.5 * (xa + xb)))
        return PayoffPoint(u_a, -u_a, aux)
    if game.kind is GameKind.CUSTOM_TABLE:
        L = dist.geometry.size
        for name, table in (("A", game.table_a), ("B", game.table_b)):
            if np.asarray(table).shape != (L, L):
                raise ShapeError(
                    f"payoff table for player {name} has shape "
                    f"{np.asarray(table).shape}, lattice needs {(L, L)}"
                )
        u_a = float(np.sum(p * game.table_a))
        u_b = float(np.sum(p * game.table_b))
        return PayoffPoint(u_a, u_b, aux)
    raise ValueError(f"unknown game kind {game.kind!r}")


def table_from_csv(path, geometry: LatticeGeometry) -> np.ndarray:
    """Load an L x L payoff table from x_A,x_B,value rows (site labels)."""
    table = np.zeros((geometry.size, geometry.size))
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            i = geometry.offset(int(row["x_A"]))
            j = geometry.offset(int(row["x_B"]))
            table[i, j] = float(row["value"])
    return table
