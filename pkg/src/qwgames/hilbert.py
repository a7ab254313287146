"""Joint Hilbert space for two coined walkers on a 1D lattice.

Index layout (used everywhere, including the dense test oracles): the joint
amplitude array has shape (L, 2, L, 2) ordered as (x_A, s_A, x_B, s_B), with
coin index 0 = |R> and 1 = |L>.  Flattening row-major gives the basis index

    k = ((off(x_A) * 2 + s_A) * L + off(x_B)) * 2 + s_B

where off(x) = x + (L - 1) / 2 maps the symmetric site label
x in {-(L-1)/2, ..., +(L-1)/2} to an array offset in [0, L).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

RIGHT = 0
LEFT = 1

NORM_TOL = 1e-10


class Boundary(Enum):
    PERIODIC = "periodic"
    REFLECTING = "reflecting"


class ValidationError(ValueError):
    """Raised when a state, geometry, or coin vector violates its contract."""


@dataclass(frozen=True)
class LatticeGeometry:
    """1D lattice with an odd number of sites labeled symmetrically around 0."""

    size: int
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        if self.size < 3 or self.size % 2 == 0:
            raise ValidationError(
                f"lattice size must be odd and >= 3, got {self.size}"
            )
        if not isinstance(self.boundary, Boundary):
            raise ValidationError(f"unknown boundary rule: {self.boundary!r}")

    @property
    def half(self) -> int:
        return (self.size - 1) // 2

    @property
    def positions(self) -> np.ndarray:
        """Site labels -(L-1)/2 ... +(L-1)/2, in array-offset order."""
        return np.arange(self.size) - self.half

    def offset(self, x: int) -> int:
        """Array offset of site label x."""
        if not -self.half <= x <= self.half:
            raise ValidationError(f"site {x} outside lattice of size {self.size}")
        return int(x) + self.half

    def site(self, offset: int) -> int:
        return int(offset) - self.half


def encode_index(geometry: LatticeGeometry, x_a: int, s_a: int, x_b: int, s_b: int) -> int:
    """Flat basis index of (x_A, s_A, x_B, s_B) in the documented layout."""
    L = geometry.size
    return ((geometry.offset(x_a) * 2 + s_a) * L + geometry.offset(x_b)) * 2 + s_b


def decode_index(geometry: LatticeGeometry, k: int) -> tuple[int, int, int, int]:
    """Inverse of encode_index."""
    L = geometry.size
    if not 0 <= k < 4 * L * L:
        raise ValidationError(f"basis index {k} outside [0, {4 * L * L})")
    k, s_b = divmod(k, 2)
    k, off_b = divmod(k, L)
    off_a, s_a = divmod(k, 2)
    return geometry.site(off_a), s_a, geometry.site(off_b), s_b


def _check_norm(amplitudes: np.ndarray, what: str):
    norm = np.linalg.norm(amplitudes)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValidationError(f"{what} not normalized: ||psi|| = {norm!r}")


@dataclass(frozen=True)
class SingleState:
    """One walker's wavefunction, shape (L, 2) over (x, s)."""

    amplitudes: np.ndarray
    geometry: LatticeGeometry

    def __post_init__(self):
        expected = (self.geometry.size, 2)
        if self.amplitudes.shape != expected:
            raise ValidationError(
                f"single-walker amplitudes must have shape {expected}, "
                f"got {self.amplitudes.shape}"
            )
        _check_norm(self.amplitudes, "single-walker state")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def distribution(self) -> np.ndarray:
        """Position distribution p(x), coin traced out."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)


@dataclass(frozen=True)
class JointState:
    """Two-walker wavefunction, shape (L, 2, L, 2) over (x_A, s_A, x_B, s_B)."""

    amplitudes: np.ndarray
    geometry: LatticeGeometry

    def __post_init__(self):
        L = self.geometry.size
        if self.amplitudes.shape != (L, 2, L, 2):
            raise ValidationError(
                f"joint amplitudes must have shape {(L, 2, L, 2)}, "
                f"got {self.amplitudes.shape}"
            )
        _check_norm(self.amplitudes, "joint state")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def flat(self) -> np.ndarray:
        """Row-major flattened copy, index layout per the module docstring."""
        return self.amplitudes.reshape(-1).copy()


@dataclass(frozen=True)
class JointDistribution:
    """Joint position distribution P(x_A, x_B), shape (L, L)."""

    probabilities: np.ndarray
    geometry: LatticeGeometry

    def __post_init__(self):
        L = self.geometry.size
        if self.probabilities.shape != (L, L):
            raise ValidationError(
                f"distribution must have shape {(L, L)}, got {self.probabilities.shape}"
            )
        if np.any(self.probabilities < -1e-14):
            raise ValidationError("distribution has negative entries")
        total = float(self.probabilities.sum())
        if abs(total - 1.0) > NORM_TOL:
            raise ValidationError(f"distribution sums to {total!r}, not 1")


def _coin_vector(coin, player: str) -> np.ndarray:
    v = np.asarray(coin, dtype=complex)
    if v.shape != (2,):
        raise ValidationError(f"coin state for player {player} must be a 2-vector")
    if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
        raise ValidationError(
            f"coin state for player {player} is not normalized "
            f"(||c|| = {np.linalg.norm(v)!r})"
        )
    return v


def make_initial_state(geometry: LatticeGeometry, coin_a, coin_b) -> JointState:
    """Both walkers at x = 0 with coin states coin_a (x) coin_b."""
    ca = _coin_vector(coin_a, "A")
    cb = _coin_vector(coin_b, "B")
    L = geometry.size
    amps = np.zeros((L, 2, L, 2), dtype=complex)
    o = geometry.offset(0)
    amps[o, :, o, :] = np.outer(ca, cb)
    return JointState(amps, geometry)


def make_single_state(geometry: LatticeGeometry, coin, x: int = 0) -> SingleState:
    c = _coin_vector(coin, "single")
    amps = np.zeros((geometry.size, 2), dtype=complex)
    amps[geometry.offset(x), :] = c
    return SingleState(amps, geometry)


def measure_joint(state: JointState) -> JointDistribution:
    """Born-rule position distribution, both coins traced out."""
    p = np.sum(np.abs(state.amplitudes) ** 2, axis=(1, 3))
    return JointDistribution(p, state.geometry)


def marginals(dist: JointDistribution) -> tuple[np.ndarray, np.ndarray]:
    """Per-walker position distributions (p_A, p_B)."""
    return dist.probabilities.sum(axis=1), dist.probabilities.sum(axis=0)


def distribution_to_csv(dist: JointDistribution, path):
    """Write P(x_A, x_B) as rows x_A,x_B,p (site labels, not offsets)."""
    xs = dist.geometry.positions
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x_A", "x_B", "p"])
        for i, xa in enumerate(xs):
            for j, xb in enumerate(xs):
                w.writerow([xa, xb, f"{dist.probabilities[i, j]:.17g}"])


def distribution_from_csv(path, geometry: LatticeGeometry) -> JointDistribution:
    p = np.zeros((geometry.size, geometry.size))
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            i = geometry.offset(int(row["x_A"]))
            j = geometry.offset(int(row["x_B"]))
            p[i, j] = float(row["p"])
    return JointDistribution(p, geometry)


def distribution_to_json(dist: JointDistribution) -> str:
    payload = {
        "geometry": {
            "size": dist.geometry.size,
            "boundary": dist.geometry.boundary.value,
            "positions": dist.geometry.positions.tolist(),
        },
        "probabilities": dist.probabilities.tolist(),
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def distribution_from_json(text: str) -> JointDistribution:
    payload = json.loads(text)
    geom = LatticeGeometry(
        payload["geometry"]["size"], Boundary(payload["geometry"]["boundary"])
    )
    return JointDistribution(np.asarray(payload["probabilities"], dtype=float), geom)
