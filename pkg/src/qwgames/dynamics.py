"""Structured one-step and T-step evolution of the two-walker system.

One step is coin -> shift -> interaction:

    U = P_I . [S_A (C(theta_A) x I) (x) S_B (C(theta_B) x I)]

applied without ever materializing the 4L^2 x 4L^2 matrix.  All operations
act on the (L, 2, L, 2) amplitude array (optionally with a leading batch
axis, used by the strategy-sweep code) so the per-step cost is O(L^2).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import interactions
from .hilbert import (
    Boundary,
    JointState,
    LatticeGeometry,
    SingleState,
    ValidationError,
    make_initial_state,
    make_single_state,
)
from .interactions import InteractionKind, InteractionSpec


class DomainError(ValueError):
    """Raised when a strategy angle leaves [0, pi]."""


@dataclass(frozen=True)
class StrategyProfile:
    """The two coin angles, each in [0, pi]."""

    theta_a: float
    theta_b: float

    def __post_init__(self):
        for name, th in (("theta_a", self.theta_a), ("theta_b", self.theta_b)):
            if not np.isfinite(th):
                raise DomainError(f"{name} must be finite, got {th!r}")
            if not 0.0 <= th <= np.pi:
                raise DomainError(f"{name} = {th!r} outside [0, pi]")


@dataclass(frozen=True)
class WalkConfig:
    """Everything needed to run one T-step evolution except the strategies."""

    geometry: LatticeGeometry
    steps: int
    coin_a: tuple = (1.0, 0.0)
    coin_b: tuple = (1.0, 0.0)
    interaction: InteractionSpec = field(default_factory=InteractionSpec)

    def __post_init__(self):
        if self.steps < 1:
            raise ValidationError(f"steps must be >= 1, got {self.steps}")
        if self.steps >= (self.geometry.size - 1) // 2:
            warnings.warn(
                f"boundary reachable: T = {self.steps} >= (L-1)/2 = "
                f"{(self.geometry.size - 1) // 2}; results depend on the "
                f"boundary rule ({self.geometry.boundary.value})",
                stacklevel=2,
            )


def coin_matrix(theta: float) -> np.ndarray:
    """R_y(theta) acting on (|R>, |L>), half-angle convention."""
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]])


def _coin_batch(amps: np.ndarray, theta_a: np.ndarray, theta_b: np.ndarray) -> np.ndarray:
    """Apply R_y(theta_A) on coin A and R_y(theta_B) on coin B.

    amps: (B, L, 2, L, 2); theta_a, theta_b: (B,).
    """
    ca, sa = np.cos(theta_a / 2.0), np.sin(theta_a / 2.0)
    cb, sb = np.cos(theta_b / 2.0), np.sin(theta_b / 2.0)
    ra = np.empty((len(ca), 2, 2))
    ra[:, 0, 0] = ca
    ra[:, 0, 1] = -sa
    ra[:, 1, 0] = sa
    ra[:, 1, 1] = ca
    rb = np.empty_like(ra)
    rb[:, 0, 0] = cb
    rb[:, 0, 1] = -sb
    rb[:, 1, 0] = sb
    rb[:, 1, 1] = cb
    out = np.einsum("bij,bxjyl->bxiyl", ra, amps)
    return np.einsum("bkl,bxiyl->bxiyk", rb, out)


# -- fast batched engine -----------------------------------------------------
#
# The sweep-critical path uses a (B, L, L, 4) layout with joint coin channel
# c = 2 s_A + s_B, so the two coin rotations collapse to one batched 4x4
# matmul and the shifts are slice moves on contiguous axes.


def _to_channels(amps: np.ndarray) -> np.ndarray:
    """(B, L, 2, L, 2) -> (B, L, L, 4)."""
    return np.ascontiguousarray(amps.transpose(0, 1, 3, 2, 4)).reshape(
        amps.shape[0], amps.shape[1], amps.shape[3], 4
    )

def _from_channels(amps: np.ndarray) -> np.ndarray:
    """(B, L, L, 4) -> (B, L, 2, L, 2)."""
    b, L = amps.shape[0], amps.shape[1]
    return np.ascontiguousarray(
        amps.reshape(b, L, L, 2, 2).transpose(0, 1, 3, 2, 4)
    )


def _joint_coin_matrices(theta_a: np.ndarray, theta_b: np.ndarray) -> np.ndarray:
    """kron(R_y(theta_A), R_y(theta_B)) per batch entry, shape (B, 4, 4)."""
    ca, sa = np.cos(theta_a / 2.0), np.sin(theta_a / 2.0)
    cb, sb = np.cos(theta_b / 2.0), np.sin(theta_b / 2.0)
    ra = np.stack([np.stack([ca, -sa], -1), np.stack([sa, ca], -1)], -2)
    rb = np.stack([np.stack([cb, -sb], -1), np.stack([sb, cb], -1)], -2)
    m = np.einsum("bij,bkl->bikjl", ra, rb).reshape(-1, 4, 4)
    return m.astype(complex)


def _coin_channels(amps: np.ndarray, coin_t: np.ndarray) -> np.ndarray:
    """amps: (B, L, L, 4); coin_t: (B, 4, 4) already transposed (M^T)."""
    b, L = amps.shape[0], amps.shape[1]
    return np.matmul(amps.reshape(b, L * L, 4), coin_t).reshape(b, L, L, 4)


def _shift_channels(amps: np.ndarray, boundary: Boundary) -> np.ndarray:
    """Conditional shift of both walkers in channel layout."""
    out = np.empty_like(amps)
    if boundary is Boundary.PERIODIC:
        for c in range(4):
            da = 1 if c < 2 else -1  # s_A = c // 2
            db = 1 if c % 2 == 0 else -1
            out[..., c] = np.roll(np.roll(amps[..., c], da, axis=1), db, axis=2)
        return out
    out[:] = 0.0
    # walker A along axis 1, coin flips at the edges instead of stepping out
    for sb in (0, 1):
        r, l = amps[..., sb], amps[..., 2 + sb]
        nr, nl = np.zeros_like(r), np.zeros_like(l)
        nr[:, 1:] = r[:, :-1]
        nl[:, :-1] = l[:, 1:]
        nl[:, -1] += r[:, -1]
        nr[:, 0] += l[:, 0]
        out[..., sb], out[..., 2 + sb] = nr, nl
    # walker B along axis 2
    final = np.zeros_like(out)
    for sa in (0, 1):
        r, l = out[..., 2 * sa], out[..., 2 * sa + 1]
        nr, nl = np.zeros_like(r), np.zeros_like(l)
        nr[:, :, 1:] = r[:, :, :-1]
        nl[:, :, :-1] = l[:, :, 1:]
        nl[:, :, -1] += r[:, :, -1]
        nr[:, :, 0] += l[:, :, 0]
        final[..., 2 * sa], final[..., 2 * sa + 1] = nr, nl
    return final


def _shift_axis(amps: np.ndarray, pos_axis: int, coin_axis: int, boundary: Boundary) -> np.ndarray:
    """Conditional shift of one walker: |R> moves +1, |L> moves -1."""
    right = np.take(amps, 0, axis=coin_axis)
    left = np.take(amps, 1, axis=coin_axis)
    # after removing the coin axis, the position axis index may drop by one
    p = pos_axis if pos_axis < coin_axis else pos_axis - 1
    if boundary is Boundary.PERIODIC:
        new_right = np.roll(right, 1, axis=p)
        new_left = np.roll(left, -1, axis=p)
    else:
        new_right = np.zeros_like(right)
        new_left = np.zeros_like(left)
        idx_all = [slice(None)] * right.ndim

        def at(sel):
            idx = list(idx_all)
            idx[p] = sel
            return tuple(idx)

        new_right[at(slice(1, None))] = right[at(slice(None, -1))]
        new_left[at(slice(None, -1))] = left[at(slice(1, None))]
        # edge sites reflect: the coin flips instead of stepping out
        new_left[at(-1)] += right[at(-1)]
        new_right[at(0)] += left[at(0)]
    return np.stack([new_right, new_left], axis=coin_axis)


def _shift_batch(amps: np.ndarray, geometry: LatticeGeometry) -> np.ndarray:
    out = _shift_axis(amps, pos_axis=1, coin_axis=2, boundary=geometry.boundary)
    return _shift_axis(out, pos_axis=3, coin_axis=4, boundary=geometry.boundary)


def _phase_factors(
    spec: InteractionSpec, geometry: LatticeGeometry, theta_a: np.ndarray, theta_b: np.ndarray
) -> np.ndarray | None:
    """exp(i * coupling_b * table) with shape (B, L, 2, L, 2), or None for no-op."""
    if spec.kind is InteractionKind.NONE or spec.strength == 0.0:
        return None
    coup = np.asarray(interactions.coupling(spec, theta_a, theta_b), dtype=float)
    table = interactions.phase_table(spec, geometry)
    return np.exp(1j * coup[:, None, None, None, None] * table[None])


def _noise_draws(spec: InteractionSpec, steps: int, rng) -> np.ndarray:
    """One phase jitter eta_t per time step, uniform on [-sigma, sigma].

    The jitter multiplies the interaction's spatial table (for the noisy
    collision, the x_A = x_B indicator), not the whole state: a spatially
    uniform phase would drop out of every observable.
    """
    if spec.kind is InteractionKind.NOISY_COLLISION and spec.noise_sigma > 0:
        if rng is None:
            raise ValidationError("noisy interaction requires a seeded rng")
        return rng.uniform(-spec.noise_sigma, spec.noise_sigma, size=steps)
    return np.zeros(steps)


def _noise_factor(
    spec: InteractionSpec, geometry: LatticeGeometry, eta_t: float
) -> np.ndarray:
    """exp(i * eta_t * table) with shape (L, 2, L, 2)."""
    return np.exp(1j * eta_t * interactions.phase_table(spec, geometry))


@lru_cache(maxsize=None)
def _shift_permutation(L: int, boundary: Boundary) -> np.ndarray:
    """Flat gather indices realizing _shift_channels on (L, L, 4) arrays.

    The shift is a permutation of basis states, so one precomputed take()
    replaces the slice shuffling on the sweep-critical path.
    """
    src = np.arange(L * L * 4, dtype=float).reshape(1, L, L, 4)
    dst = _shift_channels(src.astype(complex), boundary)
    return dst.real.astype(np.intp).reshape(-1)


def evolve_batch(
    config: WalkConfig, thetas: np.ndarray, seed: int | None = 0
) -> np.ndarray:
    """Evolve one initial state under B strategy profiles simultaneously.

    thetas: (B, 2) array of (theta_A, theta_B) pairs; returns the final
    amplitudes with shape (B, L, 2, L, 2).  The per-step noise draws are
    shared across the batch (common random numbers), so a batched sweep is
    bit-identical to per-profile evolve calls with the same seed.
    """
    thetas = np.asarray(thetas, dtype=float)
    if thetas.ndim != 2 or thetas.shape[1] != 2:
        raise ValidationError(f"thetas must have shape (B, 2), got {thetas.shape}")
    if not np.all(np.isfinite(thetas)) or thetas.min() < 0 or thetas.max() > np.pi:
        raise DomainError("all strategy angles must lie in [0, pi]")

    init = make_initial_state(config.geometry, config.coin_a, config.coin_b)
    amps = _to_channels(init.amplitudes[None])
    amps = np.broadcast_to(amps, (len(thetas),) + amps.shape[1:]).copy()

    factors = _phase_factors(config.interaction, config.geometry, thetas[:, 0], thetas[:, 1])
    if factors is not None:
        L = config.geometry.size
        factors = factors.transpose(0, 1, 3, 2, 4).reshape(len(thetas), L, L, 4)
    coin_t = _joint_coin_matrices(thetas[:, 0], thetas[:, 1]).transpose(0, 2, 1).copy()
    rng = np.random.default_rng(seed) if seed is not None else None
    etas = _noise_draws(config.interaction, config.steps, rng)

    L = config.geometry.size
    perm = _shift_permutation(L, config.geometry.boundary)
    for t in range(config.steps):
        amps = _coin_channels(amps, coin_t)
        amps = amps.reshape(len(thetas), -1).take(perm, axis=1).reshape(-1, L, L, 4)
        if factors is not None:
            amps *= factors
        if etas[t] != 0.0:
            noise = _noise_factor(config.interaction, config.geometry, etas[t])
            amps *= noise.transpose(0, 2, 1, 3).reshape(L, L, 4)
    return _from_channels(amps)


# -- single-profile public operations ---------------------------------------


def apply_coin(state: JointState, profile: StrategyProfile) -> JointState:
    """Rotate each walker's coin by its strategy angle."""
    amps = _coin_batch(
        state.amplitudes[None],
        np.array([profile.theta_a]),
        np.array([profile.theta_b]),
    )[0]
    return JointState(amps, state.geometry)


def apply_shift(state: JointState) -> JointState:
    """Conditionally shift both walkers, honoring the boundary rule."""
    amps = _shift_batch(state.amplitudes[None], state.geometry)[0]
    return JointState(amps, state.geometry)


def apply_interaction(
    state: JointState,
    profile: StrategyProfile,
    spec: InteractionSpec,
    rng=None,
) -> JointState:
    """Multiply each amplitude by exp(i * I(...)); moduli are untouched."""
    factors = _phase_factors(
        spec, state.geometry, np.array([profile.theta_a]), np.array([profile.theta_b])
    )
    amps = state.amplitudes
    if factors is not None:
        amps = amps * factors[0]
    eta = _noise_draws(spec, 1, rng)[0]
    if eta != 0.0:
        amps = amps * _noise_factor(spec, state.geometry, eta)
    return JointState(np.ascontiguousarray(amps), state.geometry)


def step(
    state: JointState, profile: StrategyProfile, config: WalkConfig, rng=None
) -> JointState:
    """One full evolution step: coin, then shift, then interaction phase."""
    out = apply_coin(state, profile)
    out = apply_shift(out)
    return apply_interaction(out, profile, config.interaction, rng)


def evolve(config: WalkConfig, profile: StrategyProfile, seed: int | None = 0) -> JointState:
    """T-step evolution from the standard initial state; deterministic in seed."""
    amps = evolve_batch(config, np.array([[profile.theta_a, profile.theta_b]]), seed)[0]
    return JointState(amps, config.geometry)


def evolve_trajectory(
    config: WalkConfig, profile: StrategyProfile, seed: int | None = 0
) -> list[JointState]:
    """States after each of the T steps (t = 1 ... T), same conventions as evolve."""
    state = make_initial_state(config.geometry, config.coin_a, config.coin_b)
    rng = np.random.default_rng(seed) if seed is not None else None
    etas = _noise_draws(config.interaction, config.steps, rng)
    out = []
    for t in range(config.steps):
        state = apply_coin(state, profile)
        state = apply_shift(state)
        factors = _phase_factors(
            config.interaction,
            config.geometry,
            np.array([profile.theta_a]),
            np.array([profile.theta_b]),
        )
        amps = state.amplitudes
        if factors is not None:
            amps = amps * factors[0]
        if etas[t] != 0.0:
            amps = amps * _noise_factor(config.interaction, config.geometry, etas[t])
        state = JointState(np.ascontiguousarray(amps), config.geometry)
        out.append(state)
    return out


def evolve_single(
    geometry: LatticeGeometry, steps: int, theta: float, coin
) -> SingleState:
    """Non-interacting single-walker walk with the same coin/shift conventions."""
    if not 0.0 <= theta <= np.pi:
        raise DomainError(f"theta = {theta!r} outside [0, pi]")
    state = make_single_state(geometry, coin)
    amps = state.amplitudes.copy()
    r = coin_matrix(theta)
    for _ in range(steps):
        amps = amps @ r.T
        amps = _shift_axis(amps[None], pos_axis=1, coin_axis=2, boundary=geometry.boundary)[0]
    return SingleState(amps, geometry)
