"""
Potential pitch control field.

For every target location the attacking and defending control probabilities
are obtained by integrating

    dPPCF_j/dT = (1 - sum_k PPCF_k) * f_j(T) * lambda_j

with forward Euler, where f_j is the logistic probability that player j has
reached the target by time T. All cells are integrated together; each cell
stops on its own once its total control passes `ControlParams.converged`
(or at T_max).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import InvalidArgument
from .geometry import ATTACKING, DEFENDING, GridSpec, PlayerState, Snapshot


@dataclass(frozen=True)
class MotionParams:
    v_max: float = 5.0
    accel: float = 7.0

    def __post_init__(self):
        if not (self.v_max > 0 and self.accel > 0):
            raise InvalidArgument("v_max and accel must be positive")


@dataclass(frozen=True)
class ControlParams:
    lam: float = 4.3
    kappa: float = 1.0
    s_uncertainty: float = 0.45
    dT: float = 0.04
    T_max: float = 10.0
    veto: float = 3.0  # multiples of ln(10) in the early-exit threshold
    converged: float = 0.9999

    def __post_init__(self):
        if not self.lam > 0:
            raise InvalidArgument(f"lambda must be positive, got {self.lam}")
        if not self.kappa > 0:
            raise InvalidArgument(f"kappa must be positive, got {self.kappa}")
        if not self.s_uncertainty > 0:
            raise InvalidArgument("s_uncertainty must be positive")
        if not 0 < self.dT < self.T_max:
            raise InvalidArgument(f"need 0 < dT < T_max, got dT={self.dT}, T_max={self.T_max}")
        if not 0 < self.converged <= 1:
            raise InvalidArgument("converged must lie in (0, 1]")

    @property
    def arrival_scale(self) -> float:
        return math.sqrt(3.0) * self.s_uncertainty / math.pi

    def time_to_control(self, team: str) -> float:
        return self.veto * math.log(10.0) * (self.arrival_scale + 1.0 / control_rate(team, self))


@dataclass(frozen=True)
class PitchControlField:
    grid: GridSpec
    attack: np.ndarray
    defend: np.ndarray


def control_rate(team: str, cp: ControlParams) -> float:
    if cp.lam <= 0 or cp.kappa <= 0:
        raise InvalidArgument("lambda and kappa must be positive")
    if team == ATTACKING:
        return cp.lam
    if team == DEFENDING:
        return cp.kappa * cp.lam
    raise InvalidArgument(f"unknown team {team!r}")


def interception_probability(T, tau, s_uncertainty: float):
    """Logistic CDF of arrival: probability a player due at tau has arrived by T."""
    if s_uncertainty <= 0:
        raise InvalidArgument("s_uncertainty must be positive")
    scale = math.sqrt(3.0) * s_uncertainty / math.pi
    return expit((np.asarray(T, dtype=float) - tau) / scale)


def arrival_times(positions, velocities, targets, motion: MotionParams) -> np.ndarray:
    """Expected arrival time of every player at every target, shape (n_targets, n_players).

    Each player runs straight at the target, starting from the component of
    their velocity along that line, accelerating at `accel` until `v_max`.
    """
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    velocities = np.asarray(velocities, dtype=float).reshape(-1, 2)
    targets = np.asarray(targets, dtype=float).reshape(-1, 2)
    a, vm = motion.accel, motion.v_max

    delta = targets[:, None, :] - positions[None, :, :]
    d = np.hypot(delta[..., 0], delta[..., 1])
    safe = np.where(d > 0, d, 1.0)
    u = (delta[..., 0] * velocities[None, :, 0] + delta[..., 1] * velocities[None, :, 1]) / safe
    u = np.where(d > 0, np.minimum(u, vm), 0.0)

    ramp = (vm * vm - u * u) / (2.0 * a)  # distance covered while reaching v_max
    t_ramp_only = (np.sqrt(u * u + 2.0 * a * d) - u) / a
    t_cruise = (vm - u) / a + (d - ramp) / vm
    return np.where(ramp >= d, t_ramp_only, t_cruise)


def expected_arrival_time(player: PlayerState, target, motion: MotionParams | None = None) -> float:
    motion = motion or MotionParams()
    return float(arrival_times(player.position, player.velocity, target, motion)[0, 0])


def _integrate(tau: np.ndarray, is_att: np.ndarray, cp: ControlParams):
    """Solve the control ODE for each row of `tau` (targets x players)."""
    m = tau.shape[0]
    attack = np.zeros(m)
    defend = np.zeros(m)

    inf = np.inf
    tau_att = tau[:, is_att].min(axis=1) if is_att.any() else np.full(m, inf)
    tau_def = tau[:, ~is_att].min(axis=1) if (~is_att).any() else np.full(m, inf)
    with np.errstate(invalid="ignore"):
        att_first = (tau_def - tau_att) >= cp.time_to_control(ATTACKING)
        def_first = ~att_first & ((tau_att - tau_def) >= cp.time_to_control(DEFENDING))
    attack[att_first] = 1.0
    defend[def_first] = 1.0

    rows = np.flatnonzero(~(att_first | def_first))
    if rows.size == 0:
        return attack, defend

    lam = np.where(is_att, cp.lam, cp.kappa * cp.lam)
    scale = cp.arrival_scale
    work_tau = tau[rows]
    pc = np.zeros_like(work_tau)
    total = np.zeros(rows.size)
    n_steps = int(round(cp.T_max / cp.dT))

    for i in range(1, n_steps + 1):
        T = i * cp.dT
        rate = expit((T - work_tau) / scale) * lam * cp.dT
        c = rate.sum(axis=1)
        # forward Euler overshoots 1 when c > 1; limit the step to the free mass
        gain = (1.0 - total) / np.maximum(c, 1.0)
        pc += rate * gain[:, None]
        total = pc.sum(axis=1)

        done = total >= cp.converged
        if i == n_steps:
            done[:] = True
        if done.any():
            attack[rows[done]] = pc[done][:, is_att].sum(axis=1)
            defend[rows[done]] = pc[done][:, ~is_att].sum(axis=1)
            keep = ~done
            rows, work_tau, pc, total = rows[keep], work_tau[keep], pc[keep], total[keep]
            if rows.size == 0:
                break
    return attack, defend


def _pitch_control(s: Snapshot, targets, motion, cp):
    if not s.players:
        raise InvalidArgument("snapshot has no players")
    pos, vel, is_att = s.arrays()
    tau = arrival_times(pos, vel, targets, motion)
    return _integrate(tau, is_att, cp)


def ppcf_cells(s: Snapshot, targets, motion: MotionParams | None = None,
               cp: ControlParams | None = None):
    """Attacking and defending control at an (m, 2) array of targets."""
    return _pitch_control(s, np.asarray(targets, dtype=float).reshape(-1, 2),
                          motion or MotionParams(), cp or ControlParams())


def ppcf_at(s: Snapshot, target, motion: MotionParams | None = None,
            cp: ControlParams | None = None) -> tuple[float, float]:
    """Attacking and defending control probability at a single target."""
    att, dfd = _pitch_control(s, target, motion or MotionParams(), cp or ControlParams())
    return float(att[0]), float(dfd[0])


def ppcf_field(s: Snapshot, grid: GridSpec, motion: MotionParams | None = None,
               cp: ControlParams | None = None) -> PitchControlField:
    att, dfd = _pitch_control(s, grid.centers, motion or MotionParams(), cp or ControlParams())
    return PitchControlField(grid=grid, attack=att.reshape(grid.shape), defend=dfd.reshape(grid.shape))
