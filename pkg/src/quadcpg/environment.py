"""Locomotion MDP: 100 Hz actions over a 1 kHz inner control loop.

Each control step clamps the 8-D command, then runs ten inner substeps.
Every substep advances the four oscillators, maps them to task-space
foot targets, solves the analytical IK and hands the desired joint
positions to the dynamics backend.  The reward is computed once per
control step from the accumulated forward progress.

The observation is a fixed 49-vector for every robot, regardless of DoF
count and morphology:

    base orientation (3) + base linear velocity (3) + base angular
    velocity (3) + foot contacts (4) + feet positions (12) + previous
    action (8) + oscillator states r, r_dot, theta, theta_dot (16)

Joint positions and velocities are deliberately absent; feet positions
are recomputed from the backend's joint positions through forward
kinematics rather than read from any foot sensor.

The built-in KinematicBackend is a simplified stand-in for a physics
simulator: stance feet are treated as ground anchors, so the base moves
opposite to the mean stance-foot velocity, and joints track their
targets through a first-order lag derived from the PD gains.  It is
deterministic and validates the control stack analytically; a full
rigid-body backend can be plugged in through the same interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Protocol, Sequence, Tuple

import numpy as np

from .foot_trajectory import FootTarget, PfParams, foot_target
from .kinematics import _solve_3dof, _solve_4dof, fk_all_feet
from .oscillator import (TROT_PHASES, CpgConfig, OscillatorState,
                         clamp_command, init_cpg, step_oscillator)
from .registry import RobotDescriptor

OBSERVATION_SIZE = 49
ACTION_SIZE = 8

#: Reward weights: forward progress, orientation penalty, power penalty.
W_FORWARD = 8.0
W_ORIENTATION = -0.25
W_POWER = -1e-5

#: Velocity cap defining the per-step forward-progress clip d_max.
DEFAULT_V_CAP = 1.5


class RewardTerms(NamedTuple):
    """Weighted reward contributions; total is their exact sum."""

    forward_progress: float
    orientation_penalty: float
    power_penalty: float
    total: float


def compute_reward(f_x: float, d_max: float, o_base: Sequence[float],
                   tau: Sequence[float], qdot_t: Sequence[float],
                   qdot_prev: Sequence[float]) -> RewardTerms:
    """Reward: clipped forward progress minus orientation and power terms.

    total = 8.0 * min(f_x, d_max) - 0.25 * ||o_base|| - 1e-5 * |tau . dqdot|

    The power term uses the *difference* of consecutive joint-velocity
    samples, as specified; dimensionally odd, kept literal.
    """
    if len(o_base) != 3:
        raise ValueError(f"o_base must have 3 entries, got {len(o_base)}")
    if not (len(tau) == len(qdot_t) == len(qdot_prev)):
        raise ValueError(
            f"dimension mismatch: tau {len(tau)}, qdot_t {len(qdot_t)}, "
            f"qdot_prev {len(qdot_prev)}")
    forward = W_FORWARD * min(f_x, d_max)
    orientation = W_ORIENTATION * math.sqrt(sum(o * o for o in o_base))
    power = W_POWER * abs(sum(t * (a - b) for t, a, b in zip(tau, qdot_t, qdot_prev)))
    return RewardTerms(forward, orientation, power, forward + orientation + power)


@dataclass(frozen=True)
class Observation:
    """Fixed-size sensory vector, identical layout for all 16 robots."""

    base_orientation: Tuple[float, float, float]   # roll, pitch, yaw, rad
    base_lin_vel: Tuple[float, float, float]       # m/s, body frame
    base_ang_vel: Tuple[float, float, float]       # rad/s
    foot_contacts: Tuple[bool, bool, bool, bool]   # FR, FL, RR, RL
    feet_positions: Tuple[float, ...]              # 12, body frame
    prev_action: Tuple[float, ...]                 # 8, clamped
    cpg_state: Tuple[float, ...]                   # r x4, r_dot x4, theta x4, theta_dot x4

    def to_array(self) -> np.ndarray:
        return np.concatenate([
            self.base_orientation,
            self.base_lin_vel,
            self.base_ang_vel,
            np.asarray(self.foot_contacts, dtype=float),
            self.feet_positions,
            self.prev_action,
            self.cpg_state,
        ])

    def __len__(self) -> int:
        return OBSERVATION_SIZE


class DynamicsBackend(Protocol):
    """Contract for pluggable dynamics.

    reset(q0, seed) places the robot in a nominal standing pose with the
    given joint positions; advance(q_des, dt) moves the world forward by
    exactly dt given desired joint positions for all four legs.  After
    either call the attributes below describe the new state.  Backends
    must be deterministic for a fixed seed.
    """

    base_pos: Tuple[float, float, float]
    base_rpy: Tuple[float, float, float]
    base_lin_vel: Tuple[float, float, float]
    base_ang_vel: Tuple[float, float, float]
    joint_positions: Sequence[Sequence[float]]
    joint_velocities: Sequence[Sequence[float]]
    joint_torques: Sequence[Sequence[float]]
    foot_contacts: Tuple[bool, bool, bool, bool]

    def reset(self, q0: Sequence[Sequence[float]], seed: int = 0) -> None: ...

    def advance(self, q_des: Sequence[Sequence[float]], dt: float) -> None: ...


class KinematicBackend:
    """Stance-anchored kinematic body model.

    Joints follow desired positions through a first-order lag whose time
    constant comes from the PD gain ratio kd/kp, clamped to
    [dt, lag_tau_max] so tracking stays both stable and fast enough for
    the stance-sweep velocity model to hold.  Torques are reported from
    the PD law tau = kp * (q_des - q) - kd * qdot.  Feet at or below the
    ground plane count as contacts and anchor the base: its planar
    velocity is the negative mean stance-foot velocity in the body
    frame.  The base height is servoed to the nominal standing height;
    orientation remains flat.
    """

    def __init__(self, robot: RobotDescriptor, lag_tau_max: float = 0.005,
                 height_servo_tau: float = 0.05, contact_tol: float = 1e-9):
        self.robot = robot
        self._lag_tau = max(robot.kd / robot.kp, 1e-6)
        self._lag_tau_max = lag_tau_max
        self._height_tau = height_servo_tau
        self._contact_tol = contact_tol
        self.reset([[0.0] * robot.leg_dof for _ in range(4)])

    def reset(self, q0, seed: int = 0) -> None:
        robot = self.robot
        self.base_pos = (0.0, 0.0, robot.height_nominal)
        self.base_rpy = (0.0, 0.0, 0.0)
        self.base_lin_vel = (0.0, 0.0, 0.0)
        self.base_ang_vel = (0.0, 0.0, 0.0)
        self.joint_positions = [list(q) for q in q0]
        self.joint_velocities = [[0.0] * robot.leg_dof for _ in range(4)]
        self.joint_torques = [[0.0] * robot.leg_dof for _ in range(4)]
        self._feet = fk_all_feet(robot, self.joint_positions)
        self.foot_contacts = self._compute_contacts()

    def _compute_contacts(self):
        base_z = self.base_pos[2]
        return tuple(base_z + f[2] <= self._contact_tol for f in self._feet)

    def advance(self, q_des, dt: float) -> None:
        robot = self.robot
        kp, kd = robot.kp, robot.kd
        tau_lag = min(max(self._lag_tau, dt), self._lag_tau_max)
        a = dt / max(tau_lag, dt)

        q_all = self.joint_positions
        qd_all = self.joint_velocities
        trq_all = self.joint_torques
        for leg in range(4):
            q = q_all[leg]
            qd = qd_all[leg]
            trq = trq_all[leg]
            des = q_des[leg]
            for j in range(len(q)):
                e = des[j] - q[j]
                trq[j] = kp * e - kd * qd[j]
                dq = e * a
                q[j] += dq
                qd[j] = dq / dt

        feet_prev = self._feet
        feet = fk_all_feet(robot, q_all)
        self._feet = feet
        contacts = self._compute_contacts()
        self.foot_contacts = contacts

        n_stance = 0
        sx = sy = 0.0
        for i in range(4):
            if contacts[i]:
                n_stance += 1
                sx += feet[i][0] - feet_prev[i][0]
                sy += feet[i][1] - feet_prev[i][1]
        if n_stance > 0:
            vx = -sx / (n_stance * dt)
            vy = -sy / (n_stance * dt)
        else:
            vx, vy = self.base_lin_vel[0], self.base_lin_vel[1]

        bx, by, bz = self.base_pos
        dz = (robot.height_nominal - bz) * min(1.0, dt / self._height_tau)
        self.base_pos = (bx + vx * dt, by + vy * dt, bz + dz)
        self.base_lin_vel = (vx, vy, dz / dt)

    @property
    def feet_body(self):
        return self._feet


def build_observation(robot: RobotDescriptor, backend, cpg_states,
                      prev_action) -> Observation:
    """Assemble the 49-vector observation from backend and CPG state.

    Feet positions always come from forward kinematics over the
    backend's joint positions, never from backend foot state.
    """
    feet = fk_all_feet(robot, backend.joint_positions)
    feet_flat = tuple(c for foot in feet for c in foot)
    cpg_flat = (tuple(s.r for s in cpg_states)
                + tuple(s.r_dot for s in cpg_states)
                + tuple(s.theta for s in cpg_states)
                + tuple(s.theta_dot for s in cpg_states))
    return Observation(
        base_orientation=tuple(backend.base_rpy),
        base_lin_vel=tuple(backend.base_lin_vel),
        base_ang_vel=tuple(backend.base_ang_vel),
        foot_contacts=tuple(backend.foot_contacts),
        feet_positions=feet_flat,
        prev_action=tuple(prev_action),
        cpg_state=cpg_flat,
    )


class QuadrupedEnv:
    """The locomotion environment for one robot over a dynamics backend."""

    def __init__(self, robot: RobotDescriptor, cpg_config: Optional[CpgConfig] = None,
                 backend=None, control_dt: float = 0.01, v_cap: float = DEFAULT_V_CAP,
                 fall_angle_limit: float = 1.0, min_height_frac: float = 0.3):
        self.robot = robot
        self.cpg_config = cpg_config or CpgConfig()
        self.backend = backend if backend is not None else KinematicBackend(robot)
        self.control_dt = control_dt
        self.d_max = v_cap * control_dt
        self._fall_angle = fall_angle_limit
        self._min_height = min_height_frac * robot.height_nominal

        n_sub = control_dt / self.cpg_config.dt_integration
        self.n_substeps = int(round(n_sub))
        if abs(n_sub - self.n_substeps) > 1e-9 or self.n_substeps < 1:
            raise ValueError(
                f"control_dt {control_dt} must be an integer multiple of "
                f"dt_integration {self.cpg_config.dt_integration}")

        # per-leg PF parameters: same shape, leg-specific signed lateral offset
        self._pf = tuple(
            PfParams(h=robot.pf.h, l_step=robot.pf.l_step, l_clrnc=robot.pf.l_clrnc,
                     l_pntr=robot.pf.l_pntr, x_off=robot.pf.x_off, z_off=robot.pf.z_off,
                     y_nominal=leg.abd_offset)
            for leg in robot.legs)
        self._solvers = tuple(
            _solve_3dof if leg.dof == 3 else _solve_4dof for leg in robot.legs)
        self._n_joints = robot.dof_total
        self._cpg = None
        self.time = 0.0
        self.done = False

    def reset(self, seed: int = 0, initial_phases: Sequence[float] = TROT_PHASES
              ) -> Observation:
        """Standing start at nominal height with the given phase offsets."""
        robot = self.robot
        self._cpg = init_cpg(initial_phases, self.cpg_config)
        q0 = []
        for leg, pf, solve in zip(robot.legs, self._pf, self._solvers):
            target = FootTarget(pf.x_off, leg.abd_offset, pf.z_off - pf.h)
            q, _ = solve(leg, *target)
            q0.append(list(q))
        self.backend.reset(q0, seed)
        self._prev_action = (0.0,) * ACTION_SIZE
        self._prev_qdot = [0.0] * self._n_joints
        self._last_targets = [FootTarget(pf.x_off, leg.abd_offset, pf.z_off - pf.h)
                              for leg, pf in zip(robot.legs, self._pf)]
        self.time = 0.0
        self.done = False
        return build_observation(robot, self.backend, self._cpg, self._prev_action)

    def step(self, action: Sequence[float]):
        """Apply one 100 Hz command; returns (obs, reward, done, info)."""
        if self._cpg is None:
            raise RuntimeError("environment must be reset before stepping")
        cmd = clamp_command(action)
        mu, omega = cmd.mu, cmd.omega

        backend = self.backend
        config = self.cpg_config
        dt = config.dt_integration
        legs = self.robot.legs
        pf = self._pf
        solvers = self._solvers
        cpg = self._cpg

        x0 = backend.base_pos[0]
        workspace_violations = 0
        q_des = [None] * 4
        targets = [None] * 4
        for _ in range(self.n_substeps):
            for i in range(4):
                state = step_oscillator(cpg[i], mu[i], omega[i], config)
                cpg[i] = state
                tgt = foot_target(state, pf[i])
                targets[i] = tgt
                q, clamped = solvers[i](legs[i], tgt.x, tgt.y, tgt.z)
                if clamped:
                    workspace_violations += 1
                q_des[i] = q
            backend.advance(q_des, dt)

        f_x = backend.base_pos[0] - x0
        qdot = [v for leg in backend.joint_velocities for v in leg]
        tau = [t for leg in backend.joint_torques for t in leg]
        terms = compute_reward(f_x, self.d_max, backend.base_rpy, tau, qdot,
                               self._prev_qdot)
        self._prev_qdot = qdot
        self._prev_action = mu + omega
        self._last_targets = list(targets)
        self.time += self.control_dt

        roll, pitch, _ = backend.base_rpy
        fell = (abs(roll) > self._fall_angle or abs(pitch) > self._fall_angle
                or backend.base_pos[2] < self._min_height)
        self.done = self.done or fell

        obs = build_observation(self.robot, backend, cpg, self._prev_action)
        info = {
            "terms": terms,
            "workspace_violations": workspace_violations,
            "foot_targets": tuple(targets),
            "command": cmd,
            "time": self.time,
            "fell": fell,
        }
        return obs, terms.total, self.done, info

    @property
    def cpg_states(self):
        return tuple(self._cpg) if self._cpg is not None else ()
