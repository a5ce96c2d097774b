"""Effort PID position control and single-joint lite dynamics.

The controller turns a position error into an effort; the joint model
integrates that effort with semi-implicit Euler against inertia,
viscous damping and a gravity torque. Joints are deliberately
decoupled: gravity is the only configuration-dependent coupling kept,
computed exactly from the potential-energy gradient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .kinematics import DimensionMismatch, joint_transform
from .transforms import Transform
from .urdf import Joint, RobotModel

GRAVITY_FD_STEP = 1e-6
INTEGRAL_CLAMP_EPS = 1e-12


@dataclass(frozen=True)
class PidGains:
    p: float
    i: float
    d: float

    def __post_init__(self):
        for name in ("p", "i", "d"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"gain {name} must be finite and non-negative, got {value}")


@dataclass
class PidState:
    integral: float = 0.0
    prev_error: float = 0.0
    initialized: bool = False
    integral_clamp: float = math.inf

    @staticmethod
    def for_effort_limit(gains: PidGains, effort_limit: float) -> "PidState":
        """Anti-windup bound: the integral term alone can never exceed the effort limit."""
        return PidState(integral_clamp=effort_limit / max(gains.i, INTEGRAL_CLAMP_EPS))


def pid_step(gains: PidGains, state: PidState, error: float, dt: float) -> float:
    """One controller update; mutates state, returns the commanded effort.

    effort = p*e + i*integral + d*(e - prev_e)/dt, with the integral
    accumulated first and clamped. The derivative term is suppressed on
    the first call since there is no previous error yet.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if not math.isfinite(error):
        raise ValueError(f"error must be finite, got {error}")
    state.integral += error * dt
    clamp = state.integral_clamp
    state.integral = min(clamp, max(-clamp, state.integral))
    derivative = 0.0
    if state.initialized:
        derivative = (error - state.prev_error) / dt
    state.prev_error = error
    state.initialized = True
    return gains.p * error + gains.i * state.integral + gains.d * derivative


@dataclass(frozen=True)
class JointSimState:
    q: float
    qd: float
    last_effort: float = 0.0
    inertia: float = 1.0
    damping: float = 1.0

    def __post_init__(self):
        if self.inertia <= 0.0:
            raise ValueError(f"inertia must be positive, got {self.inertia}")
        if self.damping < 0.0:
            raise ValueError(f"damping must be non-negative, got {self.damping}")


def joint_step(state: JointSimState, effort_cmd: float, effort_limit: float,
               limits, dt: float, gravity_term: float = 0.0) -> JointSimState:
    """One semi-implicit Euler step of the single-joint dynamics.

    The commanded effort is clamped to +-effort_limit; hitting a position
    limit clamps q to the bound and zeroes the velocity.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    lower, upper = (limits.lower, limits.upper) if hasattr(limits, "lower") else limits
    tau = min(effort_limit, max(-effort_limit, effort_cmd))
    qdd = (tau - state.damping * state.qd - gravity_term) / state.inertia
    qd = state.qd + qdd * dt
    q = state.q + qd * dt
    if q < lower:
        q, qd = lower, 0.0
    elif q > upper:
        q, qd = upper, 0.0
    return replace(state, q=q, qd=qd, last_effort=tau)


def potential_energy(model: RobotModel, chain: list[Joint], q, g: float) -> float:
    """U = sum over links of mass * g * z of the center of mass at q."""
    angles = {joint.name: float(qi) for joint, qi in zip(chain, q)}
    total = 0.0
    poses = {model.root: Transform.identity()}
    stack = [model.root]
    while stack:
        parent = stack.pop()
        for joint in model.child_joints(parent):
            poses[joint.child] = poses[parent].compose(
                joint_transform(joint, angles.get(joint.name, 0.0)))
            stack.append(joint.child)
    for link in model.links:
        pose = poses.get(link.name)
        if pose is None:
            continue
        com = pose.compose(link.inertial_origin.transform).translation
        total += link.mass * g * com[2]
    return total


def gravity_torque(model: RobotModel, chain: list[Joint], q, g: float) -> np.ndarray:
    """Generalized gravity torque per chain joint, as the actuator must overcome it.

    Computed as the central-difference gradient of the potential energy;
    exact enough at h=1e-6 that the ~1e-9 N*m noise floor is invisible
    next to any real load.
    """
    if g < 0.0:
        raise ValueError(f"g must be non-negative, got {g}")
    q = np.asarray(q, dtype=float)
    if q.shape != (len(chain),):
        raise DimensionMismatch(f"expected {len(chain)} joint values, got {q.shape}")
    torque = np.zeros(len(chain))
    if g == 0.0:
        return torque
    for i in range(len(chain)):
        lo = q.copy()
        hi = q.copy()
        lo[i] -= GRAVITY_FD_STEP
        hi[i] += GRAVITY_FD_STEP
        torque[i] = (potential_energy(model, chain, hi, g)
                     - potential_energy(model, chain, lo, g)) / (2.0 * GRAVITY_FD_STEP)
    return torque
