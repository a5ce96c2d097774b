"""Forward and inverse kinematics for serial revolute chains.

Two FK constructions are provided: walking the parsed kinematic tree
and evaluating a Denavit-Hartenberg table. They serve as oracles for
each other on the reference arm. IK comes in two flavors as well: the
closed-form geometric solution for the 3-DOF arm and damped least
squares for anything with a Jacobian. Every IK result is checked by
running it back through FK before it is marked verified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .transforms import Transform, rot_axis_angle, rot_x, rot_z, rotation_log, wrap_angle
from .urdf import FIXED, REVOLUTE, Joint, JointLimits, RobotModel, joint_path

IK_VERIFY_TOL = 1e-9
ELBOW_COINCIDENT_TOL = 1e-6
REACH_TOL = 1e-9


class DimensionMismatch(Exception):
    """Joint-vector length does not match the chain."""


class Unreachable(Exception):
    """Target lies outside the reachable workspace annulus."""


# ---------------------------------------------------------------------------
# forward kinematics from the model tree

def joint_transform(joint: Joint, q: float) -> Transform:
    """Pose of the joint's child frame in its parent frame at angle q.

    Fixed joints ignore q; revolute joints rotate about their axis after
    the fixed origin offset.
    """
    origin = joint.origin.transform
    if joint.kind == FIXED:
        return origin
    spin = Transform(rot_axis_angle(np.asarray(joint.axis, dtype=float), q),
                     np.zeros(3))
    return origin.compose(spin)


def _full_path(model: RobotModel, chain: list[Joint]) -> list[Joint]:
    """Root-to-tip joint path covering the chain, fixed joints included.

    The path runs to the last chain joint's child and then keeps following
    single fixed children so a tool-tip offset is part of the answer.
    """
    if not chain:
        return []
    path = joint_path(model, chain[-1].child)
    path_names = [j.name for j in path]
    pos = -1
    for joint in chain:
        try:
            here = path_names.index(joint.name)
        except ValueError:
            raise DimensionMismatch(
                f"joint '{joint.name}' is not on the path to '{chain[-1].child}'"
            ) from None
        if here <= pos:
            raise DimensionMismatch(f"chain out of base-to-tip order at '{joint.name}'")
        pos = here
    # trailing fixed extension: an unambiguous tool offset only
    tip = chain[-1].child
    while True:
        children = model.child_joints(tip)
        if len(children) != 1 or children[0].kind != FIXED:
            break
        path.append(children[0])
        tip = children[0].child
    return path


def _axis_of(joint: Joint) -> np.ndarray:
    arr = getattr(joint, "_axis_arr", None)
    if arr is None:
        arr = np.asarray(joint.axis, dtype=float)
        joint._axis_arr = arr
    return arr


def _walk(path: list[Joint], angles: dict[str, float],
          frames_out: list | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Accumulate (rotation, position) along the path; the kinematics hot loop.

    Joints named in `angles` spin by their value (and report their world
    axis/origin into frames_out when asked); everything else contributes
    its fixed origin only.
    """
    rot = np.eye(3)
    pos = np.zeros(3)
    for joint in path:
        o_rot, o_pos = joint.origin.rotation_translation()
        pos = rot @ o_pos + pos
        rot = rot @ o_rot
        qi = angles.get(joint.name)
        if qi is not None:
            axis = _axis_of(joint)
            if frames_out is not None:
                frames_out.append((rot @ axis, pos))
            rot = rot @ rot_axis_angle(axis, qi)
    return rot, pos


def _chain_angles(chain: list[Joint], q) -> dict[str, float]:
    q = np.asarray(q, dtype=float)
    if q.shape != (len(chain),):
        raise DimensionMismatch(f"expected {len(chain)} joint values, got {q.shape}")
    return {joint.name: float(q[i]) for i, joint in enumerate(chain)}


def fk(model: RobotModel, chain: list[Joint], q) -> Transform:
    """Tip pose for the chain at configuration q.

    The chain is the movable joints base-first; fixed joints between and
    after them are composed automatically.
    """
    angles = _chain_angles(chain, q)
    rot, pos = _walk(_full_path(model, chain), angles)
    return Transform(rot, pos)


def link_poses(model: RobotModel, chain: list[Joint], q) -> dict[str, Transform]:
    """World pose of every link on the root-to-tip path (root included)."""
    q = np.asarray(q, dtype=float)
    if q.shape != (len(chain),):
        raise DimensionMismatch(f"expected {len(chain)} joint values, got {q.shape}")
    angles = {joint.name: q[i] for i, joint in enumerate(chain)}
    poses = {model.root: Transform.identity()}
    current = Transform.identity()
    for joint in _full_path(model, chain):
        current = current.compose(joint_transform(joint, angles.get(joint.name, 0.0)))
        poses[joint.child] = current
    return poses


# ---------------------------------------------------------------------------
# forward kinematics from a DH table

@dataclass(frozen=True)
class DHRow:
    """One standard (distal) Denavit-Hartenberg row."""

    theta_offset: float
    d: float
    a: float
    alpha: float
    joint_index: int = 0


def dh_transform(row: DHRow, q: float) -> Transform:
    """RotZ(q + theta_offset) * TransZ(d) * TransX(a) * RotX(alpha)."""
    rz = Transform(rot_z(q + row.theta_offset), np.zeros(3))
    tz = Transform(np.eye(3), np.array([0.0, 0.0, row.d]))
    tx = Transform(np.eye(3), np.array([row.a, 0.0, 0.0]))
    rx = Transform(rot_x(row.alpha), np.zeros(3))
    return rz.compose(tz).compose(tx).compose(rx)


def fk_dh(table: list[DHRow], q) -> Transform:
    """Ordered product of the table's row transforms."""
    q = np.asarray(q, dtype=float)
    if q.shape != (len(table),):
        raise DimensionMismatch(f"expected {len(table)} joint values, got {q.shape}")
    tip = Transform.identity()
    for row, qi in zip(table, q):
        tip = tip.compose(dh_transform(row, float(qi)))
    return tip


# ---------------------------------------------------------------------------
# Jacobians

def geometric_jacobian(model: RobotModel, chain: list[Joint], q) -> np.ndarray:
    """6xN Jacobian: rows 0..2 linear velocity, rows 3..5 angular velocity.

    Column i is [z_i x (p_tip - p_i); z_i] with z_i the joint axis and p_i
    the joint origin, both in world frame at configuration q.
    """
    angles = _chain_angles(chain, q)
    frames: list[tuple[np.ndarray, np.ndarray]] = []
    _rot, p_tip = _walk(_full_path(model, chain), angles, frames)
    jac = np.zeros((6, len(chain)))
    for i, (z_i, p_i) in enumerate(frames):
        jac[:3, i] = np.cross(z_i, p_tip - p_i)
        jac[3:, i] = z_i
    return jac


def numeric_jacobian(model: RobotModel, chain: list[Joint], q, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian, the independent check on the geometric one.

    The angular block differences the relative rotation between the two
    perturbed poses (axis-angle of R(q-h)^T R(q+h)), mapped to world frame.
    """
    if h <= 0.0:
        raise ValueError("h must be positive")
    q = np.asarray(q, dtype=float)
    if q.shape != (len(chain),):
        raise DimensionMismatch(f"expected {len(chain)} joint values, got {q.shape}")
    jac = np.zeros((6, len(chain)))
    base_rot = fk(model, chain, q).rotation
    for i in range(len(chain)):
        lo = q.copy()
        hi = q.copy()
        lo[i] -= h
        hi[i] += h
        pose_lo = fk(model, chain, lo)
        pose_hi = fk(model, chain, hi)
        jac[:3, i] = (pose_hi.translation - pose_lo.translation) / (2.0 * h)
        relative = rotation_log(pose_lo.rotation.T @ pose_hi.rotation) / (2.0 * h)
        jac[3:, i] = base_rot @ relative
    return jac


# ---------------------------------------------------------------------------
# inverse kinematics

@dataclass(frozen=True)
class Arm3Params:
    """Reference-arm segment lengths: base height, upper arm, forearm."""

    L1: float
    L2: float
    L3: float

    def __post_init__(self):
        if min(self.L1, self.L2, self.L3) <= 0.0:
            raise ValueError("all segment lengths must be positive")


@dataclass(frozen=True)
class Branch:
    base: str  # "Front" | "Back"
    elbow: str  # "Up" | "Down"


@dataclass
class IkSolution:
    q: np.ndarray
    branch: Branch | None
    verified: bool
    singular: bool = False
    iterations: int = 0
    residual: float = field(default=float("nan"))


def _reference_like_model(params: Arm3Params):
    from .reference import arm_model, arm_chain
    model = arm_model(params)
    return model, arm_chain(model)


def ik_3dof(params: Arm3Params, target, limits: list[JointLimits] | None = None) -> list[IkSolution]:
    """Closed-form geometric IK for the 3-DOF reference-style arm.

    Enumerates base Front/Back x elbow Up/Down branches, drops the ones
    violating the supplied limits, and FK-verifies every survivor. At the
    shoulder singularity (target on the base axis) theta1 is fixed to 0 and
    the solutions are flagged singular.
    """
    target = np.asarray(target, dtype=float)
    if target.shape != (3,):
        raise DimensionMismatch(f"target must be a 3-vector, got {target.shape}")
    if not np.all(np.isfinite(target)):
        raise ValueError("target must be finite")
    x, y, z = target
    r = math.hypot(x, y)
    s = z - params.L1
    reach_sq = r * r + s * s
    min_reach = abs(params.L2 - params.L3)
    max_reach = params.L2 + params.L3
    if reach_sq > (max_reach + REACH_TOL) ** 2 or reach_sq < max(min_reach - REACH_TOL, 0.0) ** 2:
        raise Unreachable(
            f"target at planar distance {math.sqrt(reach_sq):.6f} m outside "
            f"[{min_reach:.6f}, {max_reach:.6f}] m")

    cos3 = (reach_sq - params.L2 ** 2 - params.L3 ** 2) / (2.0 * params.L2 * params.L3)
    cos3 = min(1.0, max(-1.0, cos3))
    theta3_mag = math.acos(cos3)
    # acos amplifies rounding near the workspace boundary (sqrt growth), so
    # snap near-branch-point elbows to the exact branch point
    if theta3_mag < ELBOW_COINCIDENT_TOL:
        theta3_mag = 0.0
    elif math.pi - theta3_mag < ELBOW_COINCIDENT_TOL:
        theta3_mag = math.pi

    singular = r == 0.0
    theta1_front = 0.0 if singular else math.atan2(y, x)
    base_branches = [("Front", theta1_front, r)]
    if not singular:
        base_branches.append(("Back", wrap_angle(theta1_front + math.pi), -r))

    candidates: list[tuple[Branch, tuple[float, float, float]]] = []
    for base_label, theta1, rr in base_branches:
        elbows = [("Down", theta3_mag)]
        # both elbow branches collapse to one configuration at full extension
        # (theta3 = 0) and at the fully folded inner boundary (theta3 = pi)
        if ELBOW_COINCIDENT_TOL < theta3_mag < math.pi - ELBOW_COINCIDENT_TOL:
            elbows.append(("Up", -theta3_mag))
        for elbow_label, theta3 in elbows:
            theta2 = (math.atan2(s, rr)
                      - math.atan2(params.L3 * math.sin(theta3),
                                   params.L2 + params.L3 * math.cos(theta3)))
            q = (wrap_angle(theta1), wrap_angle(theta2), wrap_angle(theta3))
            candidates.append((Branch(base_label, elbow_label), q))

    if limits is not None:
        if len(limits) != 3:
            raise DimensionMismatch(f"expected 3 joint limits, got {len(limits)}")
        candidates = [(branch, q) for branch, q in candidates
                      if all(lim.lower <= qi <= lim.upper for qi, lim in zip(q, limits))]

    model, chain = _reference_like_model(params)
    path = _full_path(model, chain)
    names = [joint.name for joint in chain]
    solutions = []
    for branch, q in candidates:
        qv = np.array(q)
        _rot, pos = _walk(path, dict(zip(names, q)))
        residual = float(np.linalg.norm(pos - target))
        solutions.append(IkSolution(q=qv, branch=branch,
                                    verified=residual <= IK_VERIFY_TOL,
                                    singular=singular, residual=residual))
    return solutions


DLS_STEP_CAP = 0.2


def ik_dls(model: RobotModel, chain: list[Joint], q0, target, *,
           tol: float = 1e-6, max_iter: int = 200, damping: float = 0.1,
           position_only: bool | None = None) -> IkSolution:
    """Damped-least-squares IK: q <- q + J^T (J J^T + lam^2 I)^-1 e.

    A 3-vector target solves position only; a Transform target stacks the
    axis-angle rotation error under the position error unless position_only
    is forced. Non-convergence is not an exception: the best iterate comes
    back with verified=False.

    Robustness near singular starts comes from two standard refinements:
    the working error is capped at DLS_STEP_CAP per iteration, and the
    damping shrinks with the error (lam = min(damping, |e|)) so the last
    iterations are Newton-fast instead of crawling.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if damping < 0.0:
        raise ValueError("damping must be non-negative")
    q = np.asarray(q0, dtype=float).copy()
    if q.shape != (len(chain),):
        raise DimensionMismatch(f"expected {len(chain)} joint values, got {q.shape}")

    if isinstance(target, Transform):
        want_pose = not (position_only or False)
        target_pos = target.translation
        target_rot = target.rotation
    else:
        target_pos = np.asarray(target, dtype=float)
        if target_pos.shape != (3,):
            raise DimensionMismatch(f"target must be a 3-vector or Transform, got {target_pos.shape}")
        want_pose = False
        target_rot = None
    if not np.all(np.isfinite(target_pos)):
        raise ValueError("target must be finite")

    path = _full_path(model, chain)
    names = [joint.name for joint in chain]
    rows = 6 if want_pose else 3
    eye = np.eye(rows)

    def pose_and_jacobian(qv: np.ndarray):
        frames: list[tuple[np.ndarray, np.ndarray]] = []
        rot, pos = _walk(path, dict(zip(names, qv.tolist())), frames)
        e_pos = target_pos - pos
        error = e_pos if not want_pose else np.concatenate(
            [e_pos, rot @ rotation_log(rot.T @ target_rot)])
        jac = np.zeros((rows, len(chain)))
        for i, (z_i, p_i) in enumerate(frames):
            jac[:3, i] = np.cross(z_i, pos - p_i)
            if want_pose:
                jac[3:, i] = z_i
        return error, jac

    best_q = q.copy()
    e, jac = pose_and_jacobian(q)
    best_err = float(np.linalg.norm(e))
    iterations = 0
    while best_err >= tol and iterations < max_iter:
        iterations += 1
        norm = float(np.linalg.norm(e))
        if norm > DLS_STEP_CAP:
            e = e * (DLS_STEP_CAP / norm)
        lam = min(damping, norm)
        gram = jac @ jac.T + lam * lam * eye
        q = q + jac.T @ np.linalg.solve(gram, e)
        e, jac = pose_and_jacobian(q)
        err = float(np.linalg.norm(e))
        if err < best_err:
            best_err = err
            best_q = q.copy()
    converged = best_err < tol

    verified = converged and verify_ik(model, chain, best_q,
                                       target if want_pose else target_pos, tol)
    return IkSolution(q=best_q, branch=None, verified=verified,
                      iterations=iterations, residual=best_err)


def verify_ik(model: RobotModel, chain: list[Joint], q, target, tol: float,
              tol_rot: float | None = None) -> bool:
    """The forward-kinematic check every IK answer must survive."""
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    pose = fk(model, chain, q)
    if isinstance(target, Transform):
        pos_ok = np.linalg.norm(pose.translation - target.translation) <= tol
        geodesic = np.linalg.norm(rotation_log(pose.rotation.T @ target.rotation))
        return bool(pos_ok and geodesic <= (tol if tol_rot is None else tol_rot))
    target = np.asarray(target, dtype=float)
    if target.shape != (3,):
        raise DimensionMismatch(f"target must be a 3-vector or Transform, got {target.shape}")
    return bool(np.linalg.norm(pose.translation - target) <= tol)
