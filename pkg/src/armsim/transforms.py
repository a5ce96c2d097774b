"""Rigid-body transforms and rotation helpers shared by the whole kinematics stack."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation as _Rotation

ORTHONORMAL_TOL = 1e-9


def rot_x(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rot_axis_angle(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation about an arbitrary axis (normalized here)."""
    n = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(n)
    if norm == 0.0:
        raise ValueError("rotation axis must be non-zero")
    n = n / norm
    k = np.array([[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]])
    return np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)


def rpy_matrix(roll: float, pitch: float, yaw: float) -> np.ndarray:
    """Fixed-axis roll-pitch-yaw (URDF convention): Rz(yaw) Ry(pitch) Rx(roll)."""
    return rot_z(yaw) @ rot_y(pitch) @ rot_x(roll)


def matrix_rpy(rotation: np.ndarray) -> tuple[float, float, float]:
    """Inverse of rpy_matrix. At pitch = +-pi/2 the yaw is set to 0 by convention."""
    r = np.asarray(rotation, dtype=float)
    sy = math.hypot(r[0, 0], r[1, 0])
    pitch = math.atan2(-r[2, 0], sy)
    if sy < 1e-12:
        return math.atan2(-r[1, 2], r[1, 1]), pitch, 0.0
    return math.atan2(r[2, 1], r[2, 2]), pitch, math.atan2(r[1, 0], r[0, 0])


def rotation_log(rotation: np.ndarray) -> np.ndarray:
    """Axis-angle vector of a rotation matrix (norm = geodesic angle)."""
    return _Rotation.from_matrix(np.asarray(rotation, dtype=float)).as_rotvec()


def wrap_angle(angle: float) -> float:
    """Map an angle into [-pi, pi]."""
    return math.remainder(angle, math.tau)


@dataclass(eq=False)
class Transform:
    """Rigid-body pose: 3x3 rotation plus 3-vector translation.

    The rotation must be orthonormal with determinant +1 (checked on
    construction to ORTHONORMAL_TOL); every operation in this package
    preserves that.
    """

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        self.rotation = np.asarray(self.rotation, dtype=float).reshape(3, 3)
        self.translation = np.asarray(self.translation, dtype=float).reshape(3)
        err = np.abs(self.rotation @ self.rotation.T - np.eye(3)).max()
        if err > ORTHONORMAL_TOL:
            raise ValueError(f"rotation not orthonormal (max deviation {err:.3e})")
        if np.linalg.det(self.rotation) < 0.0:
            raise ValueError("rotation has determinant -1 (reflection)")

    @staticmethod
    def identity() -> "Transform":
        return Transform(np.eye(3), np.zeros(3))

    @staticmethod
    def from_xyz_rpy(xyz, rpy) -> "Transform":
        roll, pitch, yaw = rpy
        return Transform(rpy_matrix(roll, pitch, yaw), np.asarray(xyz, dtype=float))

    def compose(self, other: "Transform") -> "Transform":
        """self applied first in the world, i.e. world_T_b = world_T_a.compose(a_T_b)."""
        return Transform(self.rotation @ other.rotation,
                         self.rotation @ other.translation + self.translation)

    def __matmul__(self, other: "Transform") -> "Transform":
        return self.compose(other)

    def inverse(self) -> "Transform":
        rt = self.rotation.T
        return Transform(rt, -(rt @ self.translation))

    def apply(self, point) -> np.ndarray:
        return self.rotation @ np.asarray(point, dtype=float) + self.translation

    def as_matrix(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = self.rotation
        m[:3, 3] = self.translation
        return m

    def rpy(self) -> tuple[float, float, float]:
        return matrix_rpy(self.rotation)
