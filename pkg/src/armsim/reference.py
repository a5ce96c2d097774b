"""The built-in 3-DOF teaching arm.

A yaw joint at the base, two pitch joints, segment lengths
L1 (base column), L2 (upper arm), L3 (forearm). Zero configuration
points the arm along +x at height L1, so the tip sits at
(L2 + L3, 0, L1). The pitch axes point along -y so that positive
angles raise the arm, matching the closed-form FK

    x = c1 (L2 c2 + L3 c23)
    y = s1 (L2 c2 + L3 c23)
    z = L1 + L2 s2 + L3 s23
"""

from __future__ import annotations

import functools
import math

import numpy as np

from .kinematics import Arm3Params, DHRow
from .urdf import (Box, Cylinder, InertiaTensor, Joint, JointLimits, Link,
                   Origin, RobotModel, Transmission, movable_chain)

REFERENCE_PARAMS = Arm3Params(L1=0.5, L2=0.4, L3=0.3)
JOINT_NAMES = ("base_to_00", "00_to_01", "01_to_02")
TIP_LINK = "tip"
REFERENCE_LIMITS = JointLimits(lower=-3.14, upper=3.14, effort=1000.0, velocity=0.5)


def _diag(i: float) -> InertiaTensor:
    return InertiaTensor(ixx=i, ixy=0.0, ixz=0.0, iyy=i, iyz=0.0, izz=i)


def _column_link(name: str, mass: float, inertia: float, radius: float,
                 length: float) -> Link:
    """A vertical cylinder link; center of mass halfway up."""
    mid = Origin(xyz=(0.0, 0.0, length / 2.0))
    return Link(name=name, mass=mass, inertia=_diag(inertia),
                inertial_origin=mid,
                geometry=Cylinder(radius=radius, length=length),
                visual_origin=mid)


def _arm_link(name: str, mass: float, inertia: float, radius: float,
              length: float) -> Link:
    """A cylinder link lying along +x; center of mass at the middle."""
    mid = Origin(xyz=(length / 2.0, 0.0, 0.0), rpy=(0.0, math.pi / 2.0, 0.0))
    return Link(name=name, mass=mass, inertia=_diag(inertia),
                inertial_origin=Origin(xyz=(length / 2.0, 0.0, 0.0)),
                geometry=Cylinder(radius=radius, length=length),
                visual_origin=mid)


@functools.lru_cache(maxsize=8)
def arm_model(params: Arm3Params = REFERENCE_PARAMS) -> RobotModel:
    """Build the reference arm as a plain RobotModel (cached per params)."""
    l1, l2, l3 = params.L1, params.L2, params.L3
    links = [
        Link(name="base_link", mass=10.0, inertia=_diag(0.1),
             inertial_origin=Origin(),
             geometry=Box(size=(0.2, 0.2, 0.1)),
             visual_origin=Origin()),
        _column_link("link_00", mass=2.0, inertia=0.02, radius=0.06, length=l1),
        _arm_link("link_01", mass=1.5, inertia=0.02, radius=0.05, length=l2),
        _arm_link("link_02", mass=1.0, inertia=0.01, radius=0.04, length=l3),
        Link(name=TIP_LINK, mass=0.1, inertia=_diag(1e-4),
             inertial_origin=Origin(),
             geometry=Box(size=(0.04, 0.04, 0.04)),
             visual_origin=Origin()),
    ]
    joints = [
        Joint(name="base_to_00", kind="revolute", parent="base_link",
              child="link_00", origin=Origin(),
              axis=(0.0, 0.0, 1.0), limits=REFERENCE_LIMITS),
        Joint(name="00_to_01", kind="revolute", parent="link_00",
              child="link_01", origin=Origin(xyz=(0.0, 0.0, l1)),
              axis=(0.0, -1.0, 0.0), limits=REFERENCE_LIMITS),
        Joint(name="01_to_02", kind="revolute", parent="link_01",
              child="link_02", origin=Origin(xyz=(l2, 0.0, 0.0)),
              axis=(0.0, -1.0, 0.0), limits=REFERENCE_LIMITS),
        Joint(name="02_to_tip", kind="fixed", parent="link_02",
              child=TIP_LINK, origin=Origin(xyz=(l3, 0.0, 0.0))),
    ]
    transmissions = [Transmission(joint=name) for name in JOINT_NAMES]
    return RobotModel(name="arm_model", links=links, joints=joints,
                      transmissions=transmissions, root="base_link")


def arm_chain(model: RobotModel) -> list[Joint]:
    return movable_chain(model, TIP_LINK)


def dh_table(params: Arm3Params = REFERENCE_PARAMS) -> list[DHRow]:
    """DH rows equivalent to the reference arm's tree."""
    return [
        DHRow(theta_offset=0.0, d=params.L1, a=0.0, alpha=math.pi / 2.0, joint_index=1),
        DHRow(theta_offset=0.0, d=0.0, a=params.L2, alpha=0.0, joint_index=2),
        DHRow(theta_offset=0.0, d=0.0, a=params.L3, alpha=0.0, joint_index=3),
    ]


def closed_form_fk(params: Arm3Params, q) -> np.ndarray:
    """Hand-derived tip position; the independent oracle for both FK paths."""
    t1, t2, t3 = float(q[0]), float(q[1]), float(q[2])
    planar = params.L2 * math.cos(t2) + params.L3 * math.cos(t2 + t3)
    return np.array([
        math.cos(t1) * planar,
        math.sin(t1) * planar,
        params.L1 + params.L2 * math.sin(t2) + params.L3 * math.sin(t2 + t3),
    ])


def arm_params_of(model: RobotModel, chain: list[Joint]) -> Arm3Params:
    """Recover (L1, L2, L3) from any model with the reference geometry.

    Probes the model's own FK at three configurations and cross-checks a
    fourth; raises ValueError when the model is not a yaw-pitch-pitch arm
    of this shape.
    """
    from .kinematics import fk
    if len(chain) != 3:
        raise ValueError(f"geometric method needs exactly 3 revolute joints, "
                         f"model has {len(chain)}")
    half_pi = math.pi / 2.0
    home = fk(model, chain, (0.0, 0.0, 0.0)).translation
    bent = fk(model, chain, (0.0, 0.0, half_pi)).translation
    l1 = home[2]
    l2 = bent[0]
    l3 = bent[2] - l1
    try:
        params = Arm3Params(L1=l1, L2=l2, L3=l3)
    except ValueError:
        raise ValueError("model does not have the reference arm geometry") from None
    for q in ((0.0, 0.0, 0.0), (0.0, half_pi, 0.0), (0.3, -0.4, 0.9)):
        probe = fk(model, chain, q).translation
        if np.linalg.norm(probe - closed_form_fk(params, q)) > 1e-9:
            raise ValueError("model does not have the reference arm geometry")
    return params


def reference_urdf(params: Arm3Params = REFERENCE_PARAMS) -> str:
    from .urdf import serialize_urdf
    return serialize_urdf(arm_model(params))


def reference_controllers() -> str:
    """Controller config matching the arm, in the course file format."""
    lines = ["arm_model:",
             "  joint_state_controller:",
             "    type: joint_state_controller/JointStateController",
             "    publish_rate: 50"]
    for i, name in enumerate(JOINT_NAMES, start=1):
        lines += [f"  joint{i}_position_controller:",
                  "    type: effort_controllers/JointPositionController",
                  f"    joint: {name}",
                  "    pid: {p: 100.0, i: 0.01, d: 10.0}"]
    return "\n".join(lines) + "\n"
