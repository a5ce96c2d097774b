"""Shared fixtures: the reference arm plus golden config texts.

The two golden constants below are course handout material with known
values; tests assert exact recovery of those numbers after parsing.
"""

from __future__ import annotations

import pytest

from armsim import arm_chain, arm_model, parse_controllers, reference_controllers

# Macro-form robot description fragment wrapped in a robot element.
# Known values: box mass 1024, inertia 170.667, joint axis (0,0,1) at
# z 0.5 with limits {-3.14, 3.14, 1000, 0.5}, mesh link mass 157.633.
GOLDEN_MACRO_URDF = """\
<robot name="golden">
<!-- BGN - Robot description -->
<m_link_box name="base_link"
  origin_rpy="0 0 0" origin_xyz="0 0 0"
  mass="1024"
  ixx="170.667" ixy="0" ixz="0"
  iyy="170.667" iyz="0"
  izz="170.667"
  size="1 1 1" />

<m_joint name="base_link_link_01" type="revolute"
  axis_xyz="0 0 1"
  origin_rpy="0 0 0" origin_xyz="0 0 0.5"
  parent="base_link" child="link_01"
  limit_e="1000" limit_l="-3.14" limit_u="3.14" limit_v="0.5" />

<m_link_mesh name="link_01"
  origin_rpy="0 0 0" origin_xyz="0 0 -0.1"
  mass="157.633"
  ixx="13.235" ixy="0" ixz="0"
  iyy="13.235" iyz="0"
  izz="9.655"
  meshfile="package://mrm_description/meshes/Link1-v2.stl"
  meshscale="0.001 0.001 0.001" />
</robot>
"""

# Controller configuration in the flush-left layout (keys at column zero
# after the namespace line, comments kept). One state publisher at 50 Hz,
# three effort position controllers with gains 100.00 / 0.01 / 10.00.
GOLDEN_CONTROLLER_YAML = """\
arm_model:
# Publish all joint states -----
joint_state_controller:
  type: joint_state_controller/JointStateController
  publish_rate: 50

# Position Controllers -----
joint1_position_controller:
  type: effort_controllers/JointPositionController
  joint: base_to_00
  pid: {p: 100.00, i: 0.01, d: 10.00}

joint2_position_controller:
  type: effort_controllers/JointPositionController
  joint: 00_to_01
  pid: {p: 100.00, i: 0.01, d: 10.00}

joint3_position_controller:
  type: effort_controllers/JointPositionController
  joint: 01_to_02
  pid: {p: 100.00, i: 0.01, d: 10.00}
"""


@pytest.fixture
def arm():
    return arm_model()


@pytest.fixture
def chain(arm):
    return arm_chain(arm)


@pytest.fixture
def controllers():
    return parse_controllers(reference_controllers())


@pytest.fixture
def golden_macro_urdf():
    return GOLDEN_MACRO_URDF


@pytest.fixture
def golden_controller_yaml():
    return GOLDEN_CONTROLLER_YAML
