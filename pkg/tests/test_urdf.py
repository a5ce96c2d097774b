"""Robot-description parsing, serialization, validation, chain extraction."""

import math

import pytest

from armsim import (
    BadNumber,
    Box,
    Cylinder,
    MeshRef,
    MissingField,
    UnknownLink,
    UnreachableLink,
    XmlError,
    default_tip,
    joint_path,
    leaf_links,
    movable_chain,
    parse_urdf,
    serialize_urdf,
    validate_model,
)

PLAIN_MINIMAL = """\
<robot name="mini">
  <link name="base">
    <inertial>
      <mass value="2.0" />
      <inertia ixx="0.1" ixy="0" ixz="0" iyy="0.1" iyz="0" izz="0.1" />
    </inertial>
    <visual>
      <geometry><box size="0.1 0.1 0.1" /></geometry>
    </visual>
  </link>
  <link name="arm">
    <inertial>
      <origin xyz="0.1 0 0" rpy="0 0 0" />
      <mass value="0.5" />
      <inertia ixx="0.01" ixy="0" ixz="0" iyy="0.01" iyz="0" izz="0.01" />
    </inertial>
    <visual>
      <origin xyz="0.1 0 0" rpy="0 1.5707963267948966 0" />
      <geometry><cylinder radius="0.02" length="0.2" /></geometry>
    </visual>
  </link>
  <joint name="swing" type="revolute">
    <origin xyz="0 0 0.05" rpy="0 0 0" />
    <parent link="base" />
    <child link="arm" />
    <axis xyz="0 0 1" />
    <limit lower="-1.0" upper="1.0" effort="10" velocity="1.0" />
  </joint>
  <transmission name="swing_transmission">
    <type>transmission_interface/SimpleTransmission</type>
    <joint name="swing">
      <hardwareInterface>EffortJointInterface</hardwareInterface>
    </joint>
    <actuator name="swing_motor" />
  </transmission>
</robot>
"""


def test_macro_fragment_golden_values(golden_macro_urdf):
    model = parse_urdf(golden_macro_urdf)
    box = model.link("base_link")
    assert box.mass == 1024.0
    assert box.inertia.ixx == 170.667
    assert box.inertia.iyy == 170.667
    assert box.inertia.izz == 170.667
    assert (box.inertia.ixy, box.inertia.ixz, box.inertia.iyz) == (0.0, 0.0, 0.0)
    assert box.geometry == Box(size=(1.0, 1.0, 1.0))

    joint = model.joint("base_link_link_01")
    assert joint.kind == "revolute"
    assert joint.axis == (0.0, 0.0, 1.0)
    assert joint.origin.xyz == (0.0, 0.0, 0.5)
    assert joint.limits.lower == -3.14
    assert joint.limits.upper == 3.14
    assert joint.limits.effort == 1000.0
    assert joint.limits.velocity == 0.5

    mesh = model.link("link_01")
    assert mesh.mass == 157.633
    assert mesh.inertia.ixx == 13.235
    assert mesh.inertia.izz == 9.655
    assert mesh.inertial_origin.xyz == (0.0, 0.0, -0.1)
    assert mesh.geometry == MeshRef(
        path="package://mrm_description/meshes/Link1-v2.stl",
        scale=(0.001, 0.001, 0.001),
    )

    # revolute macro joints imply an effort transmission
    assert len(model.transmissions) == 1
    assert model.transmissions[0].joint == "base_link_link_01"
    assert model.transmissions[0].interface == "EffortJointInterface"
    assert model.root == "base_link"


def test_plain_form_parses_geometry_and_limits():
    model = parse_urdf(PLAIN_MINIMAL)
    assert model.name == "mini"
    assert model.link("base").geometry == Box(size=(0.1, 0.1, 0.1))
    arm = model.link("arm")
    assert arm.geometry == Cylinder(radius=0.02, length=0.2)
    assert arm.visual_origin.rpy[1] == pytest.approx(math.pi / 2, abs=1e-12)
    joint = model.joint("swing")
    assert joint.limits.effort == 10.0
    assert model.transmissions[0].joint == "swing"
    # origin omitted entirely means identity
    assert model.link("base").inertial_origin.xyz == (0.0, 0.0, 0.0)
    assert model.link("base").inertial_origin.rpy == (0.0, 0.0, 0.0)


def test_serialize_parse_roundtrip_is_exact(arm):
    text = serialize_urdf(arm)
    again = parse_urdf(text)
    assert again.links == arm.links
    assert again.joints == arm.joints
    assert again.transmissions == arm.transmissions
    assert again.root == arm.root
    # and fully stable through a second trip
    assert parse_urdf(serialize_urdf(again)) == again


def test_roundtrip_preserves_golden_fragment(golden_macro_urdf):
    model = parse_urdf(golden_macro_urdf)
    again = parse_urdf(serialize_urdf(model))
    assert again == model


def test_malformed_xml_raises():
    with pytest.raises(XmlError):
        parse_urdf("<robot name='x'><link name='a'>")
    with pytest.raises(XmlError):
        parse_urdf("<notrobot />")


def test_missing_required_fields():
    no_mass = PLAIN_MINIMAL.replace('<mass value="2.0" />', "", 1)
    with pytest.raises(MissingField):
        parse_urdf(no_mass)
    no_axis = PLAIN_MINIMAL.replace('<axis xyz="0 0 1" />', "", 1)
    with pytest.raises(MissingField):
        parse_urdf(no_axis)
    no_limit = PLAIN_MINIMAL.replace(
        '<limit lower="-1.0" upper="1.0" effort="10" velocity="1.0" />', "", 1)
    with pytest.raises(MissingField):
        parse_urdf(no_limit)


def test_unsupported_joint_type_and_interface():
    prismatic = PLAIN_MINIMAL.replace('type="revolute"', 'type="prismatic"')
    with pytest.raises(MissingField):
        parse_urdf(prismatic)
    other_iface = PLAIN_MINIMAL.replace(
        "EffortJointInterface", "VelocityJointInterface")
    with pytest.raises(MissingField):
        parse_urdf(other_iface)


def test_bad_numbers_are_rejected():
    bad = PLAIN_MINIMAL.replace('mass value="2.0"', 'mass value="heavy"')
    with pytest.raises(BadNumber):
        parse_urdf(bad)
    short_vec = PLAIN_MINIMAL.replace('axis xyz="0 0 1"', 'axis xyz="0 0"')
    with pytest.raises(BadNumber):
        parse_urdf(short_vec)


def test_unknown_elements_become_warnings():
    text = PLAIN_MINIMAL.replace(
        "</robot>", '<gazebo reference="arm"><kp>1e5</kp></gazebo></robot>')
    model = parse_urdf(text)
    assert any("gazebo" in w for w in model.warnings)


def test_validate_reference_model_is_clean(arm):
    assert validate_model(arm) == []


def _single_error(model, needle):
    diags = [d for d in validate_model(model) if d.severity == "error"]
    assert len(diags) == 1
    assert needle in str(diags[0])


def test_validate_flags_non_unit_axis():
    text = PLAIN_MINIMAL.replace('axis xyz="0 0 1"', 'axis xyz="0 0 2"')
    _single_error(parse_urdf(text), "unit")


def test_validate_flags_inverted_limits():
    text = PLAIN_MINIMAL.replace('lower="-1.0" upper="1.0"',
                                 'lower="1.0" upper="-1.0"')
    _single_error(parse_urdf(text), "limit")


def test_validate_flags_unknown_parent_link():
    text = PLAIN_MINIMAL.replace('<parent link="base" />',
                                 '<parent link="ghost" />')
    diags = validate_model(parse_urdf(text))
    assert any(d.severity == "error" and "ghost" in str(d) for d in diags)


def test_validate_flags_orphan_transmission():
    text = PLAIN_MINIMAL.replace('<joint name="swing">',
                                 '<joint name="nosuch">')
    diags = validate_model(parse_urdf(text))
    assert any(d.severity == "error" and "nosuch" in str(d) for d in diags)


def test_validate_flags_unreachable_link():
    floating = PLAIN_MINIMAL.replace(
        "</robot>",
        """<link name="floater">
             <inertial><mass value="1" />
             <inertia ixx="1" ixy="0" ixz="0" iyy="1" iyz="0" izz="1" /></inertial>
             <visual><geometry><box size="1 1 1" /></geometry></visual>
           </link></robot>""")
    diags = validate_model(parse_urdf(floating))
    assert any(d.severity == "error" and "floater" in str(d) for d in diags)


def test_validate_flags_nonpositive_inertia_diagonal():
    text = PLAIN_MINIMAL.replace('ixx="0.01"', 'ixx="-0.01"')
    diags = validate_model(parse_urdf(text))
    assert any(d.severity == "error" and "inertia" in str(d).lower() for d in diags)


def test_movable_chain_reference(arm):
    names = [j.name for j in movable_chain(arm, "tip")]
    assert names == ["base_to_00", "00_to_01", "01_to_02"]
    # the fixed tool joint shows up only in the full path
    full = [j.name for j in joint_path(arm, "tip")]
    assert full == ["base_to_00", "00_to_01", "01_to_02", "02_to_tip"]
    assert movable_chain(arm, arm.root) == []


def test_movable_chain_unknown_link(arm):
    with pytest.raises(UnknownLink):
        movable_chain(arm, "nope")


def test_unreachable_link_raises():
    floating = PLAIN_MINIMAL.replace(
        "</robot>",
        """<link name="floater">
             <inertial><mass value="1" />
             <inertia ixx="1" ixy="0" ixz="0" iyy="1" iyz="0" izz="1" /></inertial>
             <visual><geometry><box size="1 1 1" /></geometry></visual>
           </link></robot>""")
    model = parse_urdf(floating)
    with pytest.raises(UnreachableLink):
        joint_path(model, "floater")


def test_leaf_links_and_default_tip(arm):
    assert "tip" in leaf_links(arm)
    assert default_tip(arm) == "tip"
    mini = parse_urdf(PLAIN_MINIMAL)
    assert leaf_links(mini) == ["arm"]
    assert default_tip(mini) == "arm"
