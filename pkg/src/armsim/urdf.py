"""URDF-subset parsing, validation and serialization.

Supported document shape: a ``robot`` element containing ``link`` /
``joint`` / ``transmission`` children, plus the course-style macro
elements ``m_link_box`` / ``m_link_mesh`` / ``m_joint`` which are
expanded to the plain form before parsing.  Only revolute and fixed
joints are accepted; mesh geometry is carried as an opaque path.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

import numpy as np

from .transforms import Transform

AXIS_UNIT_TOL = 1e-9


class UrdfError(Exception):
    """Base class for URDF ingestion failures."""


class XmlError(UrdfError):
    """Document is not well-formed XML or is not a robot element."""


class MissingField(UrdfError):
    """A required element/attribute is absent or carries an unsupported value."""


class BadNumber(UrdfError):
    """A numeric attribute failed to parse as a decimal real."""


class UnknownLink(UrdfError):
    """A named link does not exist in the model."""


class UnreachableLink(UrdfError):
    """A link exists but has no joint path from the root."""


@dataclass(frozen=True)
class InertiaTensor:
    """Six independent components of a symmetric inertia tensor, kg*m^2."""

    ixx: float
    ixy: float
    ixz: float
    iyy: float
    iyz: float
    izz: float


@dataclass(frozen=True)
class Box:
    size: tuple[float, float, float]


@dataclass(frozen=True)
class Cylinder:
    radius: float
    length: float


@dataclass(frozen=True)
class MeshRef:
    """Opaque mesh reference; the file is never loaded."""

    path: str
    scale: tuple[float, float, float] = (1.0, 1.0, 1.0)


Geometry = Box | Cylinder | MeshRef


@dataclass(frozen=True)
class Origin:
    """A pose kept as the raw xyz/rpy numbers so re-serialization is exact."""

    xyz: tuple[float, float, float] = (0.0, 0.0, 0.0)
    rpy: tuple[float, float, float] = (0.0, 0.0, 0.0)

    @property
    def transform(self) -> Transform:
        return Transform.from_xyz_rpy(self.xyz, self.rpy)

    def rotation_translation(self) -> tuple[np.ndarray, np.ndarray]:
        """Cached (R, p) pair; the kinematics hot path avoids rebuilding it."""
        cached = getattr(self, "_rp", None)
        if cached is None:
            tf = self.transform
            cached = (tf.rotation, tf.translation)
            object.__setattr__(self, "_rp", cached)
        return cached


@dataclass
class Link:
    name: str
    mass: float
    inertia: InertiaTensor
    inertial_origin: Origin
    geometry: Geometry
    visual_origin: Origin


@dataclass(frozen=True)
class JointLimits:
    lower: float
    upper: float
    effort: float
    velocity: float


REVOLUTE = "revolute"
FIXED = "fixed"


@dataclass
class Joint:
    name: str
    kind: str
    parent: str
    child: str
    origin: Origin
    axis: tuple[float, float, float] | None = None
    limits: JointLimits | None = None


@dataclass(frozen=True)
class Transmission:
    joint: str
    interface: str = "EffortJointInterface"


@dataclass
class RobotModel:
    name: str
    links: list[Link]
    joints: list[Joint]
    transmissions: list[Transmission]
    root: str
    warnings: list[str] = field(default_factory=list, compare=False)

    def link(self, name: str) -> Link:
        for l in self.links:
            if l.name == name:
                return l
        raise UnknownLink(f"link '{name}' not in model")

    def joint(self, name: str) -> Joint:
        for j in self.joints:
            if j.name == name:
                return j
        raise UnknownLink(f"joint '{name}' not in model")

    def has_link(self, name: str) -> bool:
        return any(l.name == name for l in self.links)

    def parent_joint(self, link_name: str) -> Joint | None:
        for j in self.joints:
            if j.child == link_name:
                return j
        return None

    def child_joints(self, link_name: str) -> list[Joint]:
        return [j for j in self.joints if j.parent == link_name]


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.subject}: {self.message}"


# ---------------------------------------------------------------------------
# parsing

def _number(raw: str, where: str) -> float:
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise BadNumber(f"{where}: cannot parse number from {raw!r}") from None
    return value


def _vector(raw: str, where: str, n: int = 3) -> tuple[float, ...]:
    parts = raw.split()
    if len(parts) != n:
        raise BadNumber(f"{where}: expected {n} numbers, got {raw!r}")
    return tuple(_number(p, where) for p in parts)


def _attr(elem: ET.Element, name: str, where: str) -> str:
    raw = elem.get(name)
    if raw is None:
        raise MissingField(f"{where}: missing attribute '{name}'")
    return raw


def _child_origin(elem: ET.Element, where: str) -> Origin:
    origin = elem.find("origin")
    if origin is None:
        return Origin()
    return Origin(xyz=_vector(origin.get("xyz", "0 0 0"), where),
                  rpy=_vector(origin.get("rpy", "0 0 0"), where))


def _expand_macros(robot: ET.Element, warnings: list[str]) -> ET.Element:
    """Rewrite m_link_box / m_link_mesh / m_joint into plain URDF elements.

    m_joint also emits the transmission the course macro bundles with each
    rotation axis, so a macro-form document is spawn-ready as written.
    """
    expanded = ET.Element("robot", dict(robot.attrib))
    for elem in robot:
        tag = elem.tag
        if tag in ("m_link_box", "m_link_mesh"):
            name = _attr(elem, "name", tag)
            link = ET.SubElement(expanded, "link", {"name": name})
            origin = {"xyz": elem.get("origin_xyz", "0 0 0"),
                      "rpy": elem.get("origin_rpy", "0 0 0")}
            inertial = ET.SubElement(link, "inertial")
            ET.SubElement(inertial, "origin", dict(origin))
            ET.SubElement(inertial, "mass", {"value": _attr(elem, "mass", tag)})
            ET.SubElement(inertial, "inertia",
                          {k: _attr(elem, k, f"{tag} '{name}'")
                           for k in ("ixx", "ixy", "ixz", "iyy", "iyz", "izz")})
            visual = ET.SubElement(link, "visual")
            ET.SubElement(visual, "origin", dict(origin))
            geometry = ET.SubElement(visual, "geometry")
            if tag == "m_link_box":
                ET.SubElement(geometry, "box", {"size": _attr(elem, "size", tag)})
            else:
                mesh = {"filename": _attr(elem, "meshfile", tag)}
                if elem.get("meshscale") is not None:
                    mesh["scale"] = elem.get("meshscale")
                ET.SubElement(geometry, "mesh", mesh)
        elif tag == "m_joint":
            name = _attr(elem, "name", tag)
            joint = ET.SubElement(expanded, "joint",
                                  {"name": name, "type": _attr(elem, "type", tag)})
            ET.SubElement(joint, "origin", {"xyz": elem.get("origin_xyz", "0 0 0"),
                                            "rpy": elem.get("origin_rpy", "0 0 0")})
            ET.SubElement(joint, "parent", {"link": _attr(elem, "parent", tag)})
            ET.SubElement(joint, "child", {"link": _attr(elem, "child", tag)})
            if elem.get("axis_xyz") is not None:
                ET.SubElement(joint, "axis", {"xyz": elem.get("axis_xyz")})
            if elem.get("limit_l") is not None or elem.get("type") == REVOLUTE:
                ET.SubElement(joint, "limit",
                              {"lower": _attr(elem, "limit_l", tag),
                               "upper": _attr(elem, "limit_u", tag),
                               "effort": _attr(elem, "limit_e", tag),
                               "velocity": _attr(elem, "limit_v", tag)})
            if elem.get("type") == REVOLUTE:
                trans = ET.SubElement(expanded, "transmission",
                                      {"name": f"{name}_transmission"})
                ET.SubElement(trans, "type").text = "transmission_interface/SimpleTransmission"
                tj = ET.SubElement(trans, "joint", {"name": name})
                ET.SubElement(tj, "hardwareInterface").text = "EffortJointInterface"
                ET.SubElement(trans, "actuator", {"name": f"{name}_motor"})
        elif tag in ("link", "joint", "transmission"):
            expanded.append(elem)
        else:
            warnings.append(f"ignored unknown element <{tag}>")
    return expanded


def _parse_geometry(geom_elem: ET.Element, where: str) -> Geometry:
    shapes = list(geom_elem)
    if not shapes:
        raise MissingField(f"{where}: empty geometry element")
    shape = shapes[0]
    if shape.tag == "box":
        return Box(size=_vector(_attr(shape, "size", where), where))
    if shape.tag == "cylinder":
        return Cylinder(radius=_number(_attr(shape, "radius", where), where),
                        length=_number(_attr(shape, "length", where), where))
    if shape.tag == "mesh":
        scale = shape.get("scale")
        return MeshRef(path=_attr(shape, "filename", where),
                       scale=_vector(scale, where) if scale else (1.0, 1.0, 1.0))
    raise MissingField(f"{where}: unsupported geometry <{shape.tag}>")


def _parse_link(elem: ET.Element) -> Link:
    name = _attr(elem, "name", "link")
    where = f"link '{name}'"
    inertial = elem.find("inertial")
    if inertial is None:
        raise MissingField(f"{where}: missing inertial element")
    mass_elem = inertial.find("mass")
    if mass_elem is None:
        raise MissingField(f"{where}: missing mass")
    mass = _number(_attr(mass_elem, "value", where), where)
    inertia_elem = inertial.find("inertia")
    if inertia_elem is None:
        raise MissingField(f"{where}: missing inertia")
    inertia = InertiaTensor(**{k: _number(_attr(inertia_elem, k, where), where)
                               for k in ("ixx", "ixy", "ixz", "iyy", "iyz", "izz")})
    visual = elem.find("visual")
    if visual is None:
        raise MissingField(f"{where}: missing visual element")
    geom_elem = visual.find("geometry")
    if geom_elem is None:
        raise MissingField(f"{where}: missing geometry")
    return Link(name=name,
                mass=mass,
                inertia=inertia,
                inertial_origin=_child_origin(inertial, where),
                geometry=_parse_geometry(geom_elem, where),
                visual_origin=_child_origin(visual, where))


def _parse_joint(elem: ET.Element) -> Joint:
    name = _attr(elem, "name", "joint")
    where = f"joint '{name}'"
    kind = _attr(elem, "type", where)
    if kind not in (REVOLUTE, FIXED):
        raise MissingField(f"{where}: unsupported joint type '{kind}' "
                           f"(only revolute and fixed)")
    parent = elem.find("parent")
    child = elem.find("child")
    if parent is None or child is None:
        raise MissingField(f"{where}: missing parent/child")
    joint = Joint(name=name,
                  kind=kind,
                  parent=_attr(parent, "link", where),
                  child=_attr(child, "link", where),
                  origin=_child_origin(elem, where))
    if kind == REVOLUTE:
        axis_elem = elem.find("axis")
        if axis_elem is None:
            raise MissingField(f"{where}: revolute joint needs an axis")
        joint.axis = _vector(_attr(axis_elem, "xyz", where), where)
        limit = elem.find("limit")
        if limit is None:
            raise MissingField(f"{where}: revolute joint needs limits")
        joint.limits = JointLimits(
            lower=_number(_attr(limit, "lower", where), where),
            upper=_number(_attr(limit, "upper", where), where),
            effort=_number(_attr(limit, "effort", where), where),
            velocity=_number(_attr(limit, "velocity", where), where))
    return joint


def _parse_transmission(elem: ET.Element) -> Transmission:
    name = elem.get("name", "transmission")
    joint_elem = elem.find("joint")
    if joint_elem is None:
        raise MissingField(f"transmission '{name}': missing joint")
    iface_elem = joint_elem.find("hardwareInterface")
    interface = "EffortJointInterface" if iface_elem is None else (iface_elem.text or "").strip()
    # both the bare spelling and the hardware_interface/-namespaced one are accepted
    if interface.split("/")[-1] != "EffortJointInterface":
        raise MissingField(f"transmission '{name}': unsupported hardware interface "
                           f"'{interface}'")
    return Transmission(joint=_attr(joint_elem, "name", f"transmission '{name}'"))


def parse_urdf(text: str) -> RobotModel:
    """Parse a URDF-subset document into a RobotModel.

    Unknown elements are skipped and reported on ``model.warnings``.
    Raises XmlError / MissingField / BadNumber; structural problems beyond
    that (bad topology, non-unit axes, ...) are left to validate_model.
    """
    try:
        root_elem = ET.fromstring(text)
    except ET.ParseError as exc:
        raise XmlError(f"malformed XML: {exc}") from None
    if root_elem.tag != "robot":
        raise XmlError(f"expected <robot> document, got <{root_elem.tag}>")
    warnings: list[str] = []
    robot = _expand_macros(root_elem, warnings)
    name = robot.get("name")
    if name is None:
        raise MissingField("robot: missing name attribute")

    links: list[Link] = []
    joints: list[Joint] = []
    transmissions: list[Transmission] = []
    for elem in robot:
        if elem.tag == "link":
            links.append(_parse_link(elem))
        elif elem.tag == "joint":
            joints.append(_parse_joint(elem))
        elif elem.tag == "transmission":
            transmissions.append(_parse_transmission(elem))

    children = {j.child for j in joints}
    roots = [l.name for l in links if l.name not in children]
    root = roots[0] if roots else (links[0].name if links else "")
    return RobotModel(name=name, links=links, joints=joints,
                      transmissions=transmissions, root=root, warnings=warnings)


# ---------------------------------------------------------------------------
# serialization

def _fmt(value: float) -> str:
    return repr(float(value))


def _fmt_vec(values) -> str:
    return " ".join(_fmt(v) for v in values)


def _origin_elem(parent: ET.Element, origin: Origin) -> None:
    ET.SubElement(parent, "origin", {"xyz": _fmt_vec(origin.xyz),
                                     "rpy": _fmt_vec(origin.rpy)})


def serialize_urdf(model: RobotModel) -> str:
    """Plain-form URDF text whose parse is structurally equal to ``model``.

    Numbers use shortest round-trippable decimals, so parse(serialize(m))
    reproduces every field exactly.
    """
    robot = ET.Element("robot", {"name": model.name})
    for link in model.links:
        le = ET.SubElement(robot, "link", {"name": link.name})
        inertial = ET.SubElement(le, "inertial")
        _origin_elem(inertial, link.inertial_origin)
        ET.SubElement(inertial, "mass", {"value": _fmt(link.mass)})
        ET.SubElement(inertial, "inertia",
                      {k: _fmt(getattr(link.inertia, k))
                       for k in ("ixx", "ixy", "ixz", "iyy", "iyz", "izz")})
        visual = ET.SubElement(le, "visual")
        _origin_elem(visual, link.visual_origin)
        geometry = ET.SubElement(visual, "geometry")
        g = link.geometry
        if isinstance(g, Box):
            ET.SubElement(geometry, "box", {"size": _fmt_vec(g.size)})
        elif isinstance(g, Cylinder):
            ET.SubElement(geometry, "cylinder", {"radius": _fmt(g.radius),
                                                 "length": _fmt(g.length)})
        else:
            ET.SubElement(geometry, "mesh", {"filename": g.path,
                                             "scale": _fmt_vec(g.scale)})
    for joint in model.joints:
        je = ET.SubElement(robot, "joint", {"name": joint.name, "type": joint.kind})
        _origin_elem(je, joint.origin)
        ET.SubElement(je, "parent", {"link": joint.parent})
        ET.SubElement(je, "child", {"link": joint.child})
        if joint.kind == REVOLUTE:
            ET.SubElement(je, "axis", {"xyz": _fmt_vec(joint.axis)})
            ET.SubElement(je, "limit", {"lower": _fmt(joint.limits.lower),
                                        "upper": _fmt(joint.limits.upper),
                                        "effort": _fmt(joint.limits.effort),
                                        "velocity": _fmt(joint.limits.velocity)})
    for trans in model.transmissions:
        te = ET.SubElement(robot, "transmission", {"name": f"{trans.joint}_transmission"})
        ET.SubElement(te, "type").text = "transmission_interface/SimpleTransmission"
        tj = ET.SubElement(te, "joint", {"name": trans.joint})
        ET.SubElement(tj, "hardwareInterface").text = trans.interface
        ET.SubElement(te, "actuator", {"name": f"{trans.joint}_motor"})
    ET.indent(robot)
    return ET.tostring(robot, encoding="unicode")


# ---------------------------------------------------------------------------
# validation

def validate_model(model: RobotModel) -> list[Diagnostic]:
    """Check every structural invariant; returns one diagnostic per violation.

    An empty list means the model is simulation-ready.
    """
    diags: list[Diagnostic] = []

    def error(subject: str, message: str) -> None:
        diags.append(Diagnostic("error", subject, message))

    seen_links: set[str] = set()
    for link in model.links:
        if link.name in seen_links:
            error(link.name, "duplicate link name")
        seen_links.add(link.name)
        for comp in ("ixx", "iyy", "izz"):
            if getattr(link.inertia, comp) <= 0.0:
                error(link.name, f"inertia {comp} must be positive")

    seen_joints: set[str] = set()
    parent_counts: dict[str, int] = {}
    for joint in model.joints:
        if joint.name in seen_joints:
            error(joint.name, "duplicate joint name")
        seen_joints.add(joint.name)
        if joint.parent == joint.child:
            error(joint.name, "parent and child are the same link")
        for side, link_name in (("parent", joint.parent), ("child", joint.child)):
            if not model.has_link(link_name):
                error(joint.name, f"{side} link '{link_name}' does not exist")
        parent_counts[joint.child] = parent_counts.get(joint.child, 0) + 1
        if joint.kind == REVOLUTE:
            if abs(np.linalg.norm(joint.axis) - 1.0) > AXIS_UNIT_TOL:
                error(joint.name, "axis not unit length")
            lim = joint.limits
            if lim.lower >= lim.upper:
                error(joint.name, "limits inverted (lower >= upper)")
            if lim.effort <= 0.0:
                error(joint.name, "effort limit must be positive")
            if lim.velocity <= 0.0:
                error(joint.name, "velocity limit must be positive")

    for link_name, n in parent_counts.items():
        if n > 1:
            error(link_name, f"link has {n} parent joints (not a tree)")
    if model.has_link(model.root) and model.root in parent_counts:
        error(model.root, "root link has a parent joint")

    # reachability from the root (cycle segments are unreachable)
    children_of: dict[str, list[str]] = {}
    for joint in model.joints:
        children_of.setdefault(joint.parent, []).append(joint.child)
    reachable = set()
    stack = [model.root]
    while stack:
        current = stack.pop()
        if current in reachable:
            continue
        reachable.add(current)
        stack.extend(children_of.get(current, []))
    for link in model.links:
        if link.name not in reachable:
            error(link.name, "link not reachable from the root (cycle or orphan)")
        elif _is_movable(model, link.name) and link.mass <= 0.0:
            error(link.name, "movable link must have positive mass")

    joint_kinds = {j.name: j.kind for j in model.joints}
    for trans in model.transmissions:
        if trans.joint not in joint_kinds:
            error(trans.joint, "transmission references a missing joint")
        elif joint_kinds[trans.joint] != REVOLUTE:
            error(trans.joint, "transmission on a non-revolute joint")

    return diags


def _is_movable(model: RobotModel, link_name: str) -> bool:
    """A link is movable when some joint on its path to the root is revolute."""
    current = link_name
    hops = 0
    while current != model.root and hops <= len(model.joints):
        joint = model.parent_joint(current)
        if joint is None:
            return False
        if joint.kind == REVOLUTE:
            return True
        current = joint.parent
        hops += 1
    return False


# ---------------------------------------------------------------------------
# chain extraction

def joint_path(model: RobotModel, tip_link: str) -> list[Joint]:
    """All joints (fixed included) from the root to ``tip_link``, base first."""
    if not model.has_link(tip_link):
        raise UnknownLink(f"link '{tip_link}' not in model")
    path: list[Joint] = []
    current = tip_link
    hops = 0
    while current != model.root:
        joint = model.parent_joint(current)
        if joint is None or hops > len(model.joints):
            raise UnreachableLink(f"link '{tip_link}' has no path to root "
                                  f"'{model.root}'")
        path.append(joint)
        current = joint.parent
        hops += 1
    path.reverse()
    return path


def movable_chain(model: RobotModel, tip_link: str) -> list[Joint]:
    """The revolute joints from the root to ``tip_link``, base first."""
    return [j for j in joint_path(model, tip_link) if j.kind == REVOLUTE]


def leaf_links(model: RobotModel) -> list[str]:
    parents = {j.parent for j in model.joints}
    return [l.name for l in model.links if l.name not in parents]


def default_tip(model: RobotModel) -> str:
    """The deepest leaf link; what fk/ik work on when no tip is named."""
    best = model.root
    best_depth = 0
    for leaf in leaf_links(model):
        try:
            depth = len(joint_path(model, leaf))
        except UnreachableLink:
            continue
        if depth > best_depth:
            best, best_depth = leaf, depth
    return best
