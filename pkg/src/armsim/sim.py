"""Deterministic fixed-timestep simulation wired to the bus.

spawn() plays the role of the spawner node: it refuses to bring up a
model whose controllers lack transmissions, then wires one command
topic per controller and a joint-state topic. step() drains commands,
runs PID and the joint dynamics at every dt, and publishes state at
the configured rate. Identical inputs produce byte-identical traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import yaml

from .bus import Bus, JointStateMsg, MessageKind, ScalarCommand, Subscription
from .control import (JointSimState, PidGains, PidState, gravity_torque,
                      joint_step, pid_step)
from .urdf import REVOLUTE, Joint, RobotModel, validate_model

STATE_CONTROLLER_TYPE = "joint_state_controller/JointStateController"
POSITION_CONTROLLER_TYPE = "effort_controllers/JointPositionController"


class ParseError(Exception):
    """Controller config text does not have the expected shape."""


class UnknownControllerType(ParseError):
    """Controller block names a type outside the supported two."""


class SpawnError(Exception):
    """Model/controller combination cannot be brought up."""


class InvalidModel(SpawnError):
    """validate_model reported errors."""


class MissingTransmission(SpawnError):
    def __init__(self, joint: str):
        super().__init__(f"controller joint '{joint}' has no transmission")
        self.joint = joint


class UnknownJoint(SpawnError):
    def __init__(self, joint: str, reason: str = "not in the model"):
        super().__init__(f"controller joint '{joint}' {reason}")
        self.joint = joint


@dataclass(frozen=True)
class ControllerSpec:
    name: str
    joint: str
    gains: PidGains


@dataclass(frozen=True)
class ControllerSet:
    namespace: str
    state_publish_rate: float
    controllers: tuple[ControllerSpec, ...]


def _require_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: expected a number, got {value!r}")
    return float(value)


def parse_controllers(text: str) -> ControllerSet:
    """Parse the course controller-config format.

    Both layouts in the wild are accepted: the namespace line followed by
    flush-left controller blocks, and the fully nested form where blocks
    are indented under the namespace.
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"bad controller config: {exc}") from None
    if not isinstance(doc, dict) or not doc:
        raise ParseError("config must hold a namespace and controller blocks")

    keys = list(doc)
    if len(keys) == 1 and isinstance(doc[keys[0]], dict):
        namespace, blocks = keys[0], doc[keys[0]]
    else:
        namespace = None
        blocks = {}
        for key, value in doc.items():
            if value is None and namespace is None:
                namespace = key
            elif isinstance(value, dict):
                blocks[key] = value
            else:
                raise ParseError(f"unexpected entry '{key}'")
        if namespace is None:
            raise ParseError("missing namespace line")
    if not isinstance(namespace, str) or not namespace:
        raise ParseError(f"namespace must be a non-empty name, got {namespace!r}")

    rate = None
    controllers: list[ControllerSpec] = []
    for name, block in blocks.items():
        where = f"controller '{name}'"
        if not isinstance(block, dict):
            raise ParseError(f"{where}: block must be a mapping")
        kind = block.get("type")
        if kind is None:
            raise ParseError(f"{where}: missing type")
        if kind == STATE_CONTROLLER_TYPE:
            if rate is not None:
                raise ParseError("more than one joint-state publisher")
            if "publish_rate" not in block:
                raise ParseError(f"{where}: missing publish_rate")
            rate = _require_number(block["publish_rate"], where)
            if rate <= 0.0:
                raise ParseError(f"{where}: publish_rate must be positive")
        elif kind == POSITION_CONTROLLER_TYPE:
            joint = block.get("joint")
            if not isinstance(joint, str) or not joint:
                raise ParseError(f"{where}: missing joint")
            pid = block.get("pid")
            if not isinstance(pid, dict):
                raise ParseError(f"{where}: missing pid mapping")
            try:
                gains = PidGains(p=_require_number(pid.get("p"), where),
                                 i=_require_number(pid.get("i"), where),
                                 d=_require_number(pid.get("d"), where))
            except ValueError as exc:
                raise ParseError(f"{where}: {exc}") from None
            controllers.append(ControllerSpec(name=name, joint=joint, gains=gains))
        else:
            raise UnknownControllerType(f"{where}: unsupported type '{kind}'")
    if rate is None:
        raise ParseError("missing joint-state publisher block")
    joints = [c.joint for c in controllers]
    for joint in joints:
        if joints.count(joint) > 1:
            raise ParseError(f"joint '{joint}' has more than one controller")
    return ControllerSet(namespace=namespace, state_publish_rate=rate,
                         controllers=tuple(controllers))


@dataclass(frozen=True)
class JointPhysics:
    inertia: float = 1.0
    damping: float = 1.0


@dataclass
class SimConfig:
    dt: float = 1e-3
    gravity: float = 0.0
    physics: dict[str, JointPhysics] = field(default_factory=dict)
    duration_cap: float | None = None

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.gravity < 0.0:
            raise ValueError(f"gravity must be non-negative, got {self.gravity}")


@dataclass
class TraceSummary:
    steps: int
    final: JointStateMsg


class Simulation:
    """One spawned model stepping at fixed dt; confined to a single thread."""

    def __init__(self, model: RobotModel, controllers: ControllerSet,
                 cfg: SimConfig, bus: Bus):
        diagnostics = [d for d in validate_model(model) if d.severity == "error"]
        if diagnostics:
            raise InvalidModel("; ".join(str(d) for d in diagnostics))
        if cfg.dt > 1.0 / controllers.state_publish_rate:
            raise ValueError(f"dt {cfg.dt} exceeds the state publish interval "
                             f"{1.0 / controllers.state_publish_rate}")

        transmitted = {t.joint for t in model.transmissions}
        by_name = {j.name: j for j in model.joints}
        for spec in controllers.controllers:
            joint = by_name.get(spec.joint)
            if joint is None:
                raise UnknownJoint(spec.joint)
            if joint.kind != REVOLUTE:
                raise UnknownJoint(spec.joint, reason="is not a revolute joint")
            if spec.joint not in transmitted:
                raise MissingTransmission(spec.joint)

        self.model = model
        self.controllers = controllers
        self.cfg = cfg
        self.bus = bus
        self.joints: list[Joint] = [j for j in model.joints if j.kind == REVOLUTE]
        self.joint_names: list[str] = [j.name for j in self.joints]
        controlled = {spec.joint for spec in controllers.controllers}
        self.warnings: list[str] = [
            f"joint '{name}' has a transmission but no controller; it will be passive"
            for name in self.joint_names
            if name in transmitted and name not in controlled]

        self.states: dict[str, JointSimState] = {}
        self.targets: dict[str, float] = {}
        for joint in self.joints:
            physics = cfg.physics.get(joint.name, JointPhysics())
            q0 = min(joint.limits.upper, max(joint.limits.lower, 0.0))
            self.states[joint.name] = JointSimState(
                q=q0, qd=0.0, inertia=physics.inertia, damping=physics.damping)
            self.targets[joint.name] = q0

        self.gains: dict[str, PidGains] = {}
        self.pid_states: dict[str, PidState] = {}
        self.command_subs: dict[str, tuple[str, Subscription]] = {}
        ns = controllers.namespace
        for spec in controllers.controllers:
            joint = by_name[spec.joint]
            self.gains[spec.joint] = spec.gains
            self.pid_states[spec.joint] = PidState.for_effort_limit(
                spec.gains, joint.limits.effort)
            sub = bus.subscribe(f"/{ns}/{spec.name}/command",
                                MessageKind.SCALAR_COMMAND)
            self.command_subs[spec.name] = (spec.joint, sub)
        self.state_topic = f"/{ns}/joint_states"
        self.state_pub = bus.advertise(self.state_topic, MessageKind.JOINT_STATE)

        self.publish_divisor = max(1, round((1.0 / controllers.state_publish_rate) / cfg.dt))
        self.t = 0.0
        self.step_count = 0
        self._command_pubs = {
            spec.name: bus.advertise(f"/{ns}/{spec.name}/command",
                                     MessageKind.SCALAR_COMMAND)
            for spec in controllers.controllers}
        self._controller_of_joint = {spec.joint: spec.name
                                     for spec in controllers.controllers}

    # -- commands ----------------------------------------------------------

    def command(self, joint_name: str, value: float) -> None:
        """Publish a position command the way an external node would."""
        controller = self._controller_of_joint.get(joint_name)
        if controller is None:
            raise UnknownJoint(joint_name, reason="has no position controller")
        self._command_pubs[controller].publish(ScalarCommand(float(value)))

    def _drain_commands(self) -> None:
        by_name = {j.name: j for j in self.joints}
        for joint_name, sub in self.command_subs.values():
            messages = sub.drain()
            if not messages:
                continue
            value = messages[-1].value  # last write wins within one step
            limits = by_name[joint_name].limits
            self.targets[joint_name] = min(limits.upper, max(limits.lower, value))

    # -- stepping ----------------------------------------------------------

    def snapshot(self) -> JointStateMsg:
        return JointStateMsg(
            t=self.t,
            names=tuple(self.joint_names),
            q=tuple(self.states[n].q for n in self.joint_names),
            qd=tuple(self.states[n].qd for n in self.joint_names),
            effort=tuple(self.states[n].last_effort for n in self.joint_names))

    def step(self) -> JointStateMsg | None:
        """Advance one dt; returns the JointStateMsg if this step published."""
        self._drain_commands()
        if self.cfg.gravity > 0.0:
            q = [self.states[n].q for n in self.joint_names]
            g_vec = gravity_torque(self.model, self.joints, q, self.cfg.gravity)
        else:
            g_vec = [0.0] * len(self.joints)
        for i, joint in enumerate(self.joints):
            state = self.states[joint.name]
            if joint.name in self.gains:
                error = self.targets[joint.name] - state.q
                effort = pid_step(self.gains[joint.name],
                                  self.pid_states[joint.name], error, self.cfg.dt)
            else:
                effort = 0.0
            self.states[joint.name] = joint_step(
                state, effort, joint.limits.effort, joint.limits, self.cfg.dt,
                gravity_term=float(g_vec[i]))
        self.step_count += 1
        self.t = self.step_count * self.cfg.dt
        if self.step_count % self.publish_divisor == 0:
            msg = self.snapshot()
            self.state_pub.publish(msg)
            return msg
        return None

    def trace_header(self) -> str:
        columns = ["t"]
        for name in self.joint_names:
            columns += [f"{name}_q", f"{name}_qd", f"{name}_effort", f"{name}_target"]
        return ",".join(columns)

    def trace_row(self, msg: JointStateMsg) -> str:
        cells = [repr(msg.t)]
        for i, name in enumerate(msg.names):
            cells += [repr(msg.q[i]), repr(msg.qd[i]), repr(msg.effort[i]),
                      repr(self.targets[name])]
        return ",".join(cells)

    def run(self, duration: float, trace=None, commands=None) -> TraceSummary:
        """Run floor(duration/dt) steps, writing one trace row per publish.

        commands is an optional schedule of (time_s, joint, value) triples;
        each is published on the joint's command topic just before the step
        nearest its timestamp.
        """
        if duration < 0.0:
            raise ValueError(f"duration must be non-negative, got {duration}")
        if self.cfg.duration_cap is not None:
            duration = min(duration, self.cfg.duration_cap)
        steps = math.floor(duration / self.cfg.dt + 1e-9)
        schedule: dict[int, list[tuple[str, float]]] = {}
        for t_cmd, joint, value in commands or ():
            index = min(max(round(t_cmd / self.cfg.dt), 0), max(steps - 1, 0))
            schedule.setdefault(index, []).append((joint, value))
        if trace is not None:
            trace.write(self.trace_header() + "\n")
        for k in range(steps):
            for joint, value in schedule.get(k, ()):
                self.command(joint, value)
            msg = self.step()
            if msg is not None and trace is not None:
                trace.write(self.trace_row(msg) + "\n")
        return TraceSummary(steps=steps, final=self.snapshot())


def spawn(model: RobotModel, controllers: ControllerSet, cfg: SimConfig,
          bus: Bus) -> Simulation:
    """Bring the model up on the bus; the spawner-node analog."""
    return Simulation(model, controllers, cfg, bus)


def step(sim: Simulation) -> JointStateMsg | None:
    return sim.step()


def run(sim: Simulation, duration: float, trace=None, commands=None) -> TraceSummary:
    return sim.run(duration, trace=trace, commands=commands)
