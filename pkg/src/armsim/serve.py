"""Websocket bridge between a running simulation and the browser panel.

One JSON text frame per message, each self-describing via its "kind"
field: ModelDescription (once per connection), State (streamed at the
publish rate), Command (client to server), Error (server to client,
connection kept). The simulation is paced to the wall clock here;
slow clients lose oldest frames first and never stall the loop.
"""

from __future__ import annotations

import asyncio
import json
import math
import sys

from .bus import MessageKind
from .kinematics import Unreachable, fk, ik_3dof, ik_dls, verify_ik
from .reference import arm_params_of
from .sim import Simulation
from .urdf import Box, Cylinder, Joint, MeshRef, default_tip, movable_chain

CLIENT_QUEUE_FRAMES = 16
IK_SERVE_TOL = 1e-6


def _origin_doc(origin) -> dict:
    return {"xyz": list(origin.xyz), "rpy": list(origin.rpy)}


def _geometry_doc(geometry) -> dict:
    if isinstance(geometry, Box):
        return {"type": "box", "size": list(geometry.size)}
    if isinstance(geometry, Cylinder):
        return {"type": "cylinder", "radius": geometry.radius,
                "length": geometry.length}
    assert isinstance(geometry, MeshRef)
    return {"type": "mesh", "meshpath": geometry.path, "scale": list(geometry.scale)}


def model_description(simulation: Simulation) -> dict:
    """The one-time frame a client needs to rebuild the kinematic chain."""
    model = simulation.model
    joints = []
    fixed = []
    for joint in model.joints:
        if joint.kind == "revolute":
            joints.append({
                "name": joint.name,
                "parent": joint.parent,
                "child": joint.child,
                "axis": list(joint.axis),
                "origin": _origin_doc(joint.origin),
                "lower": joint.limits.lower,
                "upper": joint.limits.upper,
            })
        else:
            fixed.append({
                "name": joint.name,
                "parent": joint.parent,
                "child": joint.child,
                "origin": _origin_doc(joint.origin),
            })
    links = [{"name": link.name,
              "geometry": _geometry_doc(link.geometry),
              "origin": _origin_doc(link.visual_origin)}
             for link in model.links]
    return {
        "kind": "ModelDescription",
        "namespace": simulation.controllers.namespace,
        "root": model.root,
        "tip": default_tip(model),
        "joints": joints,
        "fixed": fixed,
        "links": links,
    }


class _Client:
    """Per-connection outbound queue; congestion drops oldest frames."""

    def __init__(self):
        self.queue: asyncio.Queue[str] = asyncio.Queue(maxsize=CLIENT_QUEUE_FRAMES)

    def offer(self, frame: str) -> None:
        while True:
            try:
                self.queue.put_nowait(frame)
                return
            except asyncio.QueueFull:
                try:
                    self.queue.get_nowait()
                except asyncio.QueueEmpty:
                    pass


class ServeSession:
    def __init__(self, simulation: Simulation):
        self.simulation = simulation
        self.clients: set[_Client] = set()
        self.chain: list[Joint] = movable_chain(simulation.model,
                                                default_tip(simulation.model))
        self.state_sub = simulation.bus.subscribe(simulation.state_topic,
                                                  MessageKind.JOINT_STATE)
        self.model_frame = json.dumps(model_description(simulation))

    # -- outbound ------------------------------------------------------

    def _state_frame(self, msg) -> str:
        sim = self.simulation
        chain_q = [sim.states[j.name].q for j in self.chain]
        tip = fk(sim.model, self.chain, chain_q).translation
        return json.dumps({
            "kind": "State",
            "t": msg.t,
            "names": list(msg.names),
            "q": list(msg.q),
            "qd": list(msg.qd),
            "effort": list(msg.effort),
            "target": [sim.targets[name] for name in msg.names],
            "tip": [tip[0], tip[1], tip[2]],
        })

    async def run_simulation(self) -> None:
        """Wall-clock-paced loop: one publish interval per wakeup."""
        sim = self.simulation
        period = sim.publish_divisor * sim.cfg.dt
        loop = asyncio.get_running_loop()
        next_wake = loop.time()
        while True:
            for _ in range(sim.publish_divisor):
                sim.step()
            for msg in self.state_sub.drain():
                frame = self._state_frame(msg)
                for client in self.clients:
                    client.offer(frame)
            next_wake += period
            await asyncio.sleep(max(0.0, next_wake - loop.time()))

    # -- inbound -------------------------------------------------------

    def _apply_joint_command(self, doc: dict) -> str | None:
        name = doc.get("joint")
        target = doc.get("target")
        if not isinstance(name, str):
            return "Command.joint must be a string"
        if not isinstance(target, (int, float)) or isinstance(target, bool) \
                or not math.isfinite(target):
            return f"Command.target must be a finite number, got {target!r}"
        if name not in self.simulation.targets:
            return f"unknown joint '{name}'"
        try:
            self.simulation.command(name, float(target))
        except Exception as exc:  # uncontrolled joint
            return str(exc)
        return None

    def _apply_ik_command(self, doc: dict) -> str | None:
        raw = doc.get("ik_target")
        if (not isinstance(raw, (list, tuple)) or len(raw) != 3
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                           and math.isfinite(v) for v in raw)):
            return f"Command.ik_target must be three finite numbers, got {raw!r}"
        sim = self.simulation
        target = [float(v) for v in raw]
        q_now = [sim.states[j.name].q for j in self.chain]
        solution_q = None
        try:
            params = arm_params_of(sim.model, self.chain)
        except ValueError:
            params = None
        if params is not None:
            try:
                solutions = ik_3dof(params, target, [j.limits for j in self.chain])
            except Unreachable:
                return "unreachable"
            solutions = [s for s in solutions
                         if verify_ik(sim.model, self.chain, s.q, target, IK_SERVE_TOL)]
            if not solutions:
                return "unreachable"
            solution_q = min(solutions,
                             key=lambda s: sum((a - b) ** 2
                                               for a, b in zip(s.q, q_now))).q
        else:
            sol = ik_dls(sim.model, self.chain, q_now, target)
            if not sol.verified:
                return "unreachable"
            solution_q = sol.q
        for joint, angle in zip(self.chain, solution_q):
            try:
                sim.command(joint.name, float(angle))
            except Exception as exc:
                return str(exc)
        return None

    def apply_frame(self, raw: str) -> str | None:
        """Returns an error message for the client, or None when accepted."""
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            return f"bad JSON: {exc.msg}"
        if not isinstance(doc, dict) or doc.get("kind") != "Command":
            return "expected a frame with kind 'Command'"
        if "joint" in doc:
            return self._apply_joint_command(doc)
        if "ik_target" in doc:
            return self._apply_ik_command(doc)
        return "Command needs either 'joint' or 'ik_target'"

    # -- connection handling --------------------------------------------

    async def handle(self, connection) -> None:
        client = _Client()
        await connection.send(self.model_frame)
        self.clients.add(client)

        async def pump():
            while True:
                await connection.send(await client.queue.get())

        sender = asyncio.create_task(pump())
        try:
            async for raw in connection:
                error = self.apply_frame(raw)
                if error is not None:
                    await connection.send(json.dumps({"kind": "Error",
                                                      "message": error}))
        finally:
            sender.cancel()
            self.clients.discard(client)


async def serve_forever(simulation: Simulation, port: int = 8765,
                        host: str = "127.0.0.1") -> None:
    from websockets.asyncio.server import serve

    session = ServeSession(simulation)
    sim_task = asyncio.create_task(session.run_simulation())
    try:
        async with serve(session.handle, host, port) as server:
            print(f"serving ws://{host}:{port}", file=sys.stderr, flush=True)
            await server.serve_forever()
    finally:
        sim_task.cancel()
