"""Command-line front end.

Subcommands cover the project stages: validate (model checking), fk,
ik (geometric or damped least squares, both FK-verified), run (batch
simulation to a CSV trace) and serve (websocket bridge for the panel).

Exit codes are a contract: 0 ok, 1 usage/dimension, 2 I/O or parse
failure, 3 IK failure, 4 spawn failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .bus import Bus
from .kinematics import (DimensionMismatch, Unreachable, ik_3dof, ik_dls,
                         link_poses, verify_ik)
from .reference import arm_params_of
from .sim import ParseError, SimConfig, SpawnError, parse_controllers, spawn
from .urdf import RobotModel, UrdfError, XmlError, default_tip, movable_chain, parse_urdf, validate_model

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_IK = 3
EXIT_SPAWN = 4

IK_PRINT_TOL = 1e-6


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    """argparse, but usage errors exit 1 instead of 2 (2 means I/O here)."""

    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(raw: str, what: str) -> list[float]:
    try:
        return [float(part) for part in raw.split(",") if part != ""]
    except ValueError:
        raise _Fail(EXIT_USAGE, f"cannot parse {what} from {raw!r}") from None


def _load_model(path: str) -> RobotModel:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return parse_urdf(text)
    except UrdfError as exc:
        raise _Fail(EXIT_IO, f"{path}: {exc}") from None


def _load_controllers(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return parse_controllers(text)
    except ParseError as exc:
        raise _Fail(EXIT_IO, f"{path}: {exc}") from None


def _model_chain(args):
    model = _load_model(args.urdf)
    tip = getattr(args, "tip", None) or default_tip(model)
    try:
        chain = movable_chain(model, tip)
    except UrdfError as exc:
        raise _Fail(EXIT_USAGE, str(exc)) from None
    return model, chain, tip


def cmd_validate(args) -> int:
    model = _load_model(args.urdf)
    diagnostics = validate_model(model)
    for warning in model.warnings:
        print(f"warning: {warning}")
    for diag in diagnostics:
        print(diag)
    has_errors = any(d.severity == "error" for d in diagnostics)
    return EXIT_USAGE if has_errors else EXIT_OK


def cmd_fk(args) -> int:
    model, chain, tip = _model_chain(args)
    q = _floats(args.q, "--q")
    try:
        pose = link_poses(model, chain, q)[tip]
    except DimensionMismatch as exc:
        raise _Fail(EXIT_USAGE, str(exc)) from None
    x, y, z = pose.translation
    roll, pitch, yaw = pose.rpy()
    print(f"{x:.6f} {y:.6f} {z:.6f} {roll:.6f} {pitch:.6f} {yaw:.6f}")
    return EXIT_OK


def _print_solution(q, suffix: str) -> None:
    angles = " ".join(f"{angle:.6f}" for angle in q)
    print(f"{angles} {suffix}")


def cmd_ik(args) -> int:
    model, chain, _tip = _model_chain(args)
    target = _floats(args.target, "--target")
    if len(target) != 3:
        raise _Fail(EXIT_USAGE, f"--target needs x,y,z, got {args.target!r}")
    target = np.array(target)

    if args.method == "geometric":
        try:
            params = arm_params_of(model, chain)
        except ValueError as exc:
            raise _Fail(EXIT_USAGE, str(exc)) from None
        limits = [j.limits for j in chain]
        try:
            solutions = ik_3dof(params, target, limits)
        except Unreachable:
            solutions = []
        if not solutions:
            print("UNREACHABLE")
            return EXIT_IK
        for sol in solutions:
            verified = verify_ik(model, chain, sol.q, target, IK_PRINT_TOL)
            labels = f"base={sol.branch.base} elbow={sol.branch.elbow}"
            if sol.singular:
                labels += " singular"
            _print_solution(sol.q, f"{labels} {'verified' if verified else 'unverified'}")
        return EXIT_OK

    q0 = _floats(args.q0, "--q0") if args.q0 else [0.0] * len(chain)
    try:
        sol = ik_dls(model, chain, q0, target)
    except DimensionMismatch as exc:
        raise _Fail(EXIT_USAGE, str(exc)) from None
    if not sol.verified:
        print("UNREACHABLE")
        return EXIT_IK
    _print_solution(sol.q, f"dls iterations={sol.iterations} verified")
    return EXIT_OK


def _parse_command_arg(raw: str) -> tuple[float, str, float]:
    parts = raw.split(",")
    if len(parts) != 3:
        raise _Fail(EXIT_USAGE, f"--command needs 't,joint,value', got {raw!r}")
    try:
        return float(parts[0]), parts[1].strip(), float(parts[2])
    except ValueError:
        raise _Fail(EXIT_USAGE, f"cannot parse --command {raw!r}") from None


def _spawned(args, cfg: SimConfig):
    model = _load_model(args.urdf)
    controllers = _load_controllers(args.controllers)
    bus = Bus()
    try:
        simulation = spawn(model, controllers, cfg, bus)
    except SpawnError as exc:
        raise _Fail(EXIT_SPAWN, str(exc)) from None
    except ValueError as exc:
        raise _Fail(EXIT_USAGE, str(exc)) from None
    for warning in simulation.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return simulation


def cmd_run(args) -> int:
    if args.duration < 0:
        raise _Fail(EXIT_USAGE, f"--duration must be non-negative, got {args.duration}")
    if args.gravity < 0:
        raise _Fail(EXIT_USAGE, f"--gravity must be non-negative, got {args.gravity}")
    simulation = _spawned(args, SimConfig(gravity=args.gravity))
    commands = [_parse_command_arg(raw) for raw in args.command or []]
    controlled = {joint for joint, _sub in simulation.command_subs.values()}
    for _t, joint, _value in commands:
        if joint not in controlled:
            raise _Fail(EXIT_USAGE, f"no position controller for joint '{joint}'")

    if args.csv:
        try:
            sink = open(args.csv, "w")
        except OSError as exc:
            raise _Fail(EXIT_IO, f"cannot write {args.csv}: {exc.strerror or exc}") from None
    else:
        sink = sys.stdout
    try:
        simulation.run(args.duration, trace=sink, commands=commands)
    finally:
        if sink is not sys.stdout:
            sink.close()
    return EXIT_OK


def cmd_serve(args) -> int:
    import asyncio

    from .serve import serve_forever

    simulation = _spawned(args, SimConfig())
    try:
        asyncio.run(serve_forever(simulation, port=args.port))
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="armsim",
                     description="Serial-manipulator teaching simulator")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_validate = sub.add_parser("validate", help="check a robot description")
    p_validate.add_argument("urdf")
    p_validate.set_defaults(func=cmd_validate)

    p_fk = sub.add_parser("fk", help="tip pose for given joint angles")
    p_fk.add_argument("urdf")
    p_fk.add_argument("--tip", default=None, help="tip link (default: deepest leaf)")
    p_fk.add_argument("--q", required=True, help="comma-separated joint angles, rad")
    p_fk.set_defaults(func=cmd_fk)

    p_ik = sub.add_parser("ik", help="joint angles reaching a Cartesian target")
    p_ik.add_argument("urdf")
    p_ik.add_argument("--target", required=True, help="x,y,z in meters")
    p_ik.add_argument("--method", choices=("geometric", "dls"), default="geometric")
    p_ik.add_argument("--q0", default=None, help="start angles for dls")
    p_ik.set_defaults(func=cmd_ik)

    p_run = sub.add_parser("run", help="simulate and write a CSV trace")
    p_run.add_argument("urdf")
    p_run.add_argument("controllers")
    p_run.add_argument("--duration", type=float, default=1.0, help="seconds")
    p_run.add_argument("--csv", default=None, help="trace path (default stdout)")
    p_run.add_argument("--command", action="append", metavar="t,joint,value",
                       help="scheduled position command, repeatable")
    p_run.add_argument("--gravity", type=float, default=0.0, help="m/s^2")
    p_run.set_defaults(func=cmd_run)

    p_serve = sub.add_parser("serve", help="websocket bridge for the panel")
    p_serve.add_argument("urdf")
    p_serve.add_argument("controllers")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits; keep main() returning codes
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _Fail as fail:
        print(f"armsim: {fail}", file=sys.stderr)
        return fail.code


if __name__ == "__main__":
    sys.exit(main())
