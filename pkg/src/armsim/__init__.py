"""armsim: a desk-scale serial-manipulator teaching simulator.

URDF-subset parsing, Denavit-Hartenberg and tree forward kinematics,
geometric and damped-least-squares inverse kinematics with FK
verification, effort PID joint control over lite dynamics, an
in-process pub/sub bus, and a CLI with a websocket bridge for the
browser panel.
"""

from .bus import (BadName, Bus, BusError, InvalidMessage, JointStateMsg,
                  KindMismatch, MessageKind, ModelDescription, Publisher,
                  ScalarCommand, Subscription, advertise, publish, subscribe)
from .control import (JointSimState, PidGains, PidState, gravity_torque,
                      joint_step, pid_step, potential_energy)
from .kinematics import (Arm3Params, Branch, DHRow, DimensionMismatch,
                         IkSolution, Unreachable, dh_transform, fk, fk_dh,
                         geometric_jacobian, ik_3dof, ik_dls, joint_transform,
                         link_poses, numeric_jacobian, verify_ik)
from .reference import (REFERENCE_PARAMS, arm_chain, arm_model, arm_params_of,
                        closed_form_fk, dh_table, reference_controllers,
                        reference_urdf)
from .sim import (ControllerSet, ControllerSpec, InvalidModel, JointPhysics,
                  MissingTransmission, ParseError, SimConfig, Simulation,
                  SpawnError, TraceSummary, UnknownControllerType,
                  UnknownJoint, parse_controllers, run, spawn, step)
from .transforms import Transform
from .urdf import (BadNumber, Box, Cylinder, Diagnostic, InertiaTensor, Joint,
                   JointLimits, Link, MeshRef, MissingField, Origin,
                   RobotModel, Transmission, UnknownLink, UnreachableLink,
                   UrdfError, XmlError, default_tip, joint_path, leaf_links,
                   movable_chain, parse_urdf, serialize_urdf, validate_model)

__version__ = "0.1.0"
