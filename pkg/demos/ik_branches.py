"""Inverse kinematics walkthrough: branch enumeration and DLS iteration.

Shows the four closed-form branches for an interior target, what joint
limits filter out, the overhead singularity, and the damped-least-squares
solver on the same targets. Run: python3 demos/ik_branches.py
"""

import numpy as np

from armsim import (
    REFERENCE_PARAMS,
    Unreachable,
    arm_chain,
    arm_model,
    fk,
    ik_3dof,
    ik_dls,
)


def show(label, solutions):
    print(label)
    if not solutions:
        print("  (none)")
    for s in solutions:
        flags = " singular" if s.singular else ""
        print(f"  q = ({s.q[0]:+.4f}, {s.q[1]:+.4f}, {s.q[2]:+.4f})  "
              f"base={s.branch.base:<5} elbow={s.branch.elbow:<4}"
              f"{flags}  residual {s.residual:.1e} m"
              f"  {'verified' if s.verified else 'UNVERIFIED'}")
    print()


def main():
    model = arm_model()
    chain = arm_chain(model)
    limits = [j.limits for j in chain]

    target = (0.35, 0.2, 0.62)
    print(f"target {target}: every base/elbow combination reaches it")
    show("unrestricted:", ik_3dof(REFERENCE_PARAMS, target))
    show("with +-3.14 rad joint limits:", ik_3dof(REFERENCE_PARAMS, target, limits))

    print("full extension locks the elbow, branches collapse")
    show("target (0.7, 0, 0.5):", ik_3dof(REFERENCE_PARAMS, (0.7, 0.0, 0.5)))

    print("a target on the base axis leaves the yaw free; convention: yaw = 0")
    show("target (0, 0, 1.1):", ik_3dof(REFERENCE_PARAMS, (0.0, 0.0, 1.1)))

    try:
        ik_3dof(REFERENCE_PARAMS, (2.0, 0.0, 0.5))
    except Unreachable as exc:
        print(f"target (2, 0, 0.5) raises Unreachable: {exc}")
    print()

    print("damped least squares from the zero posture:")
    for target in [(0.35, 0.2, 0.62), (0.4, 0.0, 0.8), (-0.2, -0.5, 0.3)]:
        sol = ik_dls(model, chain, np.zeros(3), np.array(target))
        tip = fk(model, chain, sol.q).translation
        print(f"  {str(target):<20} -> q = ({sol.q[0]:+.4f}, {sol.q[1]:+.4f}, "
              f"{sol.q[2]:+.4f}) in {sol.iterations} iterations, "
              f"tip error {np.linalg.norm(tip - target):.1e} m")

    sol = ik_dls(model, chain, np.zeros(3), np.array([2.0, 0.0, 0.5]))
    print(f"  (2.0, 0.0, 0.5)      -> unreachable, best-effort residual "
          f"{sol.residual:.3f} m after {sol.iterations} iterations "
          f"(verified={sol.verified})")


if __name__ == "__main__":
    main()
