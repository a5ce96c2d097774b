"""Inverse kinematics: closed-form branches, DLS iteration, verification."""

import math

import numpy as np
import pytest

from armsim import (
    REFERENCE_PARAMS,
    Unreachable,
    closed_form_fk,
    fk,
    ik_3dof,
    ik_dls,
    verify_ik,
)

L1, L2, L3 = REFERENCE_PARAMS.L1, REFERENCE_PARAMS.L2, REFERENCE_PARAMS.L3


def chain_limits(chain):
    return [j.limits for j in chain]


def test_interior_target_yields_four_verified_branches():
    target = (0.35, 0.2, 0.62)
    sols = ik_3dof(REFERENCE_PARAMS, target)
    assert len(sols) == 4
    labels = {(s.branch.base, s.branch.elbow) for s in sols}
    assert labels == {("Front", "Down"), ("Front", "Up"),
                      ("Back", "Down"), ("Back", "Up")}
    for s in sols:
        assert s.verified and not s.singular
        assert np.max(np.abs(closed_form_fk(REFERENCE_PARAMS, s.q) - target)) < 1e-9
    qs = [tuple(np.round(s.q, 9)) for s in sols]
    assert len(set(qs)) == 4


def test_full_extension_collapses_elbow_branches(chain):
    target = (0.7, 0.0, 0.5)  # straight out, elbow locked
    free = ik_3dof(REFERENCE_PARAMS, target)
    assert len(free) == 2
    assert {s.branch.base for s in free} == {"Front", "Back"}
    front = next(s for s in free if s.branch.base == "Front")
    assert np.max(np.abs(front.q)) < 1e-12

    # the Back twin needs q1 = pi, just outside the +-3.14 bounds
    limited = ik_3dof(REFERENCE_PARAMS, target, chain_limits(chain))
    assert len(limited) == 1
    assert limited[0].branch.base == "Front"


def test_elbow_pair_for_bent_target(chain):
    target = (0.4, 0.0, 0.8)  # fk of (0, 0, pi/2)
    sols = ik_3dof(REFERENCE_PARAMS, target, chain_limits(chain))
    assert len(sols) == 2
    assert {s.branch.elbow for s in sols} == {"Down", "Up"}
    assert all(s.branch.base == "Front" for s in sols)
    best = min(np.max(np.abs(s.q - np.array([0.0, 0.0, math.pi / 2])))
               for s in sols)
    assert best < 1e-9


def test_unreachable_targets_raise():
    with pytest.raises(Unreachable):
        ik_3dof(REFERENCE_PARAMS, (2.0, 0.0, 0.5))
    # inside the minimum-reach sphere around the shoulder
    with pytest.raises(Unreachable):
        ik_3dof(REFERENCE_PARAMS, (0.05, 0.0, 0.5))


def test_folded_boundary_single_elbow(chain):
    target = (L2 - L3, 0.0, L1)  # elbow fully folded, theta3 = pi
    sols = ik_3dof(REFERENCE_PARAMS, target)
    assert len(sols) == 2  # one per base branch, elbow branches coincide
    for s in sols:
        assert abs(abs(s.q[2]) - math.pi) < 1e-9
        assert s.verified
    # pi itself violates the +-3.14 bound, so limits filter everything
    assert ik_3dof(REFERENCE_PARAMS, target, chain_limits(chain)) == []


def test_overhead_singularity_flags_and_zeroes_yaw():
    sols = ik_3dof(REFERENCE_PARAMS, (0.0, 0.0, 1.2))
    assert len(sols) == 1
    s = sols[0]
    assert s.singular and s.verified
    assert np.max(np.abs(s.q - np.array([0.0, math.pi / 2, 0.0]))) < 1e-9

    bent = ik_3dof(REFERENCE_PARAMS, (0.0, 0.0, 1.1))
    assert len(bent) == 2  # elbow up/down, Front family only
    for s in bent:
        assert s.singular and s.q[0] == 0.0 and s.verified


def test_solutions_respect_joint_limits(chain):
    rng = np.random.RandomState(42)
    limits = chain_limits(chain)
    for _ in range(200):
        q = rng.uniform(-3.14, 3.14, 3)
        target = closed_form_fk(REFERENCE_PARAMS, q)
        sols = ik_3dof(REFERENCE_PARAMS, target, limits)
        assert sols, f"no solution for target built from q={q}"
        hit = False
        for s in sols:
            assert s.verified
            assert np.all(s.q >= -3.14 - 1e-12) and np.all(s.q <= 3.14 + 1e-12)
            hit = hit or np.max(np.abs(s.q - q)) < 1e-6
        assert hit, f"generating configuration {q} missing from solutions"


def test_verify_ik_position_and_pose(arm, chain):
    q = [0.4, -0.6, 1.1]
    pose = fk(arm, chain, q)
    assert verify_ik(arm, chain, q, pose.translation, 1e-9)
    assert verify_ik(arm, chain, q, pose, 1e-9)
    assert not verify_ik(arm, chain, [0.0, 0.0, 0.0], pose.translation, 1e-6)
    # generous tolerance accepts anything in the workspace
    assert verify_ik(arm, chain, [0.0, 0.0, 0.0], pose.translation, 10.0)


def test_dls_round_trip_from_home(arm, chain):
    q_true = np.array([0.5, -0.4, 0.9])
    target = fk(arm, chain, q_true).translation
    sol = ik_dls(arm, chain, np.zeros(3), target)
    assert sol.verified
    assert sol.branch is None
    assert 0 < sol.iterations <= 20
    assert sol.residual < 1e-6
    assert np.max(np.abs(fk(arm, chain, sol.q).translation - target)) < 1e-6


def test_dls_already_at_target(arm, chain):
    q = np.array([0.3, 0.2, -0.5])
    target = fk(arm, chain, q).translation
    sol = ik_dls(arm, chain, q, target)
    assert sol.verified and sol.iterations == 0
    assert np.array_equal(sol.q, q)


def test_dls_unreachable_reports_best_effort(arm, chain):
    sol = ik_dls(arm, chain, np.zeros(3), (2.0, 0.0, 0.5))
    assert not sol.verified
    # the nearest workspace point sits 1.3 m from this target
    assert abs(sol.residual - 1.3) < 0.05


def test_dls_full_pose_refinement(arm, chain):
    q_true = np.array([0.4, 0.3, -0.6])
    target = fk(arm, chain, q_true)
    sol = ik_dls(arm, chain, q_true + 0.2, target)
    assert sol.verified
    assert verify_ik(arm, chain, sol.q, target, 1e-6)


def test_dls_position_only_override_ignores_orientation(arm, chain):
    q_true = np.array([0.4, 0.3, -0.6])
    target = fk(arm, chain, q_true)
    sol = ik_dls(arm, chain, np.zeros(3), target, position_only=True)
    assert sol.verified
    tip = fk(arm, chain, sol.q).translation
    assert np.max(np.abs(tip - target.translation)) < 1e-6


def test_dls_converges_and_makes_progress(arm, chain):
    rng = np.random.RandomState(0)
    converged = 0
    for _ in range(100):
        q = rng.uniform(-3.14, 3.14, 3)
        target = fk(arm, chain, q).translation
        start_err = np.linalg.norm(target - fk(arm, chain, np.zeros(3)).translation)
        sol = ik_dls(arm, chain, np.zeros(3), target)
        if sol.verified:
            converged += 1
            assert sol.residual < start_err or start_err < 1e-6
    assert converged >= 99


def test_dls_shape_errors(arm, chain):
    from armsim import DimensionMismatch
    with pytest.raises(DimensionMismatch):
        ik_dls(arm, chain, np.zeros(2), (0.5, 0.0, 0.5))
    with pytest.raises(DimensionMismatch):
        ik_dls(arm, chain, np.zeros(3), (0.5, 0.0))
