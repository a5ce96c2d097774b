/**
 * Minimal rigid-transform math for client-side forward kinematics.
 *
 * The panel recomputes link poses from the streamed joint angles with the
 * same composition the server uses (joint origin transform, then rotation
 * about the joint axis) so the rendered scene can be cross-checked against
 * the server-reported tip position frame by frame.
 *
 * Rotations are 3x3 row-major number arrays; no rendering types leak in
 * here so the math stays testable outside the browser.
 */

import type { Vec3 } from "./protocol";

export type Mat3 = [number, number, number, number, number, number, number, number, number];

export interface Pose {
  r: Mat3;
  p: Vec3;
}

export const IDENTITY_ROTATION: Mat3 = [1, 0, 0, 0, 1, 0, 0, 0, 1];

export function identityPose(): Pose {
  return { r: [...IDENTITY_ROTATION], p: [0, 0, 0] };
}

export function matMul(a: Mat3, b: Mat3): Mat3 {
  const out = new Array<number>(9) as Mat3;
  for (let i = 0; i < 3; i++) {
    for (let j = 0; j < 3; j++) {
      out[3 * i + j] =
        a[3 * i]! * b[j]! + a[3 * i + 1]! * b[3 + j]! + a[3 * i + 2]! * b[6 + j]!;
    }
  }
  return out;
}

export function matApply(m: Mat3, v: Vec3): Vec3 {
  return [
    m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
    m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
    m[6] * v[0] + m[7] * v[1] + m[8] * v[2],
  ];
}

/** Fixed-axis roll-pitch-yaw: Rz(yaw) Ry(pitch) Rx(roll). */
export function rpyMatrix(roll: number, pitch: number, yaw: number): Mat3 {
  const cr = Math.cos(roll), sr = Math.sin(roll);
  const cp = Math.cos(pitch), sp = Math.sin(pitch);
  const cy = Math.cos(yaw), sy = Math.sin(yaw);
  return [
    cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
    sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
    -sp, cp * sr, cp * cr,
  ];
}

/** Rodrigues rotation about a (not necessarily unit) axis. */
export function axisAngleMatrix(axis: Vec3, angle: number): Mat3 {
  const norm = Math.hypot(axis[0], axis[1], axis[2]);
  if (norm === 0) {
    throw new Error("rotation axis must be nonzero");
  }
  const x = axis[0] / norm, y = axis[1] / norm, z = axis[2] / norm;
  const c = Math.cos(angle), s = Math.sin(angle), v = 1 - c;
  return [
    c + x * x * v, x * y * v - z * s, x * z * v + y * s,
    y * x * v + z * s, c + y * y * v, y * z * v - x * s,
    z * x * v - y * s, z * y * v + x * s, c + z * z * v,
  ];
}

export function composePose(a: Pose, b: Pose): Pose {
  const p = matApply(a.r, b.p);
  return {
    r: matMul(a.r, b.r),
    p: [a.p[0] + p[0], a.p[1] + p[1], a.p[2] + p[2]],
  };
}

export function rotatePose(a: Pose, rotation: Mat3): Pose {
  return { r: matMul(a.r, rotation), p: a.p };
}

export function posePoint(pose: Pose, v: Vec3): Vec3 {
  const p = matApply(pose.r, v);
  return [pose.p[0] + p[0], pose.p[1] + p[1], pose.p[2] + p[2]];
}

export function originPose(xyz: Vec3, rpy: Vec3): Pose {
  return { r: rpyMatrix(rpy[0], rpy[1], rpy[2]), p: [...xyz] };
}

export function distance(a: Vec3, b: Vec3): number {
  return Math.hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}
