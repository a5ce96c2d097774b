/**
 * PanelModel: the read-only kinematic description the panel works from,
 * built once per connection from the server's ModelDescription frame.
 */

import {
  composePose,
  identityPose,
  originPose,
  rotatePose,
  axisAngleMatrix,
  type Pose,
} from "./fk";
import {
  ProtocolError,
  type FixedJointDoc,
  type LinkDoc,
  type ModelDescriptionFrame,
  type RevoluteJointDoc,
  type Vec3,
} from "./protocol";

export interface ChainStep {
  name: string;
  child: string;
  origin: Pose;
  /** Unit-free rotation axis; null for fixed joints. */
  axis: Vec3 | null;
}

export interface SliderBounds {
  name: string;
  lower: number;
  upper: number;
}

export class PanelModel {
  readonly namespace: string;
  readonly root: string;
  readonly tip: string;
  readonly joints: readonly RevoluteJointDoc[];
  readonly fixed: readonly FixedJointDoc[];
  readonly links: readonly LinkDoc[];
  /** Joints from root to tip in order, revolute and fixed interleaved. */
  readonly chain: readonly ChainStep[];

  private constructor(frame: ModelDescriptionFrame, chain: ChainStep[]) {
    this.namespace = frame.namespace;
    this.root = frame.root;
    this.tip = frame.tip;
    this.joints = frame.joints;
    this.fixed = frame.fixed;
    this.links = frame.links;
    this.chain = chain;
  }

  static fromFrame(frame: ModelDescriptionFrame): PanelModel {
    const byChild = new Map<string, RevoluteJointDoc | FixedJointDoc>();
    for (const joint of [...frame.joints, ...frame.fixed]) {
      if (byChild.has(joint.child)) {
        throw new ProtocolError(`link ${joint.child} has two parent joints`);
      }
      byChild.set(joint.child, joint);
    }
    const chain: ChainStep[] = [];
    let cursor = frame.tip;
    const seen = new Set<string>([cursor]);
    while (cursor !== frame.root) {
      const joint = byChild.get(cursor);
      if (joint === undefined) {
        throw new ProtocolError(`no joint path from ${frame.root} to ${frame.tip}`);
      }
      chain.push({
        name: joint.name,
        child: joint.child,
        origin: originPose(joint.origin.xyz, joint.origin.rpy),
        axis: "axis" in joint ? joint.axis : null,
      });
      cursor = joint.parent;
      if (seen.has(cursor)) {
        throw new ProtocolError(`joint graph cycles at link ${cursor}`);
      }
      seen.add(cursor);
    }
    chain.reverse();
    return new PanelModel(frame, chain);
  }

  /** Slider rows for the FK controls, bounds exactly as served. */
  sliderBounds(): SliderBounds[] {
    return this.joints.map((j) => ({ name: j.name, lower: j.lower, upper: j.upper }));
  }

  /**
   * Pose of every link frame for the given angles (radians by joint name).
   * Joints absent from `q` sit at zero, so a partial map still renders.
   */
  linkPoses(q: ReadonlyMap<string, number>): Map<string, Pose> {
    const poses = new Map<string, Pose>([[this.root, identityPose()]]);
    // model joints are parent-before-child, but walk until settled so the
    // panel does not depend on the server's ordering
    const remaining: (RevoluteJointDoc | FixedJointDoc)[] = [...this.joints, ...this.fixed];
    while (remaining.length > 0) {
      const before = remaining.length;
      for (let i = remaining.length - 1; i >= 0; i--) {
        const joint = remaining[i]!;
        const parent = poses.get(joint.parent);
        if (parent === undefined) {
          continue;
        }
        let pose = composePose(parent, originPose(joint.origin.xyz, joint.origin.rpy));
        if ("axis" in joint) {
          pose = rotatePose(pose, axisAngleMatrix(joint.axis, q.get(joint.name) ?? 0));
        }
        poses.set(joint.child, pose);
        remaining.splice(i, 1);
      }
      if (remaining.length === before) {
        break; // unreachable joints; parse warnings cover these server-side
      }
    }
    return poses;
  }

  /** Tip frame pose from angles keyed by joint name. */
  tipPose(q: ReadonlyMap<string, number>): Pose {
    let pose = identityPose();
    for (const step of this.chain) {
      pose = composePose(pose, step.origin);
      if (step.axis !== null) {
        pose = rotatePose(pose, axisAngleMatrix(step.axis, q.get(step.name) ?? 0));
      }
    }
    return pose;
  }

  /** Tip position only; the quantity cross-checked against State.tip. */
  fkTip(q: ReadonlyMap<string, number>): Vec3 {
    return this.tipPose(q).p;
  }
}

/** Joint angles of a State-like frame as a name->angle map. */
export function anglesByName(names: readonly string[], q: readonly number[]): Map<string, number> {
  const out = new Map<string, number>();
  names.forEach((name, i) => out.set(name, q[i] ?? 0));
  return out;
}
