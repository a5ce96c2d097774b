import { describe, expect, test } from "vitest";

import { axisAngleMatrix, distance, matApply, matMul, rpyMatrix } from "../src/fk";
import { PanelModel, anglesByName } from "../src/model";
import { GOLDEN_FK_PAIRS, GOLDEN_MODEL_FRAME } from "./golden";

const model = PanelModel.fromFrame(GOLDEN_MODEL_FRAME);

function qOf(values: number[]): Map<string, number> {
  return anglesByName(
    model.joints.map((j) => j.name),
    values,
  );
}

describe("rotation primitives", () => {
  test("rpy composes as yaw about z, then pitch, then roll", () => {
    const m = rpyMatrix(0, 0, Math.PI / 2);
    const v = matApply(m, [1, 0, 0]);
    expect(distance(v, [0, 1, 0])).toBeLessThan(1e-12);
  });

  test("axis-angle matches rpy on the coordinate axes", () => {
    for (const [axis, rpy] of [
      [[1, 0, 0], [0.7, 0, 0]],
      [[0, 1, 0], [0, 0.7, 0]],
      [[0, 0, 1], [0, 0, 0.7]],
    ] as const) {
      const a = axisAngleMatrix([...axis], 0.7);
      const b = rpyMatrix(rpy[0], rpy[1], rpy[2]);
      for (let i = 0; i < 9; i++) {
        expect(Math.abs(a[i]! - b[i]!)).toBeLessThan(1e-12);
      }
    }
  });

  test("axis is normalized before use", () => {
    const a = axisAngleMatrix([0, 0, 2], 0.3);
    const b = axisAngleMatrix([0, 0, 1], 0.3);
    for (let i = 0; i < 9; i++) {
      expect(a[i]).toBeCloseTo(b[i]!, 14);
    }
    expect(() => axisAngleMatrix([0, 0, 0], 0.3)).toThrow();
  });

  test("matMul agrees with sequential application", () => {
    const a = rpyMatrix(0.2, -0.4, 1.1);
    const b = rpyMatrix(-0.9, 0.3, 0.5);
    const v: [number, number, number] = [0.3, -0.7, 0.2];
    const combined = matApply(matMul(a, b), v);
    const stepwise = matApply(a, matApply(b, v));
    expect(distance(combined, stepwise)).toBeLessThan(1e-13);
  });
});

describe("chain construction", () => {
  test("chain runs root to tip with the fixed flange last", () => {
    expect(model.chain.map((s) => s.name)).toEqual([
      "base_to_00",
      "00_to_01",
      "01_to_02",
      "02_to_tip",
    ]);
    expect(model.chain[3]!.axis).toBeNull();
  });

  test("slider bounds equal served limits exactly", () => {
    const bounds = model.sliderBounds();
    expect(bounds).toHaveLength(3);
    for (const b of bounds) {
      expect(b.lower).toBe(-3.14);
      expect(b.upper).toBe(3.14);
    }
  });

  test("a frame with no path from root to tip is rejected", () => {
    const broken = structuredClone(GOLDEN_MODEL_FRAME);
    broken.fixed = [];
    expect(() => PanelModel.fromFrame(broken)).toThrow(/no joint path/);
  });

  test("a frame giving one link two parents is rejected", () => {
    const broken = structuredClone(GOLDEN_MODEL_FRAME);
    broken.fixed.push({ ...broken.fixed[0]! });
    expect(() => PanelModel.fromFrame(broken)).toThrow(/two parent/);
  });
});

describe("forward kinematics", () => {
  test("home pose puts the tip at (0.7, 0, 0.5)", () => {
    expect(distance(model.fkTip(qOf([0, 0, 0])), [0.7, 0, 0.5])).toBeLessThan(1e-12);
  });

  test("raised shoulder points the arm straight up", () => {
    expect(distance(model.fkTip(qOf([0, Math.PI / 2, 0])), [0, 0, 1.2])).toBeLessThan(1e-12);
  });

  test("bent elbow folds the forearm upward", () => {
    expect(distance(model.fkTip(qOf([0, 0, Math.PI / 2])), [0.4, 0, 0.8])).toBeLessThan(1e-12);
  });

  test("matches the simulator FK on recorded samples", () => {
    let worst = 0;
    for (const pair of GOLDEN_FK_PAIRS) {
      worst = Math.max(worst, distance(model.fkTip(qOf(pair.q)), pair.tip));
    }
    expect(worst).toBeLessThan(1e-9);
  });

  test("angles missing from the map default to zero", () => {
    const partial = new Map([["00_to_01", Math.PI / 2]]);
    expect(distance(model.fkTip(partial), [0, 0, 1.2])).toBeLessThan(1e-12);
  });

  test("link poses cover every link and agree with the tip walk", () => {
    for (const pair of GOLDEN_FK_PAIRS.slice(0, 10)) {
      const poses = model.linkPoses(qOf(pair.q));
      for (const link of model.links) {
        expect(poses.has(link.name)).toBe(true);
      }
      const tip = poses.get(model.tip)!;
      expect(distance(tip.p, pair.tip)).toBeLessThan(1e-9);
    }
  });

  test("root link sits at the identity pose", () => {
    const poses = model.linkPoses(qOf([1, -0.5, 0.3]));
    expect(distance(poses.get(model.root)!.p, [0, 0, 0])).toBe(0);
  });
});
