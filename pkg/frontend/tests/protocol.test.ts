import { describe, expect, test } from "vitest";

import {
  ProtocolError,
  ikCommand,
  jointCommand,
  parseServerFrame,
} from "../src/protocol";
import { GOLDEN_MODEL_JSON } from "./golden";

const STATE_JSON = JSON.stringify({
  kind: "State",
  t: 0.02,
  names: ["base_to_00", "00_to_01", "01_to_02"],
  q: [0.1, 0.0, -0.2],
  qd: [0.0, 0.0, 0.0],
  effort: [0.0, 1.5, 0.2],
  target: [0.1, 0.0, -0.2],
  tip: [0.65, 0.07, 0.52],
});

describe("parseServerFrame", () => {
  test("round-trips the recorded model description", () => {
    const frame = parseServerFrame(GOLDEN_MODEL_JSON);
    expect(frame.kind).toBe("ModelDescription");
    if (frame.kind === "ModelDescription") {
      expect(frame.joints).toHaveLength(3);
      expect(frame.fixed.map((j) => j.name)).toEqual(["02_to_tip"]);
      expect(frame.namespace).toBe("arm_model");
    }
  });

  test("parses a state frame", () => {
    const frame = parseServerFrame(STATE_JSON);
    expect(frame.kind).toBe("State");
    if (frame.kind === "State") {
      expect(frame.names).toHaveLength(3);
      expect(frame.tip[2]).toBe(0.52);
    }
  });

  test("parses an error frame", () => {
    const frame = parseServerFrame('{"kind": "Error", "message": "unreachable"}');
    expect(frame).toEqual({ kind: "Error", message: "unreachable" });
  });

  test("rejects malformed JSON", () => {
    expect(() => parseServerFrame("{{{")).toThrow(ProtocolError);
  });

  test("rejects non-object frames and unknown kinds", () => {
    expect(() => parseServerFrame("[1, 2]")).toThrow(ProtocolError);
    expect(() => parseServerFrame('{"kind": "Banana"}')).toThrow(/unknown frame kind/);
    expect(() => parseServerFrame('"State"')).toThrow(ProtocolError);
  });

  test("rejects a state frame with mismatched array lengths", () => {
    const doc = JSON.parse(STATE_JSON);
    doc.q = [0.1];
    expect(() => parseServerFrame(JSON.stringify(doc))).toThrow(ProtocolError);
  });

  test("rejects a model frame missing joint limits", () => {
    const doc = JSON.parse(GOLDEN_MODEL_JSON);
    delete doc.joints[0].lower;
    expect(() => parseServerFrame(JSON.stringify(doc))).toThrow(ProtocolError);
  });

  test("rejects a state frame with a non-numeric angle", () => {
    const doc = JSON.parse(STATE_JSON);
    doc.q[1] = "fast";
    expect(() => parseServerFrame(JSON.stringify(doc))).toThrow(ProtocolError);
  });
});

describe("command constructors", () => {
  test("joint command carries kind, joint and target", () => {
    expect(JSON.parse(jointCommand("base_to_00", 0.5))).toEqual({
      kind: "Command",
      joint: "base_to_00",
      target: 0.5,
    });
  });

  test("ik command carries the Cartesian triple", () => {
    expect(JSON.parse(ikCommand(0.4, 0, 0.8))).toEqual({
      kind: "Command",
      ik_target: [0.4, 0, 0.8],
    });
  });

  test("non-finite values are refused before they reach the wire", () => {
    expect(() => jointCommand("base_to_00", NaN)).toThrow(ProtocolError);
    expect(() => ikCommand(0.4, Infinity, 0.8)).toThrow(ProtocolError);
  });
});
