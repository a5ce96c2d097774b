/**
 * PanelState: everything the UI renders, folded from the frame stream.
 *
 * The displayed configuration always comes from the latest accepted State
 * frame; sending a command only marks the joint pending. The arm on screen
 * therefore never shows a pose the server did not report.
 */

import { distance } from "./fk";
import { PanelModel, anglesByName } from "./model";
import type { ServerFrame, StateFrame, Vec3 } from "./protocol";

export type ConnectionStatus = "connecting" | "connected" | "disconnected";

/** A pending joint clears once the server reports q this close to it. */
export const PENDING_CLEAR_TOL = 0.01;

/** Client FK must agree with the served tip to this radius (meters). */
export const FK_AGREEMENT_TOL = 1e-6;

export class PanelState {
  status: ConnectionStatus = "connecting";
  model: PanelModel | null = null;
  latest: StateFrame | null = null;
  /** joint name -> commanded target still awaiting convergence */
  readonly pending = new Map<string, number>();
  banner: string | null = null;
  /** |client FK tip - served tip| for the latest accepted frame */
  fkDiscrepancy = NaN;
  /** Cartesian target of the last accepted ik command, for the marker. */
  ikTarget: Vec3 | null = null;
  framesSeen = 0;

  /** Fold one parsed server frame into the state. */
  applyFrame(frame: ServerFrame): void {
    switch (frame.kind) {
      case "ModelDescription":
        this.model = PanelModel.fromFrame(frame);
        this.latest = null;
        this.pending.clear();
        this.ikTarget = null;
        this.fkDiscrepancy = NaN;
        this.banner = null;
        return;
      case "State":
        this.applyState(frame);
        return;
      case "Error":
        this.banner = frame.message;
        return;
    }
  }

  private applyState(frame: StateFrame): void {
    if (this.model === null) {
      this.banner = "state frame before model description";
      return;
    }
    const served = new Set(frame.names);
    const missing = this.model.joints.filter((j) => !served.has(j.name));
    if (missing.length > 0) {
      // keep the last good frame on screen
      this.banner = `state frame missing joint ${missing[0]!.name}`;
      return;
    }
    this.latest = frame;
    this.framesSeen += 1;
    const q = anglesByName(frame.names, frame.q);
    for (const [joint, target] of [...this.pending]) {
      const angle = q.get(joint);
      if (angle !== undefined && Math.abs(angle - target) < PENDING_CLEAR_TOL) {
        this.pending.delete(joint);
      }
    }
    this.fkDiscrepancy = distance(this.model.fkTip(q), frame.tip);
    if (this.fkDiscrepancy > FK_AGREEMENT_TOL) {
      this.banner = `client FK disagrees with server tip by ${this.fkDiscrepancy.toExponential(2)} m`;
    }
  }

  /** Record a sent per-joint command so the UI can mark it pending. */
  noteJointCommand(joint: string, target: number): void {
    this.pending.set(joint, target);
  }

  /** Record a sent ik command; clears any superseded marker on error. */
  noteIkCommand(target: Vec3): void {
    this.ikTarget = target;
  }

  setStatus(status: ConnectionStatus): void {
    this.status = status;
    if (status === "disconnected") {
      this.banner = "disconnected, retrying...";
      this.pending.clear();
    } else if (status === "connected" && this.banner === "disconnected, retrying...") {
      this.banner = null;
    }
  }

  clearBanner(): void {
    this.banner = null;
  }

  /** Angles of the latest frame keyed by name; empty before any frame. */
  anglesNow(): Map<string, number> {
    if (this.latest === null) {
      return new Map();
    }
    return anglesByName(this.latest.names, this.latest.q);
  }

  inputsEnabled(): boolean {
    return this.status === "connected" && this.model !== null;
  }
}
