/**
 * Control sidebar: connection status, error banner, FK/IK mode toggle,
 * per-joint sliders bounded by the served limits, and the Cartesian
 * target form. One mode steers at a time; the readouts always show the
 * server-reported angles, never the local slider position.
 */

import type { PanelModel } from "./model";
import type { PanelState } from "./panel";

export type ControlMode = "fk" | "ik";

export interface UiCallbacks {
  onJointTarget(name: string, value: number): void;
  onIkTarget(x: number, y: number, z: number): void;
  /** Locally detected input problems, surfaced like server errors. */
  onInputError(message: string): void;
}

interface JointRow {
  name: string;
  lower: number;
  upper: number;
  slider: HTMLInputElement;
  readout: HTMLSpanElement;
  pendingDot: HTMLSpanElement;
  dragging: boolean;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className !== undefined) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export class PanelUi {
  mode: ControlMode = "fk";
  private rows: JointRow[] = [];
  private readonly statusDot: HTMLSpanElement;
  private readonly statusText: HTMLSpanElement;
  private readonly banner: HTMLDivElement;
  private readonly sliderSection: HTMLDivElement;
  private readonly ikSection: HTMLDivElement;
  private readonly ikInputs: { x: HTMLInputElement; y: HTMLInputElement; z: HTMLInputElement };
  private readonly ikButton: HTMLButtonElement;
  private readonly fkCheck: HTMLSpanElement;
  private readonly tipReadout: HTMLSpanElement;
  private readonly modeInputs: { fk: HTMLInputElement; ik: HTMLInputElement };

  constructor(root: HTMLElement, private readonly callbacks: UiCallbacks) {
    const statusRow = el("div", "status-row");
    this.statusDot = el("span", "status-dot disconnected");
    this.statusText = el("span", "status-text", "connecting");
    statusRow.append(this.statusDot, this.statusText);

    this.banner = el("div", "banner");
    this.banner.hidden = true;

    const modeRow = el("div", "mode-row");
    this.modeInputs = { fk: el("input"), ik: el("input") };
    for (const mode of ["fk", "ik"] as const) {
      const input = this.modeInputs[mode];
      input.type = "radio";
      input.name = "mode";
      input.value = mode;
      input.checked = mode === "fk";
      input.addEventListener("change", () => this.setMode(mode));
      const label = el("label", "mode-label");
      label.append(input, mode === "fk" ? " joint sliders" : " ik target");
      modeRow.append(label);
    }

    this.sliderSection = el("div", "sliders");

    this.ikSection = el("div", "ik-form");
    this.ikSection.hidden = true;
    this.ikInputs = { x: el("input"), y: el("input"), z: el("input") };
    for (const axis of ["x", "y", "z"] as const) {
      const input = this.ikInputs[axis];
      input.type = "number";
      input.step = "0.05";
      input.value = axis === "x" ? "0.4" : axis === "y" ? "0.0" : "0.8";
      const label = el("label", "ik-label", `${axis} `);
      label.append(input);
      this.ikSection.append(label);
    }
    this.ikButton = el("button", "ik-send", "solve and go");
    this.ikButton.addEventListener("click", () => this.submitIk());
    this.ikSection.append(this.ikButton);

    const footer = el("div", "footer");
    this.tipReadout = el("span", "tip-readout", "tip: -");
    this.fkCheck = el("span", "fk-check", "fk check: -");
    footer.append(this.tipReadout, this.fkCheck);

    root.append(statusRow, this.banner, modeRow, this.sliderSection, this.ikSection, footer);
  }

  setMode(mode: ControlMode): void {
    this.mode = mode;
    this.modeInputs.fk.checked = mode === "fk";
    this.modeInputs.ik.checked = mode === "ik";
    this.sliderSection.hidden = mode !== "fk";
    this.ikSection.hidden = mode !== "ik";
  }

  /** Build one slider row per served revolute joint, bounds as served. */
  setModel(model: PanelModel): void {
    this.sliderSection.replaceChildren();
    this.rows = [];
    for (const bounds of model.sliderBounds()) {
      const row = el("div", "joint-row");
      const label = el("label", "joint-label", bounds.name);
      const pendingDot = el("span", "pending-dot", " *");
      pendingDot.hidden = true;
      label.append(pendingDot);

      const slider = el("input", "joint-slider");
      slider.type = "range";
      slider.min = String(bounds.lower);
      slider.max = String(bounds.upper);
      slider.step = "0.001";
      slider.value = "0";
      const readout = el("span", "joint-readout", "0.000");

      const jointRow: JointRow = {
        name: bounds.name,
        lower: bounds.lower,
        upper: bounds.upper,
        slider,
        readout,
        pendingDot,
        dragging: false,
      };
      slider.addEventListener("pointerdown", () => {
        jointRow.dragging = true;
      });
      slider.addEventListener("pointerup", () => {
        jointRow.dragging = false;
      });
      slider.addEventListener("input", () => {
        const value = Math.min(bounds.upper, Math.max(bounds.lower, Number(slider.value)));
        this.callbacks.onJointTarget(bounds.name, value);
      });

      row.append(label, slider, readout);
      this.sliderSection.append(row);
      this.rows.push(jointRow);
    }
  }

  private submitIk(): void {
    // empty number inputs coerce to 0 via Number(""); refuse them instead
    const parse = (raw: string) => (raw.trim() === "" ? NaN : Number(raw));
    const x = parse(this.ikInputs.x.value);
    const y = parse(this.ikInputs.y.value);
    const z = parse(this.ikInputs.z.value);
    if (![x, y, z].every(Number.isFinite)) {
      this.callbacks.onInputError("ik target needs three numbers");
      return;
    }
    this.callbacks.onIkTarget(x, y, z);
  }

  /** Refresh everything visible from the folded panel state. */
  update(state: PanelState): void {
    this.statusText.textContent = state.status;
    this.statusDot.className = `status-dot ${state.status}`;

    this.banner.hidden = state.banner === null;
    this.banner.textContent = state.banner ?? "";

    const enabled = state.inputsEnabled();
    const q = state.anglesNow();
    for (const row of this.rows) {
      const angle = q.get(row.name);
      if (angle !== undefined) {
        row.readout.textContent = angle.toFixed(3);
        if (!row.dragging) {
          row.slider.value = String(angle);
        }
      }
      row.slider.disabled = !enabled || this.mode !== "fk";
      row.pendingDot.hidden = !state.pending.has(row.name);
    }
    const ikEnabled = enabled && this.mode === "ik";
    this.ikButton.disabled = !ikEnabled;
    for (const input of Object.values(this.ikInputs)) {
      input.disabled = !ikEnabled;
    }
    if (state.latest !== null) {
      const [x, y, z] = state.latest.tip;
      this.tipReadout.textContent = `tip: (${x.toFixed(3)}, ${y.toFixed(3)}, ${z.toFixed(3)})`;
    }
    if (Number.isFinite(state.fkDiscrepancy)) {
      this.fkCheck.textContent = `fk check: ${state.fkDiscrepancy.toExponential(1)} m`;
    }
  }

  /** The live slider elements, in served joint order. */
  sliders(): HTMLInputElement[] {
    return this.rows.map((row) => row.slider);
  }
}
