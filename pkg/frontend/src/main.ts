/**
 * Browser entry point: wires the websocket client, the folded panel
 * state, the control sidebar and the 3D scene together.
 */

import { PanelClient } from "./client";
import { PanelState } from "./panel";
import { ArmScene } from "./render";
import { PanelUi } from "./ui";

const sidebar = document.getElementById("sidebar");
const viewport = document.getElementById("viewport");
if (sidebar === null || viewport === null) {
  throw new Error("panel layout missing #sidebar or #viewport");
}

const state = new PanelState();
const scene = new ArmScene(viewport);

const url =
  new URLSearchParams(location.search).get("ws") ??
  `ws://${location.hostname || "127.0.0.1"}:8765`;

const client = new PanelClient(url, {
  onFrame(frame) {
    state.applyFrame(frame);
    if (frame.kind === "ModelDescription" && state.model !== null) {
      scene.setModel(state.model);
      ui.setModel(state.model);
    }
  },
  onStatus(status) {
    state.setStatus(status);
  },
  onBadFrame(message) {
    state.banner = message;
  },
});

const ui = new PanelUi(sidebar, {
  onJointTarget(name, value) {
    if (client.sendJointTarget(name, value)) {
      state.noteJointCommand(name, value);
    }
  },
  onIkTarget(x, y, z) {
    if (client.sendIkTarget(x, y, z)) {
      state.clearBanner();
      state.noteIkCommand([x, y, z]);
    }
  },
  onInputError(message) {
    state.banner = message;
  },
});

client.connect();

function frame(): void {
  scene.update(state.anglesNow(), state.ikTarget);
  ui.update(state);
  scene.render();
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
