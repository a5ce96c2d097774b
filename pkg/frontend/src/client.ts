/**
 * Websocket session against the simulator bridge: parses inbound frames,
 * reconnects with backoff after drops, and re-delivers the fresh
 * ModelDescription on every (re)connect so callers can rebuild the scene.
 *
 * The socket constructor is injectable so the same client runs in the
 * browser (global WebSocket) and under node tests (the ws package).
 */

import {
  ProtocolError,
  ikCommand,
  jointCommand,
  parseServerFrame,
  type ServerFrame,
} from "./protocol";
import type { ConnectionStatus } from "./panel";

/** The small slice of the WebSocket API the client needs. */
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((event: unknown) => void) | null;
  onmessage: ((event: { data: unknown }) => void) | null;
  onclose: ((event: unknown) => void) | null;
  onerror: ((event: unknown) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface PanelClientEvents {
  onFrame(frame: ServerFrame): void;
  onStatus(status: ConnectionStatus): void;
  /** A frame that failed to parse; connection stays up. */
  onBadFrame?(message: string): void;
}

export interface PanelClientOptions {
  socketFactory?: SocketFactory;
  /** Reconnect delays in ms; the last entry repeats. */
  backoffMs?: readonly number[];
}

const DEFAULT_BACKOFF_MS = [250, 500, 1000, 2000, 4000] as const;

function defaultFactory(url: string): SocketLike {
  const ctor = (globalThis as { WebSocket?: new (url: string) => SocketLike }).WebSocket;
  if (ctor === undefined) {
    throw new Error("no WebSocket constructor available; pass socketFactory");
  }
  return new ctor(url);
}

export class PanelClient {
  private readonly factory: SocketFactory;
  private readonly backoff: readonly number[];
  private socket: SocketLike | null = null;
  private attempts = 0;
  private closed = false;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    readonly url: string,
    private readonly events: PanelClientEvents,
    options: PanelClientOptions = {},
  ) {
    this.factory = options.socketFactory ?? defaultFactory;
    this.backoff = options.backoffMs ?? DEFAULT_BACKOFF_MS;
  }

  connect(): void {
    if (this.closed || this.socket !== null) {
      return;
    }
    this.events.onStatus("connecting");
    let socket: SocketLike;
    try {
      socket = this.factory(this.url);
    } catch {
      this.scheduleReconnect();
      return;
    }
    this.socket = socket;
    socket.onopen = () => {
      this.attempts = 0;
      this.events.onStatus("connected");
    };
    socket.onmessage = (event) => {
      let frame: ServerFrame;
      try {
        frame = parseServerFrame(String(event.data));
      } catch (exc) {
        if (exc instanceof ProtocolError) {
          this.events.onBadFrame?.(exc.message);
          return;
        }
        throw exc;
      }
      this.events.onFrame(frame);
    };
    socket.onerror = () => {
      // the close event carries the reconnect
    };
    socket.onclose = () => {
      this.socket = null;
      if (!this.closed) {
        this.events.onStatus("disconnected");
        this.scheduleReconnect();
      }
    };
  }

  private scheduleReconnect(): void {
    if (this.closed || this.timer !== null) {
      return;
    }
    const delay = this.backoff[Math.min(this.attempts, this.backoff.length - 1)] ?? 1000;
    this.attempts += 1;
    this.timer = setTimeout(() => {
      this.timer = null;
      this.connect();
    }, delay);
  }

  /** Stop for good; no further reconnects. */
  close(): void {
    this.closed = true;
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    const socket = this.socket;
    this.socket = null;
    socket?.close();
  }

  get connected(): boolean {
    return this.socket !== null;
  }

  private sendRaw(frame: string): boolean {
    if (this.socket === null) {
      return false;
    }
    try {
      this.socket.send(frame);
    } catch {
      return false;
    }
    return true;
  }

  /** Send a per-joint position command; false when not connected. */
  sendJointTarget(joint: string, target: number): boolean {
    return this.sendRaw(jointCommand(joint, target));
  }

  /** Send a Cartesian ik command; false when not connected. */
  sendIkTarget(x: number, y: number, z: number): boolean {
    return this.sendRaw(ikCommand(x, y, z));
  }
}
