/**
 * WebSocket session client.
 *
 * Sends exactly one validated frame per user action, holds the input
 * disabled while a turn is in flight, and reconnects with exponential
 * backoff after transport loss. The frames themselves carry all state;
 * the client never infers anything the server did not say.
 */

import {
  InboundFrame, OutboundFrame, parseInbound, pointFrame, resetFrame,
  utteranceFrame, validateOutbound,
} from "./protocol.js";

export type ConnectionState = "connecting" | "open" | "reconnecting" | "closed";

export interface ClientHooks {
  onFrame: (frame: InboundFrame) => void;
  onState?: (state: ConnectionState) => void;
  onBusy?: (busy: boolean) => void;
  /** Injectable for tests; defaults to the browser WebSocket. */
  socketFactory?: (url: string) => WebSocket;
}

const BACKOFF_START_MS = 500;
const BACKOFF_MAX_MS = 15000;

export class SessionClient {
  private socket: WebSocket | null = null;
  private backoff = BACKOFF_START_MS;
  private closed = false;
  private _busy = false;

  constructor(private url: string, private hooks: ClientHooks) {}

  get busy(): boolean {
    return this._busy;
  }

  connect(): void {
    this.closed = false;
    const factory = this.hooks.socketFactory ?? ((u: string) => new WebSocket(u));
    this.hooks.onState?.(this.socket ? "reconnecting" : "connecting");
    const socket = factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.backoff = BACKOFF_START_MS;
      this.hooks.onState?.("open");
    };
    socket.onmessage = (event: MessageEvent) => {
      const frame = parseInbound(String(event.data));
      if (frame === null) {
        this.hooks.onFrame({ type: "error", detail: "malformed frame" });
        return;
      }
      // A turn is complete once the server has pushed state (or failed).
      if (frame.type === "snapshot" || frame.type === "error") {
        this.setBusy(false);
      }
      this.hooks.onFrame(frame);
    };
    socket.onclose = () => {
      this.setBusy(false);
      if (this.closed) {
        this.hooks.onState?.("closed");
        return;
      }
      this.hooks.onState?.("reconnecting");
      const wait = this.backoff;
      this.backoff = Math.min(this.backoff * 2, BACKOFF_MAX_MS);
      setTimeout(() => {
        if (!this.closed) this.connect();
      }, wait);
    };
  }

  close(): void {
    this.closed = true;
    this.socket?.close();
  }

  private setBusy(busy: boolean): void {
    if (this._busy !== busy) {
      this._busy = busy;
      this.hooks.onBusy?.(busy);
    }
  }

  private send(frame: OutboundFrame): boolean {
    if (this._busy || !this.socket || this.socket.readyState !== WebSocket.OPEN) {
      return false;
    }
    this.socket.send(JSON.stringify(validateOutbound(frame)));
    this.setBusy(true);
    return true;
  }

  sendUtterance(text: string): boolean {
    if (!text.trim()) return false;
    return this.send(utteranceFrame(text));
  }

  sendPoint(objectId: string): boolean {
    return this.send(pointFrame(objectId));
  }

  sendReset(scenario: string): boolean {
    return this.send(resetFrame(scenario));
  }
}
