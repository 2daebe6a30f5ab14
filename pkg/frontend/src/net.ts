/** Websocket bridge client: join a slot, stream stick reports, apply
 * server messages to the client state.
 *
 * Stick reports go out at a fixed 50 Hz with latest-wins semantics (the
 * server keeps only the newest report per device tick). On an unexpected
 * close the client retries and re-binds the same slot if it is still free.
 */

import { parseServerMessage, joinMessage, stickMessage } from './protocol.js';
import { ClientState } from './state.js';

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export const SEND_HZ = 50;
const RECONNECT_DELAY_MS = 1000;

export class BridgeClient {
  readonly state: ClientState;

  private url: string;
  private factory: SocketFactory;
  private socket: SocketLike | null = null;
  private sender: ReturnType<typeof setInterval> | null = null;
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;
  private closedByUser = false;

  constructor(url: string, state: ClientState, factory?: SocketFactory) {
    this.url = url;
    this.state = state;
    this.factory = factory ?? ((u) => new WebSocket(u) as unknown as SocketLike);
  }

  connect(): void {
    this.closedByUser = false;
    this.state.connection = 'connecting';
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      socket.send(joinMessage(this.state.slot));
    };
    socket.onmessage = (ev) => {
      if (typeof ev.data !== 'string') return;
      this.handle(ev.data);
    };
    socket.onclose = () => {
      this.stopSending();
      const wasRejected = this.state.connection === 'rejected';
      if (!wasRejected) this.state.connection = 'disconnected';
      this.socket = null;
      if (!this.closedByUser && !wasRejected) {
        this.reconnectTimer = setTimeout(() => this.connect(), RECONNECT_DELAY_MS);
      }
    };
    socket.onerror = () => {
      // onclose follows; nothing to do here
    };
  }

  private handle(raw: string): void {
    const msg = parseServerMessage(raw);
    if (msg === null) return;
    const state = this.state;
    switch (msg.type) {
      case 'join_ack':
        if (msg.ok) {
          state.connection = 'joined';
          state.haptics = msg.haptics;
          state.error = null;
          this.startSending();
        } else {
          state.connection = 'rejected';
          state.error = msg.error ?? 'join rejected';
          this.socket?.close();
        }
        break;
      case 'force':
        if (msg.id === state.slot) state.setForce(msg.fx, msg.fy);
        break;
      case 'state':
        state.pushState(msg, Date.now());
        break;
      case 'haptics':
        state.haptics = msg.on;
        if (!msg.on) state.setForce(0, 0);
        break;
    }
  }

  private startSending(): void {
    if (this.sender !== null) return;
    this.sender = setInterval(() => this.sendStick(), 1000 / SEND_HZ);
  }

  private stopSending(): void {
    if (this.sender !== null) {
      clearInterval(this.sender);
      this.sender = null;
    }
  }

  sendStick(): void {
    if (this.socket === null || this.state.connection !== 'joined') return;
    try {
      this.socket.send(stickMessage(this.state.slot, this.state.stickX, this.state.stickY));
    } catch {
      // socket is closing; reconnect logic handles it
    }
  }

  close(): void {
    this.closedByUser = true;
    if (this.reconnectTimer !== null) clearTimeout(this.reconnectTimer);
    this.stopSending();
    this.socket?.close();
    this.state.connection = 'disconnected';
  }
}
