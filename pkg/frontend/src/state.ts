/** Client-side session state: everything the renderer needs each frame.
 *
 * The client never simulates game physics; it holds the last two state
 * broadcasts for interpolation and whatever the server said about forces
 * and haptics.
 */

import { StateMsg } from './protocol.js';

export type Connection = 'disconnected' | 'connecting' | 'joined' | 'rejected';

export const STALE_BROADCAST_MS = 1000;
const FORCE_EPSILON = 1e-6;

export class ClientState {
  slot: number;
  connection: Connection = 'disconnected';
  error: string | null = null;

  /** Local stick position, each axis kept in [-1, 1]. */
  stickX = 0;
  stickY = 0;

  /** Last force command from the server, amperes per axis. */
  forceX = 0;
  forceY = 0;

  haptics = false;

  prevState: StateMsg | null = null;
  lastState: StateMsg | null = null;
  lastStateAtMs = 0;
  prevStateAtMs = 0;

  constructor(slot: number) {
    this.slot = slot;
  }

  setStick(x: number, y: number): void {
    this.stickX = Math.min(1, Math.max(-1, x));
    this.stickY = Math.min(1, Math.max(-1, y));
  }

  setForce(fx: number, fy: number): void {
    this.forceX = fx;
    this.forceY = fy;
  }

  pushState(msg: StateMsg, nowMs: number): void {
    this.prevState = this.lastState;
    this.prevStateAtMs = this.lastStateAtMs;
    this.lastState = msg;
    this.lastStateAtMs = nowMs;
  }

  /** No broadcast for a second means the connection is in doubt. */
  broadcastStale(nowMs: number): boolean {
    return this.connection === 'joined' && nowMs - this.lastStateAtMs > STALE_BROADCAST_MS;
  }

  /** The force arrow shows only when haptics are live and the force is
   * nonzero; haptics-off phases hide it for the entire phase. */
  forceArrowVisible(): boolean {
    return this.haptics && Math.hypot(this.forceX, this.forceY) > FORCE_EPSILON;
  }
}
