/** Bridge message types, mirroring the server's OSC schema field for field.
 *
 * The canonical schema snapshot lives in bridge-schema.json; a test compares
 * it against the running server so drift fails loudly.
 */

export const STATUS_SLIDING = 0;
export const STATUS_FELL = 1;
export const STATUS_GOAL = 2;

export interface JoinMsg {
  type: 'join';
  id: number;
}

export interface JoinAckMsg {
  type: 'join_ack';
  id: number;
  ok: boolean;
  players: number;
  haptics: boolean;
  error: string | null;
}

export interface StickMsg {
  type: 'stick';
  id: number;
  x: number;
  y: number;
}

export interface ForceMsg {
  type: 'force';
  id: number;
  fx: number;
  fy: number;
}

export interface StateMsg {
  type: 'state';
  px: number;
  py: number;
  vx: number;
  vy: number;
  status: number;
}

export interface HapticsMsg {
  type: 'haptics';
  on: boolean;
}

export interface LeaveMsg {
  type: 'leave';
  id: number;
}

export type ServerMessage = JoinAckMsg | ForceMsg | StateMsg | HapticsMsg;
export type ClientMessage = JoinMsg | StickMsg | LeaveMsg;

function isFiniteNumber(v: unknown): v is number {
  return typeof v === 'number' && Number.isFinite(v);
}

/** Parse one frame from the server; null for anything malformed. */
export function parseServerMessage(raw: string): ServerMessage | null {
  let obj: unknown;
  try {
    obj = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof obj !== 'object' || obj === null) return null;
  const m = obj as Record<string, unknown>;
  switch (m.type) {
    case 'join_ack':
      if (isFiniteNumber(m.id) && typeof m.ok === 'boolean') {
        return {
          type: 'join_ack',
          id: m.id,
          ok: m.ok,
          players: isFiniteNumber(m.players) ? m.players : 0,
          haptics: m.haptics === true,
          error: typeof m.error === 'string' ? m.error : null,
        };
      }
      return null;
    case 'force':
      if (isFiniteNumber(m.id) && isFiniteNumber(m.fx) && isFiniteNumber(m.fy)) {
        return { type: 'force', id: m.id, fx: m.fx, fy: m.fy };
      }
      return null;
    case 'state':
      if (
        isFiniteNumber(m.px) &&
        isFiniteNumber(m.py) &&
        isFiniteNumber(m.vx) &&
        isFiniteNumber(m.vy) &&
        isFiniteNumber(m.status)
      ) {
        return { type: 'state', px: m.px, py: m.py, vx: m.vx, vy: m.vy, status: m.status };
      }
      return null;
    case 'haptics':
      if (typeof m.on === 'boolean') return { type: 'haptics', on: m.on };
      return null;
    default:
      return null;
  }
}

export function joinMessage(slot: number): string {
  return JSON.stringify({ type: 'join', id: slot });
}

export function stickMessage(slot: number, x: number, y: number): string {
  return JSON.stringify({ type: 'stick', id: slot, x, y });
}
