/** Canvas rendering: sea, rink, goal, and the penguin interpolated between
 * the last two authoritative broadcasts. The client draws only what the
 * server said; it never advances the world itself.
 */

import { StateMsg, STATUS_FELL, STATUS_GOAL } from './protocol.js';
import { ClientState, STALE_BROADCAST_MS } from './state.js';

export interface CourseGeometry {
  rink: [number, number, number, number]; // x_min, y_min, x_max, y_max, meters
  goal: [number, number, number, number];
}

export const DEFAULT_COURSE: CourseGeometry = {
  rink: [-8, -4.5, 8, 4.5],
  goal: [6, -1, 8, 1],
};

export interface Viewport {
  scale: number; // px per meter
  originX: number; // canvas px of world (0, 0)
  originY: number;
}

export function fitViewport(
  course: CourseGeometry,
  canvasWidth: number,
  canvasHeight: number,
  marginPx = 24,
): Viewport {
  const [x0, y0, x1, y1] = course.rink;
  const scale = Math.min(
    (canvasWidth - 2 * marginPx) / (x1 - x0),
    (canvasHeight - 2 * marginPx) / (y1 - y0),
  );
  // World y is up; canvas y is down.
  return {
    scale,
    originX: canvasWidth / 2 - ((x0 + x1) / 2) * scale,
    originY: canvasHeight / 2 + ((y0 + y1) / 2) * scale,
  };
}

export function worldToCanvas(v: Viewport, wx: number, wy: number): [number, number] {
  return [v.originX + wx * v.scale, v.originY - wy * v.scale];
}

/** Position between two broadcasts; alpha clamped to [0, 1] so the penguin
 * never extrapolates past authoritative data. */
export function interpolatePosition(
  prev: StateMsg,
  next: StateMsg,
  alpha: number,
): { px: number; py: number } {
  const a = Math.min(1, Math.max(0, alpha));
  return {
    px: prev.px + (next.px - prev.px) * a,
    py: prev.py + (next.py - prev.py) * a,
  };
}

/** Render one broadcast interval behind real time: when a state arrives we
 * start moving from the previous one toward it, reaching it as the next
 * broadcast is due. */
export function interpolatedPenguin(
  state: ClientState,
  nowMs: number,
): { px: number; py: number } | null {
  if (state.lastState === null) return null;
  if (state.prevState === null || state.lastStateAtMs <= state.prevStateAtMs) {
    return { px: state.lastState.px, py: state.lastState.py };
  }
  const span = state.lastStateAtMs - state.prevStateAtMs;
  const alpha = (nowMs - state.lastStateAtMs) / span;
  return interpolatePosition(state.prevState, state.lastState, alpha);
}

export class Renderer {
  private ctx: CanvasRenderingContext2D;
  private course: CourseGeometry;

  constructor(private canvas: HTMLCanvasElement, course: CourseGeometry = DEFAULT_COURSE) {
    const ctx = canvas.getContext('2d');
    if (!ctx) throw new Error('canvas 2d context unavailable');
    this.ctx = ctx;
    this.course = course;
  }

  draw(state: ClientState, nowMs: number): void {
    const { ctx, canvas } = this;
    const view = fitViewport(this.course, canvas.width, canvas.height);

    ctx.fillStyle = '#0b2e4f'; // sea
    ctx.fillRect(0, 0, canvas.width, canvas.height);

    const [rx0, ry0, rx1, ry1] = this.course.rink;
    const [ax, ay] = worldToCanvas(view, rx0, ry1);
    ctx.fillStyle = '#dbe9f4'; // ice
    ctx.fillRect(ax, ay, (rx1 - rx0) * view.scale, (ry1 - ry0) * view.scale);

    const [gx0, gy0, gx1, gy1] = this.course.goal;
    const [gax, gay] = worldToCanvas(view, gx0, gy1);
    ctx.fillStyle = '#7ed6a0';
    ctx.fillRect(gax, gay, (gx1 - gx0) * view.scale, (gy1 - gy0) * view.scale);

    const penguin = interpolatedPenguin(state, nowMs);
    if (penguin !== null) {
      const [px, py] = worldToCanvas(view, penguin.px, penguin.py);
      ctx.fillStyle = '#222';
      ctx.beginPath();
      ctx.arc(px, py, Math.max(5, view.scale * 0.25), 0, Math.PI * 2);
      ctx.fill();
      ctx.fillStyle = '#f6a623';
      ctx.beginPath();
      ctx.arc(px, py - Math.max(2, view.scale * 0.1), Math.max(2, view.scale * 0.08), 0, Math.PI * 2);
      ctx.fill();
    }

    ctx.font = '16px system-ui, sans-serif';
    ctx.textAlign = 'center';
    const status = state.lastState?.status;
    if (status === STATUS_GOAL) {
      this.banner('GOAL!', '#1d7a46');
    } else if (status === STATUS_FELL) {
      this.banner('Fell into the sea', '#8c2f2f');
    }
    if (state.broadcastStale(nowMs)) {
      ctx.fillStyle = '#ffd24d';
      ctx.fillText('connection stalled...', canvas.width / 2, 24);
    }
    if (state.connection !== 'joined') {
      ctx.fillStyle = '#fff';
      ctx.fillText(
        state.connection === 'rejected' ? `join failed: ${state.error ?? ''}` : state.connection,
        canvas.width / 2,
        canvas.height - 16,
      );
    }
  }

  private banner(text: string, color: string): void {
    const { ctx, canvas } = this;
    ctx.fillStyle = color;
    ctx.fillRect(0, canvas.height / 2 - 28, canvas.width, 56);
    ctx.fillStyle = '#fff';
    ctx.font = 'bold 28px system-ui, sans-serif';
    ctx.fillText(text, canvas.width / 2, canvas.height / 2 + 10);
  }
}
