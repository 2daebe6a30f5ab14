/** Pointer-to-deflection mapping and the self-centering release animation.
 *
 * Deflection is the normalized stick tilt, circle-clamped to the unit disk.
 * Screen y points down but stick y points up, matching the game's world
 * axes, so dragging up pushes the penguin up.
 */

export interface Deflection {
  x: number;
  y: number;
}

export interface WidgetRect {
  left: number;
  top: number;
  width: number;
  height: number;
}

export const CENTERING_TIME_CONSTANT_MS = 70;
const CENTER_SNAP = 1e-3;

export function circleClamp(x: number, y: number): Deflection {
  const len = Math.hypot(x, y);
  if (len > 1) {
    return { x: x / len, y: y / len };
  }
  return { x, y };
}

/** Map a pointer position to a deflection: widget center is (0,0), the
 * rim is magnitude 1, points outside the widget clamp to the rim. */
export function pointerToDeflection(rect: WidgetRect, clientX: number, clientY: number): Deflection {
  const rx = 2 * ((clientX - rect.left) / rect.width - 0.5);
  const ry = 2 * ((clientY - rect.top) / rect.height - 0.5);
  return circleClamp(rx, -ry);
}

/** One animation step of the released stick easing back to center. */
export function centeringStep(d: Deflection, dtMs: number): Deflection {
  const decay = Math.exp(-dtMs / CENTERING_TIME_CONSTANT_MS);
  const next = { x: d.x * decay, y: d.y * decay };
  if (Math.hypot(next.x, next.y) < CENTER_SNAP) {
    return { x: 0, y: 0 };
  }
  return next;
}

export interface JoystickEvents {
  onChange?: (d: Deflection) => void;
}

/** DOM joystick: a round base with a knob, pointer-captured dragging.
 *
 * The knob is drawn at the commanded deflection plus the force offset the
 * renderer supplies, so the motor's pull is visible as a displacement
 * between finger and knob.
 */
export class JoystickWidget {
  readonly base: HTMLDivElement;
  readonly knob: HTMLDivElement;
  readonly arrow: HTMLDivElement;

  deflection: Deflection = { x: 0, y: 0 };
  held = false;

  private pointerId: number | null = null;
  private events: JoystickEvents;

  constructor(parent: HTMLElement, events: JoystickEvents = {}) {
    this.events = events;
    this.base = document.createElement('div');
    this.base.className = 'stick-base';
    this.knob = document.createElement('div');
    this.knob.className = 'stick-knob';
    this.arrow = document.createElement('div');
    this.arrow.className = 'force-arrow';
    this.arrow.style.display = 'none';
    this.base.appendChild(this.arrow);
    this.base.appendChild(this.knob);
    parent.appendChild(this.base);

    this.base.addEventListener('pointerdown', (e) => {
      if (this.pointerId !== null) return;
      this.pointerId = e.pointerId;
      this.held = true;
      this.base.setPointerCapture(e.pointerId);
      this.moveTo(e.clientX, e.clientY);
    });
    this.base.addEventListener('pointermove', (e) => {
      if (e.pointerId !== this.pointerId) return;
      this.moveTo(e.clientX, e.clientY);
    });
    const release = (e: PointerEvent) => {
      if (e.pointerId !== this.pointerId) return;
      this.pointerId = null;
      this.held = false; // the animation loop eases deflection back to 0
    };
    this.base.addEventListener('pointerup', release);
    this.base.addEventListener('pointercancel', release);
  }

  private moveTo(clientX: number, clientY: number): void {
    const r = this.base.getBoundingClientRect();
    this.deflection = pointerToDeflection(
      { left: r.left, top: r.top, width: r.width, height: r.height },
      clientX,
      clientY,
    );
    this.events.onChange?.(this.deflection);
  }

  /** Advance the release animation; call once per frame. */
  animate(dtMs: number): void {
    if (this.held) return;
    const before = this.deflection;
    this.deflection = centeringStep(this.deflection, dtMs);
    if (before.x !== this.deflection.x || before.y !== this.deflection.y) {
      this.events.onChange?.(this.deflection);
    }
  }

  /** Draw the knob at deflection plus a force displacement (screen px),
   * and the arrow for the force itself. Zero force means no offset. */
  render(forceOffsetPx: { x: number; y: number }, arrowVisible: boolean): void {
    const r = this.base.getBoundingClientRect();
    const cx = r.width / 2;
    const cy = r.height / 2;
    const travel = r.width / 2;
    const kx = cx + this.deflection.x * travel + forceOffsetPx.x;
    const ky = cy - this.deflection.y * travel - forceOffsetPx.y;
    this.knob.style.left = `${kx}px`;
    this.knob.style.top = `${ky}px`;
    const mag = Math.hypot(forceOffsetPx.x, forceOffsetPx.y);
    if (!arrowVisible || mag < 1) {
      this.arrow.style.display = 'none';
      return;
    }
    const angle = Math.atan2(-forceOffsetPx.y, forceOffsetPx.x);
    this.arrow.style.display = 'block';
    this.arrow.style.left = `${cx}px`;
    this.arrow.style.top = `${cy}px`;
    this.arrow.style.width = `${mag}px`;
    this.arrow.style.transform = `rotate(${angle}rad)`;
  }
}
