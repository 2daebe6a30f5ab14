import { describe, expect, it } from 'vitest';

import { ClientState } from '../src/state.js';
import {
  DEFAULT_COURSE,
  fitViewport,
  interpolatePosition,
  interpolatedPenguin,
  worldToCanvas,
} from '../src/render.js';
import type { StateMsg } from '../src/protocol.js';

function stateMsg(px: number, py: number, status = 0): StateMsg {
  return { type: 'state', px, py, vx: 0, vy: 0, status };
}

describe('ClientState', () => {
  it('clamps the stick to the unit box', () => {
    const s = new ClientState(1);
    s.setStick(2.0, -3.5);
    expect(s.stickX).toBe(1);
    expect(s.stickY).toBe(-1);
  });

  it('reports stale broadcasts after one second', () => {
    const s = new ClientState(1);
    s.connection = 'joined';
    s.pushState(stateMsg(0, 0), 1000);
    expect(s.broadcastStale(1900)).toBe(false);
    expect(s.broadcastStale(2100)).toBe(true);
  });

  it('shows the force arrow only with haptics on and a nonzero force', () => {
    const s = new ClientState(1);
    s.setForce(1.5, 0);
    expect(s.forceArrowVisible()).toBe(false); // haptics off: hidden all phase
    s.haptics = true;
    expect(s.forceArrowVisible()).toBe(true);
    s.setForce(0, 0);
    expect(s.forceArrowVisible()).toBe(false); // zero force: no offset, no arrow
  });
});

describe('viewport mapping', () => {
  it('maps the rink center to the canvas center', () => {
    const view = fitViewport(DEFAULT_COURSE, 960, 560);
    const [cx, cy] = worldToCanvas(view, 0, 0);
    expect(cx).toBeCloseTo(480, 6);
    expect(cy).toBeCloseTo(280, 6);
  });

  it('keeps world +y pointing up on the canvas', () => {
    const view = fitViewport(DEFAULT_COURSE, 960, 560);
    const [, yTop] = worldToCanvas(view, 0, 4.5);
    const [, yBottom] = worldToCanvas(view, 0, -4.5);
    expect(yTop).toBeLessThan(yBottom);
  });
});

describe('interpolation', () => {
  it('hits the midpoint at alpha 0.5', () => {
    const p = interpolatePosition(stateMsg(0, 0), stateMsg(2, -4), 0.5);
    expect(p).toEqual({ px: 1, py: -2 });
  });

  it('clamps alpha so it never extrapolates', () => {
    expect(interpolatePosition(stateMsg(0, 0), stateMsg(2, 0), 1.7).px).toBe(2);
    expect(interpolatePosition(stateMsg(0, 0), stateMsg(2, 0), -0.3).px).toBe(0);
  });

  it('moves between two consecutive broadcasts', () => {
    const s = new ClientState(1);
    s.connection = 'joined';
    s.pushState(stateMsg(0, 0), 1000);
    s.pushState(stateMsg(1, 0), 1020);
    const mid = interpolatedPenguin(s, 1030);
    expect(mid).not.toBeNull();
    expect(mid!.px).toBeGreaterThan(0);
    expect(mid!.px).toBeLessThanOrEqual(1);
  });

  it('renders the only broadcast directly when no pair exists', () => {
    const s = new ClientState(1);
    s.pushState(stateMsg(3, 2), 1000);
    expect(interpolatedPenguin(s, 1999)).toEqual({ px: 3, py: 2 });
  });
});
