/** Page wiring: canvas + joystick + bridge client.
 *
 * Query parameters: ?slot=1..4 picks the controller slot, ?server=ws://...
 * overrides the bridge URL (default: same host, port 8765).
 */

import { JoystickWidget } from './joystick.js';
import { BridgeClient } from './net.js';
import { Renderer, DEFAULT_COURSE } from './render.js';
import { ClientState } from './state.js';

const params = new URLSearchParams(window.location.search);
const slot = Math.min(4, Math.max(1, parseInt(params.get('slot') ?? '1', 10) || 1));
const server = params.get('server') ?? `ws://${window.location.hostname || 'localhost'}:8765`;

// Knob displacement per ampere of force command, in px. Full current
// (3 A) displaces the knob by a third of the stick radius.
const FORCE_PX_PER_AMP = 12;

const app = document.getElementById('app') as HTMLDivElement;
const canvas = document.createElement('canvas');
canvas.width = 960;
canvas.height = 560;
app.appendChild(canvas);

const hud = document.createElement('div');
hud.className = 'hud';
app.appendChild(hud);

const state = new ClientState(slot);
const stick = new JoystickWidget(app, {
  onChange: (d) => state.setStick(d.x, d.y),
});
const renderer = new Renderer(canvas, DEFAULT_COURSE);
const client = new BridgeClient(server, state);
client.connect();

let lastFrame = performance.now();
function frame(now: number) {
  const dt = now - lastFrame;
  lastFrame = now;
  stick.animate(dt);
  renderer.draw(state, Date.now());
  stick.render(
    { x: state.forceX * FORCE_PX_PER_AMP, y: state.forceY * FORCE_PX_PER_AMP },
    state.forceArrowVisible(),
  );
  hud.textContent =
    `slot ${slot} | ${state.connection}` +
    ` | haptics ${state.haptics ? 'ON' : 'off'}` +
    (state.error ? ` | ${state.error}` : '');
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);

window.addEventListener('beforeunload', () => client.close());
