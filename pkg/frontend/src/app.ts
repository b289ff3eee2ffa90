/** Dual-pane explorer: pick a parameter on the left, inspect the dynamical
 * plane, rays, orbits and the membership verdict on the right.
 *
 * All numerics come from the HTTP service; this module only moves pixels.
 * The URL fragment always reflects the full state, so links are shareable.
 */

import { Api, HttpError, SequenceGate, TileCache } from "./api.js";
import { rayPath, orbitPath, toCanvas, verdictBadge, witnessPoint } from "./overlays.js";
import { decodePPM } from "./ppm.js";
import {
  Complex,
  ExplorerState,
  decodeState,
  defaultState,
  encodeState,
} from "./state.js";
import {
  Viewport,
  dynTileUrl,
  locusTileUrl,
  pixelToComplex,
  rootViewport,
  tileViewport,
  tilesForView,
  viewportHeight,
} from "./tiles.js";

const PANE = 512;

const api = new Api("");
const tileCache = new TileCache<ImageBitmap>();
const clickGate = new SequenceGate();

let state: ExplorerState = defaultState();
let maxZoom = 12;
let tilePx = 256;

const $ = (id: string) => document.getElementById(id)!;
const paramCanvas = $("param-pane") as HTMLCanvasElement;
const dynCanvas = $("dyn-pane") as HTMLCanvasElement;

function banner(message: string): void {
  const el = $("banner");
  el.textContent = message;
  el.classList.add("show");
  window.setTimeout(() => el.classList.remove("show"), 4000);
}

function paneViewport(center: Complex, zoom: number): Viewport {
  const root = rootViewport(state.family, state.d);
  return { center, width: root.width / (1 << zoom), pxW: PANE, pxH: PANE };
}

async function loadTile(url: string): Promise<ImageBitmap> {
  const buf = await api.tile(url);
  const img = decodePPM(buf, true);
  return createImageBitmap(new ImageData(img.rgba, img.width, img.height));
}

async function drawTiles(
  canvas: HTMLCanvasElement,
  view: Viewport,
  urlFor: (z: number, x: number, y: number) => string,
  zoom: number,
): Promise<void> {
  const ctx = canvas.getContext("2d")!;
  const root = rootViewport(state.family, state.d);
  const tiles = tilesForView(root, view.center, view.width, viewportHeight(view), zoom);
  const n = 1 << zoom;
  const tileW = root.width / n;
  const scale = PANE / view.width;
  await Promise.all(
    tiles.map(async (t) => {
      let bitmap: ImageBitmap;
      try {
        bitmap = await tileCache.get(urlFor(t.z, t.x, t.y), loadTile);
      } catch (err) {
        if (err instanceof HttpError && err.status === 422) {
          banner(`zoom limit: the service caps tiles at level ${maxZoom}`);
        } else {
          banner(`tile fetch failed: ${err}`);
        }
        return;
      }
      const x0 = root.center.re - root.width / 2 + t.x * tileW;
      const yTop = root.center.im - root.width / 2 + (t.y + 1) * tileW;
      const dx = (x0 - (view.center.re - view.width / 2)) * scale;
      const dy = (view.center.im + viewportHeight(view) / 2 - yTop) * scale;
      ctx.drawImage(bitmap, dx, dy, tileW * scale, tileW * scale);
    }),
  );
}

function drawPath(ctx: CanvasRenderingContext2D, pts: { x: number; y: number }[], color: string) {
  if (pts.length < 2) return;
  ctx.strokeStyle = color;
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  ctx.moveTo(pts[0].x, pts[0].y);
  for (const p of pts.slice(1)) ctx.lineTo(p.x, p.y);
  ctx.stroke();
}

function drawDot(ctx: CanvasRenderingContext2D, p: { x: number; y: number }, color: string, r = 3) {
  ctx.fillStyle = color;
  ctx.beginPath();
  ctx.arc(p.x, p.y, r, 0, 2 * Math.PI);
  ctx.fill();
}

async function refreshParamPane(): Promise<void> {
  const view = paneViewport(state.paramCenter, state.paramZoom);
  const ctx = paramCanvas.getContext("2d")!;
  ctx.fillStyle = "#202028";
  ctx.fillRect(0, 0, PANE, PANE);
  await drawTiles(
    paramCanvas,
    view,
    (z, x, y) => locusTileUrl("", state.family, state.d, { z, x, y }, state.maxIter),
    state.paramZoom,
  );
  if (state.selected) {
    drawDot(ctx, toCanvas(view, state.selected, PANE), "#ff9f1c", 4);
  }
}

async function refreshDynPane(seq: number): Promise<void> {
  const ctx = dynCanvas.getContext("2d")!;
  ctx.fillStyle = "#202028";
  ctx.fillRect(0, 0, PANE, PANE);
  const badge = $("badge");
  if (!state.selected) {
    badge.textContent = "click the parameter plane";
    badge.style.background = "#555";
    return;
  }
  const a = state.selected;
  const d = state.d;
  try {
    const [verdict, ray0, rayHalf, orbit] = await Promise.all([
      api.membership(d, a, state.maxIter),
      api.ray(d, a, "0/1"),
      api.ray(d, a, "1/2"),
      api.orbit(d, a, 60),
    ]);
    if (!clickGate.accept(seq)) return; // a newer click superseded this one
    // the dynamical root viewport is map-dependent server-side; fetch tiles
    // through the same addressing and show the zoom-0 frame by default
    const version = await api.version();
    const rootW = 2 * radiusGuess(verdict);
    const view: Viewport = { center: state.dynCenter, width: rootW / (1 << state.dynZoom), pxW: PANE, pxH: PANE };
    await drawTilesDyn(view, a);
    if (state.overlays.rays) {
      drawPath(ctx, rayPath(ray0, view, PANE), "#62b6ff");
      drawPath(ctx, rayPath(rayHalf, view, PANE), "#ff6262");
    }
    if (state.overlays.orbits) {
      for (const p of orbitPath(orbit.right, view, PANE)) drawDot(ctx, p, "#ffd166");
      for (const p of orbitPath(orbit.left, view, PANE)) drawDot(ctx, p, "#06d6a0");
    }
    if (state.overlays.sides && verdict.s) {
      const sref = { re: verdict.s[0], im: verdict.s[1] };
      const right = toCanvas(view, { re: sref.re * Math.sqrt(d), im: sref.im * Math.sqrt(d) }, PANE);
      const left = toCanvas(view, { re: -sref.re * Math.sqrt(d), im: -sref.im * Math.sqrt(d) }, PANE);
      ctx.fillStyle = "#eaeaea";
      ctx.font = "14px sans-serif";
      ctx.fillText("R", right.x + 6, right.y - 6);
      ctx.fillText("L", left.x + 6, left.y - 6);
    }
    const w = witnessPoint(verdict, view, PANE);
    if (w) {
      drawDot(ctx, w, "#ff2975", 6);
      ctx.strokeStyle = "#ff2975";
      ctx.beginPath();
      ctx.arc(w.x, w.y, 10, 0, 2 * Math.PI);
      ctx.stroke();
    }
    if (state.overlays.badge) {
      const b = verdictBadge(verdict);
      badge.textContent = `${b.text}  (a = ${a.re.toFixed(6)} ${a.im < 0 ? "-" : "+"} ${Math.abs(a.im).toFixed(6)}i)`;
      badge.style.background = b.color;
    }
    void version;
  } catch (err) {
    if (!clickGate.accept(seq)) return;
    banner(`service error: ${err}`);
    badge.textContent = "unavailable";
    badge.style.background = "#555";
  }
}

function radiusGuess(verdict: { s: [number, number] | null }): number {
  // frame the Julia set: |z| up to ~2.5 x |s| sqrt(d) covers the interesting
  // region; fall back to 4 when no branch landed
  if (!verdict.s) return 4;
  const mod = Math.hypot(verdict.s[0], verdict.s[1]) * Math.sqrt(state.d);
  return Math.max(3, 3 * mod);
}

async function drawTilesDyn(view: Viewport, a: Complex): Promise<void> {
  const ctx = dynCanvas.getContext("2d")!;
  // single zoom-0 tile scaled into the pane keeps the first paint simple and
  // cheap; deeper dynamical zooms reuse the slippy addressing
  const url = dynTileUrl("", state.d, a, { z: 0, x: 0, y: 0 }, state.maxIter);
  try {
    const bitmap = await tileCache.get(url, loadTile);
    ctx.drawImage(bitmap, 0, 0, PANE, PANE);
  } catch (err) {
    banner(`dynamical tile failed: ${err}`);
  }
}

function pushState(): void {
  const frag = encodeState(state);
  if (location.hash.slice(1) !== frag) {
    history.replaceState(null, "", `#${frag}`);
  }
}

async function fullRefresh(): Promise<void> {
  pushState();
  const seq = clickGate.next();
  await Promise.all([refreshParamPane(), refreshDynPane(seq)]);
}

function wireEvents(): void {
  paramCanvas.addEventListener("click", (ev) => {
    const rect = paramCanvas.getBoundingClientRect();
    const i = ((ev.clientX - rect.left) / rect.width) * PANE;
    const jCanvas = ((ev.clientY - rect.top) / rect.height) * PANE;
    const view = paneViewport(state.paramCenter, state.paramZoom);
    state.selected = pixelToComplex(view, i, PANE - 1 - jCanvas);
    pushState();
    const seq = clickGate.next();
    void refreshParamPane();
    void refreshDynPane(seq);
  });
  paramCanvas.addEventListener("dblclick", (ev) => {
    ev.preventDefault();
    const rect = paramCanvas.getBoundingClientRect();
    const i = ((ev.clientX - rect.left) / rect.width) * PANE;
    const jCanvas = ((ev.clientY - rect.top) / rect.height) * PANE;
    const view = paneViewport(state.paramCenter, state.paramZoom);
    state.paramCenter = pixelToComplex(view, i, PANE - 1 - jCanvas);
    void fullRefresh();
  });
  paramCanvas.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    const dz = ev.deltaY < 0 ? 1 : -1;
    const next = state.paramZoom + dz;
    if (next < 0) return;
    if (next > maxZoom) {
      banner(`zoom limit: the service caps tiles at level ${maxZoom}`);
      return;
    }
    state.paramZoom = next;
    void fullRefresh();
  });
  ($("family") as HTMLSelectElement).addEventListener("change", (ev) => {
    state.family = (ev.target as HTMLSelectElement).value as ExplorerState["family"];
    state.paramCenter = rootViewport(state.family, state.d).center;
    state.paramZoom = 0;
    state.selected = null;
    void fullRefresh();
  });
  ($("degree") as HTMLInputElement).addEventListener("change", (ev) => {
    state.d = Math.max(1, Number((ev.target as HTMLInputElement).value) | 0);
    state.selected = null;
    void fullRefresh();
  });
  const slider = $("budget") as HTMLInputElement;
  slider.addEventListener("change", () => {
    state.maxIter = Number(slider.value);
    $("budget-label").textContent = slider.value;
    void fullRefresh();
  });
  for (const key of ["rays", "orbits", "sides", "badge"] as const) {
    ($(`ov-${key}`) as HTMLInputElement).addEventListener("change", (ev) => {
      state.overlays[key] = (ev.target as HTMLInputElement).checked;
      const seq = clickGate.next();
      void refreshDynPane(seq);
    });
  }
  window.addEventListener("hashchange", () => {
    state = decodeState(location.hash);
    syncControls();
    void fullRefresh();
  });
}

function syncControls(): void {
  ($("family") as HTMLSelectElement).value = state.family;
  ($("degree") as HTMLInputElement).value = String(state.d);
  ($("budget") as HTMLInputElement).value = String(state.maxIter);
  $("budget-label").textContent = String(state.maxIter);
  for (const key of ["rays", "orbits", "sides", "badge"] as const) {
    ($(`ov-${key}`) as HTMLInputElement).checked = state.overlays[key];
  }
}

async function init(): Promise<void> {
  state = decodeState(location.hash);
  try {
    const v = await api.version();
    maxZoom = v.max_zoom;
    tilePx = v.tile_px;
  } catch (err) {
    banner(`service unreachable: ${err}`);
  }
  syncControls();
  wireEvents();
  await fullRefresh();
}

void init();
