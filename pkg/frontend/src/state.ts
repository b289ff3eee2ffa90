/** Explorer state and its URL-fragment encoding.
 *
 * The fragment is the single source of truth for a session: every field of
 * the state round-trips through encodeState/decodeState, so a shared URL
 * reproduces the identical view (same tiles requested, same verdict shown).
 */

export type Family = "multibrot" | "cbo" | "mbo";

export interface Complex {
  re: number;
  im: number;
}

export interface Overlays {
  rays: boolean;
  orbits: boolean;
  sides: boolean;
  badge: boolean;
}

export interface ExplorerState {
  family: Family;
  d: number;
  paramCenter: Complex;
  paramZoom: number; // slippy zoom level of the parameter pane
  selected: Complex | null;
  dynCenter: Complex;
  dynZoom: number;
  overlays: Overlays;
  maxIter: number;
}

export function defaultState(): ExplorerState {
  return {
    family: "cbo",
    d: 1,
    paramCenter: { re: 0, im: 0 },
    paramZoom: 0,
    selected: null,
    dynCenter: { re: 0, im: 0 },
    dynZoom: 0,
    overlays: { rays: true, orbits: true, sides: false, badge: true },
    maxIter: 500,
  };
}

const FAMILIES: Family[] = ["multibrot", "cbo", "mbo"];

function cpx(z: Complex): string {
  return `${z.re},${z.im}`;
}

function parseCpx(text: string | null): Complex | null {
  if (!text) return null;
  const [re, im] = text.split(",").map(Number);
  if (!isFinite(re) || !isFinite(im)) return null;
  return { re, im };
}

export function encodeState(s: ExplorerState): string {
  const parts = new URLSearchParams();
  parts.set("family", s.family);
  parts.set("d", String(s.d));
  parts.set("pc", cpx(s.paramCenter));
  parts.set("pz", String(s.paramZoom));
  if (s.selected) parts.set("sel", cpx(s.selected));
  parts.set("dc", cpx(s.dynCenter));
  parts.set("dz", String(s.dynZoom));
  const ov =
    (s.overlays.rays ? "r" : "") +
    (s.overlays.orbits ? "o" : "") +
    (s.overlays.sides ? "s" : "") +
    (s.overlays.badge ? "b" : "");
  parts.set("ov", ov);
  parts.set("mi", String(s.maxIter));
  return parts.toString();
}

export function decodeState(fragment: string): ExplorerState {
  const s = defaultState();
  const parts = new URLSearchParams(fragment.replace(/^#/, ""));
  const fam = parts.get("family");
  if (fam && (FAMILIES as string[]).includes(fam)) s.family = fam as Family;
  const d = Number(parts.get("d"));
  if (Number.isInteger(d) && d >= 1) s.d = d;
  s.paramCenter = parseCpx(parts.get("pc")) ?? s.paramCenter;
  const pz = Number(parts.get("pz"));
  if (Number.isInteger(pz) && pz >= 0) s.paramZoom = pz;
  s.selected = parseCpx(parts.get("sel"));
  s.dynCenter = parseCpx(parts.get("dc")) ?? s.dynCenter;
  const dz = Number(parts.get("dz"));
  if (Number.isInteger(dz) && dz >= 0) s.dynZoom = dz;
  const ov = parts.get("ov");
  if (ov !== null) {
    s.overlays = {
      rays: ov.includes("r"),
      orbits: ov.includes("o"),
      sides: ov.includes("s"),
      badge: ov.includes("b"),
    };
  }
  const mi = Number(parts.get("mi"));
  if (Number.isInteger(mi) && mi > 0) s.maxIter = mi;
  return s;
}
