/** Vector overlays: rays, orbit markers and the verdict badge.
 *
 * Everything here is a coordinate transform of service JSON into canvas
 * space; canvas row 0 is the top, which is the mirror of the viewport's
 * mathematical rows, so the imaginary axis is flipped once, here.
 */

import { PmVerdictJson, RayTraceJson } from "./api.js";
import { Complex } from "./state.js";
import { Viewport, complexToPixel } from "./tiles.js";

export interface CanvasPoint {
  x: number;
  y: number;
}

export function toCanvas(vp: Viewport, z: Complex, canvasH: number): CanvasPoint {
  const p = complexToPixel(vp, z);
  return { x: p.i, y: canvasH - 1 - p.j };
}

export function rayPath(ray: RayTraceJson, vp: Viewport, canvasH: number): CanvasPoint[] {
  const pts = ray.points.map(([re, im]) => toCanvas(vp, { re, im }, canvasH));
  if (ray.landing) {
    pts.push(toCanvas(vp, { re: ray.landing[0], im: ray.landing[1] }, canvasH));
  }
  return pts;
}

export function orbitPath(
  orbit: [number, number][],
  vp: Viewport,
  canvasH: number,
): CanvasPoint[] {
  return orbit.map(([re, im]) => toCanvas(vp, { re, im }, canvasH));
}

export interface Badge {
  text: string;
  color: string;
}

export function verdictBadge(v: PmVerdictJson): Badge {
  switch (v.outcome) {
    case "accept":
      return { text: "Accept", color: "#1a7f37" };
    case "reject":
      return {
        text: v.reason ? `Reject (${v.reason})` : "Reject",
        color: "#c23030",
      };
    default:
      return {
        text: v.reason ? `Indeterminate (${v.reason})` : "Indeterminate",
        color: "#8a6d1d",
      };
  }
}

/** Witness marker position, when the verdict carries one. */
export function witnessPoint(v: PmVerdictJson, vp: Viewport, canvasH: number): CanvasPoint | null {
  if (!v.witness) return null;
  const [re, im] = v.witness.point;
  return toCanvas(vp, { re, im }, canvasH);
}
