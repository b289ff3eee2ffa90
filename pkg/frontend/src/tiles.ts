/** Slippy-tile addressing over the service's fixed root viewports.
 *
 * This mirrors the server arithmetic exactly: the root is a square of side
 * `width` centered at `center`; zoom level z splits it into 2^z x 2^z tiles;
 * tile row y=0 sits at the lowest imaginary part.  Pixel (i, j) of a viewport
 * maps to center + ((i+0.5)/pxW - 0.5)*width + i*((j+0.5)/pxH - 0.5)*height.
 */

import { Complex, Family } from "./state.js";

export interface Viewport {
  center: Complex;
  width: number;
  pxW: number;
  pxH: number;
}

const ROOTS: Record<string, { center: Complex; width: number }> = {
  multibrot2: { center: { re: -0.25, im: 0 }, width: 4.0 },
  multibrot: { center: { re: 0, im: 0 }, width: 4.5 },
  cbo: { center: { re: 0, im: 0 }, width: 6.0 },
  mbo: { center: { re: 0, im: 0 }, width: 3.0 },
};

export function rootViewport(family: Family, d: number): { center: Complex; width: number } {
  if (family === "multibrot" && d === 1) return ROOTS.multibrot2;
  return ROOTS[family];
}

export function tileViewport(
  root: { center: Complex; width: number },
  z: number,
  x: number,
  y: number,
  px: number,
): Viewport {
  const n = 1 << z;
  return {
    center: {
      re: root.center.re + ((x + 0.5) / n - 0.5) * root.width,
      im: root.center.im + ((y + 0.5) / n - 0.5) * root.width,
    },
    width: root.width / n,
    pxW: px,
    pxH: px,
  };
}

export function viewportHeight(vp: Viewport): number {
  return (vp.width * vp.pxH) / vp.pxW;
}

export function pixelToComplex(vp: Viewport, i: number, j: number): Complex {
  return {
    re: vp.center.re + ((i + 0.5) / vp.pxW - 0.5) * vp.width,
    im: vp.center.im + ((j + 0.5) / vp.pxH - 0.5) * viewportHeight(vp),
  };
}

export function complexToPixel(vp: Viewport, z: Complex): { i: number; j: number } {
  return {
    i: ((z.re - vp.center.re) / vp.width + 0.5) * vp.pxW - 0.5,
    j: ((z.im - vp.center.im) / viewportHeight(vp) + 0.5) * vp.pxH - 0.5,
  };
}

export interface TileAddress {
  z: number;
  x: number;
  y: number;
}

/** Tiles of the given zoom level intersecting a view window. */
export function tilesForView(
  root: { center: Complex; width: number },
  viewCenter: Complex,
  viewWidth: number,
  viewHeight: number,
  z: number,
): TileAddress[] {
  const n = 1 << z;
  const tileW = root.width / n;
  const x0 = root.center.re - root.width / 2;
  const y0 = root.center.im - root.width / 2;
  const clamp = (v: number) => Math.max(0, Math.min(n - 1, v));
  const xa = clamp(Math.floor((viewCenter.re - viewWidth / 2 - x0) / tileW));
  const xb = clamp(Math.floor((viewCenter.re + viewWidth / 2 - x0) / tileW));
  const ya = clamp(Math.floor((viewCenter.im - viewHeight / 2 - y0) / tileW));
  const yb = clamp(Math.floor((viewCenter.im + viewHeight / 2 - y0) / tileW));
  const out: TileAddress[] = [];
  for (let y = ya; y <= yb; y++) {
    for (let x = xa; x <= xb; x++) {
      out.push({ z, x, y });
    }
  }
  return out;
}

export function locusTileUrl(
  base: string,
  family: Family,
  d: number,
  t: TileAddress,
  maxIter: number,
): string {
  return (
    `${base}/api/v1/locus-tile?family=${family}&d=${d}` +
    `&z=${t.z}&x=${t.x}&y=${t.y}&max_iter=${maxIter}`
  );
}

export function dynTileUrl(
  base: string,
  d: number,
  a: Complex,
  t: TileAddress,
  maxIter: number,
): string {
  return (
    `${base}/api/v1/dyn-tile?kind=monic&d=${d}&a_re=${a.re}&a_im=${a.im}` +
    `&z=${t.z}&x=${t.x}&y=${t.y}&max_iter=${maxIter}`
  );
}
