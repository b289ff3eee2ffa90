/** Typed client for the HTTP service, with stale-response sequencing and a
 * tile cache.  All numerics come from the service; the browser only
 * transforms coordinates.
 */

import { Complex } from "./state.js";

export interface PmVerdictJson {
  a: [number, number];
  d: number;
  outcome: "accept" | "reject" | "indeterminate";
  reason: string | null;
  s: [number, number] | null;
  witness: { index: number; point: [number, number]; side: string } | null;
  orbit_len: number;
}

export interface RayTraceJson {
  angle: string;
  points: [number, number][];
  landing: [number, number] | null;
  status: "landed" | "budget" | "newton_failed";
  s?: [number, number];
}

export interface OrbitJson {
  s: [number, number];
  right: [number, number][];
  left: [number, number][];
}

export type Fetcher = (url: string) => Promise<Response>;

export class HttpError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class Api {
  constructor(
    private base: string,
    private fetcher: Fetcher = (url) => fetch(url),
  ) {}

  private async json<T>(url: string): Promise<T> {
    const resp = await this.fetcher(url);
    if (!resp.ok) throw new HttpError(resp.status, `${resp.status} for ${url}`);
    return (await resp.json()) as T;
  }

  membership(d: number, a: Complex, maxIter: number): Promise<PmVerdictJson> {
    return this.json(
      `${this.base}/api/v1/membership?d=${d}&a_re=${a.re}&a_im=${a.im}&max_iter=${maxIter}`,
    );
  }

  ray(d: number, a: Complex, angle: string): Promise<RayTraceJson> {
    return this.json(
      `${this.base}/api/v1/ray?d=${d}&a_re=${a.re}&a_im=${a.im}` +
        `&angle=${encodeURIComponent(angle)}`,
    );
  }

  orbit(d: number, a: Complex, n: number): Promise<OrbitJson> {
    return this.json(`${this.base}/api/v1/orbit?d=${d}&a_re=${a.re}&a_im=${a.im}&n=${n}`);
  }

  async tile(url: string): Promise<ArrayBuffer> {
    const resp = await this.fetcher(url);
    if (!resp.ok) throw new HttpError(resp.status, `${resp.status} for ${url}`);
    return resp.arrayBuffer();
  }

  version(): Promise<{ version: string; max_zoom: number; tile_px: number }> {
    return this.json(`${this.base}/api/v1/version`);
  }
}

/** Monotone sequence numbers: responses for superseded requests are dropped. */
export class SequenceGate {
  private issued = 0;
  private applied = 0;

  next(): number {
    return ++this.issued;
  }

  /** True when the response for `seq` is still the newest in flight. */
  accept(seq: number): boolean {
    if (seq < this.applied) return false;
    this.applied = seq;
    return true;
  }
}

/** Dedupes in-flight tile fetches and keeps decoded results keyed by URL. */
export class TileCache<T> {
  private map = new Map<string, Promise<T>>();

  constructor(private limit = 512) {}

  get(url: string, load: (url: string) => Promise<T>): Promise<T> {
    const hit = this.map.get(url);
    if (hit) return hit;
    const pending = load(url).catch((err) => {
      this.map.delete(url); // do not cache failures
      throw err;
    });
    this.map.set(url, pending);
    if (this.map.size > this.limit) {
      const oldest = this.map.keys().next().value;
      if (oldest !== undefined) this.map.delete(oldest);
    }
    return pending;
  }

  get size(): number {
    return this.map.size;
  }
}
