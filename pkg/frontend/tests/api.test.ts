import { test } from "node:test";
import assert from "node:assert/strict";

import { Api, HttpError, SequenceGate, TileCache } from "../src/api.js";

function fakeFetch(routes: Record<string, unknown>): (url: string) => Promise<Response> {
  return async (url: string) => {
    if (url in routes) {
      const body = routes[url];
      return {
        ok: true,
        status: 200,
        json: async () => body,
        arrayBuffer: async () => body as ArrayBuffer,
      } as unknown as Response;
    }
    return { ok: false, status: 404, json: async () => ({}) } as unknown as Response;
  };
}

test("membership request url and parsing", async () => {
  const payload = {
    a: [1.5, 0],
    d: 1,
    outcome: "accept",
    reason: null,
    s: [0, 0.707],
    witness: null,
    orbit_len: 2,
  };
  const api = new Api(
    "",
    fakeFetch({ "/api/v1/membership?d=1&a_re=1.5&a_im=0&max_iter=500": payload }),
  );
  const verdict = await api.membership(1, { re: 1.5, im: 0 }, 500);
  assert.equal(verdict.outcome, "accept");
});

test("ray request encodes the angle", async () => {
  const api = new Api(
    "",
    fakeFetch({
      "/api/v1/ray?d=1&a_re=1.5&a_im=0&angle=1%2F2": { angle: "1/2", points: [], landing: null, status: "landed" },
    }),
  );
  const ray = await api.ray(1, { re: 1.5, im: 0 }, "1/2");
  assert.equal(ray.angle, "1/2");
});

test("http errors carry the status", async () => {
  const api = new Api("", fakeFetch({}));
  await assert.rejects(async () => {
    try {
      await api.membership(1, { re: 1, im: 0 }, 100);
    } catch (err) {
      assert.ok(err instanceof HttpError);
      assert.equal((err as HttpError).status, 404);
      throw err;
    }
  });
});

test("sequence gate drops stale responses", () => {
  const gate = new SequenceGate();
  const first = gate.next();
  const second = gate.next();
  assert.ok(gate.accept(second), "newest response applies");
  assert.ok(!gate.accept(first), "superseded response is dropped");
  const third = gate.next();
  assert.ok(gate.accept(third));
});

test("tile cache dedupes in-flight loads and drops failures", async () => {
  let calls = 0;
  const cache = new TileCache<string>();
  const load = async (url: string) => {
    calls++;
    if (url === "bad") throw new Error("boom");
    return `tile:${url}`;
  };
  const [a, b] = await Promise.all([cache.get("x", load), cache.get("x", load)]);
  assert.equal(a, "tile:x");
  assert.equal(b, "tile:x");
  assert.equal(calls, 1, "concurrent identical fetches are shared");
  await assert.rejects(() => cache.get("bad", load));
  await assert.rejects(() => cache.get("bad", load));
  assert.equal(calls, 3, "failures are not cached");
});

test("tile cache evicts beyond its limit", async () => {
  const cache = new TileCache<string>(2);
  const load = async (url: string) => url;
  await cache.get("a", load);
  await cache.get("b", load);
  await cache.get("c", load);
  assert.equal(cache.size, 2);
});
