#!/usr/bin/env python3
"""Exercise the HTTP facade end to end with a throwaway local server.

Run:  python3 demos/05_http_service.py
"""

import json
import threading
import time
import urllib.request

import uvicorn

from bicritical.service import ServiceConfig, make_app

HOST, PORT = "127.0.0.1", 8899

app = make_app(ServiceConfig(tile_px=128, max_zoom=8))
server = uvicorn.Server(uvicorn.Config(app, host=HOST, port=PORT, log_level="error"))
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.05)
base = f"http://{HOST}:{PORT}/api/v1"


def get(path):
    with urllib.request.urlopen(f"{base}{path}") as resp:
        body = resp.read()
        return resp.status, {k.lower(): v for k, v in resp.headers.items()}, body


status, headers, body = get("/version")
print("version:", json.loads(body))

status, headers, body = get("/locus-tile?family=cbo&d=2&z=0&x=0&y=0")
print(f"locus tile: HTTP {status}, {len(body)} bytes, ETag {headers['etag'][:18]}...")

status, headers2, body2 = get("/locus-tile?family=cbo&d=2&z=0&x=0&y=0")
print("identical request is byte-identical:", body == body2, "- same ETag:", headers["etag"] == headers2["etag"])

status, _, body = get("/membership?d=1&a_re=1.5&a_im=0")
print("membership a=1.5:", json.loads(body)["outcome"])

status, _, body = get("/ray?d=1&a_re=1.5&a_im=0&angle=0/1")
ray = json.loads(body)
print(f"ray 0/1: {ray['status']}, {len(ray['points'])} points, lands near {ray['landing']}")

status, _, body = get("/center?family=cbo&d=1&period=2&seed_re=2.2")
print("period-2 center:", json.loads(body)["found"])

server.should_exit = True
thread.join(timeout=5)
print("server stopped")
