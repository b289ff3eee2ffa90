"""Stateless HTTP facade over the rendering, membership, ray and center APIs.

Every response is a pure function of the URL and the service configuration;
strong ETags (the hash of the resolved job) make identical requests
byte-identical and client-cacheable.  Tiles are addressed slippy-map style
over fixed square root viewports, zoom level z splitting the root into
2^z x 2^z tiles; tile row y follows the viewport row axis (y=0 at the lowest
imaginary part).
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass

from fastapi import FastAPI, Header, Response
from fastapi.responses import JSONResponse

from . import __version__
from .errors import BicriticalError, NewtonFailed, TimeBudgetExceeded
from .family import BicriticalOdd, MonicOdd, Unicritical, monic_roots
from .dynamics import escape_radius
from .loci import membership_pm, select_branch
from .pcf import solve_center_bicritical, solve_center_unicritical
from .rays import Angle, RayParams, trace_ray
from .render import (
    Dynamical,
    ParameterCBO,
    ParameterMBO,
    ParameterMultibrot,
    RenderJob,
    Viewport,
    render,
    to_png,
)

ROOT_VIEWPORTS = {
    "multibrot2": (-0.25 + 0j, 4.0),
    "multibrot": (0j, 4.5),
    "cbo": (0j, 6.0),
    "mbo": (0j, 3.0),
}


@dataclass(frozen=True)
class ServiceConfig:
    tile_px: int = 256
    max_zoom: int = 12
    workers: int = 1
    ray_timeout: float = 10.0  # seconds per ray request
    default_max_iter: int = 500
    ui_dir: str | None = None  # serve the built explorer from this directory at /


def _error(status: int, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": detail})


def _root_viewport(family: str, d: int) -> tuple[complex, float]:
    if family == "multibrot" and d == 1:
        return ROOT_VIEWPORTS["multibrot2"]
    return ROOT_VIEWPORTS[family]


def _tile_viewport(center: complex, width: float, z: int, x: int, y: int, px: int) -> Viewport:
    n = 1 << z
    tile_w = width / n
    sub_center = center + complex(
        ((x + 0.5) / n - 0.5) * width,
        ((y + 0.5) / n - 0.5) * width,
    )
    return Viewport(center=sub_center, width=tile_w, px_w=px, px_h=px)


def _render_tile_response(job: RenderJob, cfg: ServiceConfig, fmt: str, if_none_match) -> Response:
    etag = '"' + hashlib.sha256(repr(job).encode()).hexdigest() + '"'
    if if_none_match == etag:
        return Response(status_code=304, headers={"ETag": etag})
    img = render(job, workers=cfg.workers)
    if fmt == "png":
        blob, media = to_png(img), "image/png"
    else:
        blob, media = img.to_ppm(), "image/x-portable-pixmap"
    return Response(content=blob, media_type=media, headers={"ETag": etag})


def make_app(cfg: ServiceConfig = ServiceConfig()) -> FastAPI:
    app = FastAPI(title="bicritical", version=__version__, docs_url=None, redoc_url=None)
    config_hash = hashlib.sha256(repr(cfg).encode()).hexdigest()[:16]

    @app.get("/api/v1/version")
    def version():
        return {"version": __version__, "config": config_hash, "tile_px": cfg.tile_px,
                "max_zoom": cfg.max_zoom}

    @app.get("/api/v1/locus-tile")
    def locus_tile(
        family: str,
        d: int,
        z: int = 0,
        x: int = 0,
        y: int = 0,
        max_iter: int | None = None,
        coloring: str = "binary",
        fmt: str = "ppm",
        if_none_match: str | None = Header(default=None),
    ):
        if family not in ("multibrot", "cbo", "mbo") or d < 1:
            return _error(400, "family must be multibrot|cbo|mbo with d >= 1")
        if coloring not in ("binary", "smooth", "pm_overlay") or fmt not in ("ppm", "png"):
            return _error(400, "bad coloring or format")
        if z < 0 or z > cfg.max_zoom:
            return _error(422, f"zoom {z} outside [0, {cfg.max_zoom}]")
        if not (0 <= x < (1 << z) and 0 <= y < (1 << z)):
            return _error(422, "tile coordinates outside the zoom level")
        center, width = _root_viewport(family, d)
        plane = {
            "multibrot": lambda: ParameterMultibrot(degree=d + 1),
            "cbo": lambda: ParameterCBO(d=d),
            "mbo": lambda: ParameterMBO(d=d),
        }[family]()
        job = RenderJob(
            plane=plane,
            viewport=_tile_viewport(center, width, z, x, y, cfg.tile_px),
            max_iter=max_iter or cfg.default_max_iter,
            coloring=coloring,
        )
        return _render_tile_response(job, cfg, fmt, if_none_match)

    @app.get("/api/v1/dyn-tile")
    def dyn_tile(
        kind: str,
        d: int,
        z: int = 0,
        x: int = 0,
        y: int = 0,
        a_re: float = 0.0,
        a_im: float = 0.0,
        c_re: float = 0.0,
        c_im: float = 0.0,
        s_re: float = 0.0,
        s_im: float = 0.0,
        max_iter: int | None = None,
        coloring: str = "binary",
        fmt: str = "ppm",
        if_none_match: str | None = Header(default=None),
    ):
        if d < 1:
            return _error(400, "d must be >= 1")
        if coloring not in ("binary", "smooth") or fmt not in ("ppm", "png"):
            return _error(400, "bad coloring or format")
        if z < 0 or z > cfg.max_zoom:
            return _error(422, f"zoom {z} outside [0, {cfg.max_zoom}]")
        if not (0 <= x < (1 << z) and 0 <= y < (1 << z)):
            return _error(422, "tile coordinates outside the zoom level")
        try:
            if kind == "unicritical":
                m = Unicritical(d=d, c=complex(c_re, c_im))
            elif kind == "bicritical":
                m = BicriticalOdd(d=d, a=complex(a_re, a_im))
            elif kind == "monic":
                s = complex(s_re, s_im)
                if s == 0:
                    a = complex(a_re, a_im)
                    s = select_branch(a, d) or monic_roots(d, a)[0]
                m = MonicOdd(d=d, s=s)
            else:
                return _error(400, "kind must be unicritical|bicritical|monic")
        except BicriticalError as exc:
            return _error(400, str(exc))
        width = 2.0 * escape_radius(m)
        job = RenderJob(
            plane=Dynamical(map=m),
            viewport=_tile_viewport(0j, width, z, x, y, cfg.tile_px),
            max_iter=max_iter or cfg.default_max_iter,
            coloring=coloring,
        )
        return _render_tile_response(job, cfg, fmt, if_none_match)

    @app.post("/api/v1/render")
    def render_job(body: dict, fmt: str = "ppm",
                   if_none_match: str | None = Header(default=None)):
        from .render import job_from_json

        if fmt not in ("ppm", "png"):
            return _error(400, "bad format")
        try:
            job = job_from_json(body)
        except ValueError as exc:
            return _error(400, str(exc))
        if job.viewport.px_w * job.viewport.px_h > 4 * cfg.tile_px**2:
            return _error(422, "job exceeds the service pixel budget")
        return _render_tile_response(job, cfg, fmt, if_none_match)

    @app.get("/api/v1/membership")
    def membership(d: int, a_re: float, a_im: float = 0.0, orbit_len: int = 200,
                   max_iter: int | None = None):
        a = complex(a_re, a_im)
        if a == 0 or d < 1:
            return _error(400, "need d >= 1 and a != 0")
        try:
            verdict = membership_pm(a, d, orbit_len=orbit_len,
                                    max_iter=max_iter or cfg.default_max_iter)
        except BicriticalError as exc:
            return _error(400, str(exc))
        return verdict.to_json()

    @app.get("/api/v1/orbit")
    def orbit(d: int, a_re: float, a_im: float = 0.0, n: int = 60):
        """Critical orbits of the monic representative, for overlay drawing.

        Points snapped to the origin are reported as exact zeros; the left
        orbit is the pointwise negation of the right one.
        """
        a = complex(a_re, a_im)
        if a == 0 or d < 1 or not (1 <= n <= 1000):
            return _error(400, "need d >= 1, a != 0 and 1 <= n <= 1000")
        from .loci import _critical_orbit

        s = select_branch(a, d)
        if s is None:
            s = monic_roots(d, a)[0]
        m = MonicOdd(d=d, s=s)
        right = _critical_orbit(m, n, 1e-8)
        return {
            "s": [s.real, s.imag],
            "right": [[z.real, z.imag] for z in right],
            "left": [[-z.real, -z.imag] for z in right],
        }

    @app.get("/api/v1/ray")
    def ray(d: int, a_re: float, a_im: float = 0.0, angle: str = "0/1", eta: float = 8.0):
        a = complex(a_re, a_im)
        if a == 0 or d < 1:
            return _error(400, "need d >= 1 and a != 0")
        try:
            theta = Angle.parse(angle)
        except (ValueError, ZeroDivisionError):
            return _error(400, f"bad angle {angle!r}")
        params = RayParams(eta=eta, deadline=time.monotonic() + cfg.ray_timeout)
        s = select_branch(a, d, params=RayParams(eta=eta))
        if s is None:
            s = monic_roots(d, a)[0]
        try:
            trace = trace_ray(MonicOdd(d=d, s=s), theta, params)
        except TimeBudgetExceeded:
            return _error(504, "ray trace exceeded the server time budget")
        except NewtonFailed as exc:
            payload = exc.args[0]
            if hasattr(payload, "to_json"):
                body = payload.to_json()
                body["s"] = [s.real, s.imag]
                return body
            return _error(400, str(exc))
        body = trace.to_json()
        body["s"] = [s.real, s.imag]
        return body

    @app.get("/api/v1/center")
    def center(family: str, d: int, period: int, seed_re: float, seed_im: float = 0.0):
        if family not in ("cbo", "multibrot") or d < 1 or period < 1:
            return _error(400, "family must be cbo|multibrot with d, period >= 1")
        seed = complex(seed_re, seed_im)
        try:
            if family == "cbo":
                result = solve_center_bicritical(d, period, seed)
            else:
                result = solve_center_unicritical(d + 1, period, seed)
        except BicriticalError as exc:
            return {"error": type(exc).__name__, "detail": str(exc)}
        return result.to_json()

    if cfg.ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=cfg.ui_dir, html=True), name="ui")

    return app
