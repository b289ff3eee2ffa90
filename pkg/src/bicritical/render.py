"""Deterministic tile-parallel rasterization of parameter and dynamical planes.

Pixels are pure functions of their complex coordinate, tiles are fixed 64x64
blocks of output pixels, and tile results are stitched by index, so output
bytes never depend on scheduling or worker count.  The canonical image format
is binary PPM (P6); PNG encoding is available when Pillow is installed.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .dynamics import escape_radius
from .dynamics import escape_radius as _certified_radius
from .family import BicriticalOdd, MonicOdd, Unicritical, odd_coefficients

__all__ = [
    "Viewport",
    "ParameterMultibrot",
    "ParameterCBO",
    "ParameterMBO",
    "Dynamical",
    "RenderJob",
    "ImageBuffer",
    "render",
    "write_ppm",
    "read_ppm",
    "golden_hash",
]

TILE = 64


@dataclass(frozen=True)
class Viewport:
    """Axis-aligned window: pixel (i,j) maps to

    center + ((i+0.5)/px_w - 0.5)*width + 1j*((j+0.5)/px_h - 0.5)*height

    with height = width*px_h/px_w.  Row j=0 is the lowest imaginary part; PPM
    writers emit row 0 first, so displayed images are the vertical mirror of
    the mathematical plane (immaterial for the conjugation-symmetric loci).
    """

    center: complex
    width: float
    px_w: int
    px_h: int

    def __post_init__(self):
        if self.width <= 0 or self.px_w < 1 or self.px_h < 1:
            raise ValueError("viewport must have positive width and pixel counts")

    @property
    def height(self) -> float:
        return self.width * self.px_h / self.px_w

    def coordinate(self, i: float, j: float) -> complex:
        x = ((i + 0.5) / self.px_w - 0.5) * self.width
        y = ((j + 0.5) / self.px_h - 0.5) * self.height
        return self.center + complex(x, y)

    def grid(self, i0: int, i1: int, j0: int, j1: int, ss: int = 1) -> np.ndarray:
        """Subsample coordinates for output pixels [i0,i1) x [j0,j1).

        Subpixel offsets are centered: sample k of pixel i sits at
        (i + (k+0.5)/ss)/px_w - 0.5, i.e. the fine grid of px_w*ss columns.
        Returns complex array of shape ((j1-j0)*ss, (i1-i0)*ss).
        """
        fi = np.arange(i0 * ss, i1 * ss, dtype=np.float64)
        fj = np.arange(j0 * ss, j1 * ss, dtype=np.float64)
        x = ((fi + 0.5) / (self.px_w * ss) - 0.5) * self.width
        y = ((fj + 0.5) / (self.px_h * ss) - 0.5) * self.height
        return (self.center.real + x[None, :]) + 1j * (self.center.imag + y[:, None])


def _escape_loop(z0, step, r2, max_iter, extras):
    """Shared escape-time driver over flattened arrays.

    ``step(z, extras)`` advances every active point; ``extras`` is a tuple of
    per-point arrays compressed alongside.  Returns (escape_index, |z| at
    escape) with escape_index = -1 for points bounded through max_iter checks.
    """
    n = z0.size
    esc = np.full(n, -1, dtype=np.int32)
    absz = np.zeros(n, dtype=np.float64)
    alive = np.arange(n)
    z = z0.copy()
    r2 = np.broadcast_to(np.asarray(r2, dtype=np.float64), (n,)).copy()
    for k in range(max_iter + 1):
        m2 = z.real * z.real + z.imag * z.imag
        hit = (m2 >= r2) | ~np.isfinite(m2)
        if hit.any():
            ids = alive[hit]
            esc[ids] = k
            absz[ids] = np.sqrt(np.where(np.isfinite(m2[hit]), m2[hit], np.inf))
            keep = ~hit
            alive = alive[keep]
            z = z[keep]
            r2 = r2[keep]
            extras = tuple(e[keep] for e in extras)
        if alive.size == 0 or k == max_iter:
            break
        with np.errstate(over="ignore", invalid="ignore"):
            z = step(z, extras)
    return esc, absz


@dataclass(frozen=True)
class ParameterMultibrot:
    """Parameter plane of z^degree + c; the pixel coordinate is c."""

    degree: int

    def escape_data(self, coords: np.ndarray, max_iter: int, escape_radius: Optional[float]):
        c = coords.ravel()
        r = np.maximum(4.0, 2.0 * (1.0 + np.abs(c))) if escape_radius is None else escape_radius
        deg = self.degree

        def step(z, extras):
            (cc,) = extras
            return z**deg + cc

        esc, absz = _escape_loop(np.zeros_like(c), step, np.square(r), max_iter, (c,))
        return esc, absz, np.log(np.broadcast_to(np.asarray(r), c.shape))


@dataclass(frozen=True)
class ParameterCBO:
    """Parameter plane of the odd bicritical family; the pixel coordinate is a."""

    d: int

    def escape_data(self, coords: np.ndarray, max_iter: int, escape_radius: Optional[float]):
        a = coords.ravel()
        r_coeffs = np.array([float(x) for x in odd_coefficients(self.d)])
        ratio = float(np.max(np.abs(r_coeffs[:-1]) / abs(r_coeffs[-1])))
        lead = np.abs(a) * abs(r_coeffs[-1])
        with np.errstate(divide="ignore"):
            r = (
                np.maximum(
                    np.maximum(4.0, 2.0 * (1.0 + ratio)),
                    (4.0 / lead) ** (1.0 / (2 * self.d)),
                )
                if escape_radius is None
                else np.broadcast_to(float(escape_radius), a.shape)
            )
        rd = math.sqrt(self.d)

        def step(z, extras):
            (aa,) = extras
            u = z * z
            acc = np.full_like(z, r_coeffs[-1])
            for rk in r_coeffs[-2::-1]:
                acc = acc * u + rk
            return aa * z * acc

        z0 = np.full_like(a, rd)
        esc, absz = _escape_loop(z0, step, np.square(r), max_iter, (a,))
        return esc, absz, np.log(r)


@dataclass(frozen=True)
class ParameterMBO:
    """Parameter plane of monic odd representatives; the pixel coordinate is s."""

    d: int

    def escape_data(self, coords: np.ndarray, max_iter: int, escape_radius: Optional[float]):
        s = coords.ravel()
        d = self.d
        r_coeffs = np.array([float(x) for x in odd_coefficients(d)])
        sign = (-1.0) ** d * d**d * (2 * d + 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            a = sign * s ** (2 * d)
            cks = [a * r_coeffs[k] / s ** (2 * k) for k in range(d)] + [np.ones_like(s)]
            mags = np.nanmax(np.stack([np.abs(c) for c in cks[:-1]]), axis=0)
            r = (
                np.maximum(4.0, 2.0 * (1.0 + mags))
                if escape_radius is None
                else np.broadcast_to(float(escape_radius), s.shape)
            )
        r = np.where(np.isfinite(r), r, 4.0)
        z0 = s * math.sqrt(d)

        def step(z, extras):
            u = z * z
            acc = extras[-1].copy()
            for ck in extras[-2::-1]:
                acc = acc * u + ck
            return z * acc

        esc, absz = _escape_loop(z0, step, np.square(r), max_iter, tuple(cks))
        return esc, absz, np.log(r)


@dataclass(frozen=True)
class Dynamical:
    """Dynamical plane of a fixed map; the pixel coordinate is the orbit seed."""

    map: Union[Unicritical, BicriticalOdd, MonicOdd]

    def escape_data(self, coords: np.ndarray, max_iter: int, escape_radius: Optional[float]):
        z0 = coords.ravel()
        r = _certified_radius(self.map) if escape_radius is None else float(escape_radius)
        m = self.map
        if isinstance(m, Unicritical):
            deg, c = m.degree, complex(m.c)

            def step(z, extras):
                return z**deg + c

        else:
            if isinstance(m, MonicOdd):
                odd = np.array(m.odd_coeffs, dtype=complex)
            else:
                odd = complex(m.a) * np.array([float(rk) for rk in m.coeffs], dtype=complex)

            def step(z, extras):
                u = z * z
                acc = np.full_like(z, odd[-1])
                for ck in odd[-2::-1]:
                    acc = acc * u + ck
                return z * acc

        esc, absz = _escape_loop(z0.astype(complex), step, r * r, max_iter, ())
        return esc, absz, np.log(np.full(z0.shape, r))

    @property
    def degree(self) -> int:
        return self.map.degree


Plane = Union[ParameterMultibrot, ParameterCBO, ParameterMBO, Dynamical]


def _plane_degree(plane: Plane) -> int:
    if isinstance(plane, ParameterMultibrot):
        return plane.degree
    if isinstance(plane, (ParameterCBO, ParameterMBO)):
        return 2 * plane.d + 1
    return plane.map.degree


@dataclass(frozen=True)
class RenderJob:
    """Full description of one deterministic render."""

    plane: Plane
    viewport: Viewport
    max_iter: int = 500
    escape_radius: Optional[float] = None
    coloring: str = "binary"  # binary | smooth | pm_overlay
    supersample: int = 1

    def __post_init__(self):
        if self.coloring not in ("binary", "smooth", "pm_overlay"):
            raise ValueError(f"unknown coloring {self.coloring!r}")
        if self.supersample not in (1, 2, 4):
            raise ValueError("supersample must be 1, 2 or 4")


@dataclass(frozen=True)
class ImageBuffer:
    """Row-major 8-bit RGB image."""

    width: int
    height: int
    data: bytes
    warnings: tuple[str, ...] = ()

    def to_ppm(self) -> bytes:
        return b"P6\n%d %d\n255\n" % (self.width, self.height) + self.data

    def pixel(self, i: int, j: int) -> tuple[int, int, int]:
        off = 3 * (j * self.width + i)
        return tuple(self.data[off : off + 3])

    def as_array(self) -> np.ndarray:
        return np.frombuffer(self.data, dtype=np.uint8).reshape(self.height, self.width, 3)


def _colorize(esc, absz, logr, max_iter: int, degree: int, coloring: str) -> np.ndarray:
    n = esc.size
    rgb = np.zeros((n, 3), dtype=np.uint8)
    escaped = esc >= 0
    if coloring == "binary":
        rgb[escaped] = 255
        return rgb
    # smooth potential: mu = n + 1 - log(log|z|/log R)/log D, clamped
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = esc + 1.0 - np.log(np.log(np.maximum(absz, 1.0 + 1e-12)) / logr) / math.log(degree)
    mu = np.clip(np.where(np.isfinite(mu), mu, float(max_iter)), 0.0, float(max_iter))
    shade = (255.0 - np.rint(230.0 * mu / max_iter)).astype(np.uint8)
    for ch in range(3):
        rgb[escaped, ch] = shade[escaped]
    return rgb


def _pm_overlay_colors(coords: np.ndarray, d: int, max_iter: int) -> np.ndarray:
    """Membership-verdict coloring; one full membership run per sample point."""
    from .loci import Outcome, Reason, membership_pm
    from .errors import BicriticalError

    flat = coords.ravel()
    rgb = np.zeros((flat.size, 3), dtype=np.uint8)
    for idx, a in enumerate(flat):
        if a == 0:
            rgb[idx] = (255, 255, 255)
            continue
        try:
            v = membership_pm(complex(a), d, max_iter=max_iter)
        except BicriticalError:
            rgb[idx] = (130, 130, 170)
            continue
        if v.outcome is Outcome.ACCEPT:
            rgb[idx] = (0, 0, 0)
        elif v.outcome is Outcome.REJECT:
            rgb[idx] = (255, 255, 255) if v.reason is Reason.ESCAPED else (200, 60, 50)
        else:
            rgb[idx] = (130, 130, 170)
    return rgb


def _render_tile(job: RenderJob, rect: tuple[int, int, int, int]) -> tuple[np.ndarray, int, int]:
    """Render output pixels [i0,i1) x [j0,j1); returns (rgb tile, bounded, samples)."""
    i0, i1, j0, j1 = rect
    ss = job.supersample
    coords = job.viewport.grid(i0, i1, j0, j1, ss)
    th, tw = j1 - j0, i1 - i0
    if job.coloring == "pm_overlay":
        if not isinstance(job.plane, ParameterCBO):
            raise ValueError("pm_overlay coloring applies to the bicritical parameter plane")
        rgb = _pm_overlay_colors(coords, job.plane.d, job.max_iter)
        bounded = 0
    else:
        esc, absz, logr = job.plane.escape_data(coords, job.max_iter, job.escape_radius)
        rgb = _colorize(esc, absz, logr, job.max_iter, _plane_degree(job.plane), job.coloring)
        bounded = int(np.count_nonzero(esc < 0))
    fine = rgb.reshape(th * ss, tw * ss, 3)
    if ss > 1:
        fine = fine.reshape(th, ss, tw, ss, 3).astype(np.float64).mean(axis=(1, 3))
        fine = np.rint(fine).astype(np.uint8)
    return fine, bounded, coords.size


def _tile_rects(px_w: int, px_h: int) -> list[tuple[int, int, int, int]]:
    rects = []
    for j0 in range(0, px_h, TILE):
        for i0 in range(0, px_w, TILE):
            rects.append((i0, min(i0 + TILE, px_w), j0, min(j0 + TILE, px_h)))
    return rects


def render(job: RenderJob, workers: int = 1) -> ImageBuffer:
    """Render a job; byte-identical output for any worker count."""
    vp = job.viewport
    rects = _tile_rects(vp.px_w, vp.px_h)
    out = np.zeros((vp.px_h, vp.px_w, 3), dtype=np.uint8)
    bounded = 0
    samples = 0
    if workers > 1 and len(rects) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_render_tile, [job] * len(rects), rects, chunksize=4))
    else:
        results = [_render_tile(job, rect) for rect in rects]
    for rect, (tile, b, n) in zip(rects, results):
        i0, i1, j0, j1 = rect
        out[j0:j1, i0:i1] = tile
        bounded += b
        samples += n
    warnings = ()
    if job.coloring == "smooth" and bounded > samples // 2:
        warnings = (
            f"budget_too_small: {bounded}/{samples} samples hit max_iter={job.max_iter}",
        )
    return ImageBuffer(width=vp.px_w, height=vp.px_h, data=out.tobytes(), warnings=warnings)


def job_to_json(job: RenderJob) -> dict:
    """JSON description with the exact RenderJob field names."""
    plane = job.plane
    if isinstance(plane, ParameterMultibrot):
        pspec = {"kind": "multibrot", "degree": plane.degree}
    elif isinstance(plane, ParameterCBO):
        pspec = {"kind": "cbo", "d": plane.d}
    elif isinstance(plane, ParameterMBO):
        pspec = {"kind": "mbo", "d": plane.d}
    else:
        m = plane.map
        if isinstance(m, Unicritical):
            pspec = {"kind": "dynamical", "map": "unicritical", "d": m.d, "c": [m.c.real, m.c.imag]}
        elif isinstance(m, BicriticalOdd):
            a = complex(m.a)
            pspec = {"kind": "dynamical", "map": "bicritical", "d": m.d, "a": [a.real, a.imag]}
        else:
            s = complex(m.s)
            pspec = {"kind": "dynamical", "map": "monic", "d": m.d, "s": [s.real, s.imag]}
    vp = job.viewport
    return {
        "plane": pspec,
        "viewport": {
            "center": [vp.center.real, vp.center.imag],
            "width": vp.width,
            "px_w": vp.px_w,
            "px_h": vp.px_h,
        },
        "max_iter": job.max_iter,
        "escape_radius": job.escape_radius,
        "coloring": job.coloring,
        "supersample": job.supersample,
    }


def job_from_json(blob: dict) -> RenderJob:
    """Inverse of job_to_json; raises ValueError on malformed descriptions."""
    try:
        pspec = blob["plane"]
        kind = pspec["kind"]
        if kind == "multibrot":
            plane = ParameterMultibrot(degree=int(pspec["degree"]))
        elif kind == "cbo":
            plane = ParameterCBO(d=int(pspec["d"]))
        elif kind == "mbo":
            plane = ParameterMBO(d=int(pspec["d"]))
        elif kind == "dynamical":
            d = int(pspec["d"])
            which = pspec["map"]
            if which == "unicritical":
                plane = Dynamical(map=Unicritical(d=d, c=complex(*pspec["c"])))
            elif which == "bicritical":
                plane = Dynamical(map=BicriticalOdd(d=d, a=complex(*pspec["a"])))
            elif which == "monic":
                plane = Dynamical(map=MonicOdd(d=d, s=complex(*pspec["s"])))
            else:
                raise KeyError(which)
        else:
            raise KeyError(kind)
        vp = blob["viewport"]
        viewport = Viewport(
            center=complex(*vp["center"]),
            width=float(vp["width"]),
            px_w=int(vp["px_w"]),
            px_h=int(vp["px_h"]),
        )
        esc = blob.get("escape_radius")
        return RenderJob(
            plane=plane,
            viewport=viewport,
            max_iter=int(blob.get("max_iter", 500)),
            escape_radius=None if esc is None else float(esc),
            coloring=str(blob.get("coloring", "binary")),
            supersample=int(blob.get("supersample", 1)),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed render job description: {exc!r}") from exc


def write_ppm(img: ImageBuffer, path) -> None:
    """Binary PPM: exactly 'P6\\n{w} {h}\\n255\\n' then w*h*3 bytes."""
    with open(path, "wb") as fh:
        fh.write(img.to_ppm())


def read_ppm(path) -> ImageBuffer:
    with open(path, "rb") as fh:
        blob = fh.read()
    if not blob.startswith(b"P6"):
        raise ValueError("not a binary PPM file")
    parts = blob.split(b"\n", 3)
    w, h = (int(t) for t in parts[1].split())
    if parts[2] != b"255":
        raise ValueError("unsupported maxval")
    data = parts[3]
    if len(data) != w * h * 3:
        raise ValueError("truncated pixel data")
    return ImageBuffer(width=w, height=h, data=data)


def to_png(img: ImageBuffer) -> bytes:
    """Optional PNG encoding (requires Pillow)."""
    try:
        from PIL import Image
    except ImportError as exc:  # pragma: no cover
        raise RuntimeError("PNG output requires the 'png' extra (Pillow)") from exc
    import io

    im = Image.frombytes("RGB", (img.width, img.height), img.data)
    buf = io.BytesIO()
    im.save(buf, format="PNG")
    return buf.getvalue()


def golden_hash(img: ImageBuffer) -> str:
    """SHA-256 of the canonical PPM bytes."""
    return hashlib.sha256(img.to_ppm()).hexdigest()
