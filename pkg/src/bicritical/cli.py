"""Command-line front end.

Every command prints its fully resolved configuration to stderr (one
``# key=value`` line each) and machine-readable JSON or image bytes only to
stdout/files.  Exit codes: 0 success/accept, 1 reject or solver failure,
2 flag errors, 3 I/O errors, 4 indeterminate.

Complex values are written RE,IM; angles as p/q.  A flat key=value config
file can provide defaults; explicit flags override it.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import BicriticalError
from .family import MonicOdd, monic_roots
from .loci import Outcome, membership_pm
from .pcf import solve_center_bicritical, solve_center_unicritical, solve_cut_point
from .rays import Angle, RayParams, trace_ray
from .render import (
    ParameterCBO,
    ParameterMBO,
    ParameterMultibrot,
    RenderJob,
    Viewport,
    render,
    to_png,
    write_ppm,
)

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INDETERMINATE = 4

ROOT_VIEWPORTS = {
    # family -> (center, width); multibrot degree 2 framed separately
    "multibrot2": (-0.25 + 0j, 4.0),
    "multibrot": (0j, 4.5),
    "cbo": (0j, 6.0),
    "mbo": (0j, 3.0),
}


def parse_complex(text: str) -> complex:
    re, _, im = text.partition(",")
    return complex(float(re), float(im) if im else 0.0)


def fmt_complex(z: complex) -> str:
    return f"{z.real},{z.imag}"


def read_config_file(path: str) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            out[key.strip()] = val.strip()
    return out


def resolve(args: argparse.Namespace, file_keys: dict[str, str], spec: dict) -> dict:
    """Merge defaults < config file < explicit flags; spec maps key -> (default, parser)."""
    resolved = {}
    for key, (default, parse) in spec.items():
        val = default
        if key in file_keys:
            val = parse(file_keys[key])
        flag_val = getattr(args, key.replace("-", "_"), None)
        if flag_val is not None:
            val = parse(flag_val) if isinstance(flag_val, str) else flag_val
        resolved[key] = val
    return resolved


def print_config(cmd: str, cfg: dict) -> None:
    print(f"# bicritical {__version__} {cmd}", file=sys.stderr)
    for key in sorted(cfg):
        val = cfg[key]
        if isinstance(val, complex):
            val = fmt_complex(val)
        print(f"# {key}={val}", file=sys.stderr)


def default_viewport(family: str, d: int) -> tuple[complex, float]:
    if family == "multibrot" and d == 1:
        return ROOT_VIEWPORTS["multibrot2"]
    return ROOT_VIEWPORTS[family]


def cmd_render(args) -> int:
    file_cfg = read_config_file(args.config) if args.config else {}
    spec = {
        "family": ("cbo", str),
        "d": (None, int),
        "center": (None, parse_complex),
        "width": (None, float),
        "px": ("1024x1024", str),
        "max-iter": (500, int),
        "coloring": ("binary", str),
        "supersample": (1, int),
        "threads": (1, int),
        "out": (None, str),
    }
    cfg = resolve(args, file_cfg, spec)
    if cfg["d"] is None or cfg["out"] is None:
        print("error: --d and --out are required", file=sys.stderr)
        return EXIT_USAGE
    if cfg["family"] not in ("multibrot", "cbo", "mbo"):
        print(f"error: unknown family {cfg['family']!r}", file=sys.stderr)
        return EXIT_USAGE
    try:
        px_w, px_h = (int(p) for p in cfg["px"].lower().split("x"))
    except ValueError:
        print(f"error: bad --px {cfg['px']!r}, expected WxH", file=sys.stderr)
        return EXIT_USAGE
    center, width = default_viewport(cfg["family"], cfg["d"])
    if cfg["center"] is not None:
        center = cfg["center"]
    if cfg["width"] is not None:
        width = cfg["width"]
    cfg["center"], cfg["width"] = center, width
    print_config("render-locus", cfg)
    plane = {
        "multibrot": lambda: ParameterMultibrot(degree=cfg["d"] + 1),
        "cbo": lambda: ParameterCBO(d=cfg["d"]),
        "mbo": lambda: ParameterMBO(d=cfg["d"]),
    }[cfg["family"]]()
    coloring = cfg["coloring"].replace("-", "_")
    try:
        job = RenderJob(
            plane=plane,
            viewport=Viewport(center=center, width=width, px_w=px_w, px_h=px_h),
            max_iter=cfg["max-iter"],
            coloring=coloring,
            supersample=cfg["supersample"],
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    img = render(job, workers=cfg["threads"])
    for warning in img.warnings:
        print(f"# warning: {warning}", file=sys.stderr)
    try:
        if cfg["out"].endswith(".png"):
            with open(cfg["out"], "wb") as fh:
                fh.write(to_png(img))
        else:
            write_ppm(img, cfg["out"])
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_render_job(args) -> int:
    from .render import job_from_json

    try:
        with open(args.job) as fh:
            blob = json.load(fh)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"error: bad JSON: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        job = job_from_json(blob)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print_config("render-job", {"job": args.job, "out": args.out, "threads": args.threads or 1})
    img = render(job, workers=args.threads or 1)
    try:
        if args.out.endswith(".png"):
            with open(args.out, "wb") as fh:
                fh.write(to_png(img))
        else:
            write_ppm(img, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_membership(args) -> int:
    file_cfg = read_config_file(args.config) if args.config else {}
    spec = {
        "d": (None, int),
        "a": (None, parse_complex),
        "orbit-len": (200, int),
        "max-iter": (500, int),
        "eta": (8.0, float),
    }
    cfg = resolve(args, file_cfg, spec)
    if cfg["d"] is None or cfg["a"] is None:
        print("error: --d and --a are required", file=sys.stderr)
        return EXIT_USAGE
    print_config("membership", cfg)
    try:
        verdict = membership_pm(
            cfg["a"],
            cfg["d"],
            params=RayParams(eta=cfg["eta"]),
            orbit_len=cfg["orbit-len"],
            max_iter=cfg["max-iter"],
        )
    except BicriticalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps(verdict.to_json()))
    return {
        Outcome.ACCEPT: EXIT_OK,
        Outcome.REJECT: EXIT_REJECT,
        Outcome.INDETERMINATE: EXIT_INDETERMINATE,
    }[verdict.outcome]


def cmd_trace_ray(args) -> int:
    file_cfg = read_config_file(args.config) if args.config else {}
    spec = {
        "d": (None, int),
        "a": (None, parse_complex),
        "angle": ("0/1", str),
        "eta": (8.0, float),
        "step-ratio": (0.5, float),
        "max-levels": (140, int),
    }
    cfg = resolve(args, file_cfg, spec)
    if cfg["d"] is None or cfg["a"] is None:
        print("error: --d and --a are required", file=sys.stderr)
        return EXIT_USAGE
    try:
        theta = Angle.parse(cfg["angle"])
    except (ValueError, ZeroDivisionError):
        print(f"error: bad angle {cfg['angle']!r}", file=sys.stderr)
        return EXIT_USAGE
    print_config("trace-ray", cfg)
    params = RayParams(eta=cfg["eta"], step_ratio=cfg["step-ratio"], max_levels=cfg["max-levels"])
    from .loci import select_branch

    s = select_branch(cfg["a"], cfg["d"], params=params)
    if s is None:
        s = monic_roots(cfg["d"], cfg["a"])[0]
        print(f"# no landing branch; using first monic root s={fmt_complex(s)}", file=sys.stderr)
    else:
        print(f"# landing branch s={fmt_complex(s)}", file=sys.stderr)
    try:
        trace = trace_ray(MonicOdd(d=cfg["d"], s=s), theta, params)
    except BicriticalError as exc:
        payload = exc.args[0]
        if hasattr(payload, "to_json"):
            print(json.dumps(payload.to_json()))
        else:
            print(json.dumps({"error": str(exc)}))
        return EXIT_REJECT
    print(json.dumps(trace.to_json()))
    return EXIT_OK


def cmd_find_center(args) -> int:
    file_cfg = read_config_file(args.config) if args.config else {}
    spec = {
        "family": ("cbo", str),
        "d": (None, int),
        "period": (None, int),
        "seed": (None, parse_complex),
    }
    cfg = resolve(args, file_cfg, spec)
    if cfg["d"] is None or cfg["period"] is None or cfg["seed"] is None:
        print("error: --d, --period and --seed are required", file=sys.stderr)
        return EXIT_USAGE
    if cfg["family"] not in ("cbo", "multibrot"):
        print(f"error: unknown family {cfg['family']!r}", file=sys.stderr)
        return EXIT_USAGE
    print_config("find-center", cfg)
    try:
        if cfg["family"] == "cbo":
            result = solve_center_bicritical(cfg["d"], cfg["period"], cfg["seed"])
        else:
            result = solve_center_unicritical(cfg["d"] + 1, cfg["period"], cfg["seed"])
    except BicriticalError as exc:
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}))
        return EXIT_REJECT
    print(json.dumps(result.to_json()))
    return EXIT_OK


def cmd_cut_point(args) -> int:
    file_cfg = read_config_file(args.config) if args.config else {}
    spec = {"d": (None, int), "k": (None, int), "seed": (None, parse_complex)}
    cfg = resolve(args, file_cfg, spec)
    if cfg["d"] is None or cfg["k"] is None or cfg["seed"] is None:
        print("error: --d, --k and --seed are required", file=sys.stderr)
        return EXIT_USAGE
    print_config("cut-point", cfg)
    try:
        result = solve_cut_point(cfg["d"], cfg["k"], cfg["seed"])
    except BicriticalError as exc:
        print(json.dumps({"error": type(exc).__name__, "detail": str(exc)}))
        return EXIT_REJECT
    print(json.dumps(result.to_json()))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_checks

    file_cfg = read_config_file(args.config) if args.config else {}
    cfg = resolve(args, file_cfg, {"seed": ("20240811", str)})
    print_config("verify", cfg)
    report = run_checks()
    for check in report["checks"]:
        status = "ok" if check["passed"] else "FAIL"
        print(f"# {status:4s} {check['name']}", file=sys.stderr)
    print(json.dumps(report))
    return EXIT_OK if report["failed"] == 0 else EXIT_REJECT


def cmd_serve(args) -> int:
    file_cfg = read_config_file(args.config) if args.config else {}
    spec = {
        "listen": ("127.0.0.1:8757", str),
        "tile-px": (256, int),
        "max-zoom": (12, int),
        "ui": (None, str),
    }
    cfg = resolve(args, file_cfg, spec)
    print_config("serve", cfg)
    host, _, port = cfg["listen"].partition(":")
    from .service import ServiceConfig, make_app

    import uvicorn

    app = make_app(
        ServiceConfig(tile_px=cfg["tile-px"], max_zoom=cfg["max-zoom"], ui_dir=cfg["ui"])
    )
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8757), log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bicritical", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat key=value config file; flags override")

    p = sub.add_parser("render-locus", help="raster a parameter-plane locus to PPM/PNG")
    common(p)
    p.add_argument("--family", choices=["multibrot", "cbo", "mbo"])
    p.add_argument("--d", type=int)
    p.add_argument("--center")
    p.add_argument("--width", type=float)
    p.add_argument("--px")
    p.add_argument("--max-iter", type=int, dest="max_iter")
    p.add_argument("--coloring", choices=["binary", "smooth", "pm-overlay"])
    p.add_argument("--supersample", type=int, choices=[1, 2, 4])
    p.add_argument("--threads", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("render-job", help="render a JSON job description")
    common(p)
    p.add_argument("--job", required=True, help="path to a JSON RenderJob description")
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_render_job)

    p = sub.add_parser("membership", help="plus/minus membership verdict for (d, a)")
    common(p)
    p.add_argument("--d", type=int)
    p.add_argument("--a")
    p.add_argument("--orbit-len", type=int, dest="orbit_len")
    p.add_argument("--max-iter", type=int, dest="max_iter")
    p.add_argument("--eta", type=float)
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("trace-ray", help="trace a dynamical ray of the monic representative")
    common(p)
    p.add_argument("--d", type=int)
    p.add_argument("--a")
    p.add_argument("--angle")
    p.add_argument("--eta", type=float)
    p.add_argument("--step-ratio", type=float, dest="step_ratio")
    p.add_argument("--max-levels", type=int, dest="max_levels")
    p.set_defaults(func=cmd_trace_ray)

    p = sub.add_parser("find-center", help="Newton-solve a superattracting center")
    common(p)
    p.add_argument("--family", choices=["cbo", "multibrot"])
    p.add_argument("--d", type=int)
    p.add_argument("--period", type=int)
    p.add_argument("--seed")
    p.set_defaults(func=cmd_find_center)

    p = sub.add_parser("cut-point", help="solve p_a^k(sqrt(d)) = 0 by Newton")
    common(p)
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--seed")
    p.set_defaults(func=cmd_cut_point)

    p = sub.add_parser("verify", help="run the invariant battery; nonzero exit on failure")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("serve", help="start the HTTP service")
    common(p)
    p.add_argument("--listen")
    p.add_argument("--tile-px", type=int, dest="tile_px")
    p.add_argument("--max-zoom", type=int, dest="max_zoom")
    p.add_argument("--ui", help="serve a built explorer UI directory at /")
    p.set_defaults(func=cmd_serve)

    return parser


_COMPLEX_FLAGS = {"--a", "--seed", "--center"}


def _glue_complex_flags(argv: list[str]) -> list[str]:
    """Join RE,IM values onto their flag so argparse accepts negatives."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _COMPLEX_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_glue_complex_flags(list(argv)))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
