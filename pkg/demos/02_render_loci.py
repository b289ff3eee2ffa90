#!/usr/bin/env python3
"""Render the connectedness loci to PPM images.

Run:  python3 demos/02_render_loci.py [--full]

By default renders quick 512^2 previews into demos/out/; --full switches to
the 1024^2, 500-iteration framing used by the acceptance goldens.
"""

import sys
import time
from pathlib import Path

from bicritical.render import (
    Dynamical,
    ParameterCBO,
    ParameterMBO,
    ParameterMultibrot,
    RenderJob,
    Viewport,
    golden_hash,
    render,
    write_ppm,
)
from bicritical.family import MonicOdd, monic_roots

full = "--full" in sys.argv
px = 1024 if full else 512
iters = 500 if full else 300
out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

jobs = {}
for d in (1, 2, 3, 4, 5):
    jobs[f"cbo_{d}"] = RenderJob(
        plane=ParameterCBO(d=d),
        viewport=Viewport(center=0j, width=6.0, px_w=px, px_h=px),
        max_iter=iters,
    )
jobs["m3"] = RenderJob(
    plane=ParameterMultibrot(degree=3),
    viewport=Viewport(center=0j, width=4.5, px_w=px, px_h=px),
    max_iter=iters,
)
jobs["mbo_1"] = RenderJob(
    plane=ParameterMBO(d=1),
    viewport=Viewport(center=0j, width=3.0, px_w=px, px_h=px),
    max_iter=iters,
)
# a dynamical plane: the filled Julia set of the monic map for a = 3/2
jobs["julia_a1.5"] = RenderJob(
    plane=Dynamical(map=MonicOdd(d=1, s=monic_roots(1, 1.5)[0])),
    viewport=Viewport(center=0j, width=5.0, px_w=px, px_h=px),
    max_iter=iters,
)
# zoom toward the right side of the d=2 locus, where the cut point a=1 sits
jobs["cbo_2_right"] = RenderJob(
    plane=ParameterCBO(d=2),
    viewport=Viewport(center=1.6 + 0j, width=2.2, px_w=px, px_h=px),
    max_iter=iters,
)

for name, job in jobs.items():
    t0 = time.monotonic()
    img = render(job, workers=2)
    path = out / f"{name}.ppm"
    write_ppm(img, path)
    print(f"{name:12s} {img.width}x{img.height}  {time.monotonic()-t0:6.2f}s  "
          f"sha256={golden_hash(img)[:16]}  -> {path}")
print()
print("Binary coloring: black = bounded critical orbit (inside the locus).")
print("View with any PPM-capable tool, e.g. convert x.ppm x.png")
