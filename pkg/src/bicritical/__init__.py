"""Workbench for unicritical and bicritical odd polynomial dynamics.

Submodules:

* ``family``   -- the polynomial families and the algebra between them
* ``dynamics`` -- orbits, escape rates, Boettcher coordinates
* ``rays``     -- exact angle arithmetic and dynamical-ray tracing
* ``loci``     -- parameter-space membership tests
* ``pcf``      -- Newton solvers for postcritically finite parameters
* ``render``   -- deterministic tile-parallel rasterization
* ``cli``      -- command-line front end
* ``service``  -- HTTP facade for tiles, verdicts, rays and centers
"""

__version__ = "0.1.0"
