import cmath

import pytest


def simpson_path_integral(f, z_end: complex, n: int = 4000) -> complex:
    """Composite Simpson quadrature of f along the straight segment 0 -> z_end.

    Independent oracle for the integral-defined family; n panels give ~1e-13
    accuracy for the smooth integrands used here.
    """
    if n % 2:
        n += 1
    h = z_end / n
    total = f(0j) + f(z_end)
    for k in range(1, n):
        total += (4 if k % 2 else 2) * f(k * h)
    return total * h / 3


@pytest.fixture
def quad_oracle():
    return simpson_path_integral
