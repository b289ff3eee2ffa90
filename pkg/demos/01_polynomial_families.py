#!/usr/bin/env python3
"""Tour of the polynomial families and the algebra connecting them.

Run:  python3 demos/01_polynomial_families.py
"""

from fractions import Fraction

from bicritical.family import (
    BicriticalOdd,
    MonicOdd,
    branner_douady,
    leading_coeff,
    monic_roots,
    normalize_bicritical,
    quotient_poly,
)

print("== The odd bicritical family p_a(z) = a * integral_0^z (1 - w^2/d)^d dw ==")
for d in (1, 2, 3):
    p = BicriticalOdd(d=d, a=Fraction(1))
    print(f"d={d}: coefficients r_k = {[str(r) for r in p.coeffs]}")
    print(f"      leading coefficient T(1) = {leading_coeff(d, Fraction(1))}")

print()
print("The parameter a is the derivative at the fixed origin; +-sqrt(d) are critical:")
p = BicriticalOdd(d=2, a=1.875)
print(f"  p'(0) = {p.derivative(0j):.6f}   p'(sqrt(2)) = {abs(p.derivative(2**0.5)):.2e}")
print(f"  a = 15/8 makes sqrt(2) a fixed critical point: p(sqrt(2)) = {p(2**0.5):.12f}")

print()
print("== Monic representatives ==")
print("s ranges over the 2d roots of s^(2d) = T(a); s and -s give the same map:")
for s in monic_roots(1, 1.5):
    m = MonicOdd(d=1, s=s)
    print(f"  s = {s:.6f}  ->  P_s(z) = z^3 + ({m.odd_coeffs[0]:.4f}) z")

print()
print("== Quotient by z -> z^2 ==")
q = quotient_poly(1, Fraction(1))
print(f"Q(u) with Q(z^2) = p_1(z)^2:  coefficients (u, u^2, u^3) = {[str(c) for c in q.coeffs]}")
print("its critical points 1 and 3 are the squares of the critical point and")
print("of the nonzero preimage sqrt(3) of the origin")

print()
print("== Cubic-family correspondence (d=1) ==")
for a in (1 / 3, 1 / 2, 0.4 + 0.1j):
    cubic, psi, res = branner_douady(a)
    print(f"a = {a}:  a~ = {cubic.a_tilde:.6f}, b = {cubic.b:.6f}, conjugacy residual {res:.2e}")

print()
print("== Normal-form recognition ==")
scaled = [complex(2.5) * float(r) * 0.7 ** (-2 * k) for k, r in enumerate(BicriticalOdd(d=2, a=2.5).coeffs)]
d, a, phi = normalize_bicritical(scaled)
print(f"a rescaled degree-5 odd polynomial normalizes back to d={d}, a={a:.6f}")
print(f"with the scaling phi(z) = {phi.alpha:.6f} z")
