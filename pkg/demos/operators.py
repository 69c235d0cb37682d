"""Walk through the operator algebra on function evaluators.

Run: python demos/operators.py
"""

import math

import numpy as np

from tfcert import (GridSpec, dilate, fourier, l2_norm, make_gaussian,
                    modulate, stft, tf_shift, translate)

g = make_gaussian(1)
print("Unit Gaussian g(t) = 2^{1/4} e^{-pi t^2}")
print(f"  quadrature L2 norm: {l2_norm(g):.15f}")

print("\nExact shifts (no interpolation error, evaluators are closures):")
tg = translate(g, 1.0)
print(f"  (T_1 g)(1)   = {tg(1.0).real:.6f}   (peak moved to t=1)")
mg = modulate(g, 2.0)
print(f"  |M_2 g|(0.5) = {abs(mg(0.5)):.6f} = |g|(0.5) = {abs(g(0.5)):.6f}")
sg = tf_shift(g, (1.0, 2.0))
print(f"  pi(1,2) g (t) = e^(2 pi i 2 t) g(t-1); value at 1: {sg(1.0):.6f}")

print("\nUnitarity under time-frequency shifts and dilations:")
for r in (0.5, 2.0):
    print(f"  ||D_{r} g|| = {l2_norm(dilate(g, r)):.12f}")
print(f"  ||pi(0.7, -1.3) g|| = {l2_norm(tf_shift(g, (0.7, -1.3))):.12f}")

print("\nQuadrature-backed Fourier transform (evaluable at arbitrary points):")
fh = fourier(g, GridSpec(6.0, 4096))
for omega in (0.0, 0.5, 1.0):
    exact = 2 ** 0.25 * math.exp(-math.pi * omega * omega)
    print(f"  fhat({omega:3.1f}) = {fh(omega).real:+.12f}   "
          f"self-dual exact {exact:+.12f}")

print("\nSTFT magnitudes against the Gaussian closed form e^(-pi |l|^2 / 2):")
for x, w in ((1, 0), (0, 1), (1, 1)):
    got = abs(stft(g, g, (x, w)))
    exact = math.exp(-math.pi * (x * x + w * w) / 2)
    print(f"  |V_g g({x},{w})| = {got:.12f}   exact {exact:.12f}")

print("\nCovariance of the STFT under a time-frequency shift of the input:")
u, eta = 1.0, 0.5
lhs = stft(translate(modulate(g, eta), u), g, (1.5, -0.5))
rhs = np.exp(-2j * math.pi * u * (-0.5)) * stft(g, g, (1.5 - u, -0.5 - eta))
print(f"  lhs {lhs:.12f}")
print(f"  rhs {rhs:.12f}")
print(f"  residual {abs(lhs - rhs):.2e}")
