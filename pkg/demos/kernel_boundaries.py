#!/usr/bin/env python3
# Positive definite kernels with explicit features: truncated reconstruction,
# the point embedding and its metric identity, the coordinate process, and
# the exponential kernel on sets.

import numpy as np

import noisefield as nf
from noisefield import BorelSet

# the disk kernel: features are monomials, reconstruction is a geometric series
disk = nf.SzegoKernel()
print("disk kernel at (0.5, 0.5):", nf.kernel_reconstruct(disk, 0.5, 0.5, 60), " closed 4/3")
print("circle quadrature error:",
      abs(nf.szego_boundary_integral(0.5, -0.5j) - disk.evaluate(0.5, -0.5j)))

# the path kernel min(s,t): embedding distances reproduce |t - s|
path = nf.BrownianKernel()
tau = lambda t: nf.embed_point(path, t, 10_000)
d = tau(0.25) - tau(0.75)
print("\n||tau(0.25) - tau(0.75)||^2 =", float(d @ d), "  target |t - s| = 0.5")
print("metric identity residual over 16 points:",
      nf.metric_identity_residual(path, np.linspace(0, 1, 16), 10_000))

# the coordinate process: random coordinates give the kernel as a covariance,
# deterministic coordinates on an embedded point evaluate the kernel section
est, se = nf.boundary_process_cov(path, 0.25, 0.75, 2048, 30_000, stream_id=3)
print("\nE[X_s X_t] ~", round(float(est), 4), "+-", round(float(se[0]), 4), " target 0.25")
print("X_t at tau(s):", nf.boundary_process_at(disk, 0.4, nf.embed_point(disk, 0.3, 60)),
      " C(s,t) =", disk.evaluate(0.3, 0.4))

# the quartic orbit kernel lives on points with summable iteration orbits
for z in (0.0, 2.0, 1.0, 0.1j):
    print("orbit verdict", z, "->", nf.julia_membership(z))
quartic = nf.JuliaProductKernel()
print("C(0, w) = 1 for members:", quartic.evaluate(0.0, 0.1))

# the exponential kernel on sets of finite measure, and its isometry onto
# spans of exp(i W_A) under the coordinate law
leb2 = nf.LebesgueMeasure(0, 2)
A, B = BorelSet.interval(0, 1), BorelSet.interval(1, 2)
print("\nexp kernel K(A, B) =", nf.exp_set_kernel(leb2, A, B), " = e^{-1}")
rk, mc, se = nf.fourier_map_isometry(leb2, [A, B], [1.0, -1.0], 50_000, stream_id=9, J=512)
print(f"||K_A - K_B||^2 = {rk:.4f}; Monte Carlo exponential norm = {mc:.4f} +- {se:.4f}")
