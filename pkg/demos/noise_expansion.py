#!/usr/bin/env python3
# Set-indexed Gaussian noise from the universal coordinate space: one stream
# of i.i.d. N(0,1) coordinates realizes the noise of every measure at once.

import numpy as np

import noisefield as nf
from noisefield import BorelSet

# a sample point is just a prefix of coordinates, addressed by a stream id
xi = nf.sample_xi(seed=42, J=512)
print("first coordinates of stream 42:", np.round(xi.coords[:4], 4))
print("replayed bit-identically:      ", np.round(nf.sample_xi(42, 512).coords[:4], 4))

# Lebesgue measure on [0,1]: the noise of the whole interval is the first coordinate
leb = nf.LebesgueMeasure(0, 1)
field = nf.GaussianNoiseField(leb, J=512)
A = BorelSet.interval(0.0, 0.6)
B = BorelSet.interval(0.4, 1.0)
print("\nW_(0,1](xi) =", field.noise_on_set(BorelSet.interval(0, 1), xi), "= xi_1")

# covariance of overlapping sets estimates mu(A n B)
est, se = field.covariance_mc(A, B, 50_000, stream_id=7)
print(f"E[W_A W_B] ~ {est:.4f} +- {se:.4f}   target mu(A n B) = 0.2")

# the same machinery on the middle-third attractor, through its digit basis
cantor = nf.cantor_measure()
cfield = nf.GaussianNoiseField(cantor)
cyl = cantor.ifs.cylinder_set((0,))
est, se = cfield.covariance_mc(cyl, cyl, 50_000, stream_id=11)
print(f"attractor first-branch variance ~ {est:.4f} +- {se:.4f}   target 0.5")

# stochastic integrals extend the pairing to square-integrable integrands
vals = field.ito_samples(lambda x: x, 50_000, stream_id=13)
print(f"\nVar integral of x dW ~ {vals.var():.4f}   target 1/3 = {1 / 3:.4f}")

# the factorization maps identify the field with its coordinate sequence
small = nf.GaussianNoiseField(leb, J=32)
xs = nf.sample_xi(3, 32)
coords = small.psi_map(xs)
print("Gamma(Psi(xi))(A) - W_A(xi) =", small.gamma_map(coords, A) - small.noise_on_set(A, xs))
