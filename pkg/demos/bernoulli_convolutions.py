#!/usr/bin/env python3
# Random power series with fair signs: coupled covariances, the cosine
# product, density estimates, the scaling law, and the L2 diagnostic curve.

import numpy as np

import noisefield as nf

bc = nf.BernoulliConvolution(0.5, stream_id=5)
x = bc.sample(200_000)
print("lambda = 1/2: sample variance", round(float(x.var()), 4), " closed form", 1 / 3)

# two series on one coin stream have covariance lam*rho/(1 - lam*rho)
X = nf.coupled_samples([0.5, 0.7], 100_000, stream_id=3)
print("coupled covariance(0.5, 0.7):", round(float((X[:, 0] * X[:, 1]).mean()), 4),
      " closed form", round(nf.covariance(0.5, 0.7), 4))

# the transform is a cosine product; at lambda = 1/2 it collapses to sin(t)/t
t = np.linspace(-10, 10, 5)
vals, _ = nf.fourier_transform(0.5, t, 40)
print("\ncosine product vs sin(t)/t:", np.max(np.abs(vals - np.sinc(t / np.pi))))

# density two ways: histogram vs inversion of the transform
centers, hist, inv = nf.density_estimate(bc, 400_000, 0.01, 200.0)
print("L1(histogram - 1/2):", round(float(np.sum(np.abs(hist - 0.5)) * 0.01), 4))
print("L1(inversion - 1/2):", round(float(np.sum(np.abs(inv - 0.5)) * 0.01), 4))

# the density of an absolutely continuous parameter obeys the scaling law
print("\nscaling-law residual at 1/2:", round(nf.scaling_identity_residual(bc, 400_000, 0.01), 4))
bc75 = nf.BernoulliConvolution(0.75, stream_id=7)
print("scaling-law residual at 0.75:", round(nf.scaling_identity_residual(bc75, 400_000, 0.01), 4))

# square-integrability probe: bounded for 1/2, still climbing for the
# inverse golden ratio (the classical singular parameter)
golden = 2 / (1 + np.sqrt(5))
print("\n T    proxy(1/2)   proxy(golden inverse)")
for T in (250.0, 500.0, 1000.0, 2000.0):
    print(f"{T:5.0f}  {nf.ac2_l2_proxy(0.5, T):9.4f}   {nf.ac2_l2_proxy(golden, T):9.4f}")

# the geometric coefficient embedding reproduces the covariance kernel
h5, h7 = nf.hardy_coefficients(0.5, 60), nf.hardy_coefficients(0.7, 60)
print("\ncoefficient embedding <k_0.5, k_0.7> =", float(h5 @ h7),
      " kernel value", nf.covariance(0.5, 0.7))
