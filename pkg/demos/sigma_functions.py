#!/usr/bin/env python3
# Pairs (f, mu) modulo the square-root Radon-Nikodym identification form a
# Hilbert space; equivalent pairs lift to the same Gaussian variable.

import numpy as np

import noisefield as nf

leb = nf.LebesgueMeasure(0, 1)
two = nf.DensityMeasure(0, 1, [2.0])
four = nf.DensityMeasure(0, 1, [4.0])

one = lambda x: np.ones_like(np.asarray(x, dtype=float))

F = nf.SigmaFunction(one, leb)
G = nf.SigmaFunction(one, four)
print("<1 d(mu)^1/2, 1 d(4mu)^1/2> =", nf.inner_product(F, G), "  (sqrt(4) integrated)")

# the same class written against two different measures
H = nf.SigmaFunction(lambda x: one(x) / np.sqrt(2), two)
print("equivalent(1 over mu, 1/sqrt2 over 2mu):", nf.equivalent(F, H))
print("residual:", nf.equivalence_residual(F, H))

# equivalent representatives produce the identical Gaussian variable per sample
space = nf.SigmaLift([leb, two])
xi = nf.sample_xi(21, space.total_J)
print("lift difference at one sample point:", space.lift(F, xi) - space.lift(H, xi))

# mutually singular measures give orthogonal classes
cantor = nf.cantor_measure()
FC = nf.SigmaFunction(one, cantor)
print("\n<1 over attractor, 1 over Lebesgue> =", nf.inner_product(FC, F))

# prescribing a correlation density between two copies of the noise
pair = nf.correlated_pair(leb, piece_values=[0.5], edges=[0.0, 1.0], stream_id=77)
A = nf.BorelSet.interval(0, 1)
w1, w2 = pair.sample_pair(A, 50_000)
print("\ncross-covariance of the correlated pair ~", round(float((w1 * w2).mean()), 4),
      "  target integral of f over A = 0.5")
print("marginal variances:", round(float(w1.var()), 4), round(float(w2.var()), 4), " target 1")
