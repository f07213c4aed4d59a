#!/usr/bin/env python3
# Self-similar measures of affine systems: exact moments, chaos-game
# sampling, the closedness diagnostic, and the isometry algebra.

import numpy as np

import noisefield as nf

cantor = nf.cantor_system()
print("middle-third system, hull:", cantor.hull)
print("scaling dimension:", cantor.scaling_dimension(), " (ln 2 / ln 3)")

# moments of the invariant measure solve a triangular recursion, exactly
moments = nf.invariant_moments(cantor, 6)
print("moments m_0..m_6:", moments)

# the chaos game draws independent attractor points
pts = nf.chaos_game_sample(cantor, 100_000, stream_id=5)
print("\nchaos game: first-branch frequency", np.mean(pts <= 1 / 3), " target 0.5")
print("empirical mean", pts.mean(), " exact m_1 = 0.5")

# closedness: the branch weights must resolve the measure exactly
print("\nclosedness residual (proper weights):", nf.closedness_residual(cantor))
broken = nf.make_ifs([(1 / 3, 0.0), (1 / 3, 2 / 3)], [0.4, 0.4])
print("closedness residual (weights 0.4, 0.4):", nf.closedness_residual(broken))

# the branch isometries and their adjoints act exactly on digit coefficients
depth = 8
r_orth, r_complete = nf.cuntz_relation_residual(cantor, depth)
print(f"\nrelation residuals at depth {depth}: orthogonality {r_orth:.2e}, completeness {r_complete:.2e}")
r_orth, r_complete = nf.cuntz_relation_residual(broken, depth)
print(f"broken system: orthogonality {r_orth:.3f}, completeness {r_complete:.3f}")

f = np.zeros(2**5)
f[3] = 1.0
lifted = nf.cuntz_apply(cantor, 0, f, 6)
print("\nS_0* S_0 f recovers f:", np.allclose(nf.cuntz_adjoint_apply(cantor, 0, lifted, 6), f))
print("S_1* S_0 f vanishes:  ", np.abs(nf.cuntz_adjoint_apply(cantor, 1, lifted, 6)).max() == 0.0)
