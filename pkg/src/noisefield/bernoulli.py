"""Infinite Bernoulli convolutions: the random series  X = sum_k eps_k lam^k.

Fair +-1 coins come from the deterministic coordinate streams, so every
sample is replayable and two series with different ratios can be coupled on
one coin stream.  Closed forms implemented here: the covariance
lam*rho/(1 - lam*rho) of coupled series, the cosine-product transform
prod_n cos(lam^n t), and the geometric coefficient embedding into the
zero-at-origin Hardy space.  Statistical outputs (histogram and
Fourier-inversion density estimates, the scaling-law residual, the
square-integrability proxy curve) carry explicit truncation parameters.
"""

from __future__ import annotations

import math

import numpy as np

from . import quadrature, streams

_COIN_BLOCK = 1 << 24


class BernoulliConvolution:
    def __init__(self, lam: float, stream_id=0, K: int | None = None):
        if not 0.0 < lam < 1.0:
            raise ValueError("lambda must lie in (0, 1)")
        self.lam = float(lam)
        self.stream_id = stream_id
        self.K = K if K is not None else max(4, int(math.ceil(math.log(1e-14) / math.log(lam))))

    @property
    def support_radius(self) -> float:
        return self.lam / (1.0 - self.lam)

    def variance(self) -> float:
        return self.lam**2 / (1.0 - self.lam**2)

    def sample(self, n: int, first: int = 0, stream_id=None) -> np.ndarray:
        """n independent draws; sample index addresses its own coin row."""
        sid = self.stream_id if stream_id is None else stream_id
        weights = self.lam ** np.arange(1, self.K + 1)
        out = np.empty(n)
        block = max(1, _COIN_BLOCK // self.K)
        for start in range(0, n, block):
            m = min(block, n - start)
            coins = streams.sign_matrix(sid, m, self.K, first + start)
            out[start : start + m] = streams.row_dot(coins, weights)
        return out


def covariance(lam: float, rho: float) -> float:
    """E[X_lam X_rho] for series sharing one coin stream."""
    if not (0.0 < lam < 1.0 and 0.0 < rho < 1.0):
        raise ValueError("parameters must lie in (0, 1)")
    return lam * rho / (1.0 - lam * rho)


def coupled_samples(lams, n: int, stream_id, K: int | None = None) -> np.ndarray:
    """(n, len(lams)) draws of the series, all columns on one coin stream."""
    lams = np.asarray(lams, dtype=float)
    if K is None:
        K = max(4, int(math.ceil(math.log(1e-14) / math.log(lams.max()))))
    powers = lams[None, :] ** np.arange(1, K + 1)[:, None]  # (K, m)
    out = np.empty((n, len(lams)))
    block = max(1, _COIN_BLOCK // K)
    for start in range(0, n, block):
        m = min(block, n - start)
        coins = streams.sign_matrix(stream_id, m, K, start)
        for col in range(len(lams)):
            out[start : start + m, col] = streams.row_dot(coins, powers[:, col])
    return out


def fourier_transform(lam: float, t, n_factors: int):
    """prod_{k<=n} cos(lam^k t) and the tail bound sum_{k>n} (lam^k t)^2 / 2."""
    if n_factors < 1:
        raise ValueError("need at least one factor")
    t = np.asarray(t, dtype=float)
    out = np.ones_like(t)
    for k in range(1, n_factors + 1):
        out = out * np.cos(lam**k * t)
    tail = (np.asarray(t) ** 2) * lam ** (2 * (n_factors + 1)) / (2.0 * (1.0 - lam**2))
    return out, tail


def inversion_density(lam: float, xs, cutoff: float = 200.0, panel_nodes: int = 12) -> np.ndarray:
    """Density estimate from inverting the cosine product over |t| <= cutoff."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    n0 = int(math.ceil(math.log(cutoff / 1e-8) / math.log(1.0 / lam)))
    edges = np.linspace(0.0, cutoff, max(int(2 * cutoff), 64) + 1)
    x_nodes, w_nodes = quadrature._rule(panel_nodes)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    tq = (mid[:, None] + half[:, None] * x_nodes[None, :]).ravel()
    wq = (half[:, None] * w_nodes[None, :]).ravel()
    chf, _ = fourier_transform(lam, tq, n0)
    return np.cos(np.outer(xs, tq)) @ (wq * chf) / np.pi


def histogram_density(samples: np.ndarray, radius: float, bin_width: float):
    """(centers, density) over (-radius, radius] bins of the given width."""
    n_bins = int(round(2.0 * radius / bin_width))
    edges = np.linspace(-radius, radius, n_bins + 1)
    counts, _ = np.histogram(samples, bins=edges)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return centers, counts / (len(samples) * bin_width)


def density_estimate(bc: BernoulliConvolution, n: int, bin_width: float = 0.01, cutoff: float = 200.0):
    """Histogram and Fourier-inversion densities on one bin-center grid."""
    radius = bc.support_radius
    samples = bc.sample(n)
    centers, hist = histogram_density(samples, radius, bin_width)
    inv = inversion_density(bc.lam, centers, cutoff)
    return centers, hist, inv


def scaling_identity_residual(
    bc: BernoulliConvolution, n: int, bin_width: float = 0.01, weight: float = 0.5
) -> float:
    """L1-on-grid residual of D(lam x) = (weight/lam) [D(x+1) + D(x-1)].

    The density estimate is the histogram over n samples, extended by zero
    outside the support hull.  The Jacobian 1/lam balances total mass: both
    sides integrate (in x) to 1/lam when weight = 1/2.
    """
    lam = bc.lam
    radius = bc.support_radius
    samples = bc.sample(n)
    n_bins = int(round(2.0 * radius / bin_width))
    edges = np.linspace(-radius, radius, n_bins + 1)
    counts, _ = np.histogram(samples, bins=edges)
    dens = counts / (len(samples) * bin_width)

    def lookup(x):
        x = np.asarray(x, dtype=float)
        idx = np.floor((x + radius) / bin_width).astype(int)
        ok = (idx >= 0) & (idx < n_bins)
        out = np.zeros_like(x)
        out[ok] = dens[idx[ok]]
        return out

    span = radius + 1.0
    xs = np.arange(-span + 0.5 * bin_width, span, bin_width)
    lhs = lookup(lam * xs)
    rhs = (weight / lam) * (lookup(xs + 1.0) + lookup(xs - 1.0))
    return float(np.sum(np.abs(lhs - rhs)) * bin_width)


def ac2_l2_proxy(lam: float, T: float, panel_nodes: int = 8) -> float:
    """integral_{-T}^{T} prod_n cos^2(lam^n t) dt, a square-integrability probe.

    Bounded in T exactly for the square-integrable densities; keeps growing
    for singular parameters.  Reported as a curve value, never a boolean.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError("lambda must lie in (0, 1)")
    n0 = int(math.ceil(math.log(T / 1e-8) / math.log(1.0 / lam)))
    edges = np.linspace(0.0, T, max(int(2 * T), 64) + 1)

    def integrand(t):
        prod, _ = fourier_transform(lam, t, n0)
        return prod * prod

    return 2.0 * quadrature.integrate_panels(integrand, edges, panel_nodes)


def hardy_coefficients(lam: float, n: int) -> np.ndarray:
    """Power-series coefficients (lam, lam^2, ..., lam^n) of the embedded kernel section."""
    if not 0.0 < lam < 1.0:
        raise ValueError("lambda must lie in (0, 1)")
    if n < 1:
        raise ValueError("need at least one coefficient")
    return lam ** np.arange(1, n + 1)


def cross_term_bound_mc(bc: BernoulliConvolution, r: float, n: int, stream_id=None):
    """Monte Carlo check of |E[(X' - X) 1_{|X - X'| <= r}]| against Cauchy-Schwarz.

    Returns (estimate, standard error, bound) with
    bound = sqrt(2 Var X) * sqrt(P(|X - X'| <= r)).
    """
    sid = bc.stream_id if stream_id is None else stream_id
    x1 = bc.sample(n, stream_id=streams.bits(sid, np.array([0], dtype=np.uint64))[0])
    x2 = bc.sample(n, stream_id=streams.bits(sid, np.array([1], dtype=np.uint64))[0])
    indicator = (np.abs(x1 - x2) <= r).astype(float)
    vals = (x2 - x1) * indicator
    est = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(n))
    bound = math.sqrt(2.0 * bc.variance()) * math.sqrt(float(indicator.mean()))
    return est, se, bound
