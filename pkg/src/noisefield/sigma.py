"""The Hilbert space of (function, measure) pairs f sqrt(d mu).

Two pairs are identified when f1 sqrt(d mu1/d lam) = f2 sqrt(d mu2/d lam)
lam-a.e. for the dominating measure lam = mu1 + mu2; the inner product is

    <F1, F2> = integral f1 f2 sqrt((d mu1/d lam)(d mu2/d lam)) d lam,

which this module evaluates through the measures' decomposition into density,
atomic, and singular components: mutually singular components contribute
nothing, matched components pair up exactly.

Almost-everywhere statements are decided on a canonical grid (default 2048
points, attractor anchors for singular kinds) plus every atom.

``SigmaLift`` realizes the classes of a finite family of measures as centered
Gaussian variables on the shared coordinate space: one orthonormal block for
the absolutely continuous plus atomic part of the family's dominating sum,
and one coordinate block for each distinct singular base.  Equivalent pairs
receive identical coefficient sequences, hence identical lifts per sample
point at any truncation.
"""

from __future__ import annotations

import math

import numpy as np

from . import streams
from .bases import AtomicBasis, LegendreBasis, PiecewiseBasis, WalshBasis
from .measures import (
    AtomicMeasure,
    DensityMeasure,
    SigmaFiniteMeasure,
    _same_singular,
    sum_measure,
)
from .sets import BorelSet
from . import quadrature

_EQUIV_TOL = 1e-9


class SigmaFunction:
    """A representative (f, mu) of the class f sqrt(d mu)."""

    def __init__(self, f, mu: SigmaFiniteMeasure, grid=None):
        if not callable(f):
            raise TypeError("representative must be callable")
        self.f = f
        self.mu = mu
        self.grid = np.asarray(grid, dtype=float) if grid is not None else mu.canonical_grid()

    def norm_squared(self) -> float:
        val, _ = self.mu.integrate(lambda x: np.asarray(self.f(x), dtype=float) ** 2)
        return float(val)

    def __repr__(self):
        return f"SigmaFunction(mu={self.mu.kind})"


def _breakpoints(*measures):
    pts = set()
    for m in measures:
        lo, hi = m.support_hull()
        if math.isfinite(lo) and math.isfinite(hi):
            pts.update((lo, hi))
    return sorted(pts)


def inner_product(F1: SigmaFunction, F2: SigmaFunction) -> float:
    """<f1 sqrt(d mu1), f2 sqrt(d mu2)> via the component decomposition."""
    mu1, mu2 = F1.mu, F2.mu
    total = 0.0
    w1, w2 = mu1.density_fn(), mu2.density_fn()
    if w1 is not None and w2 is not None:
        pts = _breakpoints(mu1, mu2)
        for a, b in zip(pts[:-1], pts[1:]):
            xq, wq = quadrature.nodes_weights(a, b, 256)
            vals = (
                np.asarray(F1.f(xq), dtype=float)
                * np.asarray(F2.f(xq), dtype=float)
                * np.sqrt(
                    np.asarray(w1(xq), dtype=float) * np.asarray(w2(xq), dtype=float)
                )
            )
            total += float(vals @ wq)
    for x, m1 in mu1.atoms():
        m2 = mu2.atom_mass_at(x)
        if m2 > 0:
            f1 = float(np.asarray(F1.f(np.array([x]))).ravel()[0])
            f2 = float(np.asarray(F2.f(np.array([x]))).ravel()[0])
            total += f1 * f2 * math.sqrt(m1 * m2)
    for base1, c1 in mu1.singular_parts():
        for base2, c2 in mu2.singular_parts():
            if _same_singular(base1, base2):
                val, _ = base1.integrate(
                    lambda x: np.asarray(F1.f(x), dtype=float) * np.asarray(F2.f(x), dtype=float)
                )
                total += math.sqrt(c1 * c2) * float(val)
    return total


def add(F1: SigmaFunction, F2: SigmaFunction) -> SigmaFunction:
    """Representative of the sum over the dominating measure lam = mu1 + mu2."""
    lam = sum_measure(F1.mu, F2.mu)
    r1 = _pointwise_rn(F1.mu, lam)
    r2 = _pointwise_rn(F2.mu, lam)

    def rep(x):
        x = np.asarray(x, dtype=float)
        return np.asarray(F1.f(x), dtype=float) * np.sqrt(r1(x)) + np.asarray(
            F2.f(x), dtype=float
        ) * np.sqrt(r2(x))

    grid = np.unique(np.concatenate([F1.grid, F2.grid]))
    return SigmaFunction(rep, lam, grid=grid)


def _pointwise_rn(mu, lam):
    """d mu / d lam as a function on points, built from the decompositions."""
    mu_sing, lam_sing = mu.singular_parts(), lam.singular_parts()
    if mu_sing or lam_sing:
        mu_pure = abs(sum(s for _, s in mu_sing) - mu.total_mass()) < 1e-9
        lam_pure = abs(sum(s for _, s in lam_sing) - lam.total_mass()) < 1e-9
        if (
            mu_pure
            and lam_pure
            and len(mu_sing) == 1
            and len(lam_sing) == 1
            and _same_singular(mu_sing[0][0], lam_sing[0][0])
        ):
            ratio = mu_sing[0][1] / lam_sing[0][1]
            return lambda x: np.full(np.shape(np.asarray(x)), ratio)
        raise ValueError(
            "no pointwise derivative: distinct singular components in the pair"
        )
    w_mu, w_lam = mu.density_fn(), lam.density_fn()
    atoms_mu = {round(x / 1e-12): m for x, m in mu.atoms()}
    atoms_lam = {round(x / 1e-12): m for x, m in lam.atoms()}

    def rn(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        dm = np.asarray(w_mu(x), dtype=float) if w_mu is not None else np.zeros_like(x)
        dl = np.asarray(w_lam(x), dtype=float) if w_lam is not None else np.zeros_like(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(dl > 0, dm / np.where(dl > 0, dl, 1.0), 0.0)
        for key, ml in atoms_lam.items():
            pt = key * 1e-12
            out = np.where(np.abs(x - pt) <= 1e-12, atoms_mu.get(key, 0.0) / ml, out)
        return out

    return rn


def equivalence_residual(F1: SigmaFunction, F2: SigmaFunction) -> float:
    """max over the grid of |f1 sqrt(d mu1/d lam) - f2 sqrt(d mu2/d lam)|, lam = mu1 + mu2."""
    lam = sum_measure(F1.mu, F2.mu)
    r1 = _pointwise_rn(F1.mu, lam)
    r2 = _pointwise_rn(F2.mu, lam)
    grid = np.unique(
        np.concatenate(
            [F1.grid, F2.grid, np.asarray([x for x, _ in lam.atoms()], dtype=float)]
        )
    )
    g1 = np.asarray(F1.f(grid), dtype=float) * np.sqrt(r1(grid))
    g2 = np.asarray(F2.f(grid), dtype=float) * np.sqrt(r2(grid))
    return float(np.max(np.abs(g1 - g2)))


def equivalent(F1: SigmaFunction, F2: SigmaFunction, tol: float = _EQUIV_TOL) -> bool:
    """Grid test of f1 sqrt(d mu1/d lam) = f2 sqrt(d mu2/d lam), lam = mu1 + mu2."""
    return equivalence_residual(F1, F2) <= tol


# -- lifting to the Gaussian coordinate space -----------------------------------


class SigmaLift:
    """Gaussian realization of sigma-function classes over a finite measure family.

    Coefficients are taken against the family's dominating sum: density and
    atomic parts share one orthonormal block, every distinct singular base
    gets its own Walsh block on fresh coordinates.
    """

    def __init__(self, measures, J_density: int = 64, walsh_depth: int = 10):
        self.measures = list(measures)
        if not self.measures:
            raise ValueError("need at least one measure")
        dens_parts = [m for m in self.measures if m.density_fn() is not None]
        atom_pool = {}
        for m in self.measures:
            for x, w in m.atoms():
                key = round(x / 1e-12)
                atom_pool[key] = (x, atom_pool.get(key, (x, 0.0))[1] + w)
        self._atoms = tuple(sorted(atom_pool.values()))
        self._blocks = []
        offset = 0
        if dens_parts:
            fns = [m.density_fn() for m in dens_parts]
            lo = min(m.support_hull()[0] for m in dens_parts)
            hi = max(m.support_hull()[1] for m in dens_parts)
            lam_density = DensityMeasure(
                lo, hi, lambda x, fns=fns: sum(np.asarray(g(x), dtype=float) for g in fns)
            )
            basis = LegendreBasis(lam_density)
            self._blocks.append(("density", basis, offset, J_density, lam_density))
            offset += J_density
        if self._atoms:
            basis = AtomicBasis(AtomicMeasure(self._atoms))
            self._blocks.append(("atoms", basis, offset, len(self._atoms), None))
            offset += len(self._atoms)
        seen = []
        for m in self.measures:
            for base, _ in m.singular_parts():
                if not any(_same_singular(base, b) for b in seen):
                    seen.append(base)
        for base in seen:
            inner = getattr(base, "_ifs_measure", None) or base
            basis = WalshBasis(inner, depth=walsh_depth)
            self._blocks.append(("singular", basis, offset, 2**walsh_depth, base))
            offset += 2**walsh_depth
        self.total_J = offset

    def coefficients(self, F: SigmaFunction) -> np.ndarray:
        out = np.zeros(self.total_J)
        w_mu = F.mu.density_fn()
        for kind, basis, offset, width, extra in self._blocks:
            if kind == "density" and w_mu is not None:
                lam_density = extra
                w_lam = lam_density.density_fn()
                lo, hi = lam_density.support_hull()
                xq, wq = quadrature.nodes_weights(lo, hi, 512)
                integrand = (
                    np.asarray(F.f(xq), dtype=float)
                    * np.sqrt(
                        np.asarray(w_mu(xq), dtype=float) * np.asarray(w_lam(xq), dtype=float)
                    )
                )
                out[offset : offset + width] = basis.evaluate_block(xq, width).T @ (
                    wq * integrand
                )
            elif kind == "atoms":
                for j, (x, _) in enumerate(self._atoms):
                    m_mu = F.mu.atom_mass_at(x)
                    if m_mu > 0:
                        fv = float(np.asarray(F.f(np.array([x]))).ravel()[0])
                        out[offset + j] = fv * math.sqrt(m_mu)
            elif kind == "singular":
                for base, scale in F.mu.singular_parts():
                    if _same_singular(base, extra):
                        out[offset : offset + width] = math.sqrt(scale) * basis.inner_coefficients(
                            F.f, width
                        )
        return out

    def lift(self, F: SigmaFunction, xi) -> float:
        coords = xi.coords if hasattr(xi, "coords") else np.asarray(xi, dtype=float)
        if len(coords) < self.total_J:
            raise ValueError(f"need {self.total_J} coordinates, got {len(coords)}")
        return float(self.coefficients(F) @ coords[: self.total_J])

    def lift_samples(self, F: SigmaFunction, n: int, stream_id, first: int = 0) -> np.ndarray:
        c = self.coefficients(F)
        idx = np.flatnonzero(np.abs(c) > 1e-15 * max(np.abs(c).max(), 1e-300))
        if len(idx) == 0:
            return np.zeros(n)
        xi = streams.normal_matrix_at(stream_id, n, idx.astype(np.uint64), first)
        return streams.row_dot(xi, c[idx])


def lift(F: SigmaFunction, xi, J_density: int = 64) -> float:
    """One-measure convenience wrapper around SigmaLift."""
    return SigmaLift([F.mu], J_density=J_density).lift(F, xi)


# -- correlated copies ------------------------------------------------------------


def _child_stream(stream_id, tag: int) -> np.uint64:
    return streams.bits(stream_id, np.array([tag], dtype=np.uint64))[0]


class CorrelatedPair:
    """Two jointly Gaussian noise fields with prescribed correlation density.

    The correlation function f must be piecewise constant with |f| <= 1 on a
    declared partition; the partition's piecewise basis diagonalizes
    multiplication by f, so the second field's coordinates can be mixed
    coordinate-by-coordinate:  xi'_j = rho_j xi_j + sqrt(1 - rho_j^2) eta_j.
    Marginally both fields have covariance mu(A intersect B); across the pair
    E[W1_A W2_B] = integral_{A cap B} f d mu.
    """

    def __init__(self, mu, piece_values, edges, stream_id, per_piece: int = 8):
        vals = np.asarray(piece_values, dtype=float)
        if np.any(np.abs(vals) > 1.0 + 1e-12):
            raise ValueError("correlation function must satisfy |f| <= 1")
        self.basis = PiecewiseBasis(mu, edges, per_piece=per_piece)
        self.rho = self.basis.multiplier_eigenvalues(vals)
        self.J = self.basis.size
        self.mu = mu
        self._xi_id = _child_stream(stream_id, 0)
        self._eta_id = _child_stream(stream_id, 1)

    def sample_pair(self, A: BorelSet, n: int, first: int = 0):
        c = self.basis.indicator_coefficients(A, self.J)
        xi = streams.normal_matrix(self._xi_id, n, self.J, first)
        eta = streams.normal_matrix(self._eta_id, n, self.J, first)
        mixed = self.rho[None, :] * xi + np.sqrt(1.0 - self.rho**2)[None, :] * eta
        return streams.row_dot(xi, c), streams.row_dot(mixed, c)

    def cross_covariance_target(self, A: BorelSet) -> float:
        total = 0.0
        for (a, b), val in zip(
            zip(self.basis.edges[:-1], self.basis.edges[1:]),
            self.rho[:: self.basis.per_piece],
        ):
            piece_A = A.clip(a, b)
            if not piece_A.is_empty:
                total += val * self.mu.measure_of(piece_A)
        return total


def correlated_pair(mu, piece_values, edges, stream_id, per_piece: int = 8) -> CorrelatedPair:
    return CorrelatedPair(mu, piece_values, edges, stream_id, per_piece=per_piece)
