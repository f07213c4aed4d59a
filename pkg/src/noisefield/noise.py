"""Set-indexed Gaussian noise realized on one universal coordinate space.

A sample point is a prefix of an i.i.d. N(0,1) coordinate sequence xi,
addressed by a 64-bit stream id.  A noise field pairs a measure with an
orthonormal basis of its L2 space and evaluates

    W_A(xi) = sum_{j<J} (integral_A phi_j d mu) * xi_j,

so W_A is centered Gaussian with variance sum_j c_j(A)^2, which increases to
mu(A) with the truncation J.  The same coefficient pairing extends to
square-integrable integrands (the stochastic integral), to the coordinate
factorization (psi/gamma maps), and to the Monte Carlo functionals used by
the verification suites.

Coordinates with zero coefficient are never materialized: because every
coordinate is addressed by (stream, index), skipping them is exact, not an
approximation.

Conventions for degenerate sets: W_A = 0 when mu(A) = 0, and sets of
infinite mass are rejected (the renormalized variant is out of scope).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import streams
from .bases import OrthonormalBasis, default_truncation, make_basis
from .measures import SigmaFiniteMeasure
from .sets import BorelSet

_MC_BLOCK = 1 << 14


@dataclass(frozen=True)
class UniversalSamplePoint:
    """Finite prefix of one coordinate stream; extensions are deterministic."""

    stream_id: int
    coords: np.ndarray

    @property
    def J(self) -> int:
        return len(self.coords)

    def extended(self, J: int) -> "UniversalSamplePoint":
        if J <= self.J:
            return UniversalSamplePoint(self.stream_id, self.coords[:J])
        return sample_xi(self.stream_id, J)

    def coordinate(self, j: int) -> float:
        if j < self.J:
            return float(self.coords[j])
        return float(streams.normals_at(self.stream_id, np.array([j], dtype=np.uint64))[0])


def sample_xi(seed, J: int) -> UniversalSamplePoint:
    if J < 1:
        raise ValueError("need at least one coordinate")
    return UniversalSamplePoint(seed, streams.normals(seed, J))


class GaussianNoiseField:
    def __init__(self, measure: SigmaFiniteMeasure, basis: OrthonormalBasis | None = None, J: int | None = None):
        self.measure = measure
        self.basis = basis if basis is not None else make_basis(measure, J)
        self.J = J if J is not None else default_truncation(self.basis)
        if self.basis.size is not None and self.J > self.basis.size:
            raise ValueError(f"truncation {self.J} exceeds basis size {self.basis.size}")
        self._coeff_cache: dict[BorelSet, np.ndarray] = {}

    # -- coefficients ---------------------------------------------------------

    def coefficients(self, A: BorelSet) -> np.ndarray:
        cached = self._coeff_cache.get(A)
        if cached is None:
            cached = self.basis.indicator_coefficients(A, self.J)
            self._coeff_cache[A] = cached
        return cached

    def ito_coefficients(self, f) -> np.ndarray:
        return self.basis.inner_coefficients(f, self.J)

    def _checked_mass(self, A: BorelSet) -> float:
        mass = self.measure.measure_of(A)
        if not math.isfinite(mass):
            raise ValueError(
                "set has infinite mass: the renormalized noise convention is out of scope"
            )
        return mass

    # -- single evaluations ----------------------------------------------------

    def noise_on_set(self, A: BorelSet, xi: UniversalSamplePoint) -> float:
        if self._checked_mass(A) == 0.0:
            return 0.0
        c = self.coefficients(A)
        return self._pair(c, xi)

    def ito_integral(self, f, xi: UniversalSamplePoint) -> float:
        return self._pair(self.ito_coefficients(f), xi)

    def _pair(self, c: np.ndarray, xi: UniversalSamplePoint) -> float:
        if xi.J < self.J:
            raise ValueError(f"sample prefix {xi.J} shorter than truncation {self.J}")
        return float(c @ xi.coords[: self.J])

    # -- vectorized Monte Carlo -------------------------------------------------

    def _samples_from_coeffs(self, c: np.ndarray, n: int, stream_id, first: int = 0) -> np.ndarray:
        idx = np.flatnonzero(c)
        if len(idx) == 0:
            return np.zeros(n)
        out = np.empty(n)
        cz = c[idx]
        for start in range(0, n, _MC_BLOCK):
            m = min(_MC_BLOCK, n - start)
            xi = streams.normal_matrix_at(stream_id, m, idx.astype(np.uint64), first + start)
            out[start : start + m] = streams.row_dot(xi, cz)
        return out

    def noise_samples(self, A: BorelSet, n: int, stream_id, first: int = 0) -> np.ndarray:
        if self._checked_mass(A) == 0.0:
            return np.zeros(n)
        return self._samples_from_coeffs(self.coefficients(A), n, stream_id, first)

    def ito_samples(self, f, n: int, stream_id, first: int = 0) -> np.ndarray:
        return self._samples_from_coeffs(self.ito_coefficients(f), n, stream_id, first)

    def covariance_mc(self, A: BorelSet, B: BorelSet, n: int, stream_id):
        """Sample covariance of (W_A, W_B) over n coupled draws, with standard error."""
        if n < 100:
            raise ValueError("need at least 100 samples")
        ca, cb = self.coefficients(A), self.coefficients(B)
        self._checked_mass(A), self._checked_mass(B)
        idx = np.flatnonzero(np.abs(ca) + np.abs(cb))
        s1 = s2 = 0.0
        for start in range(0, n, _MC_BLOCK):
            m = min(_MC_BLOCK, n - start)
            xi = streams.normal_matrix_at(stream_id, m, idx.astype(np.uint64), start)
            prod = streams.row_dot(xi, ca[idx]) * streams.row_dot(xi, cb[idx])
            s1 += prod.sum()
            s2 += (prod * prod).sum()
        mean = s1 / n
        var = max(s2 / n - mean * mean, 0.0)
        return mean, math.sqrt(var / n)

    # -- coordinate factorization -------------------------------------------------

    def psi_map(self, xi: UniversalSamplePoint) -> np.ndarray:
        """Coordinates Z_j of the factor map, computed through the basis pairing."""
        if self.J > 2048:
            raise ValueError("factor map materializes a JxJ pairing; lower the truncation")
        if xi.J < self.J:
            raise ValueError(f"sample prefix {xi.J} shorter than truncation {self.J}")
        return self.basis.gram(self.J) @ xi.coords[: self.J]

    def gamma_map(self, coords, A: BorelSet) -> float:
        """Finitely additive set function of the coordinate sequence."""
        coords = coords.coords if isinstance(coords, UniversalSamplePoint) else np.asarray(coords)
        if len(coords) != self.J:
            raise ValueError(f"coordinate length {len(coords)} does not match truncation {self.J}")
        return float(self.coefficients(A) @ coords)


# -- functionals of the coordinate law ----------------------------------------


def characteristic_functional_mc(c, n: int, stream_id):
    """Monte Carlo E[exp(i <xi, c>)]; returns (estimate, (se_real, se_imag))."""
    c = np.asarray(c, dtype=float)
    acc = np.zeros(2)
    acc2 = np.zeros(2)
    idx = np.flatnonzero(c)
    for start in range(0, n, _MC_BLOCK):
        m = min(_MC_BLOCK, n - start)
        if len(idx) == 0:
            vals = np.ones(m, dtype=complex)
        else:
            xi = streams.normal_matrix_at(stream_id, m, idx.astype(np.uint64), start)
            vals = np.exp(1j * streams.row_dot(xi, c[idx]))
        acc += [vals.real.sum(), vals.imag.sum()]
        acc2 += [(vals.real**2).sum(), (vals.imag**2).sum()]
    mean = acc / n
    var = np.maximum(acc2 / n - mean * mean, 0.0)
    return complex(mean[0], mean[1]), tuple(np.sqrt(var / n))


def characteristic_functional_target(c) -> float:
    c = np.asarray(c, dtype=float)
    return math.exp(-0.5 * float(c @ c))


def moment_identity_mc(j: int, k: int, c, n: int, stream_id):
    """Monte Carlo E[xi_j xi_k exp(i <xi, c>)] with standard errors."""
    c = np.asarray(c, dtype=float)
    idx = np.unique(np.concatenate([np.flatnonzero(c), [j, k]])).astype(np.uint64)
    pos = {int(v): i for i, v in enumerate(idx)}
    acc = np.zeros(2)
    acc2 = np.zeros(2)
    for start in range(0, n, _MC_BLOCK):
        m = min(_MC_BLOCK, n - start)
        xi = streams.normal_matrix_at(stream_id, m, idx, start)
        phase = np.exp(1j * streams.row_dot(xi, c[idx.astype(np.intp)]))
        vals = xi[:, pos[j]] * xi[:, pos[k]] * phase
        acc += [vals.real.sum(), vals.imag.sum()]
        acc2 += [(vals.real**2).sum(), (vals.imag**2).sum()]
    mean = acc / n
    var = np.maximum(acc2 / n - mean * mean, 0.0)
    return complex(mean[0], mean[1]), tuple(np.sqrt(var / n))


def moment_identity_target(j: int, k: int, c) -> float:
    """(delta_jk - c_j c_k) exp(-|c|^2/2): the product rule keeps the delta term."""
    c = np.asarray(c, dtype=float)
    delta = 1.0 if j == k else 0.0
    return (delta - c[j] * c[k]) * math.exp(-0.5 * float(c @ c))


def ell2_escape_ratio(seed, n: int) -> float:
    """S_n / n for S_n = sum of squared coordinates; near 1 when coordinates escape l2."""
    total = 0.0
    for start in range(0, n, 1 << 20):
        m = min(1 << 20, n - start)
        z = streams.normals(seed, m, offset=start)
        total += float(z @ z)
    return total / n


def max_coordinate(seed, n: int) -> float:
    worst = 0.0
    for start in range(0, n, 1 << 20):
        m = min(1 << 20, n - start)
        worst = max(worst, float(np.abs(streams.normals(seed, m, offset=start)).max()))
    return worst


class CoordinateFactorMap:
    """Measure-preserving map of the coordinate space: an orthogonal mix of the
    leading block, identity beyond it.  The pullback f -> f o Psi is positive,
    unital, and expectation preserving."""

    def __init__(self, U: np.ndarray):
        U = np.asarray(U, dtype=float)
        if np.max(np.abs(U @ U.T - np.eye(len(U)))) > 1e-10:
            raise ValueError("factor map needs an orthogonal matrix")
        self.U = U

    def apply(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        n = len(self.U)
        if len(coords) < n:
            raise ValueError("coordinate prefix shorter than the mixing block")
        out = coords.copy()
        out[:n] = self.U @ coords[:n]
        return out

    def pullback(self, f):
        return lambda coords: f(self.apply(coords))


# -- spectral variance of fractional increments --------------------------------


def fbm_spectral_integral(H: float, t: float, panel_nodes: int = 24, tail_start: float = 3000.0):
    """integral_0^inf 2 (1 - cos(t x)) x^(-2H-1) dx with a rigorous error bound.

    Split: power series on [0, 1/t], half-period Gauss-Legendre panels up to
    the tail start, then the exact power tail plus two integration-by-parts
    terms of the cosine tail; the remainder bound is returned.
    """
    if not 0.0 < H < 1.0:
        raise ValueError("Hurst index must lie in (0, 1)")
    if not t > 0.0:
        raise ValueError("need t > 0")
    s = 2.0 * H + 1.0
    eps = 1.0 / t
    series = 0.0
    term_bound = np.inf
    for m in range(1, 80):
        term = 2.0 * (-1) ** (m + 1) * t ** (2 * m) * eps ** (2 * m - 2.0 * H) / (
            math.factorial(2 * m) * (2 * m - 2.0 * H)
        )
        series += term
        term_bound = abs(term)
        if term_bound < 1e-18 * (abs(series) + 1e-30):
            break
    else:
        raise ValueError(f"series at the origin failed to converge (H={H}, t={t})")
    B = max(tail_start, 2.0 * eps)
    n_panels = int(math.ceil((B - eps) * t / math.pi))
    B = eps + n_panels * math.pi / t
    edges = eps + (math.pi / t) * np.arange(n_panels + 1)
    from .quadrature import integrate_panels

    middle = integrate_panels(
        lambda x: 2.0 * (1.0 - np.cos(t * x)) * x ** (-s), edges, panel_nodes
    )
    power_tail = 2.0 * B ** (1.0 - s) / (s - 1.0)
    ibp1 = -math.sin(t * B) * B ** (-s) / t
    ibp2 = -s * math.cos(t * B) * B ** (-s - 1.0) / t**2
    cos_tail = -2.0 * (ibp1 + ibp2)
    remainder = 4.0 * s * (s + 1.0) * B ** (-s - 2.0) / t**3
    value = series + middle + power_tail + cos_tail
    error = remainder + term_bound
    if not (np.isfinite(value) and error < 1e-6 * max(abs(value), 1.0)):
        raise ValueError(
            f"spectral quadrature did not converge: value={value}, bound={error}, "
            f"panels={n_panels}, tail_start={B}"
        )
    return value, error


def fbm_increment_variance(H: float, t: float, **quad) -> float:
    """V(t) normalized so V(1) = 1; scales as t^(2H)."""
    v_t, _ = fbm_spectral_integral(H, t, **quad)
    v_1, _ = fbm_spectral_integral(H, 1.0, **quad)
    return v_t / v_1
