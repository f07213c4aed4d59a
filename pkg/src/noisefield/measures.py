"""Sigma-finite measures on intervals of the line and on IFS attractors.

Supported kinds: Lebesgue on an interval, weighted densities (polynomial or
callable weight), finite atomic measures, invariant measures of
non-overlapping affine IFSs, Bernoulli convolutions, and sums of two
measures.  Every kind answers ``measure_of`` on finite unions of half-open
intervals and ``integrate`` with an error estimate; kinds are also
decomposable into (Lebesgue density, atoms, singular components), which is
what the Radon-Nikodym and sigma-function machinery works with.

Exactness: interval masses are closed-form for Lebesgue, polynomial
densities, atomic measures, and IFS invariant measures (branch-descent CDF);
everything else is quadrature with a node-doubling error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as P

from . import quadrature
from .ifs import IteratedFunctionSystem, bernoulli_system, invariant_moments
from .sets import BorelSet

_ATOM_TOL = 1e-12


@dataclass(frozen=True)
class SimpleFunction:
    """Finite sum  sum_i a_i * chi_{A_i}  with pairwise disjoint A_i."""

    terms: tuple  # ((coefficient, BorelSet), ...)

    def __post_init__(self):
        object.__setattr__(
            self, "terms", tuple((float(a), s) for a, s in self.terms)
        )
        for i, (_, s1) in enumerate(self.terms):
            for _, s2 in self.terms[i + 1 :]:
                if not s1.intersect(s2).is_empty:
                    raise ValueError("simple-function sets must be disjoint")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for a, s in self.terms:
            for lo, hi in s.intervals:
                out += a * ((x > lo) & (x <= hi))
        return out


class SigmaFiniteMeasure:
    kind = "abstract"

    # -- queries every kind answers ----------------------------------------

    def support_hull(self):
        raise NotImplementedError

    def total_mass(self) -> float:
        raise NotImplementedError

    def measure_of(self, A: BorelSet) -> float:
        raise NotImplementedError

    def integrate(self, f, A: BorelSet | None = None, nodes: int = 64):
        raise NotImplementedError

    # -- decomposition against Lebesgue ------------------------------------

    def density_fn(self):
        """Vectorized Lebesgue density of the absolutely continuous part, or None."""
        return None

    def atoms(self) -> tuple:
        return ()

    def singular_parts(self) -> tuple:
        """((base_measure, scale), ...) for singular-continuous components."""
        return ()

    def to_descriptor(self) -> dict:
        raise NotImplementedError

    # -- shared helpers ------------------------------------------------------

    def canonical_grid(self, n: int = 2048) -> np.ndarray:
        lo, hi = self.support_hull()
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError("canonical grid needs a finite support hull")
        cells = np.linspace(lo, hi, n + 1)
        grid = 0.5 * (cells[:-1] + cells[1:])
        pts = [x for x, _ in self.atoms()]
        if pts:
            grid = np.unique(np.concatenate([grid, np.asarray(pts, dtype=float)]))
        return grid

    def atom_mass_at(self, x: float) -> float:
        for a, m in self.atoms():
            if abs(a - x) <= _ATOM_TOL:
                return m
        return 0.0

    def _clipped(self, A: BorelSet) -> BorelSet:
        lo, hi = self.support_hull()
        if not (math.isfinite(lo) and math.isfinite(hi)):
            return A
        return A.clip(lo, hi)


def _panel_rule(a, b, n_panels, nodes_per_panel):
    """Flattened nodes/weights of a composite Gauss-Legendre rule on [a, b]."""
    edges = np.linspace(a, b, n_panels + 1)
    x, w = quadrature._rule(nodes_per_panel)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    return (mid[:, None] + half[:, None] * x[None, :]).ravel(), (
        half[:, None] * w[None, :]
    ).ravel()


def _reject_unbounded(values, what="integrand"):
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{what} is unbounded on the integration set")
    return values


class LebesgueMeasure(SigmaFiniteMeasure):
    """Lebesgue measure restricted to an interval (endpoints may be infinite)."""

    kind = "lebesgue-interval"

    def __init__(self, a: float, b: float):
        if not a < b:
            raise ValueError("need a < b")
        self.a, self.b = float(a), float(b)

    def support_hull(self):
        return self.a, self.b

    def total_mass(self) -> float:
        return self.b - self.a

    def measure_of(self, A: BorelSet) -> float:
        return self._clipped(A).total_length()

    def density_fn(self):
        a, b = self.a, self.b
        return lambda x: ((np.asarray(x) > a) & (np.asarray(x) <= b)).astype(float)

    def integrate(self, f, A=None, nodes=64):
        A = self._clipped(A) if A is not None else BorelSet.interval(self.a, self.b)
        if any(not (math.isfinite(lo) and math.isfinite(hi)) for lo, hi in A.intervals):
            raise ValueError("quadrature needs finite intervals")
        total, err = 0.0, 0.0
        for lo, hi in A.intervals:
            v, e = quadrature.integrate(lambda x: _reject_unbounded(f(x)), lo, hi, nodes)
            total, err = total + v, err + e
        return total, err

    def to_descriptor(self):
        return {"kind": self.kind, "interval": [self.a, self.b]}


class DensityMeasure(SigmaFiniteMeasure):
    """w(x) dx on a finite interval; w is a polynomial (exact) or a callable."""

    kind = "weighted-density"

    def __init__(self, a: float, b: float, density):
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise ValueError("weighted densities live on finite intervals")
        self.a, self.b = float(a), float(b)
        if callable(density):
            self.poly = None
            self._w = density
        else:
            self.poly = np.asarray(density, dtype=float)
            self._w = lambda x, c=self.poly: P.polyval(np.asarray(x, dtype=float), c)
        probe = np.asarray(self._w(np.linspace(self.a, self.b, 257)), dtype=float)
        if not np.all(np.isfinite(probe)) or np.min(probe) < -1e-12:
            raise ValueError("density must be finite and nonnegative on its interval")

    def support_hull(self):
        return self.a, self.b

    def density_fn(self):
        a, b, w = self.a, self.b, self._w
        return lambda x: np.where(
            (np.asarray(x) > a) & (np.asarray(x) <= b + _ATOM_TOL),
            np.asarray(w(x), dtype=float),
            0.0,
        )

    def total_mass(self) -> float:
        return self.measure_of(BorelSet.interval(self.a, self.b))

    def measure_of(self, A: BorelSet) -> float:
        A = self._clipped(A)
        if self.poly is not None:
            anti = P.polyint(self.poly)
            return float(
                sum(P.polyval(hi, anti) - P.polyval(lo, anti) for lo, hi in A.intervals)
            )
        return self.integrate(lambda x: np.ones_like(np.asarray(x, dtype=float)), A)[0]

    def integrate(self, f, A=None, nodes=64):
        A = self._clipped(A) if A is not None else BorelSet.interval(self.a, self.b)
        total, err = 0.0, 0.0
        for lo, hi in A.intervals:
            v, e = quadrature.integrate(
                lambda x: _reject_unbounded(f(x)) * np.asarray(self._w(x), dtype=float),
                lo,
                hi,
                nodes,
            )
            total, err = total + v, err + e
        return total, err

    def to_descriptor(self):
        if self.poly is None:
            raise ValueError("callable densities have no JSON form")
        return {
            "kind": self.kind,
            "interval": [self.a, self.b],
            "density_poly": [float(c) for c in self.poly],
        }


class AtomicMeasure(SigmaFiniteMeasure):
    """Finitely many atoms; an empty atom list is the zero measure."""

    kind = "atomic"

    def __init__(self, atoms):
        pts = []
        for x, m in atoms:
            if not m > 0:
                raise ValueError(f"atom mass {m} must be strictly positive")
            pts.append((float(x), float(m)))
        pts.sort()
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if abs(x0 - x1) <= _ATOM_TOL:
                raise ValueError("duplicate atom locations")
        self._atoms = tuple(pts)

    def support_hull(self):
        if not self._atoms:
            return 0.0, 0.0
        return self._atoms[0][0], self._atoms[-1][0]

    def atoms(self):
        return self._atoms

    def total_mass(self) -> float:
        return sum(m for _, m in self._atoms)

    def measure_of(self, A: BorelSet) -> float:
        return sum(m for x, m in self._atoms if A.contains(x))

    def integrate(self, f, A=None, nodes=64):
        total = 0.0
        for x, m in self._atoms:
            if A is None or A.contains(x):
                total += float(np.asarray(f(np.array([x]))).ravel()[0]) * m
        return total, 0.0

    def to_descriptor(self):
        return {"kind": self.kind, "atoms": [[x, m] for x, m in self._atoms]}


class IFSInvariantMeasure(SigmaFiniteMeasure):
    """The unique self-similar probability measure of a closed affine IFS."""

    kind = "ifs-invariant"

    def __init__(self, ifs: IteratedFunctionSystem):
        if not ifs.is_closed(tol=1e-9):
            raise ValueError("invariant measure needs branch weights summing to 1")
        self.ifs = ifs

    def support_hull(self):
        return self.ifs.hull

    def total_mass(self) -> float:
        return 1.0

    def singular_parts(self):
        if self.ifs.covers():
            return ()
        return ((self, 1.0),)

    def density_fn(self):
        if not self.ifs.covers():
            return None
        # covering equal-weight systems (e.g. the binary system) are Lebesgue
        probs = [float(p) for p in self.ifs.probabilities()]
        lens = [self.ifs.image(i)[1] - self.ifs.image(i)[0] for i in range(self.ifs.n_branches)]
        lo, hi = self.ifs.hull
        if all(abs(p - ln / (hi - lo)) < 1e-12 for p, ln in zip(probs, lens)):
            return lambda x: ((np.asarray(x) > lo) & (np.asarray(x) <= hi)).astype(float) / (
                hi - lo
            )
        return None

    def measure_of(self, A: BorelSet) -> float:
        if A.word is not None:
            return float(self.ifs.cylinder_mass(A.word))
        A = self._clipped(A)
        return float(sum(self.ifs.cdf(hi) - self.ifs.cdf(lo) for lo, hi in A.intervals))

    def canonical_grid(self, n: int = 2048) -> np.ndarray:
        # grid points must lie on the attractor: use cylinder anchor points
        k = self.ifs.n_branches
        depth = max(1, int(math.ceil(math.log(n) / math.log(k))))
        codes = np.arange(k**depth)
        ratios = np.array([float(r) for r in self.ifs.ratios])
        shifts = np.array([float(s) for s in self.ifs.shifts])
        lo, hi = self.ifs.hull
        pts = np.full(k**depth, lo)
        for j in range(depth - 1, -1, -1):
            d = (codes // k**j) % k
            pts = ratios[d] * pts + shifts[d]
        return np.sort(pts)

    def cell_masses(self, A: BorelSet, depth: int) -> np.ndarray:
        """mu(A intersect cell) for all depth-``depth`` cells in digit-code order."""
        k = self.ifs.n_branches
        out = np.empty(k**depth)
        for code in range(k**depth):
            word = _code_to_word(code, k, depth)
            lo, hi = self.ifs.cylinder_interval(word)
            out[code] = self.measure_of(A.clip(lo, hi))
        return out

    def integrate(self, f, A=None, nodes=64, depth=None):
        if not callable(f):
            return self._integrate_poly(f, A)
        k = self.ifs.n_branches
        if depth is None:
            depth = max(6, int(np.log(60000) / np.log(k)))
        coarse = self._cell_sum(f, A, depth - 2)
        fine = self._cell_sum(f, A, depth)
        return fine, abs(fine - coarse)

    def _cell_sum(self, f, A, depth):
        # cell code sum_k b_k * n^(k-1); innermost branch applied first so the
        # anchor of code c lands inside the cylinder of word (b_1..b_d)
        k = self.ifs.n_branches
        codes = np.arange(k**depth)
        lo, hi = self.ifs.hull
        ratios = np.array([float(r) for r in self.ifs.ratios])
        shifts = np.array([float(s) for s in self.ifs.shifts])
        anchors = np.full(k**depth, 0.5 * (lo + hi))
        for j in range(depth - 1, -1, -1):
            d = (codes // k**j) % k
            anchors = ratios[d] * anchors + shifts[d]
        vals = _reject_unbounded(f(anchors))
        if A is None:
            probs = np.array([float(p) for p in self.ifs.probabilities()])
            masses = np.ones(k**depth)
            digits = codes.copy()
            for _ in range(depth):
                masses *= probs[digits % k]
                digits //= k
        else:
            masses = self.cell_masses(self._clipped(A), depth)
        return float(vals @ masses)

    def _integrate_poly(self, coeffs, A):
        coeffs = list(coeffs)
        if A is None:
            return _poly_moment_value(self.ifs, coeffs), 0.0
        if A.word is not None:
            # exact: restrict to the cylinder by composing the word into the polynomial
            rw, sw = 1.0, 0.0
            exact = all(
                isinstance(v, (int, Fraction))
                for v in list(self.ifs.ratios) + list(self.ifs.shifts)
            )
            rw = Fraction(1) if exact else 1.0
            sw = Fraction(0) if exact else 0.0
            for d in A.word:
                r = Fraction(self.ifs.ratios[d]) if exact else float(self.ifs.ratios[d])
                s = Fraction(self.ifs.shifts[d]) if exact else float(self.ifs.shifts[d])
                rw, sw = rw * r, r * sw + s
            shifted = _poly_affine_substitute(coeffs, rw, sw)
            mass = self.ifs.cylinder_mass(A.word)
            return mass * _poly_moment_value(self.ifs, shifted), 0.0
        val, err = self.integrate(
            lambda x: P.polyval(np.asarray(x, dtype=float), np.asarray([float(c) for c in coeffs])),
            A,
        )
        return val, err

    def to_descriptor(self):
        return {"kind": self.kind, "ifs": self.ifs.to_descriptor()}


def _code_to_word(code, k, depth):
    word = []
    for _ in range(depth):
        word.append(code % k)
        code //= k
    return tuple(word)


def _poly_moment_value(ifs, coeffs):
    moments = invariant_moments(ifs, max(len(coeffs) - 1, 0))
    exact = isinstance(moments[-1], Fraction) and all(
        isinstance(c, (int, Fraction)) for c in coeffs
    )
    if exact:
        return sum(Fraction(c) * m for c, m in zip(coeffs, moments))
    return float(sum(float(c) * float(m) for c, m in zip(coeffs, moments)))


def _poly_affine_substitute(coeffs, r, s):
    """Coefficients of p(r*x + s) given those of p."""
    from math import comb

    n = len(coeffs)
    zero = Fraction(0) if isinstance(r, Fraction) else 0.0
    out = [zero] * n
    for k, c in enumerate(coeffs):
        ck = Fraction(c) if isinstance(r, Fraction) and isinstance(c, (int, Fraction)) else float(c)
        for l in range(k + 1):
            out[l] = out[l] + ck * comb(k, l) * (r**l) * (s ** (k - l))
    return out


class BernoulliMeasure(SigmaFiniteMeasure):
    """Law of  sum_k eps_k lam^k  with fair signs; support radius lam/(1-lam).

    For lam <= 1/2 the branch maps lam*(x +- 1) do not overlap, so interval
    masses come exactly from the IFS descent.  Beyond 1/2 the CDF is recovered
    from the cosine-product characteristic function (approximate, with a
    reported refinement error).
    """

    kind = "bernoulli-convolution"

    def __init__(self, lam: float, inversion_cutoff: float = 2000.0):
        if not 0 < lam < 1:
            raise ValueError("lambda must lie in (0, 1)")
        self.lam = float(lam)
        self.inversion_cutoff = float(inversion_cutoff)
        self._ifs_measure = (
            IFSInvariantMeasure(bernoulli_system(self.lam)) if lam <= 0.5 else None
        )

    def support_hull(self):
        b = self.lam / (1.0 - self.lam)
        return -b, b

    def total_mass(self) -> float:
        return 1.0

    def density_fn(self):
        if abs(self.lam - 0.5) < 1e-15:
            return lambda x: ((np.asarray(x) > -1) & (np.asarray(x) <= 1)).astype(float) * 0.5
        return None

    def singular_parts(self):
        if self.lam < 0.5:
            return ((self, 1.0),)
        return ()

    def cdf(self, x) -> float:
        if self._ifs_measure is not None:
            return self._ifs_measure.ifs.cdf(x)
        return self._cdf_inversion(x)[0]

    def _cdf_inversion(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        lam, T = self.lam, self.inversion_cutoff
        n0 = int(np.ceil(np.log(T / 1e-9) / np.log(1.0 / lam)))
        nodes_t, weights_t = _panel_rule(1e-9, T, max(int(2 * T), 128), 8)
        chf = np.ones_like(nodes_t)
        for n in range(1, n0 + 1):
            chf = chf * np.cos(lam**n * nodes_t)
        kern = weights_t * chf / nodes_t
        half = nodes_t <= T / 2
        sines = np.sin(np.outer(xs, nodes_t))
        full = 0.5 + (sines @ kern) / np.pi
        part = 0.5 + (sines[:, half] @ kern[half]) / np.pi
        return full, np.abs(full - part)

    def measure_of(self, A: BorelSet) -> float:
        A = self._clipped(A)
        if self._ifs_measure is not None:
            return self._ifs_measure.measure_of(A)
        total = 0.0
        for lo, hi in A.intervals:
            vals, _ = self._cdf_inversion([lo, hi])
            total += vals[1] - vals[0]
        return float(total)

    def integrate(self, f, A=None, nodes=64):
        if self._ifs_measure is not None:
            return self._ifs_measure.integrate(f, A, nodes)
        lo, hi = self.support_hull()
        A = A.clip(lo, hi) if A is not None else BorelSet.interval(lo, hi)
        total, err = 0.0, 0.0
        for a, b in A.intervals:
            fine = self._riemann(f, a, b, 512)
            coarse = self._riemann(f, a, b, 256)
            total += fine
            err += abs(fine - coarse)
        return total, err

    def _riemann(self, f, a, b, n):
        grid = np.linspace(a, b, n + 1)
        cdfs, _ = self._cdf_inversion(grid)
        masses = np.diff(cdfs)
        mids = 0.5 * (grid[:-1] + grid[1:])
        vals = _reject_unbounded(f(mids))
        return float(vals @ masses)

    def to_descriptor(self):
        return {"kind": self.kind, "lambda": self.lam}


class SumMeasure(SigmaFiniteMeasure):
    kind = "sum-of-two"

    def __init__(self, mu1: SigmaFiniteMeasure, mu2: SigmaFiniteMeasure):
        self.mu1, self.mu2 = mu1, mu2

    @property
    def components(self):
        return self.mu1, self.mu2

    def support_hull(self):
        hulls = [m.support_hull() for m in self.components if m.total_mass() > 0]
        if not hulls:
            return self.mu1.support_hull()
        return min(h[0] for h in hulls), max(h[1] for h in hulls)

    def total_mass(self) -> float:
        return self.mu1.total_mass() + self.mu2.total_mass()

    def measure_of(self, A: BorelSet) -> float:
        return self.mu1.measure_of(A) + self.mu2.measure_of(A)

    def integrate(self, f, A=None, nodes=64):
        v1, e1 = self.mu1.integrate(f, A, nodes)
        v2, e2 = self.mu2.integrate(f, A, nodes)
        return v1 + v2, e1 + e2

    def density_fn(self):
        fns = [m.density_fn() for m in self.components]
        fns = [g for g in fns if g is not None]
        if not fns:
            return None
        return lambda x: sum(np.asarray(g(x), dtype=float) for g in fns)

    def atoms(self):
        merged = {}
        for m in self.components:
            for x, w in m.atoms():
                key = round(x / _ATOM_TOL)
                if key in merged:
                    merged[key] = (merged[key][0], merged[key][1] + w)
                else:
                    merged[key] = (x, w)
        return tuple(sorted(merged.values()))

    def singular_parts(self):
        merged = []
        for m in self.components:
            for base, scale in m.singular_parts():
                for i, (b0, s0) in enumerate(merged):
                    if _same_singular(b0, base):
                        merged[i] = (b0, s0 + scale)
                        break
                else:
                    merged.append((base, scale))
        return tuple(merged)

    def to_descriptor(self):
        return {
            "kind": self.kind,
            "parts": [self.mu1.to_descriptor(), self.mu2.to_descriptor()],
        }


def _same_singular(m1, m2) -> bool:
    if m1 is m2:
        return True
    if isinstance(m1, IFSInvariantMeasure) and isinstance(m2, IFSInvariantMeasure):
        return m1.ifs == m2.ifs
    if isinstance(m1, BernoulliMeasure) and isinstance(m2, BernoulliMeasure):
        return m1.lam == m2.lam
    if isinstance(m1, BernoulliMeasure) and isinstance(m2, IFSInvariantMeasure):
        return m1._ifs_measure is not None and m1._ifs_measure.ifs == m2.ifs
    if isinstance(m2, BernoulliMeasure):
        return _same_singular(m2, m1)
    return False


def sum_measure(mu1: SigmaFiniteMeasure, mu2: SigmaFiniteMeasure) -> SumMeasure:
    return SumMeasure(mu1, mu2)


def radon_nikodym_on_grid(mu, lam, grid) -> np.ndarray:
    """Pointwise d(mu)/d(lam) on the grid; nan where lam vanishes along with mu.

    Supported via the (density, atoms, singular) decomposition: densities are
    compared pointwise, atoms by mass ratio, and purely singular pairs must be
    built from the same base measure (e.g. a measure against its own sum), in
    which case the derivative is the constant scale ratio.

    Raises when absolute continuity visibly fails on the grid: an atom of mu
    that lam does not carry, or positive mu-density where lam has none.
    """
    grid = np.asarray(grid, dtype=float)
    mu_sing, lam_sing = mu.singular_parts(), lam.singular_parts()
    if mu_sing or lam_sing:
        return _singular_rn(mu, lam, mu_sing, lam_sing, grid)

    w_mu = mu.density_fn()
    w_lam = lam.density_fn()
    out = np.full(grid.shape, np.nan)
    for i, x in enumerate(grid):
        ml = lam.atom_mass_at(x)
        mm = mu.atom_mass_at(x)
        if ml > 0:
            out[i] = mm / ml
            continue
        if mm > 0:
            raise ValueError(f"atom of the numerator at {x} is not an atom of the base")
        dm = float(np.asarray(w_mu(np.array([x])))[0]) if w_mu is not None else 0.0
        dl = float(np.asarray(w_lam(np.array([x])))[0]) if w_lam is not None else 0.0
        if dl > 0:
            out[i] = dm / dl
        elif dm > 0:
            raise ValueError(f"numerator density positive at {x} where the base vanishes")
    return out


def _singular_rn(mu, lam, mu_sing, lam_sing, grid):
    mu_all_sing = abs(sum(s for _, s in mu_sing) - mu.total_mass()) < 1e-9
    lam_all_sing = abs(sum(s for _, s in lam_sing) - lam.total_mass()) < 1e-9
    if not (mu_all_sing and lam_all_sing and len(mu_sing) == 1 and len(lam_sing) == 1):
        raise ValueError(
            "pointwise derivative for singular components needs both measures to be "
            "multiples of one common base"
        )
    (mb, ms), (lb, ls) = mu_sing[0], lam_sing[0]
    if not _same_singular(mb, lb):
        raise ValueError("singular components are mutually singular: no derivative")
    return np.full(np.asarray(grid, dtype=float).shape, ms / ls)


def measure_from_descriptor(desc: dict) -> SigmaFiniteMeasure:
    from .ifs import ifs_from_descriptor

    kind = desc["kind"]
    if kind == "lebesgue-interval":
        return LebesgueMeasure(*desc["interval"])
    if kind == "weighted-density":
        return DensityMeasure(*desc["interval"], desc["density_poly"])
    if kind == "atomic":
        return AtomicMeasure([tuple(a) for a in desc["atoms"]])
    if kind == "ifs-invariant":
        return IFSInvariantMeasure(ifs_from_descriptor(desc["ifs"]))
    if kind == "bernoulli-convolution":
        return BernoulliMeasure(desc["lambda"])
    if kind == "sum-of-two":
        return SumMeasure(*[measure_from_descriptor(p) for p in desc["parts"]])
    raise ValueError(f"unknown measure kind {kind!r}")


def cantor_measure() -> IFSInvariantMeasure:
    from .ifs import cantor_system

    return IFSInvariantMeasure(cantor_system())
