"""Orthonormal bases of L2(mu) for the supported measure kinds.

Kinds and their exactness:

* ``legendre`` -- orthonormal polynomials against Lebesgue or a weighted
  density.  Constant weights use closed-form shifted Legendre polynomials
  with exact indicator coefficients; general weights run modified
  Gram-Schmidt with re-orthogonalization on monomials (degree cap 64),
  represented in the Legendre coefficient basis for stable evaluation.
* ``walsh-cantor`` -- Rademacher products over the digit coding of a
  two-branch equal-weight IFS attractor.  Indexing: the subset S of digit
  positions is the bit pattern of the index j, ordered by (max element,
  binary code), which coincides with ordering by j.  Cylinder coefficients
  are exact.
* ``sine-brownian`` -- phi_0(t) = t, phi_k(t) = sqrt(2) sin(k pi t)/(k pi) on
  [0, 1]; orthonormal in the first-derivative inner product.  Set
  coefficients are the increments phi_j(b) - phi_j(a), which realize
  Lebesgue noise through increments of the associated path process.
* ``atomic-indicators`` -- normalized indicators of atoms.

Wrappers: composite (density block plus atom block), piecewise (independent
sub-bases on an interval partition, which diagonalize multiplication by
piecewise-constant functions), transformed (an ONB of L2(mu) carried to
L2(lambda) by multiplying with sqrt(d mu/d lambda)), and finite orthogonal
mixes of the leading functions.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial import legendre as L

from . import quadrature
from .measures import (
    AtomicMeasure,
    BernoulliMeasure,
    DensityMeasure,
    IFSInvariantMeasure,
    LebesgueMeasure,
    SigmaFiniteMeasure,
    SimpleFunction,
    SumMeasure,
)
from .sets import BorelSet

_GS_DEGREE_CAP = 64
DEFAULT_J = {"legendre": 32, "walsh-cantor": 1024, "sine-brownian": 10_000}


class OrthonormalBasis:
    kind = "abstract"

    def __init__(self, measure):
        self.measure = measure

    @property
    def size(self):
        """Largest usable index bound, or None when unbounded."""
        return None

    def evaluate(self, j, x):
        raise NotImplementedError

    def evaluate_block(self, xs, J) -> np.ndarray:
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        return np.column_stack([np.asarray(self.evaluate(j, xs), dtype=float) for j in range(J)])

    def indicator_coefficients(self, A: BorelSet, J) -> np.ndarray:
        raise NotImplementedError

    def inner_coefficients(self, f, J) -> np.ndarray:
        """<phi_j, f> in L2(mu) for j < J."""
        raise NotImplementedError

    def gram(self, n) -> np.ndarray:
        raise NotImplementedError

    def to_descriptor(self) -> dict:
        return {"kind": self.kind}

    def _check_J(self, J):
        if J < 1:
            raise ValueError("index bound must be >= 1")
        if self.size is not None and J > self.size:
            raise ValueError(f"index bound {J} exceeds basis size {self.size}")


class LegendreBasis(OrthonormalBasis):
    kind = "legendre"

    def __init__(self, measure, quad_nodes: int = 256):
        super().__init__(measure)
        if measure.atoms() or measure.singular_parts():
            raise ValueError("legendre basis needs a purely absolutely continuous measure")
        self.a, self.b = measure.support_hull()
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("legendre basis needs a finite interval")
        self._const_weight = None
        if isinstance(measure, LebesgueMeasure):
            self._const_weight = 1.0
        elif isinstance(measure, DensityMeasure) and measure.poly is not None and len(measure.poly) == 1:
            self._const_weight = float(measure.poly[0])
        elif isinstance(measure, IFSInvariantMeasure) and measure.density_fn() is not None:
            self._const_weight = 1.0 / (self.b - self.a)
        self._quad_nodes = quad_nodes
        self._coeffs = None  # Gram-Schmidt output, rows = Legendre coefficients

    @property
    def size(self):
        return None if self._const_weight is not None else _GS_DEGREE_CAP

    def _u(self, x):
        return 2.0 * (np.asarray(x, dtype=float) - self.a) / (self.b - self.a) - 1.0

    # -- constant-weight closed form ----------------------------------------

    def _const_block(self, xs, J):
        w0, length = self._const_weight, self.b - self.a
        V = L.legvander(self._u(xs), J - 1)
        scale = np.sqrt((2 * np.arange(J) + 1) / (w0 * length))
        return V * scale[None, :]

    def _const_indicator(self, A, J):
        w0, length = self._const_weight, self.b - self.a
        out = np.zeros(J)
        for lo, hi in A.clip(self.a, self.b).intervals:
            V = L.legvander(self._u(np.array([lo, hi])), J)
            out[0] += np.sqrt(w0 / length) * w0 * (hi - lo) / w0
            js = np.arange(1, J)
            prim = (V[:, 2 : J + 1] - V[:, 0 : J - 1]) / (2 * js + 1)[None, :]
            out[1:] += (
                np.sqrt((2 * js + 1) / (w0 * length)) * w0 * (length / 2.0) * (prim[1] - prim[0])
            )
        return out

    # -- weighted Gram-Schmidt ----------------------------------------------

    def _ensure_gs(self, J):
        # Modified Gram-Schmidt with re-orthogonalization, applied to the
        # degree-raising sequence u * p_{k-1} rather than to raw monomials:
        # raw monomials lose all significant orthogonal content in binary64
        # near degree 30, while this sequence stays well conditioned.
        if J > _GS_DEGREE_CAP:
            raise ValueError(f"weighted legendre basis capped at degree {_GS_DEGREE_CAP}")
        if self._coeffs is not None and self._coeffs.shape[0] >= J:
            return
        n = _GS_DEGREE_CAP
        xq, wq = quadrature.nodes_weights(self.a, self.b, self._quad_nodes)
        wq = wq * np.asarray(self.measure.density_fn()(xq), dtype=float)
        V = L.legvander(self._u(xq), n)  # column k = P_k(u(x)) at the nodes

        def node_values(c):
            return V[:, : len(c)] @ c

        coeffs = np.zeros((n, n + 1))
        vals = np.zeros((n, len(xq)))
        c0 = np.zeros(n + 1)
        c0[0] = 1.0
        v0 = node_values(c0)
        nrm = math.sqrt(float(v0 * v0 @ wq))
        coeffs[0], vals[0] = c0 / nrm, v0 / nrm
        for k in range(1, n):
            c = L.legmulx(coeffs[k - 1][:k])[: n + 1]
            c = np.pad(c, (0, n + 1 - len(c)))
            v = node_values(c)
            for _ in range(2):  # re-orthogonalize: twice is enough
                for m in range(k):
                    proj = float(vals[m] * v @ wq)
                    c -= proj * coeffs[m]
                    v -= proj * vals[m]
            nrm = math.sqrt(max(float(v * v @ wq), 0.0))
            if nrm < 1e-13:
                raise ValueError("weight is too degenerate for this degree")
            coeffs[k], vals[k] = c / nrm, v / nrm
        self._coeffs = coeffs[:, :n]

    # -- public surface -------------------------------------------------------

    def evaluate(self, j, x):
        return self.evaluate_block(x, j + 1)[:, j]

    def evaluate_block(self, xs, J):
        self._check_J(J)
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        if self._const_weight is not None:
            return self._const_block(xs, J)
        self._ensure_gs(J)
        V = L.legvander(self._u(xs), _GS_DEGREE_CAP - 1)
        return V @ self._coeffs[:J].T

    def indicator_coefficients(self, A, J):
        self._check_J(J)
        if self._const_weight is not None:
            return self._const_indicator(A, J)
        out = np.zeros(J)
        dens = self.measure.density_fn()
        for lo, hi in A.clip(self.a, self.b).intervals:
            xq, wq = quadrature.nodes_weights(lo, hi, self._quad_nodes)
            out += (self.evaluate_block(xq, J).T * np.asarray(dens(xq), dtype=float)) @ wq
        return out

    def inner_coefficients(self, f, J):
        self._check_J(J)
        if isinstance(f, SimpleFunction):
            out = np.zeros(J)
            for a_i, s_i in f.terms:
                out += a_i * self.indicator_coefficients(s_i, J)
            return out
        xq, wq = quadrature.nodes_weights(self.a, self.b, 2 * self._quad_nodes)
        dens = (
            np.full_like(xq, self._const_weight)
            if self._const_weight is not None
            else np.asarray(self.measure.density_fn()(xq), dtype=float)
        )
        fv = np.asarray(f(xq), dtype=float)
        if not np.all(np.isfinite(fv)):
            raise ValueError("integrand is unbounded on the support")
        return (self.evaluate_block(xq, J).T * dens * fv) @ wq

    def gram(self, n):
        xq, wq = quadrature.nodes_weights(self.a, self.b, 2 * self._quad_nodes)
        dens = (
            np.full_like(xq, self._const_weight)
            if self._const_weight is not None
            else np.asarray(self.measure.density_fn()(xq), dtype=float)
        )
        B = self.evaluate_block(xq, n)
        return (B * (wq * dens)[:, None]).T @ B

    def to_descriptor(self):
        return {"kind": self.kind, "measure": self.measure.to_descriptor()}


def _fwht(v: np.ndarray) -> np.ndarray:
    """In-place-style fast Walsh-Hadamard transform, pairing (-1)^popcount(j&c)."""
    v = np.asarray(v, dtype=float).copy()
    h, n = 1, len(v)
    while h < n:
        for i in range(0, n, 2 * h):
            a = v[i : i + h].copy()
            b = v[i + h : i + 2 * h]
            v[i : i + h] = a + b
            v[i + h : i + 2 * h] = a - b
        h *= 2
    return v


class WalshBasis(OrthonormalBasis):
    # cylinder-word sets get exact coefficients; plain intervals go through
    # the measure CDF, whose branch descent drifts ~1e-9 near deep boundaries
    kind = "walsh-cantor"

    def __init__(self, measure: IFSInvariantMeasure, depth: int = 10):
        super().__init__(measure)
        ifs = measure.ifs
        if ifs.n_branches != 2:
            raise ValueError("walsh basis needs a two-branch system")
        p = [float(q) for q in ifs.probabilities()]
        if abs(p[0] - 0.5) > 1e-12:
            raise ValueError("walsh basis needs equal branch weights")
        if not 1 <= depth <= 24:
            raise ValueError("depth out of range")
        self.ifs = ifs
        self.depth = depth

    @property
    def size(self):
        return 2**self.depth

    def _digit_block(self, xs, levels):
        """(len(xs), levels) matrix of digits; rejects gap points."""
        xs = np.atleast_1d(np.asarray(xs, dtype=float)).copy()
        out = np.empty((len(xs), levels), dtype=np.intp)
        lo0, hi0 = self.ifs.image(0)
        lo1, hi1 = self.ifs.image(1)
        r = [float(v) for v in self.ifs.ratios]
        s = [float(v) for v in self.ifs.shifts]
        for lev in range(levels):
            in0 = (xs >= lo0 - 1e-9) & (xs <= hi0 + 1e-9)
            in1 = ~in0 & (xs >= lo1 - 1e-9) & (xs <= hi1 + 1e-9)
            bad = ~(in0 | in1)
            if np.any(bad):
                raise ValueError(
                    f"point {xs[bad][0]} is off the attractor and carries no digit coding"
                )
            d = in1.astype(np.intp)
            out[:, lev] = d
            xs = np.where(in1, (xs - s[1]) / r[1], (xs - s[0]) / r[0])
        return out

    def evaluate(self, j, x):
        self._check_J(j + 1)
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if j == 0:
            return np.ones_like(x)
        levels = j.bit_length()
        digits = self._digit_block(x, levels)
        signs = np.ones(len(x))
        for k in range(levels):
            if (j >> k) & 1:
                signs *= 1.0 - 2.0 * digits[:, k]
        return signs

    def evaluate_block(self, xs, J):
        self._check_J(J)
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        levels = max((J - 1).bit_length(), 1)
        digits = self._digit_block(xs, levels)
        rad = 1.0 - 2.0 * digits  # column k = r_{k+1}(x)
        out = np.ones((len(xs), J))
        for j in range(1, J):
            cols = [k for k in range(levels) if (j >> k) & 1]
            out[:, j] = np.prod(rad[:, cols], axis=1)
        return out

    def indicator_coefficients(self, A, J):
        self._check_J(J)
        if A.word is not None and len(A.word) <= self.depth:
            mass = float(self.ifs.cylinder_mass(A.word))
            wordbits = sum(1 << k for k, d in enumerate(A.word) if d == 1)
            wordmask = (1 << len(A.word)) - 1
            js = np.arange(J)
            out = np.zeros(J)
            inside = (js >> len(A.word)) == 0
            signs = np.array(
                [(-1) ** int(bin(j & wordbits).count("1")) for j in js[inside]], dtype=float
            )
            out[inside] = mass * signs
            return out
        masses = self.measure.cell_masses(A, self.depth)
        return _fwht(masses)[:J]

    def inner_coefficients(self, f, J, refine: int = 3):
        self._check_J(J)
        if isinstance(f, SimpleFunction):
            out = np.zeros(J)
            for a_i, s_i in f.terms:
                out += a_i * self.indicator_coefficients(s_i, J)
            return out
        deep = self.depth + refine
        k = 2
        codes = np.arange(k**deep)
        lo, hi = self.ifs.hull
        ratios = np.array([float(v) for v in self.ifs.ratios])
        shifts = np.array([float(v) for v in self.ifs.shifts])
        anchors = np.full(k**deep, 0.5 * (lo + hi))
        for jlev in range(deep - 1, -1, -1):
            d = (codes >> jlev) & 1
            anchors = ratios[d] * anchors + shifts[d]
        vals = np.asarray(f(anchors), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise ValueError("integrand is unbounded on the support")
        deep_masses = vals * (0.5**deep)
        cell_integrals = deep_masses.reshape(2**refine, 2**self.depth).sum(axis=0)
        return _fwht(cell_integrals)[:J]

    def gram(self, n):
        self._check_J(n)
        levels = max((n - 1).bit_length(), 1)
        codes = np.arange(2**levels)
        signs = np.empty((n, 2**levels))
        for j in range(n):
            signs[j] = np.array([(-1) ** int(bin(j & c).count("1")) for c in codes])
        return (signs * 2.0**-levels) @ signs.T

    def to_descriptor(self):
        return {"kind": self.kind, "depth": self.depth, "ifs": self.ifs.to_descriptor()}


class SineBasis(OrthonormalBasis):
    """phi_0(t) = t and phi_k(t) = sqrt(2) sin(k pi t)/(k pi) on [0, 1]."""

    kind = "sine-brownian"

    def __init__(self, measure=None):
        super().__init__(measure if measure is not None else LebesgueMeasure(0.0, 1.0))
        lo, hi = self.measure.support_hull()
        if abs(lo) > 1e-12 or abs(hi - 1.0) > 1e-12:
            raise ValueError("sine basis is built on the unit interval")

    def evaluate(self, j, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if j == 0:
            return x.copy()
        return np.sqrt(2.0) * np.sin(j * np.pi * x) / (j * np.pi)

    def evaluate_block(self, xs, J):
        self._check_J(J)
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        ks = np.arange(1, J)
        out = np.empty((len(xs), J))
        out[:, 0] = xs
        out[:, 1:] = np.sqrt(2.0) * np.sin(np.outer(xs, ks) * np.pi) / (ks * np.pi)[None, :]
        return out

    def derivative_block(self, xs, J):
        self._check_J(J)
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        ks = np.arange(1, J)
        out = np.empty((len(xs), J))
        out[:, 0] = 1.0
        out[:, 1:] = np.sqrt(2.0) * np.cos(np.outer(xs, ks) * np.pi)
        return out

    def indicator_coefficients(self, A, J):
        # increment pairing: sum over pieces of phi_j(hi) - phi_j(lo)
        self._check_J(J)
        out = np.zeros(J)
        for lo, hi in A.clip(0.0, 1.0).intervals:
            vals = self.evaluate_block(np.array([lo, hi]), J)
            out += vals[1] - vals[0]
        return out

    def inner_coefficients(self, f, J):
        raise NotImplementedError(
            "the sine family is orthonormal in the derivative pairing; "
            "general integrands are not supported"
        )

    def gram(self, n):
        self._check_J(n)
        edges = np.linspace(0.0, 1.0, 4 * max(n, 2))
        G = np.empty((n, n))
        for j in range(n):
            for k in range(j, n):
                G[j, k] = G[k, j] = quadrature.integrate_panels(
                    lambda x, j=j, k=k: self.derivative_block(x.ravel(), max(j, k) + 1)[:, j].reshape(x.shape)
                    * self.derivative_block(x.ravel(), max(j, k) + 1)[:, k].reshape(x.shape),
                    edges,
                    12,
                )
        return G

    def to_descriptor(self):
        return {"kind": self.kind}


class AtomicBasis(OrthonormalBasis):
    kind = "atomic-indicators"

    def __init__(self, measure: AtomicMeasure):
        super().__init__(measure)
        self._atoms = measure.atoms()
        if not self._atoms:
            raise ValueError("zero measure has no basis")

    @property
    def size(self):
        return len(self._atoms)

    def evaluate(self, j, x):
        self._check_J(j + 1)
        x = np.atleast_1d(np.asarray(x, dtype=float))
        pt, m = self._atoms[j]
        return np.where(np.abs(x - pt) <= 1e-12, 1.0 / math.sqrt(m), 0.0)

    def indicator_coefficients(self, A, J):
        self._check_J(J)
        return np.array(
            [math.sqrt(m) if A.contains(x) else 0.0 for x, m in self._atoms[:J]]
        )

    def inner_coefficients(self, f, J):
        self._check_J(J)
        return np.array(
            [float(np.asarray(f(np.array([x]))).ravel()[0]) * math.sqrt(m) for x, m in self._atoms[:J]]
        )

    def gram(self, n):
        self._check_J(n)
        pts = np.array([x for x, _ in self._atoms])
        B = self.evaluate_block(pts, n)
        masses = np.array([m for _, m in self._atoms])
        return (B * masses[:, None]).T @ B

    def to_descriptor(self):
        return {"kind": self.kind, "measure": self.measure.to_descriptor()}


class CompositeBasis(OrthonormalBasis):
    """Density-part basis extended by atom indicators.

    Functions in the continuous block take the value 0 at atoms by
    convention, so the two blocks stay orthogonal in L2(mu).
    """

    kind = "composite"

    def __init__(self, measure, density_basis: OrthonormalBasis, atomic_basis: AtomicBasis, split: int):
        super().__init__(measure)
        self.density_basis = density_basis
        self.atomic_basis = atomic_basis
        self.split = split

    @property
    def size(self):
        return self.split + self.atomic_basis.size

    def _atom_points(self):
        return np.array([x for x, _ in self.atomic_basis._atoms])

    def evaluate(self, j, x):
        self._check_J(j + 1)
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if j < self.split:
            vals = np.asarray(self.density_basis.evaluate(j, x), dtype=float)
            for pt in self._atom_points():
                vals = np.where(np.abs(x - pt) <= 1e-12, 0.0, vals)
            return vals
        return self.atomic_basis.evaluate(j - self.split, x)

    def indicator_coefficients(self, A, J):
        self._check_J(J)
        jd = min(J, self.split)
        parts = [self.density_basis.indicator_coefficients(A, jd)]
        if J > self.split:
            parts.append(self.atomic_basis.indicator_coefficients(A, J - self.split))
        return np.concatenate(parts)

    def inner_coefficients(self, f, J):
        self._check_J(J)
        jd = min(J, self.split)
        parts = [self.density_basis.inner_coefficients(f, jd)]
        if J > self.split:
            parts.append(self.atomic_basis.inner_coefficients(f, J - self.split))
        return np.concatenate(parts)

    def gram(self, n):
        self._check_J(n)
        jd = min(n, self.split)
        G = np.zeros((n, n))
        G[:jd, :jd] = self.density_basis.gram(jd)
        if n > self.split:
            G[jd:, jd:] = self.atomic_basis.gram(n - self.split)
        return G

    def to_descriptor(self):
        return {"kind": self.kind, "measure": self.measure.to_descriptor(), "split": self.split}


class PiecewiseBasis(OrthonormalBasis):
    """Independent polynomial sub-bases on the pieces of an interval partition."""

    kind = "piecewise-legendre"

    def __init__(self, measure, edges, per_piece: int = 8):
        super().__init__(measure)
        edges = [float(e) for e in edges]
        lo, hi = measure.support_hull()
        if abs(edges[0] - lo) > 1e-12 or abs(edges[-1] - hi) > 1e-12:
            raise ValueError("partition must span the support hull")
        if measure.atoms() or measure.singular_parts():
            raise ValueError("piecewise basis needs an absolutely continuous measure")
        self.edges = edges
        self.per_piece = per_piece
        dens = measure.density_fn()
        self.pieces = []
        for a, b in zip(edges[:-1], edges[1:]):
            if isinstance(measure, LebesgueMeasure):
                piece_measure = LebesgueMeasure(a, b)
            else:
                piece_measure = DensityMeasure(a, b, lambda x, d=dens: np.asarray(d(x), dtype=float))
            self.pieces.append(LegendreBasis(piece_measure, quad_nodes=128))

    @property
    def size(self):
        return len(self.pieces) * self.per_piece

    def evaluate(self, j, x):
        self._check_J(j + 1)
        piece, sub = divmod(j, self.per_piece)
        a, b = self.edges[piece], self.edges[piece + 1]
        x = np.atleast_1d(np.asarray(x, dtype=float))
        inside = (x > a) & (x <= b)
        vals = np.zeros_like(x)
        if np.any(inside):
            vals[inside] = self.pieces[piece].evaluate(sub, x[inside])
        return vals

    def indicator_coefficients(self, A, J):
        self._check_J(J)
        out = np.zeros(J)
        for j in range(J):
            piece, sub = divmod(j, self.per_piece)
            a, b = self.edges[piece], self.edges[piece + 1]
            piece_A = A.clip(a, b)
            if not piece_A.is_empty:
                out[j] = self.pieces[piece].indicator_coefficients(piece_A, sub + 1)[sub]
        return out

    def inner_coefficients(self, f, J):
        self._check_J(J)
        out = np.zeros(J)
        for j in range(J):
            piece, sub = divmod(j, self.per_piece)
            out[j] = self.pieces[piece].inner_coefficients(f, sub + 1)[sub]
        return out

    def gram(self, n):
        self._check_J(n)
        G = np.zeros((n, n))
        for start in range(0, n, self.per_piece):
            piece = start // self.per_piece
            width = min(self.per_piece, n - start)
            G[start : start + width, start : start + width] = self.pieces[piece].gram(width)
        return G

    def multiplier_eigenvalues(self, piece_values) -> np.ndarray:
        """Eigenvalues of multiplication by the piecewise-constant function."""
        vals = np.asarray(piece_values, dtype=float)
        if len(vals) != len(self.pieces):
            raise ValueError("need one value per piece")
        return np.repeat(vals, self.per_piece)


class TransformedBasis(OrthonormalBasis):
    """{phi_j sqrt(rho)} on L2(lambda), given an ONB {phi_j} of L2(mu), rho = d mu/d lambda."""

    kind = "transformed"

    def __init__(self, base: OrthonormalBasis, rho, lam: SigmaFiniteMeasure):
        super().__init__(lam)
        self.base = base
        self.rho = rho

    @property
    def size(self):
        return self.base.size

    def evaluate(self, j, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return np.asarray(self.base.evaluate(j, x), dtype=float) * np.sqrt(
            np.asarray(self.rho(x), dtype=float)
        )

    def evaluate_block(self, xs, J):
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        return self.base.evaluate_block(xs, J) * np.sqrt(np.asarray(self.rho(xs), dtype=float))[
            :, None
        ]

    def indicator_coefficients(self, A, J):
        out = np.zeros(J)
        dens = self.measure.density_fn()
        for lo, hi in A.clip(*self.measure.support_hull()).intervals:
            xq, wq = quadrature.nodes_weights(lo, hi, 256)
            out += (self.evaluate_block(xq, J).T * np.asarray(dens(xq), dtype=float)) @ wq
        return out

    def inner_coefficients(self, f, J):
        lo, hi = self.measure.support_hull()
        xq, wq = quadrature.nodes_weights(lo, hi, 512)
        dens = np.asarray(self.measure.density_fn()(xq), dtype=float)
        fv = np.asarray(f(xq), dtype=float)
        return (self.evaluate_block(xq, J).T * dens * fv) @ wq

    def gram(self, n):
        lo, hi = self.measure.support_hull()
        xq, wq = quadrature.nodes_weights(lo, hi, 512)
        dens = np.asarray(self.measure.density_fn()(xq), dtype=float)
        B = self.evaluate_block(xq, n)
        return (B * (wq * dens)[:, None]).T @ B


class MixedBasis(OrthonormalBasis):
    """Finite orthogonal mix of the first n functions of a base ONB."""

    kind = "mixed"

    def __init__(self, base: OrthonormalBasis, U: np.ndarray):
        super().__init__(base.measure)
        U = np.asarray(U, dtype=float)
        if U.ndim != 2 or U.shape[0] != U.shape[1]:
            raise ValueError("mixing matrix must be square")
        if np.max(np.abs(U @ U.T - np.eye(len(U)))) > 1e-10:
            raise ValueError("mixing matrix must be orthogonal")
        self.base = base
        self.U = U

    @property
    def size(self):
        return self.base.size

    def _mix(self, vec):
        n = len(self.U)
        out = np.array(vec, dtype=float, copy=True)
        if len(out) >= n:
            out[:n] = self.U @ out[:n]
            return out
        return (self.U @ np.pad(out, (0, n - len(out))))[: len(vec)]

    def evaluate(self, j, x):
        n = len(self.U)
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if j >= n:
            return self.base.evaluate(j, x)
        block = self.base.evaluate_block(x, n)
        return block @ self.U[j]

    def evaluate_block(self, xs, J):
        block = self.base.evaluate_block(xs, max(J, len(self.U)))
        n = len(self.U)
        out = block.copy()
        out[:, :n] = block[:, :n] @ self.U.T
        return out[:, :J]

    def indicator_coefficients(self, A, J):
        base = self.base.indicator_coefficients(A, max(J, len(self.U)))
        return self._mix(base)[:J]

    def inner_coefficients(self, f, J):
        base = self.base.inner_coefficients(f, max(J, len(self.U)))
        return self._mix(base)[:J]

    def gram(self, n):
        m = max(n, len(self.U))
        G = self.base.gram(m)
        T = np.eye(m)
        k = len(self.U)
        T[:k, :k] = self.U
        return (T @ G @ T.T)[:n, :n]


def make_basis(measure: SigmaFiniteMeasure, J: int | None = None) -> OrthonormalBasis:
    """Basis for the measure's kind; J is the intended index bound."""
    if isinstance(measure, AtomicMeasure):
        return AtomicBasis(measure)
    if isinstance(measure, BernoulliMeasure):
        raise ValueError(
            "no orthonormal basis for kind 'bernoulli-convolution': "
            "these laws are sampled, not expanded"
        )
    if isinstance(measure, IFSInvariantMeasure):
        depth = 10 if J is None else max(1, int(math.ceil(math.log2(max(J, 2)))))
        return WalshBasis(measure, depth=depth)
    if isinstance(measure, (LebesgueMeasure, DensityMeasure)):
        return LegendreBasis(measure)
    if isinstance(measure, SumMeasure):
        dens = measure.density_fn()
        atoms = measure.atoms()
        if measure.singular_parts():
            raise ValueError("no basis for sums holding singular components")
        if dens is not None and atoms:
            lo, hi = measure.support_hull()
            split = DEFAULT_J["legendre"] if J is None else max(J - len(atoms), 1)
            density_measure = _density_component(dens, lo, hi)
            return CompositeBasis(
                measure, LegendreBasis(density_measure), AtomicBasis(AtomicMeasure(atoms)), split
            )
        if dens is not None:
            lo, hi = measure.support_hull()
            return LegendreBasis(_density_component(dens, lo, hi))
        if atoms:
            return AtomicBasis(AtomicMeasure(atoms))
    raise ValueError(f"no basis construction for measure kind {measure.kind!r}")


def _density_component(dens, lo, hi) -> DensityMeasure:
    """Wrap a density callable, recognizing constants to unlock the closed form."""
    probe = np.asarray(dens(np.linspace(lo, hi, 259)[1:-1]), dtype=float)
    if np.ptp(probe) < 1e-12 * max(np.abs(probe).max(), 1.0):
        return DensityMeasure(lo, hi, [float(probe[0])])
    return DensityMeasure(lo, hi, lambda x, d=dens: np.asarray(d(x), dtype=float))


def default_truncation(basis: OrthonormalBasis) -> int:
    if basis.kind in DEFAULT_J:
        J = DEFAULT_J[basis.kind]
        return J if basis.size is None else min(J, basis.size)
    if basis.size is not None:
        return basis.size
    return DEFAULT_J["legendre"]
