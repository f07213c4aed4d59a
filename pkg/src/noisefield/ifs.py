"""Affine iterated function systems on the line.

A system is a finite family of contractive affine branches
``tau_i(x) = r_i x + s_i`` with branch weights ``p_i``, together with the
piecewise-affine left inverse ``R`` defined on the branch images.  The
attractor hull, cylinder intervals, the invariant-measure CDF, exact
polynomial moments, a deterministic chaos-game sampler, and the isometries
``S_i`` acting on depth-``d`` coefficient spaces all live here.

Branch weights are allowed to not sum to one so that the closedness
diagnostics can quantify exactly how broken a system is; everything that
needs a probability measure (CDF, sampling, moments) insists on a unit sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .sets import BorelSet
from . import streams

_OVERLAP_TOL = 1e-12


def _as_exact(x):
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    return None


@dataclass(frozen=True)
class IteratedFunctionSystem:
    ratios: tuple
    shifts: tuple
    weights: tuple

    def __post_init__(self):
        k = len(self.ratios)
        if k < 2 or len(self.shifts) != k or len(self.weights) != k:
            raise ValueError("need >= 2 branches with matching ratios/shifts/weights")
        for r in self.ratios:
            if not 0 < float(r) < 1:
                raise ValueError(f"branch expansion violated: ratio {r} not in (0, 1)")
        for p in self.weights:
            if not float(p) > 0:
                raise ValueError(f"branch weight {p} must be positive")
        order = sorted(range(k), key=lambda i: float(self.image(i)[0]))
        imgs = [self.image(i) for i in order]
        for (_, hi0), (lo1, _) in zip(imgs, imgs[1:]):
            if float(lo1) < float(hi0) - _OVERLAP_TOL:
                raise ValueError(
                    f"branch images overlap: ({imgs[0]}, ...) violate non-overlap"
                )

    # -- geometry ---------------------------------------------------------

    @property
    def n_branches(self) -> int:
        return len(self.ratios)

    @property
    def hull(self):
        fixed = []
        for r, s in zip(self.ratios, self.shifts):
            re, se = _as_exact(r), _as_exact(s)
            if re is not None and se is not None:
                fixed.append(float(se / (1 - re)))
            else:
                fixed.append(float(s) / (1.0 - float(r)))
        return min(fixed), max(fixed)

    def image(self, i):
        lo, hi = self.hull
        r, s = float(self.ratios[i]), float(self.shifts[i])
        return r * lo + s, r * hi + s

    def apply(self, i, x):
        return float(self.ratios[i]) * np.asarray(x, dtype=float) + float(self.shifts[i])

    def apply_word(self, word, x):
        """tau_{w1} o tau_{w2} o ... o tau_{wm} applied to x."""
        y = np.asarray(x, dtype=float)
        for d in reversed(word):
            y = self.apply(d, y)
        return y

    def inverse(self, x):
        """The left inverse R; defined on the branch images only."""
        x = float(x)
        for i in range(self.n_branches):
            lo, hi = self.image(i)
            if lo - _OVERLAP_TOL <= x <= hi + _OVERLAP_TOL:
                return (x - float(self.shifts[i])) / float(self.ratios[i])
        raise ValueError(f"point {x} lies in a gap: R is undefined there")

    def covers(self) -> bool:
        """True when the branch images tile the hull with no gaps."""
        imgs = sorted((self.image(i) for i in range(self.n_branches)))
        lo, hi = self.hull
        if abs(imgs[0][0] - lo) > 1e-10 or abs(imgs[-1][1] - hi) > 1e-10:
            return False
        return all(abs(a1 - b0) <= 1e-10 for (_, b0), (a1, _) in zip(imgs, imgs[1:]))

    def cylinder_interval(self, word):
        lo, hi = self.hull
        a = self.apply_word(word, lo)
        b = self.apply_word(word, hi)
        return float(a), float(b)

    def cylinder_set(self, word) -> BorelSet:
        a, b = self.cylinder_interval(word)
        return BorelSet(((a, b),), word=tuple(word))

    # -- invariant measure -------------------------------------------------

    @property
    def weight_sum(self) -> float:
        return float(sum(float(p) for p in self.weights))

    def probabilities(self):
        """Normalized branch probabilities; exact when the weights are exact."""
        exact = [_as_exact(p) for p in self.weights]
        if all(e is not None for e in exact):
            tot = sum(exact)
            return tuple(e / tot for e in exact)
        tot = self.weight_sum
        return tuple(float(p) / tot for p in self.weights)

    def is_closed(self, tol=1e-12) -> bool:
        return abs(self.weight_sum - 1.0) <= tol

    def cylinder_mass(self, word):
        probs = self.probabilities()
        mass = Fraction(1) if isinstance(probs[0], Fraction) else 1.0
        for d in word:
            mass = mass * probs[d]
        return mass

    def cdf(self, x) -> float:
        """Invariant-measure CDF by exact branch descent."""
        if not self.is_closed(tol=1e-9):
            raise ValueError("CDF requires branch weights summing to 1")
        probs = [float(p) for p in self.probabilities()]
        order = sorted(range(self.n_branches), key=lambda i: self.image(i)[0])
        lo, hi = self.hull
        x = float(x)
        if x < lo:
            return 0.0
        if x >= hi:
            return 1.0
        acc, scale = 0.0, 1.0
        for _ in range(220):
            if scale < 1e-18:
                break
            descended = False
            for i in order:
                ilo, ihi = self.image(i)
                if x < ilo:
                    break  # landed in a gap: mass to the left is settled
                if x <= ihi:
                    x = (x - float(self.shifts[i])) / float(self.ratios[i])
                    scale *= probs[i]
                    descended = True
                    break
                acc += scale * probs[i]
            if not descended:
                break
        return acc

    def digits(self, x, depth):
        """Cylinder coding of a point of the attractor; gap points are rejected."""
        order = sorted(range(self.n_branches), key=lambda i: self.image(i)[0])
        out = []
        y = float(x)
        for _ in range(depth):
            hit = None
            for i in order:
                lo, hi = self.image(i)
                if lo - 1e-9 <= y <= hi + 1e-9:
                    hit = i
                    break
            if hit is None:
                raise ValueError(
                    f"point {x} is not on the attractor and carries no digit coding"
                )
            out.append(hit)
            y = (y - float(self.shifts[hit])) / float(self.ratios[hit])
        return tuple(out)

    def scaling_dimension(self) -> float:
        rs = {float(r) for r in self.ratios}
        if len(rs) != 1:
            raise ValueError("scaling dimension is reported for equal-ratio systems only")
        r = rs.pop()
        return np.log(self.n_branches) / (-np.log(r))

    # -- serialization ------------------------------------------------------

    def to_descriptor(self) -> dict:
        return {
            "branches": [[float(r), float(s)] for r, s in zip(self.ratios, self.shifts)],
            "weights": [float(p) for p in self.weights],
        }


def make_ifs(branches, weights) -> IteratedFunctionSystem:
    """Build a validated system from (ratio, shift) pairs and branch weights."""
    ratios = tuple(r for r, _ in branches)
    shifts = tuple(s for _, s in branches)
    return IteratedFunctionSystem(ratios, shifts, tuple(weights))


def ifs_from_descriptor(desc: dict) -> IteratedFunctionSystem:
    return make_ifs([tuple(b) for b in desc["branches"]], desc["weights"])


def cantor_system() -> IteratedFunctionSystem:
    """Middle-third system tau_0 = x/3, tau_1 = (x+2)/3 with equal weights."""
    return make_ifs(
        [(Fraction(1, 3), Fraction(0)), (Fraction(1, 3), Fraction(2, 3))],
        [Fraction(1, 2), Fraction(1, 2)],
    )


def binary_system() -> IteratedFunctionSystem:
    """tau_0 = x/2, tau_1 = (x+1)/2; the invariant measure is Lebesgue on [0,1]."""
    return make_ifs(
        [(Fraction(1, 2), Fraction(0)), (Fraction(1, 2), Fraction(1, 2))],
        [Fraction(1, 2), Fraction(1, 2)],
    )


def bernoulli_system(lam) -> IteratedFunctionSystem:
    """tau_+- (x) = lam*(x +- 1); non-overlapping exactly when lam <= 1/2."""
    return make_ifs([(lam, -lam), (lam, lam)], [Fraction(1, 2), Fraction(1, 2)])


def pushforward_system(ifs: IteratedFunctionSystem, i: int) -> IteratedFunctionSystem:
    """System conjugated by tau_i; its invariant measure is the tau_i push-forward."""
    ri, si = ifs.ratios[i], ifs.shifts[i]
    branches = []
    for rk, sk in zip(ifs.ratios, ifs.shifts):
        branches.append((rk, si * (1 - rk) + ri * sk))
    return make_ifs(branches, ifs.weights)


# -- sampling and moments ---------------------------------------------------


def chaos_game_sample(ifs: IteratedFunctionSystem, n, stream_id, depth=None) -> np.ndarray:
    """n independent attractor points from depth-``depth`` random digit words.

    Each sample evaluates tau_{d1} o ... o tau_{dK} at the hull midpoint, so the
    law matches the invariant measure up to the r^K contraction tail.
    """
    if not ifs.is_closed(tol=1e-9):
        raise ValueError("sampling requires branch weights summing to 1")
    rmax = max(float(r) for r in ifs.ratios)
    if depth is None:
        depth = int(np.ceil(np.log(1e-15) / np.log(rmax)))
    probs = np.array([float(p) for p in ifs.probabilities()])
    edges = np.cumsum(probs)
    ratios = np.array([float(r) for r in ifs.ratios])
    shifts = np.array([float(s) for s in ifs.shifts])
    lo, hi = ifs.hull
    out = np.empty(n)
    block = max(1, min(n, 2**22 // max(depth, 1)))
    for start in range(0, n, block):
        m = min(block, n - start)
        u = _uniform_block(stream_id, m, depth, start)
        digits = np.searchsorted(edges, u, side="left")
        np.clip(digits, 0, len(probs) - 1, out=digits)
        x = np.full(m, 0.5 * (lo + hi))
        for k in range(depth - 1, -1, -1):
            d = digits[:, k]
            x = ratios[d] * x + shifts[d]
        out[start : start + m] = x
    return out


def _uniform_block(stream_id, n_samples, n_coords, first):
    b = streams.substream(stream_id, np.arange(first, first + n_samples, dtype=np.uint64))
    idx = np.arange(n_coords, dtype=np.uint64)
    with np.errstate(over="ignore"):
        base = streams._finalize(b ^ streams._STREAM_SALT)
        state = base[:, None] + (idx[None, :] + np.uint64(1)) * streams._PHI
    w = streams._finalize(state)
    return ((w >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def invariant_moments(ifs: IteratedFunctionSystem, max_degree: int):
    """Moments m_k of the invariant measure, solved lowest degree first.

    m_k = sum_i p_i E[(r_i X + s_i)^k] gives a triangular linear system; the
    result is exact Fractions when the system's parameters are exact.
    """
    if not ifs.is_closed(tol=1e-9):
        raise ValueError("moments require branch weights summing to 1")
    probs = ifs.probabilities()
    exact = isinstance(probs[0], Fraction) and all(
        _as_exact(r) is not None and _as_exact(s) is not None
        for r, s in zip(ifs.ratios, ifs.shifts)
    )
    if exact:
        rs = [Fraction(r) for r in ifs.ratios]
        ss = [Fraction(s) for s in ifs.shifts]
        one = Fraction(1)
    else:
        rs = [float(r) for r in ifs.ratios]
        ss = [float(s) for s in ifs.shifts]
        probs = [float(p) for p in probs]
        one = 1.0
    from math import comb

    moments = [one]
    for k in range(1, max_degree + 1):
        lead = sum(p * r**k for p, r in zip(probs, rs))
        rhs = one * 0
        for p, r, s in zip(probs, rs, ss):
            for l in range(k):
                rhs += p * comb(k, l) * (r**l) * (s ** (k - l)) * moments[l]
        moments.append(rhs / (one - lead))
    return moments


def invariant_integrate(ifs: IteratedFunctionSystem, poly_coeffs):
    """Integral of the polynomial sum_k c_k x^k against the invariant measure."""
    coeffs = list(poly_coeffs)
    if len(coeffs) - 1 > 32:
        raise ValueError("polynomial degree capped at 32")
    moments = invariant_moments(ifs, max(len(coeffs) - 1, 0))
    total = None
    for c, m in zip(coeffs, moments):
        term = (Fraction(c) if isinstance(m, Fraction) and _as_exact(c) is not None else float(c)) * m
        total = term if total is None else total + term
    return total if total is not None else 0


def closedness_residual(ifs: IteratedFunctionSystem, depth: int = 6) -> float:
    """Max cylinder defect of mu = sum_i (weight_i) mu o tau_i^(-1).

    Cylinder masses are taken as products of the declared weights, so a unit
    weight sum gives residual 0 exactly and a broken sum shows up at the root.
    """
    k = ifs.n_branches
    ws = [float(p) for p in ifs.weights]

    def mass(word):
        m = 1.0
        for d in word:
            m *= ws[d]
        return m

    worst = 0.0
    stack = [()]
    while stack:
        word = stack.pop()
        pushed = sum(mass((i,) + word) for i in range(k))
        worst = max(worst, abs(pushed - mass(word)))
        if len(word) < depth:
            stack.extend(word + (i,) for i in range(k))
    return worst


# -- Cuntz operators on depth-d coefficient spaces ---------------------------
#
# Functions constant on depth-d cylinders are vectors indexed by digit words;
# word (b1..bd) gets code sum_k b_k * n^(k-1).  In the orthonormal cell
# coordinates the isometries S_i f = g_i^(-1/2) chi_{tau_i(M)} (f o R) become
# sparse 0/1-pattern matrices, and for two equal branches the orthonormal
# coordinates coincide with Walsh coefficients via the Hadamard transform.


def _word_code(word, n):
    c = 0
    for k, d in enumerate(word):
        c += d * n**k
    return c


def cuntz_matrix(ifs: IteratedFunctionSystem, i: int, depth: int) -> np.ndarray:
    """S_i in orthonormal cell coordinates, mapping depth-(d-1) into depth-d."""
    n = ifs.n_branches
    phat = float(ifs.probabilities()[i]) if ifs.is_closed(tol=1e-9) else float(
        ifs.weights[i]
    ) / ifs.weight_sum
    entry = np.sqrt(phat / float(ifs.weights[i]))
    rows = i + n * np.arange(n ** (depth - 1))
    mat = np.zeros((n**depth, n ** (depth - 1)))
    mat[rows, np.arange(n ** (depth - 1))] = entry
    return mat


def cuntz_relation_residual(ifs: IteratedFunctionSystem, depth: int = 8):
    """Operator-norm residuals of (S_i* S_j - delta_ij I, sum_i S_i S_i* - I)."""
    mats = [cuntz_matrix(ifs, i, depth) for i in range(ifs.n_branches)]
    dim_lo = ifs.n_branches ** (depth - 1)
    dim_hi = ifs.n_branches**depth
    res1 = 0.0
    for i, si in enumerate(mats):
        for j, sj in enumerate(mats):
            g = si.T @ sj - (np.eye(dim_lo) if i == j else 0.0)
            res1 = max(res1, np.linalg.norm(g, 2))
    acc = np.zeros((dim_hi, dim_hi))
    for si in mats:
        acc += si @ si.T
    res2 = np.linalg.norm(acc - np.eye(dim_hi), 2)
    return float(res1), float(res2)


def _require_walsh_pair(ifs: IteratedFunctionSystem):
    if ifs.n_branches != 2 or not ifs.is_closed(tol=1e-12):
        raise ValueError("Walsh coefficient action needs two branches with weight sum 1")
    p = [float(x) for x in ifs.probabilities()]
    if abs(p[0] - 0.5) > 1e-12:
        raise ValueError("Walsh coefficient action needs equal branch weights")


def cuntz_apply(ifs: IteratedFunctionSystem, i: int, coeffs, depth: int) -> np.ndarray:
    """Action of S_i on Walsh coefficients; input depth d-1, output depth d.

    S_i w_S = (w_{S+1} + sigma_i w_{S+1 u {1}}) / sqrt(2) with sigma_i = 1-2i,
    so in subset codes j: j -> {2j, 2j+1}.
    """
    _require_walsh_pair(ifs)
    c = np.asarray(coeffs, dtype=float)
    if len(c) != 2 ** (depth - 1):
        raise ValueError(f"expected 2^{depth - 1} coefficients, got {len(c)}")
    if depth > 24:
        raise ValueError("depth overflow")
    out = np.zeros(2**depth)
    sigma = 1.0 - 2.0 * i
    idx = np.arange(len(c))
    out[2 * idx] = c / np.sqrt(2.0)
    out[2 * idx + 1] = sigma * c / np.sqrt(2.0)
    return out


def cuntz_adjoint_apply(ifs: IteratedFunctionSystem, i: int, coeffs, depth: int) -> np.ndarray:
    """Action of S_i* on Walsh coefficients; input depth d, output depth d-1."""
    _require_walsh_pair(ifs)
    c = np.asarray(coeffs, dtype=float)
    if len(c) != 2**depth:
        raise ValueError(f"expected 2^{depth} coefficients, got {len(c)}")
    sigma = 1.0 - 2.0 * i
    even = c[0::2]
    odd = c[1::2]
    return (even + sigma * odd) / np.sqrt(2.0)
