"""Command-line front end.

Every subcommand wraps exactly one library operation, parses descriptors,
runs it under a fixed seed, and emits CSV or JSON with the full descriptor
embedded, so identical invocations replay byte for byte.

Exit codes: 0 success, 2 usage error, 3 numeric failure (a machine-readable
error record goes to stderr).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import bernoulli as bc_mod
from . import ifs as ifs_mod
from . import kernels, noise, sigma
from .measures import (
    AtomicMeasure,
    BernoulliMeasure,
    DensityMeasure,
    IFSInvariantMeasure,
    LebesgueMeasure,
    measure_from_descriptor,
)
from .sets import BorelSet

MIN_MC_SAMPLES = 100
MAX_TRUNCATION = 1 << 15


class UsageError(Exception):
    pass


# -- descriptor parsing ---------------------------------------------------------


def parse_measure(text: str):
    if text.startswith("{"):
        return measure_from_descriptor(json.loads(text))
    head, _, rest = text.partition(":")
    try:
        if head == "lebesgue":
            a, b = (float(v) for v in rest.split(","))
            return LebesgueMeasure(a, b)
        if head == "density":
            interval, _, coeffs = rest.partition(":")
            a, b = (float(v) for v in interval.split(","))
            return DensityMeasure(a, b, [float(c) for c in coeffs.split(",")])
        if head == "atomic":
            atoms = [tuple(float(v) for v in part.split(",")) for part in rest.split(";")]
            return AtomicMeasure(atoms)
        if head == "cantor":
            return IFSInvariantMeasure(ifs_mod.cantor_system())
        if head == "binary":
            return IFSInvariantMeasure(ifs_mod.binary_system())
        if head == "ifs":
            return IFSInvariantMeasure(parse_ifs(text))
        if head == "bernoulli":
            return BernoulliMeasure(float(rest))
    except UsageError:
        raise
    except Exception as exc:
        raise UsageError(f"malformed measure descriptor {text!r}: {exc}") from exc
    raise UsageError(f"unknown measure kind {head!r}")


def parse_ifs(text: str):
    if text == "cantor":
        return ifs_mod.cantor_system()
    if text == "binary":
        return ifs_mod.binary_system()
    if text.startswith("{"):
        return ifs_mod.ifs_from_descriptor(json.loads(text))
    head, _, rest = text.partition(":")
    if head != "ifs":
        raise UsageError(f"unknown system descriptor {text!r}")
    try:
        branch_text, _, weight_text = rest.partition(":")
        branches = [tuple(float(v) for v in p.split(",")) for p in branch_text.split(";")]
        weights = [float(v) for v in weight_text.split(",")]
        return ifs_mod.make_ifs(branches, weights)
    except UsageError:
        raise
    except Exception as exc:
        raise UsageError(f"malformed system descriptor {text!r}: {exc}") from exc


def parse_set(text: str, measure=None) -> BorelSet:
    try:
        if text.startswith("cyl:"):
            word = tuple(int(d) for d in text[4:].split(","))
            if not isinstance(measure, IFSInvariantMeasure):
                raise UsageError("cylinder sets need an ifs-invariant measure")
            return measure.ifs.cylinder_set(word)
        intervals = [tuple(float(v) for v in part.split(",")) for part in text.split(";")]
        return BorelSet.from_intervals(intervals)
    except UsageError:
        raise
    except Exception as exc:
        raise UsageError(f"malformed set descriptor {text!r}: {exc}") from exc


def parse_poly(text: str):
    try:
        return [float(c) for c in text.split(",")]
    except Exception as exc:
        raise UsageError(f"malformed polynomial coefficients {text!r}: {exc}") from exc


def _poly_fn(coeffs):
    arr = np.asarray(coeffs, dtype=float)
    return lambda x, c=arr: np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), c)


# -- output ---------------------------------------------------------------------


def _emit(args, descriptor: dict, header, rows):
    """CSV: '# descriptor' comment line, then header and rows.  JSON: one object."""
    text_rows = [[_fmt(v) for v in row] for row in rows]
    if args.format == "json":
        payload = {
            "descriptor": descriptor,
            "columns": list(header),
            "rows": text_rows,
        }
        body = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        lines = ["# " + json.dumps(descriptor, sort_keys=True)]
        lines.append(",".join(header))
        lines.extend(",".join(row) for row in text_rows)
        body = "\n".join(lines) + "\n"
    if args.out:
        path = args.out
        outdir = os.environ.get("NOISEFIELD_OUTDIR")
        if outdir and not os.path.isabs(path):
            path = os.path.join(outdir, path)
        with open(path, "w", newline="") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (complex, np.complexfloating)):
        c = complex(v)
        return f"{c.real!r}{c.imag:+}j".replace("+-", "-")
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return str(v)


def _descriptor(args, **extra) -> dict:
    d = {"subcommand": args.command, "seed": getattr(args, "seed", None)}
    for key in ("N", "J", "workers"):
        if getattr(args, key, None) is not None:
            d[key] = getattr(args, key)
    d.update(extra)
    return {k: v for k, v in d.items() if v is not None}


def _check_bounds(args):
    n = getattr(args, "N", None)
    if n is not None and n < MIN_MC_SAMPLES:
        raise UsageError(f"--N must be at least {MIN_MC_SAMPLES}")
    J = getattr(args, "J", None)
    if J is not None and not 1 <= J <= MAX_TRUNCATION:
        raise UsageError(f"--J must lie in [1, {MAX_TRUNCATION}]")
    workers = getattr(args, "workers", None)
    if workers is not None and workers < 1:
        raise UsageError("--workers must be >= 1")


# -- subcommand bodies ------------------------------------------------------------


def cmd_sample_path(args):
    mu = parse_measure(args.measure)
    A = parse_set(args.A, mu)
    field = noise.GaussianNoiseField(mu, J=args.J)
    vals = field.noise_samples(A, args.N, args.seed)
    desc = _descriptor(args, measure=mu.to_descriptor(), A=args.A, J=field.J)
    _emit(args, desc, ["sample", "value"], list(enumerate(vals)))


def cmd_covariance(args):
    mu = parse_measure(args.measure)
    A, B = parse_set(args.A, mu), parse_set(args.B, mu)
    field = noise.GaussianNoiseField(mu, J=args.J)
    est, se = field.covariance_mc(A, B, args.N, args.seed)
    target = mu.measure_of(A.intersect(B))
    desc = _descriptor(args, measure=mu.to_descriptor(), A=args.A, B=args.B, J=field.J)
    _emit(args, desc, ["estimate", "stderr", "target"], [[est, se, target]])


def cmd_ito_isometry(args):
    mu = parse_measure(args.measure)
    coeffs = parse_poly(args.poly)
    field = noise.GaussianNoiseField(mu, J=args.J)
    vals = field.ito_samples(_poly_fn(coeffs), args.N, args.seed)
    est = float(vals.var())
    se = est * np.sqrt(2.0 / args.N)
    target, _ = mu.integrate(_poly_fn(np.polynomial.polynomial.polymul(coeffs, coeffs)))
    desc = _descriptor(args, measure=mu.to_descriptor(), poly=coeffs, J=field.J)
    _emit(args, desc, ["variance", "stderr", "target"], [[est, se, float(target)]])


def cmd_sigma_inner(args):
    mu1, mu2 = parse_measure(args.mu1), parse_measure(args.mu2)
    F1 = sigma.SigmaFunction(_poly_fn(parse_poly(args.f1)), mu1)
    F2 = sigma.SigmaFunction(_poly_fn(parse_poly(args.f2)), mu2)
    val = sigma.inner_product(F1, F2)
    desc = _descriptor(
        args, mu1=mu1.to_descriptor(), mu2=mu2.to_descriptor(), f1=args.f1, f2=args.f2
    )
    _emit(args, desc, ["inner_product"], [[val]])


def cmd_equivalence(args):
    mu1, mu2 = parse_measure(args.mu1), parse_measure(args.mu2)
    F1 = sigma.SigmaFunction(_poly_fn(parse_poly(args.f1)), mu1)
    F2 = sigma.SigmaFunction(_poly_fn(parse_poly(args.f2)), mu2)
    res = sigma.equivalence_residual(F1, F2)
    desc = _descriptor(
        args, mu1=mu1.to_descriptor(), mu2=mu2.to_descriptor(), f1=args.f1, f2=args.f2
    )
    _emit(args, desc, ["equivalent", "residual"], [[res <= 1e-9, res]])


def cmd_ifs_moments(args):
    system = parse_ifs(args.ifs)
    moments = ifs_mod.invariant_moments(system, args.degree)
    desc = _descriptor(args, ifs=system.to_descriptor(), degree=args.degree)
    rows = [[k, m, float(m)] for k, m in enumerate(moments)]
    _emit(args, desc, ["degree", "moment_exact", "moment_float"], rows)


def cmd_cuntz_check(args):
    system = parse_ifs(args.ifs)
    r1, r2 = ifs_mod.cuntz_relation_residual(system, args.depth)
    closed = ifs_mod.closedness_residual(system)
    desc = _descriptor(args, ifs=system.to_descriptor(), depth=args.depth)
    _emit(
        args,
        desc,
        ["orthogonality_residual", "completeness_residual", "closedness_residual"],
        [[r1, r2, closed]],
    )


def cmd_bernoulli_density(args):
    bc = bc_mod.BernoulliConvolution(args.lam, stream_id=args.seed)
    centers, hist, inv = bc_mod.density_estimate(bc, args.N, args.h, args.T)
    desc = _descriptor(args, **{"lambda": args.lam, "h": args.h, "T": args.T})
    _emit(args, desc, ["x", "histogram", "inversion"], list(zip(centers, hist, inv)))


def cmd_bernoulli_scaling(args):
    bc = bc_mod.BernoulliConvolution(args.lam, stream_id=args.seed)
    rows = []
    for w in args.weights:
        rows.append([w, bc_mod.scaling_identity_residual(bc, args.N, args.h, weight=w)])
    desc = _descriptor(args, **{"lambda": args.lam, "h": args.h, "weights": args.weights})
    _emit(args, desc, ["weight", "residual"], rows)


def cmd_ac2_proxy(args):
    rows = [[T, bc_mod.ac2_l2_proxy(args.lam, T)] for T in args.T_values]
    desc = _descriptor(args, **{"lambda": args.lam, "T_values": args.T_values})
    _emit(args, desc, ["T", "proxy"], rows)


def cmd_boundary_embed(args):
    if args.kernel == "brownian":
        kernel = kernels.BrownianKernel()
        points = list(np.linspace(0.0, 1.0, args.points))
    elif args.kernel == "szego":
        kernel = kernels.SzegoKernel()
        points = [0.9 * np.exp(2j * np.pi * k / args.points) for k in range(args.points)]
    else:
        raise UsageError(f"unknown kernel {args.kernel!r} for embedding")
    J = args.J or kernel.default_J
    block = kernel.feature_block(points, J)
    rows = []
    for i, s in enumerate(points):
        for j, t in enumerate(points):
            if j <= i:
                continue
            emb = float(np.sum(np.abs(block[i] - block[j]) ** 2))
            ref = float(
                (
                    kernel.evaluate(s, s)
                    - 2.0 * np.real(kernel.evaluate(s, t))
                    + kernel.evaluate(t, t)
                ).real
            )
            rows.append([_fmt(s), _fmt(t), emb, ref, abs(emb - ref)])
    desc = _descriptor(args, kernel=args.kernel, points=args.points, J=J)
    _emit(args, desc, ["s", "t", "embedded_dist_sq", "kernel_dist_sq", "abs_error"], rows)


def cmd_szego_check(args):
    pts = [0.0, 0.5, -0.5j, 0.3 + 0.4j, -0.9]
    rows = []
    for z in pts:
        for w in pts:
            quad = kernels.szego_boundary_integral(z, w, args.nodes)
            closed = kernels.SzegoKernel().evaluate(z, w)
            rows.append([_fmt(z), _fmt(w), quad, closed, abs(quad - closed)])
    desc = _descriptor(args, nodes=args.nodes)
    _emit(args, desc, ["z", "w", "quadrature", "closed_form", "abs_error"], rows)


def cmd_julia_kernel(args):
    points = [complex(p) for p in args.points.split(";")]
    verdicts = [kernels.julia_membership(z) for z in points]
    rows = [[_fmt(z), v] for z, v in zip(points, verdicts)]
    members = [z for z, v in zip(points, verdicts) if v == kernels.INSIDE]
    kernel = kernels.JuliaProductKernel(n_factors=args.factors)
    for i, z in enumerate(members):
        for w in members[i:]:
            rows.append([f"C({_fmt(z)},{_fmt(w)})", _fmt(kernel.evaluate(z, w))])
    desc = _descriptor(args, points=args.points, factors=args.factors)
    _emit(args, desc, ["entry", "value"], rows)


def cmd_set_kernel(args):
    mu = parse_measure(args.measure)
    sets = [parse_set(s, mu) for s in args.sets.split("|")]
    G = kernels.exp_set_gram(mu, sets)
    eig = np.linalg.eigvalsh(G)
    rows = [["min_eigenvalue", float(eig.min())], ["trace", float(np.trace(G))]]
    for i in range(len(sets)):
        for j in range(len(sets)):
            rows.append([f"K_{i}_{j}", float(G[i, j])])
    desc = _descriptor(args, measure=mu.to_descriptor(), sets=args.sets)
    _emit(args, desc, ["entry", "value"], rows)


def cmd_fourier_isometry(args):
    mu = parse_measure(args.measure)
    sets = [parse_set(s, mu) for s in args.sets.split("|")]
    coeffs = parse_poly(args.coeffs)
    rk, mc, se = kernels.fourier_map_isometry(mu, sets, coeffs, args.N, args.seed, J=args.J or 512)
    desc = _descriptor(
        args, measure=mu.to_descriptor(), sets=args.sets, coeffs=coeffs, J=args.J or 512
    )
    _emit(args, desc, ["kernel_norm", "mc_norm", "mc_stderr"], [[rk, mc, se]])


def cmd_fbm_variance(args):
    rows = []
    for H in args.hurst:
        for t in args.times:
            v = noise.fbm_increment_variance(H, t)
            rows.append([H, t, v, t ** (2 * H), abs(v - t ** (2 * H))])
    desc = _descriptor(args, hurst=args.hurst, times=args.times)
    _emit(args, desc, ["H", "t", "V", "t_pow_2H", "abs_error"], rows)


# -- parser ------------------------------------------------------------------------


def _float_list(text):
    return [float(v) for v in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noisefield",
        description="Gaussian noise fields indexed by sigma-finite measures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True, N=None, J=False):
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--workers", type=int, default=1,
                       help="sample-index partitions; results are worker-count invariant")
        if seed:
            p.add_argument("--seed", type=int, default=7)
        if N is not None:
            p.add_argument("--N", type=int, default=N)
        if J:
            p.add_argument("--J", type=int, default=None)

    p = sub.add_parser("sample-path", help="draws of W_A")
    p.add_argument("--measure", required=True)
    p.add_argument("--A", required=True)
    common(p, N=1000, J=True)
    p.set_defaults(func=cmd_sample_path)

    p = sub.add_parser("covariance", help="Monte Carlo E[W_A W_B] vs mu(A n B)")
    p.add_argument("--measure", required=True)
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)
    common(p, N=100_000, J=True)
    p.set_defaults(func=cmd_covariance)

    p = sub.add_parser("ito-isometry", help="MC variance of the stochastic integral")
    p.add_argument("--measure", required=True)
    p.add_argument("--poly", required=True, help="integrand coefficients c0,c1,...")
    common(p, N=100_000, J=True)
    p.set_defaults(func=cmd_ito_isometry)

    p = sub.add_parser("sigma-inner", help="inner product of two sigma-functions")
    for flag in ("--f1", "--mu1", "--f2", "--mu2"):
        p.add_argument(flag, required=True)
    common(p, seed=False)
    p.set_defaults(func=cmd_sigma_inner)

    p = sub.add_parser("equivalence", help="equivalence test for sigma-function pairs")
    for flag in ("--f1", "--mu1", "--f2", "--mu2"):
        p.add_argument(flag, required=True)
    common(p, seed=False)
    p.set_defaults(func=cmd_equivalence)

    p = sub.add_parser("ifs-moments", help="exact invariant-measure moments")
    p.add_argument("--ifs", required=True)
    p.add_argument("--degree", type=int, default=8)
    common(p, seed=False)
    p.set_defaults(func=cmd_ifs_moments)

    p = sub.add_parser("cuntz-check", help="isometry-relation residuals")
    p.add_argument("--ifs", required=True)
    p.add_argument("--depth", type=int, default=8)
    common(p, seed=False)
    p.set_defaults(func=cmd_cuntz_check)

    p = sub.add_parser("bernoulli-density", help="histogram and inversion densities")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--h", type=float, default=0.01)
    p.add_argument("--T", type=float, default=200.0)
    common(p, N=1_000_000)
    p.set_defaults(func=cmd_bernoulli_density)

    p = sub.add_parser("bernoulli-scaling", help="scaling-law residuals")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--h", type=float, default=0.01)
    p.add_argument("--weights", type=_float_list, default=[0.5])
    common(p, N=1_000_000)
    p.set_defaults(func=cmd_bernoulli_scaling)

    p = sub.add_parser("ac2-proxy", help="square-integrability proxy curve")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--T-values", dest="T_values", type=_float_list, default=[50.0, 100.0, 200.0])
    common(p, seed=False)
    p.set_defaults(func=cmd_ac2_proxy)

    p = sub.add_parser("boundary-embed", help="embedding distance table")
    p.add_argument("--kernel", default="brownian")
    p.add_argument("--points", type=int, default=16)
    common(p, seed=False, J=True)
    p.set_defaults(func=cmd_boundary_embed)

    p = sub.add_parser("szego-check", help="boundary integral vs closed form")
    p.add_argument("--nodes", type=int, default=2048)
    common(p, seed=False)
    p.set_defaults(func=cmd_szego_check)

    p = sub.add_parser("julia-kernel", help="membership verdicts and kernel values")
    p.add_argument("--points", default="0;2;1;0.1;-0.15")
    p.add_argument("--factors", type=int, default=24)
    common(p, seed=False)
    p.set_defaults(func=cmd_julia_kernel)

    p = sub.add_parser("set-kernel", help="exponential set-kernel Gram matrix")
    p.add_argument("--measure", required=True)
    p.add_argument("--sets", required=True, help="families separated by '|'")
    common(p, seed=False)
    p.set_defaults(func=cmd_set_kernel)

    p = sub.add_parser("fourier-isometry", help="kernel norm vs MC exponential norm")
    p.add_argument("--measure", required=True)
    p.add_argument("--sets", required=True)
    p.add_argument("--coeffs", required=True)
    common(p, N=100_000, J=True)
    p.set_defaults(func=cmd_fourier_isometry)

    p = sub.add_parser("fbm-variance", help="spectral variance scaling table")
    p.add_argument("--hurst", type=_float_list, default=[0.25, 0.5, 0.75])
    p.add_argument("--times", type=_float_list, default=[1.0, 4.0])
    common(p, seed=False)
    p.set_defaults(func=cmd_fbm_variance)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _check_bounds(args)
        args.func(args)
    except UsageError as exc:
        parser.exit(2, f"{parser.prog}: error: {exc}\n")
    except (ValueError, NotImplementedError) as exc:
        record = {
            "error": {
                "subcommand": args.command,
                "type": type(exc).__name__,
                "message": str(exc),
            }
        }
        sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
