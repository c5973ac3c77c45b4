"""Command-line front end. Every subcommand writes CSV (``#`` metadata lines,
a header row, then data) and exits nonzero when a check misses its tolerance."""

import argparse
import csv
import io
import os
import sys

import numpy as np

from . import __version__
from .frequency_space import integrate_mu_j
from .group_model import GroupSpecError, load_group_spec
from .hermite import CoeffVector, gauss_legendre_rule, hermite_eval, ladder_apply, norm_bound
from .identities import identity_suite
from .kernel import KernelPoint1D, kernel_w_1d
from .spectral import block_residual, spectral_decompose
from . import transform as tr

EXIT_FAIL = 1
EXIT_INVALID = 2


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


class Table:
    def __init__(self, meta, header):
        self.meta = list(meta)
        self.header = list(header)
        self.rows = []

    def add(self, *row):
        self.rows.append([_fmt(v) for v in row])

    def render(self):
        buf = io.StringIO()
        for k, v in self.meta:
            buf.write(f"# {k}: {_fmt(v)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        w.writerows(self.rows)
        return buf.getvalue()


def _read_group(arg):
    if arg is None:
        arg = "heisenberg:1"
    if os.path.exists(arg):
        with open(arg) as fh:
            return load_group_spec(fh.read())
    if arg.lstrip().startswith("{") or ":" in arg or arg in ("example-4x2", "heisenberg"):
        return load_group_spec(arg)
    raise FileNotFoundError(f"group spec file {arg!r} not found")


def _floats(text):
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text):
    return [int(t) for t in text.split(",") if t.strip()]


def _meta(args, g=None, **extra):
    meta = [("nilfourier", __version__), ("command", args.command)]
    if g is not None:
        meta += [("group", g.name or "custom"), ("group_digest", g.digest())]
    meta.append(("seed", getattr(args, "seed", 0)))
    for k, v in extra.items():
        meta.append((k, v))
    return meta


# ---------------------------------------------------------------- named test functions

def sample_function(name, g):
    """Gaussian-class functions on ``g`` used by the transform subcommands.

    The ``-hat`` variants use ``alpha(s) = (1 - |s|^2/p) e^{-|s|^2/2}`` (for
    ``p = 1``), whose transform ``sqrt(2 pi) lambda^2 e^{-lambda^2/2}`` vanishes
    at ``lambda = 0`` where a fixed Hermite truncation loses mass.
    """
    m, p = g.m, g.p
    shift = np.zeros(m)
    shift[0] = 0.3
    fz = {
        "gauss": lambda Z: np.exp(-np.sum(Z * Z, -1) / 4),
        "gauss-poly": lambda Z: np.exp(-np.sum(Z * Z, -1) / 2) * (1 + Z[..., 0]),
        "gauss-shift": lambda Z: np.exp(-np.sum((Z - shift) ** 2, -1) / 2.5),
    }
    base = name[:-4] if name.endswith("-hat") else name
    if base not in fz:
        raise ValueError(f"unknown test function {name!r}")
    if name.endswith("-hat"):
        if p != 1:
            raise ValueError("the -hat test functions need p = 1")
        return tr.separable(fz[base], lambda s: (1 - s[..., 0] ** 2) * np.exp(-s[..., 0] ** 2 / 2),
                            lambda l: np.sqrt(2 * np.pi) * l[0] ** 2 * np.exp(-l[0] ** 2 / 2))
    return tr.separable(fz[base], lambda s: np.exp(-np.sum(s * s, -1) / 2),
                        lambda l: (2 * np.pi) ** (p / 2) * np.exp(-np.sum(l * l) / 2))


FUNCTIONS = ("gauss", "gauss-poly", "gauss-shift", "gauss-hat", "gauss-poly-hat", "gauss-shift-hat")
HAT_FUNCTIONS = FUNCTIONS[3:]


# ---------------------------------------------------------------- subcommands

def cmd_spec(args, out):
    try:
        with open(args.file) as fh:
            g = load_group_spec(fh.read())
    except FileNotFoundError:
        print(f"error: no such file {args.file!r}", file=sys.stderr)
        return EXIT_INVALID
    except GroupSpecError as exc:
        print(f"invalid group spec: {exc}", file=sys.stderr)
        return EXIT_INVALID
    t = Table(_meta(args, g), ["m", "p", "d", "valid"])
    t.add(g.m, g.p, g.d, True)
    out.write(t.render())
    return 0


def cmd_spectral(args, out):
    g = _read_group(args.group)
    lam = _floats(args.lam)
    sd = spectral_decompose(g, lam, tol=args.tol)
    res = block_residual(g, sd)
    hdr = [f"lambda_{k + 1}" for k in range(g.p)] + [f"eta_{j + 1}" for j in range(sd.d)] + \
        ["rank", "pfaffian", "block_residual"]
    t = Table(_meta(args, g, tol=args.tol), hdr)
    t.add(*lam, *sd.eta, sd.rank, sd.pfaffian, res)
    out.write(t.render())
    return 0 if res <= 1e-10 else EXIT_FAIL


def cmd_hermite(args, out):
    if args.action == "eval":
        xs = _floats(args.x)
        t = Table(_meta(args), ["n", "x", "value"])
        for x in xs:
            t.add(args.n, x, float(hermite_eval(args.n, x)))
        out.write(t.render())
        return 0
    # check: orthonormality, ladder identity, norm bounds
    rule = gauss_legendre_rule(40, -14.0, 14.0, panels=8)
    from .hermite import hermite_table
    H = hermite_table(args.n, rule.nodes)
    G = (H * rule.weights) @ H.T
    orth = float(np.max(np.abs(G - np.eye(args.n + 1))))
    ladder = 0.0
    bound_ok = True
    for n in range(args.n + 1):
        e = CoeffVector.basis(n, args.n + 8)
        v = ladder_apply("create", ladder_apply("annihilate", e))
        ladder = max(ladder, float(np.max(np.abs(v.coeffs[:e.coeffs.size] + e.coeffs - (2 * n + 1) * e.coeffs))))
        for ell in range(7):
            v = e
            for _ in range(ell):
                v = ladder_apply("multiply", v)
            bound_ok &= v.norm() <= norm_bound(n, ell) + 1e-12
    # sqrt(2n) * sqrt(2n) is 2n only up to rounding
    ladder_tol = 16 * np.finfo(float).eps * (2 * args.n + 1)
    t = Table(_meta(args, tol=args.tol), ["check", "residual", "tol", "passed"])
    t.add("orthonormality", orth, args.tol, orth <= args.tol)
    t.add("ladder", ladder, ladder_tol, ladder <= ladder_tol)
    t.add("norm_bounds", 0.0 if bound_ok else 1.0, 0.0, bound_ok)
    out.write(t.render())
    return 0 if (orth <= args.tol and ladder <= ladder_tol and bound_ok) else EXIT_FAIL


THETAS = {
    "exp": lambda a: np.exp(-a),
    "gauss": lambda a: np.exp(-a * a),
}


def cmd_measure(args, out):
    g = _read_group(args.group)
    value, tail = integrate_mu_j(THETAS[args.theta], args.eta, args.b, args.a_max)
    t = Table(_meta(args, g, theta=args.theta), ["eta", "b", "value", "truncation_estimate"])
    t.add(args.eta, args.b, value.real, tail)
    out.write(t.render())
    return 0


def cmd_kernel(args, out):
    pt = KernelPoint1D(args.a, args.b, args.eta, args.x, args.y)
    val, err = kernel_w_1d(pt, method=args.method, tol=args.tol, return_error=True)
    t = Table(_meta(args, tol=args.tol), ["a", "b", "eta", "x", "y", "value_re", "value_im", "method",
                                          "error_estimate"])
    t.add(args.a, args.b, args.eta, args.x, args.y, complex(val).real, complex(val).imag, args.method,
          float(err))
    out.write(t.render())
    return 0 if err <= max(args.tol, 1e-12) * 1e2 else EXIT_FAIL


def cmd_identity_suite(args, out):
    g = _read_group(args.group)
    results = identity_suite(g, args.seed)
    t = Table(_meta(args, g), ["identity", "residual", "tol", "passed"])
    for r in results:
        t.add(r.name, r.residual, r.tol, r.passed)
    out.write(t.render())
    return 0 if all(r.passed for r in results) else EXIT_FAIL


def _quad(args):
    return tr.TransformQuadrature(gauss_legendre_rule(args.z_nodes, -args.z_box, args.z_box),
                                  gauss_legendre_rule(args.s_nodes, -args.s_box, args.s_box))


def cmd_transform(args, out):
    g = _read_group(args.group)
    sd = spectral_decompose(g, _floats(args.lam))
    f = sample_function(args.function, g)
    n, m = _ints(args.n), _ints(args.m)
    val, tail = tr.fourier_coeff(g, sd, f, n, m, _quad(args), return_error=True)
    t = Table(_meta(args, g, function=args.function, z_nodes=args.z_nodes, s_nodes=args.s_nodes),
              ["lambda", "n", "m", "value_re", "value_im", "error_estimate"])
    t.add(args.lam.replace(",", " "), " ".join(map(str, n)), " ".join(map(str, m)), val.real, val.imag, tail)
    out.write(t.render())
    return 0 if tail <= args.tol else EXIT_FAIL


def cmd_plancherel(args, out):
    g = _read_group(args.group)
    rule = gauss_legendre_rule(args.lam_nodes, -args.lam_box, args.lam_box, panels=args.lam_panels)
    kappa = args.kappa
    if args.derived_kappa:
        kappa = tr.plancherel_constant(g, derived=True)
    t = Table(_meta(args, g, nmax=args.nmax, kappa=kappa if kappa is not None else "default", tol=args.tol),
              ["function", "lhs", "rhs", "ratio", "error"])
    ok = True
    for name in args.function:
        lhs, rhs, ratio = tr.plancherel_check(g, sample_function(name, g), rule, args.nmax, kappa, _quad(args))
        err = abs(ratio - 1)
        ok &= err <= args.tol
        t.add(name, lhs, rhs, ratio, err)
    out.write(t.render())
    return 0 if ok else EXIT_FAIL


def cmd_convolution_check(args, out):
    g = _read_group(args.group)
    q = _quad(args)
    f1, f2 = sample_function(args.f1, g), sample_function(args.f2, g)
    conv = tr.group_convolve(g, f1, f2, q)
    t = Table(_meta(args, g, nmax=args.nmax, tol=args.tol), ["lambda", "frobenius_error", "norm"])
    ok = True
    for lam in _floats(args.lam):
        sd = spectral_decompose(g, [lam] + [0.0] * (g.p - 1))
        A = tr.fourier_operator_matrix(g, sd, f1, args.nmax, q).entries
        B = tr.fourier_operator_matrix(g, sd, f2, args.nmax, q).entries
        C = tr.fourier_operator_matrix(g, sd, conv, args.nmax, q).entries
        err = float(np.linalg.norm(C - A @ B))
        ok &= err <= args.tol
        t.add(lam, err, float(np.linalg.norm(C)))
    out.write(t.render())
    return 0 if ok else EXIT_FAIL


def _bump(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


BUMP_MASS = 0.44399381616807943  # int_{-1}^{1} exp(-1/(1-u^2)) du


def cmd_central_limit(args, out):
    g = _read_group(args.group)
    fz = lambda Z: np.exp(-np.sum(Z * Z, -1) / 4)  # noqa: E731
    chi_hat = lambda z: 2 * np.pi * _bump(z) / BUMP_MASS  # noqa: E731

    def theta(a, b, lam):
        lam = np.atleast_1d(lam)
        return (np.prod(_bump((a - 3.0) / 2.0), axis=-1) * np.exp(-float(np.sum(np.asarray(b) ** 2)))
                * float(np.prod(_bump(lam / 2.0))))

    eps = _floats(args.eps)
    lam0 = _floats(args.lam0)
    res = tr.central_limit_check(g, fz, lam0, chi_hat, 1.0, eps, theta, b_range=args.b_range,
                                 a_max=args.a_max, quad=_quad(args), lam_nodes=args.lam_nodes)
    gaps = res.gaps
    monotone = all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
    ok = monotone and gaps[-1] <= args.tol
    t = Table(_meta(args, g, target=res.target.real, tol=args.tol), ["eps", "pairing", "target", "gap"])
    for e, v, gap in zip(eps, res.pairings, gaps):
        t.add(e, v.real, res.target.real, gap)
    out.write(t.render())
    return 0 if ok else EXIT_FAIL


# ---------------------------------------------------------------- parser

def _add_quad(p, z_nodes=64, s_nodes=64):
    p.add_argument("--z-nodes", type=int, default=z_nodes)
    p.add_argument("--z-box", type=float, default=8.0)
    p.add_argument("--s-nodes", type=int, default=s_nodes)
    p.add_argument("--s-box", type=float, default=10.0)


def build_parser():
    ap = argparse.ArgumentParser(prog="nilfourier", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--out", help="write CSV here instead of stdout")
    ap.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spec", help="validate a group-spec file")
    p.add_argument("action", choices=["validate"])
    p.add_argument("file")
    p.set_defaults(run=cmd_spec)

    p = sub.add_parser("spectral", help="frequencies and adapted basis at one lambda")
    p.add_argument("--group")
    p.add_argument("--lambda", dest="lam", required=True, help="comma-separated lambda")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(run=cmd_spectral)

    p = sub.add_parser("hermite", help="Hermite function evaluation and checks")
    p.add_argument("action", choices=["eval", "check"])
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--x", default="0")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(run=cmd_hermite)

    p = sub.add_parser("measure", help="integrate a test function against mu_{j,b}")
    p.add_argument("--group")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--b", type=int, default=0)
    p.add_argument("--theta", choices=sorted(THETAS), default="exp")
    p.add_argument("--a-max", type=float, default=float("inf"))
    p.set_defaults(run=cmd_measure)

    p = sub.add_parser("kernel", help="one-coordinate kernel W or K")
    for name in ("a", "eta", "x", "y"):
        p.add_argument(f"--{name}", type=float, required=name in ("a", "eta"), default=0.0)
    p.add_argument("--b", type=int, default=0)
    p.add_argument("--method", choices=["series", "direct", "laguerre", "polar"], default="series")
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(run=cmd_kernel)

    p = sub.add_parser("identity-suite", help="residuals of the kernel identities")
    p.add_argument("--group")
    p.set_defaults(run=cmd_identity_suite)

    p = sub.add_parser("transform", help="one transform coefficient")
    p.add_argument("--group")
    p.add_argument("--lambda", dest="lam", default="1")
    p.add_argument("--function", choices=FUNCTIONS, default="gauss")
    p.add_argument("--n", default="0")
    p.add_argument("--m", default="0")
    p.add_argument("--tol", type=float, default=1e-6)
    _add_quad(p)
    p.set_defaults(run=cmd_transform)

    p = sub.add_parser("plancherel", help="Plancherel ratio for the named test functions")
    p.add_argument("--group")
    p.add_argument("--function", nargs="+", choices=FUNCTIONS, default=list(HAT_FUNCTIONS))
    p.add_argument("--nmax", type=int, default=12)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--derived-kappa", action="store_true", help="use (2 pi)^-(d+1) on Heisenberg groups")
    p.add_argument("--lam-nodes", type=int, default=24)
    p.add_argument("--lam-panels", type=int, default=8)
    p.add_argument("--lam-box", type=float, default=12.0)
    p.add_argument("--tol", type=float, default=1e-3)
    _add_quad(p, 48, 48)
    p.set_defaults(run=cmd_plancherel)

    p = sub.add_parser("central-limit", help="pairings along eps -> 0")
    p.add_argument("--group")
    p.add_argument("--lam0", default="0")
    p.add_argument("--eps", default="0.4,0.2,0.1,0.05")
    p.add_argument("--b-range", type=int, default=2)
    p.add_argument("--a-max", type=float, default=6.0)
    p.add_argument("--lam-nodes", type=int, default=24)
    p.add_argument("--tol", type=float, default=0.02)
    _add_quad(p)
    p.set_defaults(run=cmd_central_limit)

    p = sub.add_parser("convolution-check", help="transform of a convolution vs matrix product")
    p.add_argument("--group")
    p.add_argument("--f1", choices=FUNCTIONS, default="gauss-poly")
    p.add_argument("--f2", choices=FUNCTIONS, default="gauss-shift")
    p.add_argument("--lambda", dest="lam", default="1")
    p.add_argument("--nmax", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-4)
    _add_quad(p, 48, 48)
    p.set_defaults(run=cmd_convolution_check)
    return ap


def run(argv=None, stdout=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    buf = io.StringIO()
    try:
        code = args.run(args, buf)
    except (GroupSpecError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        (stdout or sys.stdout).write(text)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
