"""Group Fourier transform in the Hermite basis and the identities it satisfies.

``F(f)(n, m, lambda) = int f(Z, s) e^{-i<lambda, s>} conj(W(n, m, eta(lambda), Z)) dZ ds``
with ``Z`` read in the adapted basis of ``U^(lambda)``.
"""

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .frequency_space import integrate_mu, mu_rule_1d
from .group_model import GroupElement, apply_field, builtin_group, sigma
from .hermite import QuadratureRule, gauss_legendre_rule
from .kernel import kernel_k, kernel_w, laguerre_psi, theta_kernel, w_table
from .spectral import spectral_decompose

_CHUNK = 1 << 20


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """A function of ``(Z, s)`` (coordinates on the last axis).

    ``s_transform(Z, lam)`` optionally returns ``int f(Z, s) e^{-i<lam, s>} ds``
    in closed form; otherwise it is computed by quadrature.
    """

    func: object
    decay: str = "schwartz"
    s_transform: object = None
    factors: tuple = None

    def __call__(self, Z, s):
        return self.func(np.asarray(Z, dtype=float), np.asarray(s, dtype=float))

    @property
    def separable(self):
        return self.factors is not None


def separable(fz, alpha, alpha_hat=None, decay="schwartz"):
    """``f(Z, s) = fz(Z) alpha(s)``; ``alpha_hat(lam) = int alpha(s) e^{-i<lam,s>} ds``."""
    def func(Z, s):
        return fz(Z) * alpha(s)

    st = None
    if alpha_hat is not None:
        def st(Z, lam):
            return fz(Z) * alpha_hat(np.atleast_1d(lam))
    return SampledFunction(func, decay, st, (fz, alpha, alpha_hat))


ZERO = SampledFunction(lambda Z, s: np.zeros(np.broadcast_shapes(Z.shape[:-1], s.shape[:-1])),
                       "compact", lambda Z, lam: np.zeros(Z.shape[:-1]))


@dataclass(frozen=True)
class TransformQuadrature:
    """One-dimensional rules tensorized over the ``Z`` and ``s`` coordinates."""

    z_rule: QuadratureRule = field(default_factory=lambda: gauss_legendre_rule(64, -8.0, 8.0))
    s_rule: QuadratureRule = field(default_factory=lambda: gauss_legendre_rule(64, -10.0, 10.0))


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Truncated matrix of the transform at ``lam``; rows ``n``, columns ``m``,
    multi-indices in lexicographic order."""

    lam: np.ndarray
    entries: np.ndarray
    N_max: int
    tail: float = 0.0
    resolved: bool = True

    def hs_norm2(self):
        return float(np.sum(np.abs(self.entries) ** 2))

    def op_norm(self):
        return float(np.linalg.norm(self.entries, 2))


def _threads():
    try:
        return max(1, int(os.environ.get("NILFOURIER_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Order-preserving map, threaded when ``NILFOURIER_THREADS`` > 1."""
    items = list(items)
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


def _tensor(rule, dim):
    """Tensor grid of a 1D rule: nodes (N^dim, dim), weights (N^dim,)."""
    if dim == 0:
        return np.zeros((1, 0)), np.ones(1)
    mesh = np.meshgrid(*([rule.nodes] * dim), indexing="ij")
    wm = np.meshgrid(*([rule.dx_weights] * dim), indexing="ij")
    return np.stack([g.ravel() for g in mesh], -1), np.prod(np.stack([w.ravel() for w in wm], -1), -1)


def s_transform(f, Z, lam, quad):
    """``int f(Z, s) e^{-i<lam, s>} ds`` on an array of points ``Z``."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    if f.s_transform is not None:
        return np.asarray(f.s_transform(Z, lam), dtype=complex)
    p = lam.size
    S, ws = _tensor(quad.s_rule, p)
    ker = ws * np.exp(-1j * (S @ lam))
    out = np.empty(Z.shape[0], dtype=complex)
    step = max(1, _CHUNK // S.shape[0])
    for i in range(0, Z.shape[0], step):
        Zc = Z[i:i + step]
        vals = f(np.repeat(Zc[:, None, :], S.shape[0], axis=1), np.broadcast_to(S, (Zc.shape[0],) + S.shape))
        out[i:i + step] = vals @ ker
    return out


def _adapted_grid(spectral, quad, m):
    """Adapted-coordinate tensor grid, its image in original coordinates, weights."""
    z, w = _tensor(quad.z_rule, m)
    return z, spectral.from_adapted(z), w


def _boundary_mass(vals, nz, m):
    """Sum of |vals| over grid nodes lying on the faces of the box."""
    idx = np.indices((nz,) * m).reshape(m, -1)
    face = np.any((idx == 0) | (idx == nz - 1), axis=0)
    return float(np.sum(np.abs(vals[face])))


def _resolves(rule, eta, N_max):
    """Whether the Z rule samples the fastest kernel oscillation, local
    wavenumber ``sqrt(eta (2 N_max + 1))``, at least twice per period."""
    gap = float(np.max(np.diff(rule.nodes))) if len(rule) > 1 else np.inf
    k = math.sqrt(float(np.max(eta, initial=0.0)) * (2 * N_max + 1))
    return bool(k * gap <= np.pi)


def _require_regular(spectral):
    if not spectral.regular:
        raise ValueError(f"lambda={spectral.lam.tolist()} is not regular (a frequency vanishes)")


def _weighted_phi(g, spectral, f, quad):
    z, Z, w = _adapted_grid(spectral, quad, g.m)
    phi = s_transform(f, Z, spectral.lam, quad)
    return z, w * phi


def _contract(spectral, tables, Phi, nz, m):
    """``sum Phi * prod_j tables[j]`` over the grid.

    ``tables[j]`` has shape ``(K_j, nz, nz)`` over the ``(x_j, y_j)`` grid.
    Returns an array of shape ``(K_1, .., K_d)``.
    """
    d = spectral.d
    P = Phi.reshape((nz,) * m)
    if m > 2 * d:
        P = P.reshape((nz,) * (2 * d) + (-1,)).sum(axis=-1)
    letters = "abcdefghijklmnopqrstuvwxyz"
    xs, ys, ks = letters[:d], letters[d:2 * d], "ABCDEFGHIJKLMNOPQRSTUVWXYZ"[:d]
    spec = xs + ys + "," + ",".join(ks[j] + xs[j] + ys[j] for j in range(d)) + "->" + ks
    return np.einsum(spec, P, *tables, optimize=True)


def _xy(z, spectral, nz, j):
    d = spectral.d
    m = z.shape[-1]
    grid = z.reshape((nz,) * m + (m,))
    # (x_j, y_j) vary along axes j and d + j; take the corresponding 2D slice
    sl = [0] * m
    sl[j] = slice(None)
    sl[d + j] = slice(None)
    sub = grid[tuple(sl)]
    return sub[..., j], sub[..., d + j]


def fourier_coeff(g, spectral, f, n, m, quad=None, tol=None, return_error=False):
    """``F(f)(n, m, lambda)`` for Hermite multi-indices ``n``, ``m`` at a regular ``lambda``."""
    _require_regular(spectral)
    quad = quad or TransformQuadrature()
    n = np.atleast_1d(np.asarray(n, dtype=int))
    m = np.atleast_1d(np.asarray(m, dtype=int))
    d = spectral.d
    if n.size != d or m.size != d:
        raise ValueError(f"need multi-indices of length {d}")
    nz = len(quad.z_rule)
    z, Phi = _weighted_phi(g, spectral, f, quad)
    tables = []
    for j in range(d):
        x, y = _xy(z, spectral, nz, j)
        tables.append(np.conj(kernel_w(int(n[j]), int(m[j]), float(spectral.eta[j]), x, y))[None])
    val = complex(_contract(spectral, tables, Phi, nz, g.m).ravel()[0])
    tail = _boundary_mass(Phi, nz, g.m)
    if tol is not None and tail > tol:
        raise RuntimeError(f"truncation estimate {tail:.3g} exceeds tolerance {tol:.3g}")
    return (val, tail) if return_error else val


def fourier_operator_matrix(g, spectral, f, N_max, quad=None):
    """All ``F(f)(n, m, lambda)`` with ``n_j, m_j <= N_max``."""
    _require_regular(spectral)
    quad = quad or TransformQuadrature()
    d = spectral.d
    nz = len(quad.z_rule)
    z, Phi = _weighted_phi(g, spectral, f, quad)
    K = N_max + 1
    tables = []
    for j in range(d):
        x, y = _xy(z, spectral, nz, j)
        T = np.conj(w_table(N_max, float(spectral.eta[j]), x, y))
        tables.append(T.reshape(K * K, nz, nz))
    M = _contract(spectral, tables, Phi, nz, g.m)
    # axes (n_1 m_1, n_2 m_2, ...) -> (n_1..n_d, m_1..m_d)
    M = M.reshape((K, K) * d)
    M = M.transpose([2 * j for j in range(d)] + [2 * j + 1 for j in range(d)])
    M = M.reshape(K ** d, K ** d)
    return OperatorMatrix(spectral.lam, M, N_max, _boundary_mass(Phi, nz, g.m),
                          _resolves(quad.z_rule, spectral.eta, N_max))


# ---------------------------------------------------------------- convolution

def group_convolve(g, f1, f2, quad=None):
    """``(f1 * f2)(w) = int f1(w . w'^{-1}) f2(w') dw'`` by quadrature on the truncation box.

    When both factors carry closed-form ``s_transform`` the result gets one
    too, via the twisted convolution in ``Z``.
    """
    quad = quad or TransformQuadrature()
    Zq, wz = _tensor(quad.z_rule, g.m)
    Sq, ws = _tensor(quad.s_rule, g.p)
    Zq_full = np.repeat(Zq, Sq.shape[0], axis=0)
    Sq_full = np.tile(Sq, (Zq.shape[0], 1))
    w_full = np.repeat(wz, Sq.shape[0]) * np.tile(ws, Zq.shape[0])
    f2_vals = w_full * f2(Zq_full, Sq_full)
    keep = np.abs(f2_vals) > 1e-300
    Zk, Sk, fk = Zq_full[keep], Sq_full[keep], f2_vals[keep]

    def func(Z, s):
        Z = np.asarray(Z, dtype=float)
        s = np.asarray(s, dtype=float)
        shape = np.broadcast_shapes(Z.shape[:-1], s.shape[:-1])
        Zf = np.broadcast_to(Z, shape + (g.m,)).reshape(-1, g.m)
        sf = np.broadcast_to(s, shape + (g.p,)).reshape(-1, g.p)
        out = np.empty(Zf.shape[0], dtype=complex)
        step = max(1, _CHUNK // max(1, Zk.shape[0]))
        for i in range(0, Zf.shape[0], step):
            Zc, sc = Zf[i:i + step, None, :], sf[i:i + step, None, :]
            arg_s = sc - Sk[None] - 0.5 * sigma(g, Zc, Zk[None])
            out[i:i + step] = f1(Zc - Zk[None], arg_s) @ fk
        return out.reshape(shape)

    st = None
    if f1.s_transform is not None and f2.s_transform is not None:
        def st(Z, lam):
            lam = np.atleast_1d(lam)
            Z = np.asarray(Z, dtype=float)
            shape = Z.shape[:-1]
            Zf = Z.reshape(-1, g.m)
            phi2 = wz * np.asarray(f2.s_transform(Zq, lam))
            out = np.empty(Zf.shape[0], dtype=complex)
            step = max(1, _CHUNK // Zq.shape[0])
            for i in range(0, Zf.shape[0], step):
                Zc = Zf[i:i + step, None, :]
                tw = np.exp(-0.5j * (sigma(g, Zc, Zq[None]) @ lam))
                out[i:i + step] = (np.asarray(f1.s_transform(Zc - Zq[None], lam)) * tw) @ phi2
            return out.reshape(shape)

    return SampledFunction(func, "schwartz", st)


# ---------------------------------------------------------------- central limit

def _kernel_factor_table(eta, a, b, x, y):
    """conj kernel at one coordinate for an array of ``a`` values; shape ``(len(a),) + x.shape``."""
    if eta > 0:
        out = []
        for aj in a:
            n = int(round((aj / eta - b) / 2))
            out.append(np.conj(kernel_w(n, n + b, eta, x, y)))
        return np.array(out)
    return np.array([np.conj(kernel_k(aj, x, y, b, method="polar")) for aj in a])


def gcal_lambda(g, fz, lam0, a, b, quad=None):
    """``int conj(W(a, b, lambda0, Z)) fz(Z) dZ`` for a function of ``Z`` alone.

    Collapsed coordinates (``eta_j(lambda0) = 0``) use ``K``; ``a`` and ``b``
    may hold one point (length ``d``) or several (shape ``(N, d)``).
    """
    quad = quad or TransformQuadrature()
    sd = spectral_decompose(g, lam0)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=int)
    single = a.ndim <= 1
    a2 = np.atleast_2d(a)
    b2 = np.broadcast_to(np.atleast_2d(b), a2.shape)
    nz = len(quad.z_rule)
    z, Z, w = _adapted_grid(sd, quad, g.m)
    Phi = w * fz(Z)
    out = np.empty(a2.shape[0], dtype=complex)
    for i, (ai, bi) in enumerate(zip(a2, b2)):
        tables = []
        for j in range(sd.d):
            x, y = _xy(z, sd, nz, j)
            tables.append(_kernel_factor_table(float(sd.eta[j]), [float(ai[j])], int(bi[j]), x, y))
        out[i] = _contract(sd, tables, Phi, nz, g.m).ravel()[0]
    return complex(out[0]) if single else out


def _comb_transform(sd, Phi, z, nz, m, b, a_max):
    """Transform values at every comb point with offset ``b`` and ``a <= a_max``.

    Returns ``(a_grid (N, d), values (N,))``. The Laguerre recurrence runs over
    the whole comb of each coordinate, so large combs (small ``eta``) are
    streamed in blocks when ``d == 1``.
    """
    d = sd.d
    axes = []
    for j in range(d):
        aj, _ = mu_rule_1d(float(sd.eta[j]), int(b[j]), a_max)
        axes.append(aj)
    if any(ax.size == 0 for ax in axes):
        return np.zeros((0, d)), np.zeros(0, dtype=complex)
    if d == 1:
        x, y = _xy(z, sd, nz, 0)
        eta, k = float(sd.eta[0]), abs(int(b[0]))
        X, Y = math.sqrt(eta) * x, math.sqrt(eta) * y
        t = 0.5 * (X * X + Y * Y)
        ph = np.exp(1j * k * np.arctan2(Y, X))
        if b[0] < 0:
            ph = (-1) ** k * np.conj(ph)
        P = Phi.reshape((nz,) * m)
        if m > 2:
            P = P.reshape(nz, nz, -1).sum(axis=-1)
        vec = (P * np.conj(ph)).ravel()
        tv = t.ravel()
        N = axes[0].size
        vals = np.empty(N, dtype=complex)
        # streamed recurrence (same as laguerre_psi, kept in two rows)
        with np.errstate(divide="ignore"):
            logt = np.log(tv)
        p0 = np.exp(-0.5 * tv) if k == 0 else np.where(tv > 0, np.exp(0.5 * k * logt - 0.5 * tv - 0.5 * gammaln(k + 1)), 0.0)
        vals[0] = p0 @ vec
        if N > 1:
            p1 = (1 + k - tv) * p0 / math.sqrt(k + 1)
            vals[1] = p1 @ vec
            for nn in range(1, N - 1):
                a1 = math.sqrt((nn + 1) * (nn + k + 1))
                a0 = math.sqrt(nn * (nn + k) / ((nn + 1) * (nn + k + 1)))
                p0, p1 = p1, (2 * nn + k + 1 - tv) * p1 / a1 - a0 * p0
                vals[nn + 1] = p1 @ vec
        return axes[0][:, None], vals
    tables = []
    for j in range(d):
        x, y = _xy(z, sd, nz, j)
        eta, k = float(sd.eta[j]), abs(int(b[j]))
        X, Y = math.sqrt(eta) * x, math.sqrt(eta) * y
        t = 0.5 * (X * X + Y * Y)
        ph = np.exp(1j * k * np.arctan2(Y, X))
        if b[j] < 0:
            ph = (-1) ** k * np.conj(ph)
        psi = laguerre_psi(axes[j].size - 1, k, t)
        tables.append(np.conj(psi * ph[None]))
    vals = _contract(sd, tables, Phi, nz, m)
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([gr.ravel() for gr in grids], -1), vals.ravel()


def _check_chi(chi_hat, support, p):
    probe = np.linspace(-1.0, 1.0, 2001) * support
    mass = np.trapezoid(chi_hat(probe), probe) if p == 1 else None
    for r in (1.0001, 1.01, 1.5, 3.0):
        v = np.asarray(chi_hat(np.array([r * support, -r * support])))
        if np.any(np.abs(v) > 1e-14):
            raise ValueError("scalar Fourier transform of chi is not supported in the declared interval")
    if mass is not None and abs(mass / (2 * np.pi) - 1) > 1e-3:
        raise ValueError("chi(0) must equal 1, i.e. int chi_hat = 2 pi")


@dataclass(frozen=True, eq=False)
class CentralLimitResult:
    eps: tuple
    pairings: tuple
    target: complex

    @property
    def gaps(self):
        return tuple(abs(v - self.target) / abs(self.target) for v in self.pairings)


def central_limit_check(g, fz, lam0, chi_hat, chi_support, eps_list, theta,
                        b_range=0, a_max=10.0, quad=None, lam_nodes=24):
    """Pair the transform of ``fz(Z) e^{i<lam0, s>} chi(eps s)`` with ``theta``.

    Uses ``F(fz (x) alpha)(a, b, lambda) = alpha_hat(lambda) * G(a, b, lambda)``
    with ``alpha_hat(lambda) = eps^{-p} chi_hat((lambda - lam0) / eps)``. The
    target is ``(2 pi)^p int G^{lam0}(fz) theta dmu^{lam0}``. ``theta(a, b, lam)``
    takes ``a`` of shape ``(N, d)``.
    """
    if g.p != 1:
        raise NotImplementedError("central_limit_check handles one central direction")
    _check_chi(chi_hat, chi_support, g.p)
    quad = quad or TransformQuadrature()
    lam0 = np.atleast_1d(np.asarray(lam0, dtype=float))
    sd0 = spectral_decompose(g, lam0)
    nz = len(quad.z_rule)

    def gtheta(sd):
        z, Z, w = _adapted_grid(sd, quad, g.m)
        return z, w * fz(Z)

    # target
    z0, Phi0 = gtheta(sd0)

    def theta_target(a, b, lam):
        G = gcal_lambda(g, fz, lam0, a, np.broadcast_to(b, a.shape), quad)
        return np.asarray(theta(a, b, lam)) * G

    target = (2 * np.pi) ** g.p * integrate_mu(theta_target, sd0, b_range, a_max)[0]

    pairings = []
    for eps in eps_list:
        R = eps * chi_support
        rules = [gauss_legendre_rule(lam_nodes, lam0[0] - R, lam0[0]),
                 gauss_legendre_rule(lam_nodes, lam0[0], lam0[0] + R)]
        lams = np.concatenate([r.nodes for r in rules])
        wl = np.concatenate([r.weights for r in rules])

        def at(lam_w):
            lam, wlam = lam_w
            sd = spectral_decompose(g, [lam])
            _require_regular(sd)
            z, Phi = gtheta(sd)
            ahat = chi_hat(np.array([(lam - lam0[0]) / eps]))[0] / eps
            acc = 0.0 + 0.0j
            for b in itertools.product(range(-b_range, b_range + 1), repeat=sd.d):
                b = np.array(b)
                a_pts, vals = _comb_transform(sd, Phi, z, nz, g.m, b, a_max)
                if vals.size == 0:
                    continue
                wts = np.prod(2 * sd.eta) * np.ones(vals.size)
                acc += np.sum(wts * ahat * vals * np.asarray(theta(a_pts, b, sd.lam)))
            return wlam * acc

        pairings.append(complex(sum(parallel_map(at, zip(lams, wl)))))
    return CentralLimitResult(tuple(eps_list), tuple(pairings), complex(target))


def dirac_lemma_check(g, lam0, chi, chi_support, eps, theta, b_range=0, a_max=10.0, lam_nodes=32):
    """``(I_eps, <dmu^{lam0}, theta(., ., lam0)>)`` for a normalized bump ``chi``.

    ``I_eps = int eps^{-p} chi((lambda - lam0)/eps) int theta dmu^lambda dlambda``.
    """
    if g.p != 1:
        raise NotImplementedError("dirac_lemma_check handles one central direction")
    lam0 = np.atleast_1d(np.asarray(lam0, dtype=float))
    R = eps * chi_support
    rules = [gauss_legendre_rule(lam_nodes, lam0[0] - R, lam0[0]),
             gauss_legendre_rule(lam_nodes, lam0[0], lam0[0] + R)]
    total = 0.0 + 0.0j
    for rule in rules:
        for lam, w in zip(rule.nodes, rule.weights):
            sd = spectral_decompose(g, [lam])
            inner = integrate_mu(theta, sd, b_range, a_max)[0]
            total += w * chi((lam - lam0[0]) / eps) / eps * inner
    limit = integrate_mu(theta, spectral_decompose(g, lam0), b_range, a_max)[0]
    return complex(total), complex(limit)


# ---------------------------------------------------------------- Plancherel and friends

def _is_heisenberg(g):
    if g.p != 1 or g.m % 2:
        return False
    ref = builtin_group("heisenberg", g.m // 2)
    return bool(np.array_equal(ref.structure_matrices, g.structure_matrices))


def plancherel_constant(g, derived=False):
    """Heisenberg constant: ``2^{d-1} / pi^{d+1}``, or with ``derived`` the value
    ``(2 pi)^{-(d+1)}`` that matches this module's normalization of ``sigma`` and
    the transform. ``None`` for other groups."""
    if not _is_heisenberg(g):
        return None
    d = g.m // 2
    if derived:
        return (2 * np.pi) ** -(d + 1)
    return 2.0 ** (d - 1) / np.pi ** (d + 1)


def l2_norm2(g, f, quad=None):
    """``int |f|^2`` on the truncation box (factorized for separable ``f``)."""
    quad = quad or TransformQuadrature()
    Zq, wz = _tensor(quad.z_rule, g.m)
    Sq, ws = _tensor(quad.s_rule, g.p)
    if f.separable:
        fz, alpha, _ = f.factors
        return float(np.sum(wz * np.abs(fz(Zq)) ** 2) * np.sum(ws * np.abs(alpha(Sq)) ** 2))
    total = 0.0
    for i in range(Zq.shape[0]):
        vals = f(np.broadcast_to(Zq[i], (Sq.shape[0], g.m)), Sq)
        total += wz[i] * np.sum(ws * np.abs(vals) ** 2)
    return float(total)


def plancherel_check(g, f, lam_rule, N_max, kappa=None, quad=None):
    """``(lhs, rhs, ratio)`` with ``lhs = int |f|^2`` and
    ``rhs = kappa int ||F(f)(lambda)||_HS^2 Pf(lambda) dlambda``.

    ``kappa`` defaults to ``2^{d-1}/pi^{d+1}`` on Heisenberg groups and to 1
    elsewhere (the ratio is then a measurement of the constant). The outer
    rule is tensorized over the ``p`` central directions; nodes where the
    Pfaffian vanishes contribute nothing.
    """
    quad = quad or TransformQuadrature()
    if kappa is None:
        kappa = plancherel_constant(g) or 1.0
    lhs = l2_norm2(g, f, quad)
    nodes = np.array(list(itertools.product(lam_rule.nodes, repeat=g.p)))
    weights = np.prod(np.array(list(itertools.product(lam_rule.dx_weights, repeat=g.p))), axis=1)

    def at(item):
        lam, w = item
        sd = spectral_decompose(g, lam)
        if not sd.regular:
            return 0.0
        M = fourier_operator_matrix(g, sd, f, N_max, quad)
        return w * M.hs_norm2() * sd.pfaffian

    rhs = kappa * float(sum(parallel_map(at, zip(nodes, weights))))
    ratio = rhs / lhs if lhs > 0 else float("nan")
    return lhs, rhs, ratio


def inversion_at_origin(g, f, lam_rule, N_max, kappa=None, quad=None):
    """``(f(0), kappa int tr F(f)(lambda) Pf(lambda) dlambda)``."""
    quad = quad or TransformQuadrature()
    if kappa is None:
        kappa = plancherel_constant(g) or 1.0
    total = 0.0 + 0.0j
    for lam, w in zip(lam_rule.nodes, lam_rule.dx_weights):
        sd = spectral_decompose(g, [lam] * g.p if g.p == 1 else lam)
        if not sd.regular:
            continue
        M = fourier_operator_matrix(g, sd, f, N_max, quad)
        total += w * np.trace(M.entries) * sd.pfaffian
    f0 = complex(np.asarray(f(np.zeros((1, g.m)), np.zeros((1, g.p))))[0])
    return f0, complex(kappa * total)


def sublaplacian(g, f, h=1e-3):
    """``-Delta_g f`` with ``Delta_g = sum_i V_i^2`` over left-invariant fields along
    the standard basis, by 4th-order differences along the flows."""
    stencil = ((-2, -1 / 12), (-1, 16 / 12), (0, -30 / 12), (1, 16 / 12), (2, -1 / 12))

    def func(Z, s):
        Z = np.asarray(Z, dtype=float)
        s = np.asarray(s, dtype=float)
        total = 0.0
        for i in range(g.m):
            e = np.zeros(g.m)
            e[i] = 1.0
            tw = 0.5 * sigma(g, Z, e)
            for k, c in stencil:
                total = total + c * f(Z + k * h * e, s + k * h * tw)
        return -total / h ** 2

    return SampledFunction(func, f.decay)


def _field_sum(g, sd, f, w, kinds, h):
    total = 0.0 + 0.0j
    for j in range(sd.d):
        for kind in kinds:
            total += apply_field(g, sd, kind, f, w, h=h, j=j, power=2)
    return total


def sublaplacian_check(g, spectral, pt, side="left", samples=8, h=1e-4, seed=0):
    """Max relative residual of ``sum_j (X_j^2 + Y_j^2) Theta = mu Theta`` over sampled ``w``.

    Left-invariant fields give ``mu = -sum_j (2 m_j + 1) eta_j``, right-invariant
    ones ``-sum_j (2 n_j + 1) eta_j``.
    """
    from .frequency_space import unembed
    _require_regular(spectral)
    n, m = unembed(pt, spectral)
    if side == "left":
        kinds, idx = ("X", "Y"), m
    elif side == "right":
        kinds, idx = ("Xt", "Yt"), n
    else:
        raise ValueError("side must be 'left' or 'right'")
    mu = -float(np.sum((2 * idx + 1) * spectral.eta))

    def f(Z, s):
        return theta_kernel(pt, spectral, GroupElement(Z, s))

    rng = np.random.default_rng(seed)
    worst, scale = 0.0, 0.0
    for _ in range(samples):
        w = GroupElement(rng.uniform(-1, 1, g.m), rng.uniform(-1, 1, g.p))
        val = _field_sum(g, spectral, f, w, kinds, h)
        th = complex(np.asarray(f(w.Z[None], w.s[None]))[0])
        worst = max(worst, abs(val - mu * th))
        scale = max(scale, abs(mu * th))
    return worst / scale
