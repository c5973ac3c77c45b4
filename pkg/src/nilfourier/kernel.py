"""Fourier kernels W (regular frequencies) and K (collapsed frequencies).

Conventions used throughout: ``b = m - n`` and ``a = eta (n + m)``. The
symmetric kernel is

    W(n, m, eta, x, y) = int e^{i eta xi y} H_{m,eta}(xi + x/2) H_{n,eta}(xi - x/2) dxi

and the shifted one ``W~ = e^{-(i/2) eta x y} W`` puts the whole shift on the
``m`` factor. As ``eta -> 0`` with ``a`` and ``b`` fixed, ``W`` tends to

    K(a, x, y, b) = (1/2pi) int_{-pi}^{pi} e^{-i sqrt(a) (x sin z - y cos z)} e^{i b z} dz
                  = e^{i b atan2(y, x)} J_b(sqrt(a) r).
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .frequency_space import TruncationError, comb_indices
from .hermite import CoeffVector, gauss_hermite_rule, gauss_legendre_rule, hermite_table, ladder_apply

MAX_TERMS = 128


@dataclass(frozen=True, eq=False)
class KernelPoint1D:
    """One coordinate of a frequency point together with the spatial pair ``(x, y)``.

    ``x`` and ``y`` may be arrays of a common shape.
    """

    a: float
    b: int
    eta: float
    x: object = 0.0
    y: object = 0.0

    def __post_init__(self):
        if self.a < 0 or self.eta < 0:
            raise ValueError("a and eta must be nonnegative")
        if self.eta > 0 and comb_indices(self.a, int(self.b), self.eta) is None:
            raise ValueError(f"(a={self.a}, b={self.b}) is not on the comb of width {2 * self.eta}")

    @classmethod
    def from_indices(cls, n, m, eta, x=0.0, y=0.0):
        return cls(eta * (n + m), m - n, eta, x, y)

    @property
    def regular(self):
        return self.eta > 0

    @property
    def nm(self):
        return comb_indices(self.a, int(self.b), self.eta)


# ---------------------------------------------------------------- coefficients

@lru_cache(maxsize=None)
def f_coeff(l1, l2, k):
    """Alternating binomial double sum ``F_{l1,l2}(k)``."""
    if l1 < 0 or l2 < 0:
        raise ValueError("l1 and l2 must be nonnegative")
    total = 0
    for i in range(l1 + 1):
        for j in range(l2 + 1):
            if 2 * (i + j) == k + l1 + l2:
                total += math.comb(l1, i) * math.comb(l2, j) * (-1) ** j
    return total


def _ladder_rows(kind, n, L):
    """Rows ``op^l e_n`` for ``l = 0..L`` padded to a common length."""
    rows = np.zeros((L + 1, n + L + 1))
    v = CoeffVector.basis(n)
    rows[0, :n + 1] = v.coeffs
    for ell in range(1, L + 1):
        v = ladder_apply(kind, v)
        rows[ell, :v.coeffs.size] = v.coeffs[:n + L + 1]
    return rows


def _h_matrix(n, m, eta, L1, L2):
    """``eta^{(l1+l2)/2} (M^l1 H_n | H_m^(l2))`` for ``l1 <= L1``, ``l2 <= L2``."""
    P = _ladder_rows("multiply", n, L1)
    D = _ladder_rows("differentiate", m, L2)
    k = min(P.shape[1], D.shape[1])
    G = P[:, :k] @ D[:, :k].T
    scale = eta ** (0.5 * np.arange(L1 + 1))[:, None] * eta ** (0.5 * np.arange(L2 + 1))[None, :]
    return G * scale


def h_coeff(l1, l2, pt):
    """Series coefficient ``H_{l1,l2}`` of the shifted kernel at ``pt``.

    Regular points use exact ladder algebra. Collapsed points (``eta == 0``)
    use the limit ``(-1)^{l2} (a/4)^{(l1+l2)/2} F_{l1,l2}(b)``.
    """
    if pt.eta > 0:
        n, m = pt.nm
        return float(_h_matrix(n, m, pt.eta, l1, l2)[l1, l2])
    return (-1) ** l2 * (pt.a / 4.0) ** ((l1 + l2) / 2.0) * f_coeff(l1, l2, int(pt.b))


# ---------------------------------------------------------------- truncation

def _log_series_weights(c, norms):
    """log of ``c^l norms[l] / l!``; ``-inf`` where the term vanishes."""
    ell = np.arange(norms.size, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(ell > 0, ell * np.log(c) if c > 0 else -np.inf, 0.0)
        out = out + np.log(norms) - gammaln(ell + 1)
    return np.where(np.isnan(out), -np.inf, out)


def _cutoffs(logp, logq, tol):
    """Smallest ``(L1, L2)`` whose tail bound for ``sum p_i q_j`` is <= tol."""
    p, q = np.exp(logp), np.exp(logq)
    P, Q = p.sum(), q.sum()
    tp = np.cumsum(p[::-1])[::-1]
    tq = np.cumsum(q[::-1])[::-1]
    L1 = L2 = None
    for L in range(p.size - 1):
        if tp[L + 1] * Q <= 0.5 * tol:
            L1 = L
            break
    for L in range(q.size - 1):
        if tq[L + 1] * P <= 0.5 * tol:
            L2 = L
            break
    if L1 is None or L2 is None or L1 > MAX_TERMS or L2 > MAX_TERMS:
        raise TruncationError(f"series tolerance {tol} not reachable within {MAX_TERMS} terms per index")
    bound = tp[L1 + 1] * Q + tq[L2 + 1] * P
    return L1, L2, float(bound)


def _power_table(z, L):
    """``z^l / l!`` for ``l <= L`` along a new last axis."""
    ell = np.arange(L + 1)
    out = np.empty(z.shape + (L + 1,), dtype=np.result_type(z, float))
    out[..., 0] = 1.0
    for l in range(1, L + 1):
        out[..., l] = out[..., l - 1] * z / l
    return out


def _w_series(n, m, eta, x, y, tol, symmetric):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    se = math.sqrt(eta)
    ymax = float(np.max(np.abs(y), initial=0.0))
    xmax = float(np.max(np.abs(x), initial=0.0))
    # Cauchy-Schwarz: |H_{l1,l2}| <= eta^{(l1+l2)/2} |M^l1 H_n| |H_m^(l2)|, with the
    # norms taken exactly from the ladder rows (they sit below norm_bound)
    Lmax = MAX_TERMS + 32
    P = _ladder_rows("multiply", n, Lmax)
    D = _ladder_rows("differentiate", m, Lmax)
    logp = _log_series_weights(se * ymax, np.linalg.norm(P, axis=1))
    logq = _log_series_weights(se * xmax, np.linalg.norm(D, axis=1))
    L1, L2, bound = _cutoffs(logp, logq, tol)
    k = min(P.shape[1], D.shape[1])
    G = P[:L1 + 1, :k] @ D[:L2 + 1, :k].T
    G *= eta ** (0.5 * (np.arange(L1 + 1)[:, None] + np.arange(L2 + 1)[None, :]))
    A = _power_table(1j * y, L1)
    C = _power_table(x, L2)
    val = np.einsum("...i,ij,...j->...", A, G, C)
    if symmetric:
        val = val * np.exp(0.5j * eta * x * y)
    return val, bound


def _w_direct(n, m, eta, x, y, symmetric, nodes=None):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    se = math.sqrt(eta)
    omega = se * float(np.max(np.abs(y), initial=0.0))
    if nodes is None:
        nodes = int(min(1024, 48 + (n + m) + 4 * omega ** 2))

    def quad(N):
        rule = gauss_hermite_rule(N)
        u = rule.nodes
        c = 0.5 * se * x[..., None]
        top = max(n, m)
        Hp = hermite_table(top, u + c)[m]
        Hm = hermite_table(top, u - c)[n]
        phase = np.exp(1j * se * y[..., None] * u)
        return np.sum(rule.dx_weights * phase * Hp * Hm, axis=-1)

    val = quad(nodes)
    err = np.max(np.abs(val - quad(nodes + 16)), initial=0.0)
    if not symmetric:
        val = val * np.exp(-0.5j * eta * x * y)
    return val, float(err)


def laguerre_psi(nmax, k, t):
    """``sqrt(n!/(n+k)!) L_n^(k)(t) t^{k/2} e^{-t/2}`` for ``n = 0..nmax``.

    Forward three-term recurrence in ``n`` on the normalized functions, so the
    factorials never appear.
    """
    t = np.asarray(t, dtype=float)
    out = np.empty((nmax + 1,) + t.shape)
    with np.errstate(divide="ignore"):
        logt = np.log(t)
    if k == 0:
        out[0] = np.exp(-0.5 * t)
    else:
        out[0] = np.where(t > 0, np.exp(0.5 * k * logt - 0.5 * t - 0.5 * gammaln(k + 1)), 0.0)
    if nmax >= 1:
        out[1] = (1 + k - t) * out[0] / math.sqrt(k + 1)
    for n in range(1, nmax):
        a1 = math.sqrt((n + 1) * (n + k + 1))
        a0 = math.sqrt(n * (n + k) / ((n + 1) * (n + k + 1)))
        out[n + 1] = (2 * n + k + 1 - t) * out[n] / a1 - a0 * out[n - 1]
    return out


def _w_laguerre(n, m, eta, x, y, symmetric):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    X, Y = math.sqrt(eta) * x, math.sqrt(eta) * y
    t = 0.5 * (X * X + Y * Y)
    phi = np.arctan2(Y, X)
    k = abs(m - n)
    lo = min(n, m)
    psi = laguerre_psi(lo, k, t)[lo]
    if m >= n:
        val = psi * np.exp(1j * k * phi)
    else:
        val = (-1) ** k * psi * np.exp(-1j * k * phi)
    if not symmetric:
        val = val * np.exp(-0.5j * eta * x * y)
    return val


def w_table(N, eta, x, y):
    """Symmetric ``W(n, m)`` for all ``n, m <= N``; shape ``(N+1, N+1) + x.shape``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    X, Y = math.sqrt(eta) * x, math.sqrt(eta) * y
    t = 0.5 * (X * X + Y * Y)
    e = np.exp(1j * np.arctan2(Y, X))
    out = np.empty((N + 1, N + 1) + x.shape, dtype=complex)
    for k in range(N + 1):
        psi = laguerre_psi(N - k, k, t)
        ek = e ** k
        for n in range(N - k + 1):
            out[n, n + k] = psi[n] * ek
            if k:
                out[n + k, n] = (-1) ** k * psi[n] * np.conj(ek)
    return out


def kernel_w(n, m, eta, x, y, method="laguerre", tol=1e-12, symmetric=True, return_error=False):
    """Array-level ``W(n, m, eta, x, y)``.

    ``method`` is ``"laguerre"`` (closed form), ``"series"`` (double Taylor
    series, tail bounded by exact ladder norms) or ``"direct"`` (Gauss-Hermite
    quadrature of the defining integral).
    """
    if eta <= 0:
        raise ValueError("kernel_w needs eta > 0; use kernel_k for collapsed frequencies")
    if n < 0 or m < 0:
        raise ValueError("Hermite indices must be nonnegative")
    if method == "series":
        val, err = _w_series(n, m, eta, x, y, tol, symmetric)
    elif method == "direct":
        val, err = _w_direct(n, m, eta, x, y, symmetric)
    elif method == "laguerre":
        val, err = _w_laguerre(n, m, eta, x, y, symmetric), 0.0
    else:
        raise ValueError(f"unknown method {method!r}")
    if np.ndim(val) == 0:
        val = complex(val)
    return (val, err) if return_error else val


def kernel_w_1d(pt, method="series", tol=1e-12, symmetric=True, return_error=False):
    """Kernel at a :class:`KernelPoint1D`; collapsed points (``eta == 0``) give ``K``."""
    if pt.eta == 0:
        if method == "direct":
            raise ValueError("direct quadrature needs a regular point")
        kmethod = "series" if method == "series" else "polar"
        return kernel_k(pt.a, pt.x, pt.y, int(pt.b), method=kmethod, tol=tol, return_error=return_error)
    n, m = pt.nm
    return kernel_w(n, m, pt.eta, pt.x, pt.y, method=method, tol=tol, symmetric=symmetric,
                    return_error=return_error)


# ---------------------------------------------------------------- boundary kernel

def bessel_j(b, rho, nodes=None):
    """Integer-order Bessel function from ``(1/pi) int_0^pi cos(b tau - rho sin tau) dtau``."""
    rho = np.asarray(rho, dtype=float)
    if nodes is None:
        nodes = 48 + int(abs(b) + 1.5 * float(np.max(np.abs(rho), initial=0.0)))
    rule = gauss_legendre_rule(nodes, 0.0, np.pi)
    tau = rule.nodes
    val = np.cos(b * tau - rho[..., None] * np.sin(tau)) @ rule.weights / np.pi
    return val if val.ndim else float(val)


def _k_series(a, x, y, b, tol):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sa = math.sqrt(a)
    ymax = float(np.max(np.abs(y), initial=0.0))
    xmax = float(np.max(np.abs(x), initial=0.0))
    # |F_{l1,l2}| <= 2^{l1+l2}: plain exponential-series majorant per index
    ones = np.ones(MAX_TERMS + 32)
    logp = _log_series_weights(sa * ymax, ones)
    logq = _log_series_weights(sa * xmax, ones)
    L1, L2, bound = _cutoffs(logp, logq, tol)
    G = np.array([[(-1) ** l2 * f_coeff(l1, l2, b) for l2 in range(L2 + 1)] for l1 in range(L1 + 1)],
                 dtype=float)
    G *= (0.5 * sa) ** (np.arange(L1 + 1)[:, None] + np.arange(L2 + 1)[None, :])
    A = _power_table(1j * y, L1)
    C = _power_table(x, L2)
    return np.einsum("...i,ij,...j->...", A, G, C), bound


def _k_integral(a, x, y, b, tol, nodes):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sa = math.sqrt(a)

    def trap(N):
        z = -np.pi + 2 * np.pi * np.arange(N) / N
        ph = np.exp(-1j * sa * (x[..., None] * np.sin(z) - y[..., None] * np.cos(z)) + 1j * b * z)
        return ph.mean(axis=-1)

    N = nodes
    val = trap(N)
    if tol is None:
        return val, float("nan")
    for _ in range(8):
        nxt = trap(2 * N)
        err = float(np.max(np.abs(nxt - val), initial=0.0))
        val, N = nxt, 2 * N
        if err <= tol:
            return val, err
    raise TruncationError(f"trapezoid rule did not reach {tol} with {N} nodes")


def _k_polar(a, x, y, b):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    rho = math.sqrt(a) * np.hypot(x, y)
    return np.exp(1j * b * np.arctan2(y, x)) * bessel_j(b, rho)


def kernel_k(a, x, y, b, method="integral", tol=1e-12, nodes=256, return_error=False):
    """Collapsed-frequency kernel ``K(a, x, y, b)``.

    ``"integral"``: periodic trapezoid rule, doubling ``nodes`` until two
    successive values agree to ``tol`` (``tol=None`` uses ``nodes`` as is).
    ``"series"``: Taylor series with factorial tail bound. ``"polar"``:
    ``e^{ib phi} J_b(sqrt(a) r)`` with ``J_b`` from its integral representation.
    """
    if a < 0:
        raise ValueError("a must be nonnegative")
    b = int(b)
    if method == "integral":
        val, err = _k_integral(a, x, y, b, tol, nodes)
    elif method == "series":
        val, err = _k_series(a, x, y, b, tol)
    elif method == "polar":
        val, err = _k_polar(a, x, y, b), 0.0
    else:
        raise ValueError(f"unknown method {method!r}")
    if np.ndim(val) == 0:
        val = complex(val)
    return (val, err) if return_error else val


def ktilde(a, x, y, z):
    """``e^{-i sqrt(a) (x sin z - y cos z)}``, the generating function of ``K`` in ``b``."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    return np.exp(-1j * math.sqrt(a) * (np.asarray(x) * np.sin(z) - np.asarray(y) * np.cos(z)))


def ktilde_synthesis(a, x, y, z, B, method="polar"):
    """Truncated Fourier synthesis ``sum_{|b|<=B} K(a, x, y, b) e^{-ibz}``."""
    z = np.asarray(z, dtype=float)
    total = np.zeros(z.shape, dtype=complex)
    for b in range(-B, B + 1):
        total = total + kernel_k(a, x, y, b, method=method) * np.exp(-1j * b * z)
    return total


# ---------------------------------------------------------------- Theta

def theta_kernel(pt, spectral, w, method="laguerre", adapted=False):
    """``Theta(w^, w) = e^{i <lambda, s>} prod_j kernel_j(x_j, y_j)``.

    ``w`` is a :class:`GroupElement` whose ``Z`` and ``s`` may carry leading
    batch axes. Coordinates are converted to the adapted basis of ``spectral``
    unless ``adapted`` is true.
    """
    Z = np.asarray(w.Z, dtype=float)
    s = np.asarray(w.s, dtype=float)
    z = Z if adapted else spectral.to_adapted(Z)
    d = spectral.d
    val = np.exp(1j * (s @ spectral.lam))
    for j in range(d):
        xj, yj = z[..., j], z[..., d + j]
        eta = float(spectral.eta[j])
        if eta > 0:
            nm = comb_indices(float(pt.a[j]), int(pt.b[j]), eta)
            if nm is None:
                raise ValueError(f"coordinate {j} of {pt} is not on the comb")
            val = val * kernel_w(nm[0], nm[1], eta, xj, yj, method=method)
        else:
            val = val * kernel_k(float(pt.a[j]), xj, yj, int(pt.b[j]), method="polar")
    return val


# ---------------------------------------------------------------- lattice operators

def delta_hat_apply(theta, pt):
    """``(-Delta^ theta)(a, b)``, the three-point lattice operator at a regular point.

    ``theta(a, b)`` is evaluated at ``a`` and ``a +- 2 eta``; the lower
    neighbour is skipped when its weight vanishes (bottom of the comb).
    """
    a, b, eta = float(pt.a), int(pt.b), float(pt.eta)
    if eta <= 0:
        raise ValueError("delta_hat_apply needs a regular point")
    lo = a * a - eta * eta * b * b
    if lo < -1e-9 * max(1.0, a * a):
        raise ValueError("a^2 < eta^2 b^2")
    r1 = math.sqrt(max(lo, 0.0))
    r2 = math.sqrt((a + 2 * eta) ** 2 - eta * eta * b * b)
    val = 2 * (a + eta) * theta(a, b) - r2 * theta(a + 2 * eta, b)
    if r1 > 1e-12 * max(1.0, a):
        val = val - r1 * theta(a - 2 * eta, b)
    return val / eta ** 2


def delta_hat0_apply(theta, a, b, derivs=None, h=None):
    """``-4a theta'' - 4 theta' + (b^2/a) theta`` at ``a > 0``.

    ``derivs=(d1, d2)`` supplies the derivatives; otherwise 4th-order central
    differences with step ``h`` are used.
    """
    if a <= 0:
        raise ValueError("a must be positive")
    f0 = theta(a, b)
    if derivs is not None:
        d1, d2 = derivs
    else:
        if h is None:
            h = 1e-3 * max(1.0, a)
        h = min(h, a / 3)
        fm2, fm1, fp1, fp2 = (theta(a + k * h, b) for k in (-2, -1, 1, 2))
        d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
        d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    return -4 * a * d2 - 4 * d1 + (b * b / a) * f0
