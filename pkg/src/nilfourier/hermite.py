"""Hermite functions, ladder operators and the quadrature rules used throughout."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.legendre import leggauss

PI_M14 = np.pi ** -0.25

KINDS = ("gauss-hermite", "gauss-legendre", "trapezoid-periodic", "uniform-box")


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights of a one-dimensional rule.

    For ``gauss-hermite`` the stored weights are the classical ones, exact for
    ``e^{-x^2}`` times polynomials; :attr:`dx_weights` turns them into weights
    for plain ``dx`` integration.
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    dx_weights: np.ndarray = None

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1D arrays of equal length")
        if self.kind not in KINDS:
            raise ValueError(f"unknown rule kind {self.kind!r}")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if self.dx_weights is None:
            object.__setattr__(self, "dx_weights", weights)
        for arr in (self.nodes, self.weights, self.dx_weights):
            arr.setflags(write=False)

    def __len__(self):
        return self.nodes.size

    def integrate(self, f):
        """Approximate the integral of ``f`` against ``dx``."""
        return np.sum(self.dx_weights * f(self.nodes), axis=-1)

    def integrate_weighted(self, g):
        """Approximate the integral of ``g`` against the rule's own weight."""
        return np.sum(self.weights * g(self.nodes), axis=-1)

    def scaled(self, center=0.0, scale=1.0):
        """Rule for the variable ``center + scale * x``, plain ``dx`` weights."""
        return QuadratureRule(center + scale * self.nodes, abs(scale) * self.dx_weights,
                              "uniform-box" if self.kind == "uniform-box" else "gauss-legendre")


def hermite_table(nmax, x):
    """All normalized Hermite functions ``H_0 .. H_nmax`` at ``x``.

    Returns an array of shape ``(nmax + 1,) + x.shape``.
    """
    if nmax < 0:
        raise ValueError("nmax must be nonnegative")
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = PI_M14 * np.exp(-0.5 * x * x)
    if nmax >= 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for k in range(1, nmax):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * x * out[k] - np.sqrt(k / (k + 1)) * out[k - 1]
    return out


def hermite_eval(n, x):
    """L²-normalized Hermite function ``H_n`` evaluated by the three-term recurrence."""
    if n < 0:
        raise ValueError("Hermite degree must be nonnegative")
    x = np.asarray(x, dtype=float)
    h0 = PI_M14 * np.exp(-0.5 * x * x)
    if n == 0:
        return h0 if h0.ndim else float(h0)
    h1 = np.sqrt(2.0) * x * h0
    for k in range(1, n):
        h0, h1 = h1, np.sqrt(2.0 / (k + 1)) * x * h1 - np.sqrt(k / (k + 1)) * h0
    return h1 if h1.ndim else float(h1)


def rescaled_hermite_eval(n, eta, x):
    """``eta^{1/4} H_n(sqrt(eta) x)``, eigenfunction of ``-d² + eta² x²``.

    ``eta`` and ``x`` may be sequences (one entry per coordinate); the result
    is then the tensor product over coordinates.
    """
    eta_arr = np.atleast_1d(np.asarray(eta, dtype=float))
    if np.any(eta_arr <= 0):
        raise ValueError("eta must be positive")
    n_arr = np.atleast_1d(n)
    if eta_arr.size == 1 and n_arr.size == 1:
        e = float(eta_arr[0])
        return e ** 0.25 * hermite_eval(int(n_arr[0]), np.sqrt(e) * np.asarray(x, dtype=float))
    x = np.asarray(x, dtype=float)
    val = 1.0
    for j, (nj, ej) in enumerate(zip(n_arr, eta_arr)):
        val = val * ej ** 0.25 * hermite_eval(int(nj), np.sqrt(ej) * x[..., j])
    return val


@dataclass(frozen=True, eq=False)
class CoeffVector:
    """Finite Hermite expansion ``sum_n coeffs[n] H_n``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs))
        if c.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def basis(cls, n, length=None):
        c = np.zeros(max(n + 1, length or 0))
        c[n] = 1.0
        return cls(c)

    @property
    def max_degree(self):
        return self.coeffs.size - 1

    def norm(self):
        return float(np.linalg.norm(self.coeffs))

    def dot(self, other):
        """L² pairing ``(self | other)``, linear in the first slot."""
        k = min(self.coeffs.size, other.coeffs.size)
        return np.dot(self.coeffs[:k], np.conj(other.coeffs[:k]))

    def evaluate(self, x):
        tab = hermite_table(self.max_degree, x)
        return np.tensordot(self.coeffs, tab, axes=(0, 0))


def ladder_apply(kind, v):
    """Apply ``create``, ``annihilate``, ``multiply`` (by x) or ``differentiate``."""
    c = v.coeffs
    n = np.arange(c.size)
    out = np.zeros(c.size + 1, dtype=np.result_type(c, float))
    if kind == "create":
        out[1:] = np.sqrt(2.0 * (n + 1)) * c
    elif kind == "annihilate":
        out[:-2] = np.sqrt(2.0 * n[1:]) * c[1:]
    elif kind in ("multiply", "differentiate"):
        sign = 1.0 if kind == "multiply" else -1.0
        out[:-2] += np.sqrt(n[1:] / 2.0) * c[1:]
        out[1:] += sign * np.sqrt((n + 1) / 2.0) * c
    else:
        raise ValueError(f"unknown ladder operation {kind!r}")
    return CoeffVector(out)


def norm_bound(n, ell):
    """Upper bound ``(2n + 2 ell)^{ell/2}`` for ``|M^ell H_n|`` and ``|H_n^(ell)|``."""
    if n < 0 or ell < 0:
        raise ValueError("n and ell must be nonnegative")
    if ell == 0:
        return 1.0
    return float((2 * n + 2 * ell) ** (ell / 2))


@lru_cache(maxsize=64)
def gauss_hermite_rule(N):
    """N-node Gauss-Hermite rule; ``dx_weights`` come from the Christoffel function.

    Using ``1 / sum_{k<N} H_k(x_i)^2`` instead of ``w_i e^{x_i^2}`` avoids
    overflow for large N.
    """
    if N <= 0:
        raise ValueError("number of nodes must be positive")
    try:
        x, w = hermgauss(N)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"Gauss-Hermite eigensolver failed for N={N}") from exc
    tab = hermite_table(N - 1, x)
    dxw = 1.0 / np.sum(tab * tab, axis=0)
    return QuadratureRule(x, w, "gauss-hermite", dxw)


@lru_cache(maxsize=64)
def _leggauss(N):
    return leggauss(N)


def gauss_legendre_rule(N, lo=-1.0, hi=1.0, panels=1):
    """Composite Gauss-Legendre rule on ``[lo, hi]`` with ``panels`` equal pieces."""
    if N <= 0 or panels <= 0:
        raise ValueError("N and panels must be positive")
    if not hi > lo:
        raise ValueError("need lo < hi")
    t, w = _leggauss(N)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return QuadratureRule(nodes, weights, "gauss-legendre")


def trapezoid_rule(N):
    """Periodic trapezoid rule on ``[-pi, pi)``."""
    if N <= 0:
        raise ValueError("number of nodes must be positive")
    nodes = -np.pi + 2.0 * np.pi * np.arange(N) / N
    return QuadratureRule(nodes, np.full(N, 2.0 * np.pi / N), "trapezoid-periodic")


def uniform_box_rule(N, lo, hi):
    """Midpoint rule with N cells on ``[lo, hi]``."""
    if N <= 0:
        raise ValueError("number of nodes must be positive")
    h = (hi - lo) / N
    return QuadratureRule(lo + h * (np.arange(N) + 0.5), np.full(N, h), "uniform-box")
