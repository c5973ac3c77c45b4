"""Frequency space: combs of spacing 2 eta_j, their half-line limits and the measure mu^lambda."""

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .hermite import gauss_legendre_rule
from .spectral import spectral_decompose

MEMBER_TOL = 1e-9


class TruncationError(RuntimeError):
    """Raised when a truncated sum or integral has not converged."""


@dataclass(frozen=True, eq=False)
class FrequencyPoint:
    a: np.ndarray
    b: np.ndarray
    lam: np.ndarray
    classification: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", np.atleast_1d(np.asarray(self.a, dtype=float)))
        object.__setattr__(self, "b", np.atleast_1d(np.asarray(self.b, dtype=int)))
        object.__setattr__(self, "lam", np.atleast_1d(np.asarray(self.lam, dtype=float)))

    @property
    def d(self):
        return self.a.size

    def __repr__(self):
        return (f"FrequencyPoint(a={self.a.tolist()}, b={self.b.tolist()}, "
                f"lam={self.lam.tolist()}, {self.classification})")


def _classify(eta):
    return tuple("regular" if e > 0 else "boundary" for e in eta)


def comb_indices(a, b, eta, tol=MEMBER_TOL):
    """``(n, m)`` with ``a = eta (n + m)`` and ``b = m - n``, or ``None``."""
    q = a / eta
    n_f, m_f = (q - b) / 2.0, (q + b) / 2.0
    n, m = round(n_f), round(m_f)
    if abs(n_f - n) > tol * max(1.0, abs(q)) or abs(m_f - m) > tol * max(1.0, abs(q)):
        return None
    if n < 0 or m < 0:
        return None
    return int(n), int(m)


def is_member(spectral, a, b, tol=MEMBER_TOL):
    """The frequency point ``(a, b, lambda)`` if it lies in the space at ``spectral.lam``, else ``None``."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b))
    eta = spectral.eta
    if a.size != eta.size or b.size != eta.size:
        return None
    if np.any(a < 0) or np.any(b != np.round(b)):
        return None
    for aj, bj, ej in zip(a, b, eta):
        if ej > 0 and comb_indices(aj, int(bj), ej, tol) is None:
            return None
    return FrequencyPoint(a, b.astype(int), spectral.lam, _classify(eta))


def embed(n, m, spectral):
    """Frequency point of the Hermite pair ``(n, m)``: ``a = eta (n + m)``, ``b = m - n``."""
    n = np.atleast_1d(np.asarray(n, dtype=int))
    m = np.atleast_1d(np.asarray(m, dtype=int))
    if np.any(n < 0) or np.any(m < 0):
        raise ValueError("Hermite indices must be nonnegative")
    return FrequencyPoint(spectral.eta * (n + m), m - n, spectral.lam, _classify(spectral.eta))


def unembed(pt, spectral):
    """Hermite indices ``(n, m)`` of a point whose coordinates are all regular."""
    ns, ms = [], []
    for aj, bj, ej in zip(pt.a, pt.b, spectral.eta):
        if ej <= 0:
            raise ValueError("unembed needs regular coordinates")
        nm = comb_indices(aj, int(bj), ej)
        if nm is None:
            raise ValueError(f"a={aj}, b={bj} is not on the comb of width {2 * ej}")
        ns.append(nm[0])
        ms.append(nm[1])
    return np.array(ns), np.array(ms)


def rho_E(p1, p2):
    """Distance between ``(n, m, spectral)`` triples, i.e. between their embeddings."""
    (n1, m1, s1), (n2, m2, s2) = p1, p2
    n1, m1, n2, m2 = (np.atleast_1d(np.asarray(v, dtype=float)) for v in (n1, m1, n2, m2))
    da = s1.eta * (n1 + m1) - s2.eta * (n2 + m2)
    db = (n1 - m1) - (n2 - m2)
    dl = s1.lam - s2.lam
    return float(np.sqrt(np.sum(da ** 2) + np.sum(db ** 2) + np.sum(dl ** 2)))


def approach_sequence(g, target, lam_seq, tol=1e-10):
    """Comb points at each ``lambda(q)`` converging to ``target``.

    Regular coordinates keep their lower index ``h = (a - eta b) / (2 eta)``
    fixed. Boundary coordinates take the comb point nearest to ``a``, with
    ``h >= 0`` and ``2h + b >= 0``.
    """
    sd0 = spectral_decompose(g, target.lam, tol)
    out = []
    for lam in lam_seq:
        sd = spectral_decompose(g, lam, tol)
        if not sd.regular:
            raise ValueError(f"lambda={np.atleast_1d(lam).tolist()} has a vanishing frequency")
        a = np.empty(sd.d)
        for j in range(sd.d):
            aj, bj = float(target.a[j]), int(target.b[j])
            if sd0.eta[j] > 0:
                h = (aj / sd0.eta[j] - bj) / 2.0
                h = int(round(h))
            else:
                h = max(math.floor((aj / sd.eta[j] - bj) / 2.0 + 0.5), 0, -bj)
            a[j] = sd.eta[j] * (2 * h + bj)
        out.append(FrequencyPoint(a, target.b, sd.lam, _classify(sd.eta)))
    return out


def _eval(theta, a):
    try:
        val = np.asarray(theta(a))
    except TypeError:
        val = None
    if val is None or val.shape != a.shape:
        val = np.array([theta(float(t)) for t in a])
    return val


def _comb_sum(theta, eta, b, lo, hi):
    """``2 eta sum theta(a)`` over comb points with ``lo < a <= hi`` (``hi`` may be inf)."""
    base = eta * abs(b)
    n0 = 0 if lo < base else math.floor((lo - base) / (2 * eta)) + 1
    total = 0.0 + 0.0j
    chunk = max(1024, int(math.ceil(8.0 / eta)))
    last = 0.0
    while True:
        n = np.arange(n0, n0 + chunk)
        a = base + 2 * eta * n
        a = a[a <= hi]
        if a.size == 0:
            break
        part = 2 * eta * np.sum(_eval(theta, a))
        total += part
        n0 += chunk
        last = abs(part)
        if math.isinf(hi) and last <= 1e-17 * max(abs(total), 1e-300):
            break
        if n0 > 10 ** 9:
            raise TruncationError("comb sum did not converge")
    return total, last


def integrate_mu_j(theta, eta, b, a_max=math.inf):
    """Integral of ``theta`` against the one-coordinate measure ``mu_{j,b}``.

    For ``eta > 0`` this is ``2 eta sum theta(eta (2n + |b|))`` over the comb,
    for ``eta == 0`` the Lebesgue integral over ``[0, a_max]``. Returns
    ``(value, tail)`` where ``tail`` estimates the part cut off beyond ``a_max``.
    """
    if a_max <= 0:
        raise ValueError("a_max must be positive")
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    if eta > 0:
        value, last = _comb_sum(theta, eta, b, -1.0, a_max)
        if math.isinf(a_max):
            tail = last
        else:
            tail = abs(_comb_sum(theta, eta, b, a_max, 2 * a_max)[0])
        return complex(value), float(tail)
    def f(t):
        return complex(_eval(theta, np.array([t]))[0])

    value, err = integrate.quad(f, 0.0, a_max, complex_func=True, epsabs=1e-14, epsrel=1e-13, limit=400)
    if math.isinf(a_max):
        tail = abs(err)
    else:
        tail = abs(integrate.quad(f, a_max, 2 * a_max, complex_func=True, limit=400)[0])
    return complex(value), float(tail)


def mu_rule_1d(eta, b, a_max, lebesgue_nodes=16):
    """Nodes and weights realizing ``mu_{j,b}`` on ``[0, a_max]`` for tensor products."""
    if eta > 0:
        base = eta * abs(b)
        if base > a_max:
            return np.zeros(0), np.zeros(0)
        n = np.arange(0, math.floor((a_max - base) / (2 * eta)) + 1)
        a = base + 2 * eta * n
        return a, np.full(a.size, 2 * eta)
    rule = gauss_legendre_rule(lebesgue_nodes, 0.0, a_max, panels=max(8, math.ceil(a_max)))
    return rule.nodes, rule.weights


def integrate_mu(theta, spectral, b_range, a_max, lebesgue_nodes=16):
    """``sum_b int theta(a, b, lambda) dmu^lambda(a)`` at one ``lambda``.

    ``theta(a, b, lam)`` receives ``a`` of shape ``(N, d)``. Returns
    ``(value, shell)``, ``shell`` being the contribution of the outermost
    ``|b|_inf = b_range`` layer.
    """
    d = spectral.d
    total = 0.0 + 0.0j
    shell = 0.0 + 0.0j
    for b in itertools.product(range(-b_range, b_range + 1), repeat=d):
        rules = [mu_rule_1d(spectral.eta[j], b[j], a_max, lebesgue_nodes) for j in range(d)]
        if any(r[0].size == 0 for r in rules):
            continue
        grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
        wts = np.ones(grids[0].shape)
        for j, r in enumerate(rules):
            shape = [1] * d
            shape[j] = -1
            wts = wts * r[1].reshape(shape)
        a = np.stack([gr.ravel() for gr in grids], axis=-1)
        part = np.sum(wts.ravel() * np.asarray(theta(a, np.array(b), spectral.lam)))
        total += part
        if d and max(abs(v) for v in b) == b_range:
            shell += part
    return complex(total), float(abs(shell))


def integrate_ghat(theta, g, lam_rule, b_range, a_max, tail_rtol=1e-2, lebesgue_nodes=16):
    """``int dlambda sum_b int theta dmu^lambda`` with the outer rule ``lam_rule``.

    ``lam_rule`` is one-dimensional and is tensorized over the ``p`` central
    directions. Raises :class:`TruncationError` when the outer ``b`` shell or the
    ``a_max`` cut carries more than ``tail_rtol`` of the result.
    """
    nodes = np.array(list(itertools.product(lam_rule.nodes, repeat=g.p)))
    weights = np.prod(np.array(list(itertools.product(lam_rule.dx_weights, repeat=g.p))), axis=1)
    total = 0.0 + 0.0j
    tail = 0.0
    for lam, w in zip(nodes, weights):
        sd = spectral_decompose(g, lam)
        value, shell = integrate_mu(theta, sd, b_range, a_max, lebesgue_nodes)
        beyond = abs(integrate_mu(theta, sd, b_range, 2 * a_max, lebesgue_nodes)[0] - value)
        total += w * value
        tail += abs(w) * (shell + beyond)
    if tail > tail_rtol * max(abs(total), 1e-300) and tail > 1e-300:
        raise TruncationError(f"tail estimate {tail:.3g} too large relative to {abs(total):.3g}")
    return complex(total), float(tail)
