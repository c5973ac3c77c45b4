"""Frequencies eta_j(lambda) and the adapted basis of U^(lambda)."""

from dataclasses import dataclass

import numpy as np

from .group_model import u_lambda

DEFAULT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Spectral data of ``U^(lambda)`` at one ``lambda``.

    ``basis`` columns are ``(x_1..x_d, y_1..y_d, r_1..r_t)`` and
    ``basis.T @ U @ basis`` is ``[[0, eta, 0], [-eta, 0, 0], [0, 0, 0]]``.
    """

    lam: np.ndarray
    eta: np.ndarray
    basis: np.ndarray
    rank: int
    pfaffian: float

    @property
    def d(self):
        return self.eta.size

    @property
    def regular(self):
        return bool(np.all(self.eta > 0))

    def block_form(self):
        m = self.basis.shape[0]
        d = self.d
        B = np.zeros((m, m))
        B[:d, d:2 * d] = np.diag(self.eta)
        B[d:2 * d, :d] = -np.diag(self.eta)
        return B

    def to_adapted(self, Z):
        """Coordinates of ``Z`` (last axis) in the adapted basis."""
        return np.asarray(Z) @ self.basis

    def from_adapted(self, z):
        return np.asarray(z) @ self.basis.T


def _positive_modes(A, tol):
    """Eigenpairs ``mu > 0`` of the Hermitian matrix ``iA``, largest first."""
    try:
        mu, V = np.linalg.eigh(1j * A)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError("eigensolver did not converge") from exc
    order = np.argsort(-mu, kind="stable")
    mu, V = mu[order], V[:, order]
    scale = max(1.0, np.linalg.norm(A, 2))
    keep = mu > tol * scale
    return mu[keep], V[:, keep], scale


def _fix_phase(v):
    # largest-modulus entry made real positive; lowest index wins ties
    k = int(np.argmax(np.round(np.abs(v), 12)))
    return v * (np.conj(v[k]) / abs(v[k]))


def spectral_decompose(g, lam, tol=DEFAULT_TOL, d=None):
    """Eigenvalues ``eta_1 >= .. >= eta_d`` and an adapted orthonormal basis.

    Zero frequencies (rank drop) are padded so ``eta`` always has length ``d``,
    the group's generic half-rank.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    A = u_lambda(g, lam)
    if d is None:
        d = g.d
    mu, V, scale = _positive_modes(A, tol)
    k = mu.size
    xs, ys = [], []
    for i in range(k):
        v = _fix_phase(V[:, i])
        xs.append(np.sqrt(2.0) * v.imag)
        ys.append(np.sqrt(2.0) * v.real)
    basis_cols = xs + ys
    if k:
        Q = np.column_stack(basis_cols)
        # re-orthonormalize against rounding without mixing the pairs
        Q, R = np.linalg.qr(Q)
        Q = Q * np.sign(np.diag(R))
    else:
        Q = np.zeros((g.m, 0))
    # kernel of A, completed deterministically from the standard basis
    P = np.eye(g.m) - Q @ Q.T
    rest = []
    for e in P.T:
        for r in rest:
            e = e - np.dot(r, e) * r
        nrm = np.linalg.norm(e)
        if nrm > 1e-8:
            rest.append(e / nrm)
        if len(rest) == g.m - 2 * k:
            break
    rest = np.array(rest).reshape(-1, g.m).T
    eta = np.zeros(max(d, k))
    eta[:k] = mu
    # pad: x_j, y_j for the zero frequencies come from the kernel vectors
    n_pad = eta.size - k
    pad_x, pad_y, r_cols = rest[:, :n_pad], rest[:, n_pad:2 * n_pad], rest[:, 2 * n_pad:]
    basis = np.column_stack([Q[:, :k], pad_x, Q[:, k:], pad_y, r_cols])
    basis.setflags(write=False)
    eta.setflags(write=False)
    return SpectralData(lam, eta, basis, 2 * k, float(np.prod(eta)) if eta.size else 0.0)


def generic_rank(g, n_samples=16, tol=DEFAULT_TOL, seed=0):
    """Maximal rank of ``U^(lambda)`` over seeded random unit ``lambda``."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    best = 0
    for _ in range(n_samples):
        lam = rng.standard_normal(g.p)
        lam /= np.linalg.norm(lam)
        mu, _, _ = _positive_modes(u_lambda(g, lam), tol)
        best = max(best, 2 * mu.size)
    return best


def block_residual(g, sd):
    """``max |basis^T U basis - block|``."""
    A = u_lambda(g, sd.lam)
    return float(np.max(np.abs(sd.basis.T @ A @ sd.basis - sd.block_form())))
