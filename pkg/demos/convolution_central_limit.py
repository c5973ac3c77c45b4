# Convolution theorem, and pairings converging to the boundary object G at lambda0 = 0.
import numpy as np

from nilfourier import (TransformQuadrature, builtin_group, central_limit_check, fourier_operator_matrix,
                        gauss_legendre_rule, group_convolve, separable, spectral_decompose)

g = builtin_group("heisenberg", 1)
quad = TransformQuadrature(gauss_legendre_rule(48, -8.0, 8.0), gauss_legendre_rule(48, -10.0, 10.0))
gauss_s = (lambda s: np.exp(-s[..., 0] ** 2 / 2), lambda l: np.sqrt(2 * np.pi) * np.exp(-l[0] ** 2 / 2))
f1 = separable(lambda Z: np.exp(-np.sum(Z * Z, -1) / 2) * (1 + Z[..., 0]), *gauss_s)
f2 = separable(lambda Z: np.exp(-np.sum((Z - [0.3, 0.0]) ** 2, -1) / 2), *gauss_s)
conv = group_convolve(g, f1, f2, quad)
sd = spectral_decompose(g, [1.0])
A, B, C = (fourier_operator_matrix(g, sd, f, 8, quad).entries for f in (f1, f2, conv))
print("|F(f1*f2) - F(f1)F(f2)|_F at lambda=1:", np.linalg.norm(C - A @ B))


def bump(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


mass = 0.44399381616807943  # integral of bump over [-1, 1]


def theta(a, b, lam):
    return bump((a[:, 0] - 3.0) / 2.0) * np.exp(-float(np.sum(np.asarray(b) ** 2))) * float(bump(np.atleast_1d(lam)[0] / 2))


res = central_limit_check(g, lambda Z: np.exp(-np.sum(Z * Z, -1) / 4), [0.0],
                          lambda z: 2 * np.pi * bump(z) / mass, 1.0, [0.4, 0.2, 0.1], theta,
                          b_range=2, a_max=6.0)
print("target:", res.target)
for eps, gap in zip(res.eps, res.gaps):
    print(f"eps={eps:<5} |pairing - target| = {gap:.4f}")
