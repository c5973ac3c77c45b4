# Operator-valued Fourier transform on the Heisenberg group and the Plancherel ratio.
import numpy as np

from nilfourier import (TransformQuadrature, builtin_group, fourier_coeff, fourier_operator_matrix,
                        gauss_legendre_rule, plancherel_check, separable, spectral_decompose)
from nilfourier.transform import plancherel_constant

g = builtin_group("heisenberg", 1)
sd = spectral_decompose(g, [1.0])

# Gaussian in both variables: closed-form (0,0) coefficient
f = separable(lambda Z: np.exp(-np.sum(Z * Z, -1) / 4), lambda s: np.exp(-s[..., 0] ** 2 / 2),
              lambda l: np.sqrt(2 * np.pi) * np.exp(-l[0] ** 2 / 2))
print("F(0,0,1):", fourier_coeff(g, sd, f, 0, 0))
print("closed form:", 2 * np.pi * np.sqrt(2 * np.pi) * np.exp(-0.5))

M = fourier_operator_matrix(g, sd, f, 6)
print("diagonal of F(1):", np.round(np.diag(M.entries).real, 8))

# the s-profile (1-s^2) e^{-s^2/2} has transform vanishing at lambda=0, where truncation hurts most
h = separable(lambda Z: np.exp(-np.sum(Z * Z, -1) / 4), lambda s: (1 - s[..., 0] ** 2) * np.exp(-s[..., 0] ** 2 / 2),
              lambda l: np.sqrt(2 * np.pi) * l[0] ** 2 * np.exp(-l[0] ** 2 / 2))
quad = TransformQuadrature(gauss_legendre_rule(48, -8.0, 8.0), gauss_legendre_rule(48, -10.0, 10.0))
rule = gauss_legendre_rule(24, -12.0, 12.0, panels=8)
for label, kappa in (("printed", plancherel_constant(g)), ("derived", plancherel_constant(g, derived=True))):
    lhs, rhs, ratio = plancherel_check(g, h, rule, 12, kappa, quad)
    print(f"{label} constant {kappa:.6f}: ratio {ratio:.6f}")
