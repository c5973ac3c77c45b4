# Hermite functions, ladder operators and the spectral data of U^(lambda).
import numpy as np

from nilfourier import (CoeffVector, builtin_group, gauss_legendre_rule, hermite_table, ladder_apply,
                        spectral_decompose)
from nilfourier.spectral import block_residual

# orthonormality on a panel Gauss-Legendre rule
rule = gauss_legendre_rule(40, -14.0, 14.0, panels=8)
H = hermite_table(20, rule.nodes)
G = (H * rule.weights) @ H.T
print("max |<H_n, H_m> - delta| for n, m <= 20:", np.abs(G - np.eye(21)).max())

# A+ A- H_n + H_n = (2n+1) H_n
e = CoeffVector.basis(5, 8)
v = ladder_apply("create", ladder_apply("annihilate", e)).coeffs[:8] + e.coeffs
print("number operator on H_5:", np.round(v, 12))

# spectral decomposition of lambda . U on the 4x2 example
g = builtin_group("example-4x2")
lam = np.array([0.7, -0.4])
sd = spectral_decompose(g, lam)
print("eta:", sd.eta, " expected:", np.array([abs(lam[0]) + abs(lam[1]), abs(abs(lam[0]) - abs(lam[1]))]))
print("block residual:", block_residual(g, sd))
