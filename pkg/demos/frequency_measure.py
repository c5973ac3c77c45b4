# Integrals against the frequency measure: combs of spacing 2 eta and their Lebesgue limit.
import math

import numpy as np

from nilfourier import integrate_mu_j

exact = 2 / (1 - math.exp(-2))
v, tail = integrate_mu_j(lambda a: np.exp(-a), 1.0, 0)
print("comb sum at eta=1:", v.real, " exact:", exact)

# Riemann rate: the comb sum approaches the integral at rate O(eta)
for k in range(1, 9):
    eta = 2.0 ** -k
    vk, _ = integrate_mu_j(lambda a: np.exp(-a), eta, 0)
    print(f"eta=2^-{k}  error/eta = {abs(vk.real - 1) / eta:.4f}")

v0, _ = integrate_mu_j(lambda a: np.exp(-a), 0.0, 0, a_max=40.0)
print("eta=0 (Lebesgue):", v0.real)
