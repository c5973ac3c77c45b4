# The kernel W(n, m, eta; x, y) and its boundary limit K(a, x, y, b).
import numpy as np

from nilfourier import kernel_k, kernel_w

x, y = np.meshgrid(np.linspace(-2, 2, 5), np.linspace(-2, 2, 5))

# three evaluation routes agree
for method in ("series", "direct", "laguerre"):
    print(method, kernel_w(2, 5, 0.7, 0.4, -1.1, method=method))

# W(0, 0) is a Gaussian
print("W(0,0,1) - exp(-r^2/4):", np.abs(kernel_w(0, 0, 1.0, x, y) - np.exp(-(x * x + y * y) / 4)).max())

# K(a, 0, 1, 0) = J_0(sqrt a)
print("K(1,0,1,0) =", kernel_k(1.0, 0.0, 1.0, 0).real)

# W at a comb point with a = eta (n+m), b = m-n tends to K as eta -> 0
a, b = 1.0, 1
K = kernel_k(a, 1.0, 0.5, b, method="polar")
for k in range(2, 11, 2):
    eta = 2.0 ** -k
    n = int(round((a / eta - b) / 2))
    print(f"eta=2^-{k:<2d} |W - K| = {abs(kernel_w(n, n + b, eta, 1.0, 0.5) - K):.2e}")
