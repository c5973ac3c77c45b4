"""Residuals of the kernel identities on seeded random samples.

Each check returns an :class:`IdentityResult`; :func:`identity_suite` runs
them all. Samples cover ``a <= 4``, ``|x|, |y| <= 2``, ``|b| <= 5``.
"""

from dataclasses import dataclass

import numpy as np

from .kernel import bessel_j, delta_hat_apply, kernel_k, kernel_w, KernelPoint1D
from .spectral import spectral_decompose


@dataclass(frozen=True)
class IdentityResult:
    name: str
    residual: float
    tol: float

    @property
    def passed(self):
        return bool(self.residual <= self.tol)


def _samples(seed, n, a_max=4.0, box=2.0, b_max=5):
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.0, a_max, n)
    x = rng.uniform(-box, box, n)
    y = rng.uniform(-box, box, n)
    b = rng.integers(-b_max, b_max + 1, n)
    return a, x, y, b


def _K(a, x, y, b, method="integral"):
    # the defining integral, so the symmetries are not built in
    return kernel_k(float(a), x, y, int(b), method=method)


def check_zero_frequency(seed=0, n=32):
    _, x, y, b = _samples(seed, n)
    res = max(abs(_K(0.0, xi, yi, bi) - (1.0 if bi == 0 else 0.0)) for xi, yi, bi in zip(x, y, b))
    return IdentityResult("K(0,x,y,b)=delta_b0", res, 1e-10)


def check_conjugation(seed=0, n=32):
    a, x, y, b = _samples(seed, n)
    res = max(abs(_K(*s[:1], s[1], -s[2], s[3]) - np.conj(_K(*s))) for s in zip(a, x, y, b))
    return IdentityResult("K(a,x,-y,b)=conj K", res, 1e-10)


def check_reflection_x(seed=0, n=32):
    a, x, y, b = _samples(seed, n)
    res = max(abs(_K(ai, -xi, yi, -bi) - _K(ai, xi, yi, bi)) for ai, xi, yi, bi in zip(a, x, y, b))
    return IdentityResult("K(a,-x,y,-b)=K", res, 1e-10)


def check_reflection_y(seed=0, n=32):
    a, x, y, b = _samples(seed, n)
    res = max(abs(_K(ai, xi, -yi, -bi) - (-1) ** int(bi) * _K(ai, xi, yi, bi))
              for ai, xi, yi, bi in zip(a, x, y, b))
    return IdentityResult("K(a,x,-y,-b)=(-1)^b K", res, 1e-10)


_D1 = np.array([1, -8, 0, 8, -1]) / 12.0
_D2 = np.array([-1, 16, -30, 16, -1]) / 12.0
_OFF = np.arange(-2, 3)


def check_laplacian(seed=0, n=32, h=1e-3):
    a, x, y, b = _samples(seed, n)
    res = 0.0
    for ai, xi, yi, bi in zip(a, x, y, b):
        kx = _K(ai, xi + h * _OFF, yi, bi)
        ky = _K(ai, xi, yi + h * _OFF, bi)
        lap = (_D2 @ kx + _D2 @ ky) / h ** 2
        res = max(res, abs(-lap - ai * _K(ai, xi, yi, bi)))
    return IdentityResult("-Lap K = a K", res, 1e-6)


def check_rotation(seed=0, n=32, h=1e-3):
    a, x, y, b = _samples(seed, n)
    res = 0.0
    for ai, xi, yi, bi in zip(a, x, y, b):
        dx = _D1 @ _K(ai, xi + h * _OFF, yi, bi) / h
        dy = _D1 @ _K(ai, xi, yi + h * _OFF, bi) / h
        res = max(res, abs(bi * _K(ai, xi, yi, bi) + 1j * (xi * dy - yi * dx)))
    return IdentityResult("b K = -i(x d_y - y d_x) K", res, 1e-6)


def check_addition(seed=0, n=16, B=25):
    a, x, y, b = _samples(seed, n)
    _, x2, y2, _ = _samples(seed + 1, n)
    res = 0.0
    for ai, xi, yi, bi, xj, yj in zip(a, x, y, b, x2, y2):
        lhs = _K(ai, xi + xj, yi + yj, bi)
        rhs = sum(_K(ai, xi, yi, bi - bp) * _K(ai, xj, yj, bp) for bp in range(-B, B + 1))
        res = max(res, abs(lhs - rhs))
    return IdentityResult(f"K(Z+Z') = sum_|b'|<={B} K K", res, 1e-9)


def _bessel_derivs(b, rho):
    j = {k: bessel_j(k, rho) for k in range(b - 2, b + 3)}
    return j[b], 0.5 * (j[b - 1] - j[b + 1]), 0.25 * (j[b - 2] - 2 * j[b] + j[b + 2])


def check_radial_ode(seed=0, n=32):
    """``(x^2+y^2) K + 4a K_aa + 4 K_a = (b^2/a) K`` with ``K = e^{ib phi} J_b(sqrt(a) r)``."""
    a, x, y, b = _samples(seed, n)
    res = 0.0
    for ai, xi, yi, bi in zip(a, x, y, b):
        ai = max(ai, 0.05)
        r = np.hypot(xi, yi)
        rho = np.sqrt(ai) * r
        J, J1, J2 = _bessel_derivs(int(bi), rho)
        ph = np.exp(1j * bi * np.arctan2(yi, xi))
        Ka = ph * J1 * r / (2 * np.sqrt(ai))
        Kaa = ph * (J2 * r * r / (4 * ai) - J1 * r / (4 * ai ** 1.5))
        K = ph * J
        res = max(res, abs(r * r * K + 4 * ai * Kaa + 4 * Ka - bi * bi / ai * K))
    return IdentityResult("radial ODE (4a, 4)", res, 1e-6)


def _w_of_ab(eta, x, y):
    def theta(a, b):
        q = a / eta
        n, m = round((q - b) / 2), round((q + b) / 2)
        if n < 0 or m < 0:
            return 0.0
        return kernel_w(n, m, eta, x, y)
    return theta


def check_lattice(eta=1.0, seed=0, n=24, N=6):
    rng = np.random.default_rng(seed)
    res = 0.0
    for _ in range(n):
        i, k = rng.integers(0, N + 1, 2)
        x, y = rng.uniform(-2, 2, 2)
        pt = KernelPoint1D.from_indices(int(i), int(k), eta, x, y)
        theta = _w_of_ab(eta, x, y)
        res = max(res, abs((x * x + y * y) * theta(pt.a, pt.b) - delta_hat_apply(theta, pt)))
    return IdentityResult("|Z|^2 W = -Delta^ W", res, 1e-8)


def check_lattice_convolution(eta=1.0, seed=0, n=16, N=5, L=120):
    """``e^{(i/2) eta (x y' - y x')} W(n, m, Z+Z') = sum_l W(n, l, Z) W(l, m, Z')``."""
    rng = np.random.default_rng(seed)
    res = 0.0
    for _ in range(n):
        i, k = (int(v) for v in rng.integers(0, N + 1, 2))
        x, y, xp, yp = rng.uniform(-1.5, 1.5, 4)
        lhs = np.exp(0.5j * eta * (x * yp - y * xp)) * kernel_w(i, k, eta, x + xp, y + yp)
        rhs = sum(kernel_w(i, l, eta, x, y) * kernel_w(l, k, eta, xp, yp) for l in range(L))
        res = max(res, abs(lhs - rhs))
    return IdentityResult("W(Z+Z') = sum_l W(n,l,Z) W(l,m,Z')", res, 1e-8)


def identity_suite(g=None, seed=0):
    """All checks; the lattice ones use ``eta_1`` of ``g`` at ``lambda = (1, 0, ..)``."""
    eta = 1.0
    if g is not None:
        lam = np.zeros(g.p)
        lam[0] = 1.0
        e = float(spectral_decompose(g, lam).eta[0])
        eta = e if e > 0 else 1.0
    return [
        check_zero_frequency(seed),
        check_conjugation(seed),
        check_reflection_x(seed),
        check_reflection_y(seed),
        check_laplacian(seed),
        check_rotation(seed),
        check_addition(seed),
        check_radial_ode(seed),
        check_lattice(eta, seed),
        check_lattice_convolution(eta, seed),
    ]
