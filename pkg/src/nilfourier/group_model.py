"""2-step nilpotent groups on R^m x R^p defined by antisymmetric structure matrices."""

import hashlib
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

ANTISYM_TOL = 1e-12


class GroupSpecError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GroupSpec:
    """Dimensions and structure matrices ``U_k`` with ``sigma_k(Z, Z') = <Z, U_k Z'>``."""

    m: int
    p: int
    structure_matrices: np.ndarray
    name: str = ""

    def __post_init__(self):
        if self.m < 1 or self.p < 1:
            raise GroupSpecError("need m >= 1 and p >= 1")
        U = np.asarray(self.structure_matrices, dtype=float)
        if U.shape != (self.p, self.m, self.m):
            raise GroupSpecError(
                f"expected {self.p} matrices of shape {self.m}x{self.m}, got array of shape {U.shape}")
        defect = np.max(np.abs(U + np.transpose(U, (0, 2, 1))), initial=0.0)
        if defect > ANTISYM_TOL:
            raise GroupSpecError(f"structure matrix not antisymmetric (defect {defect:.3g})")
        U = 0.5 * (U - np.transpose(U, (0, 2, 1)))
        U.setflags(write=False)
        object.__setattr__(self, "structure_matrices", U)

    @cached_property
    def d(self):
        """Half the generic rank of ``U^(lambda)``."""
        from .spectral import generic_rank
        return generic_rank(self) // 2

    def digest(self):
        """Short hash of the canonical matrix data, used in CSV metadata."""
        payload = json.dumps({"m": self.m, "p": self.p,
                              "matrices": self.structure_matrices.tolist()}, sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def to_json(self):
        return json.dumps({"m": self.m, "p": self.p,
                           "matrices": self.structure_matrices.tolist()})


@dataclass(frozen=True, eq=False)
class GroupElement:
    Z: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "Z", np.atleast_1d(np.asarray(self.Z, dtype=float)))
        object.__setattr__(self, "s", np.atleast_1d(np.asarray(self.s, dtype=float)))

    def inverse(self):
        return GroupElement(-self.Z, -self.s)

    def __repr__(self):
        return f"GroupElement(Z={self.Z.tolist()}, s={self.s.tolist()})"


def _symplectic(d):
    """Matrix of <y, x'> - <y', x> in coordinates (x_1..x_d, y_1..y_d)."""
    U = np.zeros((2 * d, 2 * d))
    U[:d, d:] = -np.eye(d)
    U[d:, :d] = np.eye(d)
    return U


def _example_4x2():
    J = np.array([[0.0, 1.0], [-1.0, 0.0]])
    S = np.array([[0.0, 1.0], [1.0, 0.0]])
    Z2 = np.zeros((2, 2))
    U1 = np.block([[J, Z2], [Z2, -J]])
    U2 = np.block([[Z2, S], [-S, Z2]])
    return np.stack([U1, U2])


def builtin_group(name, d=None):
    """``heisenberg`` (with ``d``) or ``example-4x2``."""
    if name.startswith("heisenberg:"):
        name, d = "heisenberg", name.split(":", 1)[1]
    if name == "heisenberg":
        try:
            d = int(d)
        except (TypeError, ValueError):
            raise GroupSpecError("heisenberg needs an integer d") from None
        if d < 1:
            raise GroupSpecError("heisenberg needs d >= 1")
        return GroupSpec(2 * d, 1, _symplectic(d)[None], name=f"heisenberg:{d}")
    if name == "example-4x2":
        return GroupSpec(4, 2, _example_4x2(), name="example-4x2")
    raise GroupSpecError(f"unknown built-in group {name!r}")


def load_group_spec(text):
    """Parse a group description.

    Accepts a built-in name (``"heisenberg:2"``, ``"example-4x2"``) or a JSON
    document ``{"m", "p", "matrices"}`` / ``{"builtin", "d"}``.
    """
    text = text.strip()
    if not text.startswith("{"):
        return builtin_group(text)
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GroupSpecError(f"malformed group spec: {exc}") from None
    if "builtin" in cfg:
        return builtin_group(str(cfg["builtin"]), cfg.get("d"))
    try:
        m, p, mats = int(cfg["m"]), int(cfg["p"]), cfg["matrices"]
    except KeyError as exc:
        raise GroupSpecError(f"group spec missing field {exc}") from None
    try:
        U = np.array(mats, dtype=float)
    except ValueError:
        raise GroupSpecError("matrices are ragged") from None
    if U.ndim == 2 and p == 1:
        U = U[None]
    return GroupSpec(m, p, U, name=str(cfg.get("name", "")))


def _check_dim(v, n, what):
    if v.shape[-1] != n:
        raise GroupSpecError(f"{what} has length {v.shape[-1]}, expected {n}")


def sigma(g, Z, Z2):
    """``sigma(Z, Z')``; broadcasts over leading axes."""
    Z = np.asarray(Z, dtype=float)
    Z2 = np.asarray(Z2, dtype=float)
    _check_dim(Z, g.m, "Z")
    _check_dim(Z2, g.m, "Z'")
    return np.einsum("...i,kij,...j->...k", Z, g.structure_matrices, Z2)


def group_multiply(g, w1, w2):
    _check_dim(w1.Z, g.m, "Z")
    _check_dim(w2.Z, g.m, "Z")
    _check_dim(w1.s, g.p, "s")
    _check_dim(w2.s, g.p, "s")
    return GroupElement(w1.Z + w2.Z, w1.s + w2.s + 0.5 * sigma(g, w1.Z, w2.Z))


def u_lambda(g, lam):
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    _check_dim(lam, g.p, "lambda")
    return np.tensordot(lam, g.structure_matrices, axes=(0, 0))


# 4th-order central stencils
_D1 = ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12))
_D2 = ((-2, -1 / 12), (-1, 16 / 12), (0, -30 / 12), (1, 16 / 12), (2, -1 / 12))


def _field_direction(g, spectral, kind, j):
    if kind in ("X", "Xt"):
        return spectral.basis[:, j]
    if kind in ("Y", "Yt"):
        return spectral.basis[:, spectral.d + j]
    if kind in ("R", "Rt"):
        return spectral.basis[:, 2 * spectral.d + j]
    raise ValueError(f"unknown field kind {kind!r}")


def apply_field(g, spectral, kind, f, w, h=1e-4, j=0, power=1):
    """Finite-difference value of an invariant vector field (or its square) on ``f``.

    ``kind`` is ``"X"``, ``"Y"`` (left-invariant, along the adapted basis
    vectors ``x_j``, ``y_j``), ``"Xt"``, ``"Yt"`` (right-invariant) or ``"S"``
    (``d/ds_j``). The left field along ``v`` is ``d/dt f(w . exp(tv))`` and the
    right one ``d/dt f(exp(tv) . w)``; since ``exp(tv) exp(t'v) = exp((t+t')v)``
    the square is the second derivative along the same curve. ``f`` takes
    ``(Z, s)`` arrays with coordinates on the last axis.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    if power not in (1, 2):
        raise ValueError("power must be 1 or 2")
    Z0, s0 = w.Z, w.s
    if kind == "S":
        e = np.zeros(g.p)
        e[j] = 1.0

        def curve(t):
            return Z0[None, :] + 0.0 * t[:, None], s0[None, :] + t[:, None] * e
    else:
        v = _field_direction(g, spectral, kind, j)
        if kind.endswith("t"):
            twist = sigma(g, v, Z0)
        else:
            twist = sigma(g, Z0, v)

        def curve(t):
            return Z0[None, :] + t[:, None] * v, s0[None, :] + 0.5 * t[:, None] * twist

    stencil = _D1 if power == 1 else _D2
    t = np.array([k * h for k, _ in stencil])
    c = np.array([c for _, c in stencil])
    vals = np.asarray(f(*curve(t)))
    return complex(np.dot(c, vals) / h ** power)
