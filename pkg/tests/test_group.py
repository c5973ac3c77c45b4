import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from nilfourier.group_model import (GroupElement, GroupSpecError, apply_field, builtin_group,
                                    group_multiply, load_group_spec, sigma, u_lambda)
from nilfourier.spectral import spectral_decompose

coords = arrays(float, 4, elements=st.floats(-3, 3))
center = arrays(float, 2, elements=st.floats(-3, 3))


def test_builtin_shapes(heis1, heis2, ex42):
    assert (heis1.m, heis1.p, heis1.d) == (2, 1, 1)
    assert (heis2.m, heis2.p, heis2.d) == (4, 1, 2)
    assert (ex42.m, ex42.p, ex42.d) == (4, 2, 2)


def test_heisenberg_sigma(heis1):
    # <y, x'> - <y', x> in (x, y) coordinates
    assert sigma(heis1, [1.0, 2.0], [3.0, 5.0])[0] == pytest.approx(2 * 3 - 5 * 1)


def test_load_json_and_names():
    g = load_group_spec(json.dumps({"m": 2, "p": 1, "matrices": [[0, 1], [-1, 0]]}))
    assert g.structure_matrices.shape == (1, 2, 2)
    assert load_group_spec('{"builtin": "heisenberg", "d": 3}').m == 6
    assert load_group_spec("heisenberg:2").d == 2
    assert load_group_spec(builtin_group("example-4x2").to_json()).digest() == builtin_group("example-4x2").digest()


@pytest.mark.parametrize("text", [
    '{"m": 2, "p": 1, "matrices": [[0, 1], [1, 0]]}',
    '{"m": 3, "p": 1, "matrices": [[0, 1], [-1, 0]]}',
    '{"m": 2, "matrices": [[0, 1], [-1, 0]]}',
    '{"m": 2, "p": 1, "matrices": [[0, 1], [-1]]}',
    '{"m": 2,',
    "heisenberg:0",
    "lorentz",
])
def test_invalid_specs(text):
    with pytest.raises(GroupSpecError):
        load_group_spec(text)


def test_digest_is_stable(ex42):
    assert ex42.digest() == builtin_group("example-4x2").digest()
    assert ex42.digest() != builtin_group("heisenberg", 2).digest()


def test_trivial_products(ex42):
    w = GroupElement([1.0, -2.0, 0.5, 3.0], [0.3, -0.1])
    e = GroupElement(np.zeros(4), np.zeros(2))
    for prod in (group_multiply(ex42, w, e), group_multiply(ex42, e, w)):
        assert np.array_equal(prod.Z, w.Z) and np.array_equal(prod.s, w.s)
    inv = group_multiply(ex42, w, w.inverse())
    assert np.allclose(inv.Z, 0) and np.allclose(inv.s, 0)
    c = group_multiply(ex42, GroupElement(np.zeros(4), [1.0, 2.0]), GroupElement(np.zeros(4), [0.5, 0.5]))
    assert np.allclose(c.s, [1.5, 2.5])


@given(coords, center, coords, center, coords, center)
@settings(max_examples=50, deadline=None)
def test_associativity_and_central_commutator(z1, s1, z2, s2, z3, s3):
    g = builtin_group("example-4x2")
    a, b, c = GroupElement(z1, s1), GroupElement(z2, s2), GroupElement(z3, s3)
    left = group_multiply(g, group_multiply(g, a, b), c)
    right = group_multiply(g, a, group_multiply(g, b, c))
    assert np.allclose(left.Z, right.Z) and np.allclose(left.s, right.s, atol=1e-10)
    comm = group_multiply(g, group_multiply(g, a, b), group_multiply(g, a.inverse(), b.inverse()))
    assert np.allclose(comm.Z, 0, atol=1e-12)
    assert np.allclose(comm.s, sigma(g, z1, z2), atol=1e-9)


@given(coords, coords)
@settings(max_examples=30, deadline=None)
def test_sigma_antisymmetric(z1, z2):
    g = builtin_group("example-4x2")
    assert np.allclose(sigma(g, z1, z2), -sigma(g, z2, z1))


def test_u_lambda_linear(ex42):
    U = u_lambda(ex42, [2.0, -1.0])
    assert np.allclose(U, 2 * ex42.structure_matrices[0] - ex42.structure_matrices[1])
    with pytest.raises(GroupSpecError):
        u_lambda(ex42, [1.0])


def test_central_field_on_exponential(heis1):
    sd = spectral_decompose(heis1, [1.7])

    def f(Z, s):
        return np.exp(1j * 1.7 * s[..., 0]) * np.exp(-np.sum(Z * Z, -1))

    w = GroupElement([0.2, -0.4], [0.3])
    val = apply_field(heis1, sd, "S", f, w)
    assert val == pytest.approx(1j * 1.7 * f(w.Z[None], w.s[None])[0], rel=1e-10)


def test_left_and_right_fields_commute(heis1):
    sd = spectral_decompose(heis1, [1.0])

    def f(Z, s):
        return np.cos(Z[..., 0] + 2 * Z[..., 1]) * np.exp(-s[..., 0] ** 2)

    def xf(Z, s):
        out = [apply_field(heis1, sd, "X", f, GroupElement(z, t), h=1e-3) for z, t in zip(Z, s)]
        return np.array(out)

    def ytf(Z, s):
        out = [apply_field(heis1, sd, "Yt", f, GroupElement(z, t), h=1e-3) for z, t in zip(Z, s)]
        return np.array(out)

    w = GroupElement([0.3, 0.1], [0.2])
    a = apply_field(heis1, sd, "Yt", xf, w, h=1e-3)
    b = apply_field(heis1, sd, "X", ytf, w, h=1e-3)
    assert abs(a - b) < 1e-6


def test_field_argument_errors(heis1):
    sd = spectral_decompose(heis1, [1.0])
    w = GroupElement([0.0, 0.0], [0.0])
    f = lambda Z, s: s[..., 0]  # noqa: E731
    with pytest.raises(ValueError):
        apply_field(heis1, sd, "Q", f, w)
    with pytest.raises(ValueError):
        apply_field(heis1, sd, "X", f, w, h=0)
