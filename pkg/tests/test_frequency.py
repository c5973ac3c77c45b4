import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nilfourier.frequency_space import (FrequencyPoint, TruncationError, approach_sequence, embed,
                                        integrate_ghat, integrate_mu, integrate_mu_j, is_member,
                                        rho_E, unembed)
from nilfourier.hermite import gauss_legendre_rule
from nilfourier.spectral import spectral_decompose


def test_embedding_of_ground_state(heis1):
    sd = spectral_decompose(heis1, [2.0])
    pt = embed(0, 0, sd)
    assert pt.a[0] == 0.0 and pt.b[0] == 0 and pt.classification == ("regular",)


@given(st.integers(0, 40), st.integers(0, 40), st.floats(0.05, 5))
@settings(max_examples=60, deadline=None)
def test_embed_unembed_roundtrip(n, m, lam):
    from nilfourier.group_model import builtin_group
    sd = spectral_decompose(builtin_group("heisenberg", 1), [lam])
    pt = embed(n, m, sd)
    assert pt.b[0] == m - n
    assert is_member(sd, pt.a, pt.b) is not None
    nn, mm = unembed(pt, sd)
    assert (nn[0], mm[0]) == (n, m)


def test_membership(heis1):
    sd = spectral_decompose(heis1, [0.5])
    assert is_member(sd, [1.5], [1]) is not None        # n = 1, m = 2
    assert is_member(sd, [1.0], [1]) is None            # half-integer indices
    assert is_member(sd, [0.5], [3]) is None            # negative n
    assert is_member(sd, [-1.0], [0]) is None
    boundary = spectral_decompose(heis1, [0.0])
    assert is_member(boundary, [math.pi], [7]).classification == ("boundary",)


def test_mixed_classification(ex42):
    sd = spectral_decompose(ex42, [1.0, 1.0])
    pt = is_member(sd, [4.0, 0.37], [0, -2])
    assert pt.classification == ("regular", "boundary")


def test_negative_indices_rejected(heis1):
    with pytest.raises(ValueError):
        embed(-1, 0, spectral_decompose(heis1, [1.0]))


def test_rho_e(heis1):
    s1, s2 = spectral_decompose(heis1, [1.0]), spectral_decompose(heis1, [0.5])
    assert rho_E((0, 0, s1), (0, 0, s1)) == 0.0
    # a: 2 vs 1.5, b: 0 vs -1, lambda: 1 vs 0.5
    assert rho_E((1, 1, s1), (2, 1, s2)) == pytest.approx(math.sqrt(0.25 + 1 + 0.25))


@pytest.mark.parametrize("a,b", [(1.0, 1), (0.0, 0), (1.7, -2), (2.0, 3)])
def test_approach_sequence_converges(heis1, a, b):
    target = FrequencyPoint([a], [b], [0.0], ("boundary",))
    seq = approach_sequence(heis1, target, [[2.0 ** -k] for k in range(1, 16)])
    gaps = [abs(p.a[0] - a) for p in seq]
    assert gaps[-1] <= 2 * 2.0 ** -15 * (abs(b) + 1) + 1e-12
    for p in seq:
        sd = spectral_decompose(heis1, p.lam)
        assert is_member(sd, p.a, p.b) is not None


def test_approach_sequence_keeps_regular_indices(ex42):
    sd0 = spectral_decompose(ex42, [1.0, 1.0])
    target = FrequencyPoint([2.0 * 3, 0.8], [1, 0], sd0.lam, ("regular", "boundary"))
    seq = approach_sequence(ex42, target, [[1.0, 1.0 - 2.0 ** -k] for k in range(2, 10)])
    for p in seq:
        sd = spectral_decompose(ex42, p.lam)
        n, m = unembed(p, sd)
        assert (n[0], m[0]) == (1, 2)
    assert abs(seq[-1].a[1] - 0.8) < 0.01


def test_approach_sequence_needs_regular_lambda(heis1):
    target = FrequencyPoint([1.0], [0], [0.0], ("boundary",))
    with pytest.raises(ValueError):
        approach_sequence(heis1, target, [[0.0]])


def test_comb_integral_closed_form():
    value, tail = integrate_mu_j(lambda a: np.exp(-a), 1.0, 0)
    assert value.real == pytest.approx(2 / (1 - math.exp(-2)), abs=1e-12)
    assert tail < 1e-15


def test_comb_offset():
    # comb a = eta (2n + |b|)
    value, _ = integrate_mu_j(lambda a: np.exp(-a), 0.5, 3)
    assert value.real == pytest.approx(math.exp(-1.5) / (1 - math.exp(-1.0)), rel=1e-13)


def test_lebesgue_limit():
    value, _ = integrate_mu_j(lambda a: np.exp(-a), 0.0, 5)
    assert value.real == pytest.approx(1.0, abs=1e-12)


def test_riemann_rate():
    ratios = []
    for k in range(1, 13):
        eta = 2.0 ** -k
        v, _ = integrate_mu_j(lambda a: np.exp(-a), eta, 0)
        ratios.append(abs(v.real - 1.0) / eta)
    assert max(ratios) <= 1.2
    assert ratios[-1] == pytest.approx(1.0, abs=1e-3)


def test_finite_cut_reports_tail():
    value, tail = integrate_mu_j(lambda a: np.exp(-a), 1.0, 0, a_max=4.0)
    assert value.real == pytest.approx(2 * (1 + math.exp(-2) + math.exp(-4)))
    assert tail == pytest.approx(2 * (math.exp(-6) + math.exp(-8)))


def test_scalar_only_theta_is_accepted():
    value, _ = integrate_mu_j(lambda a: math.exp(-a), 1.0, 0, a_max=10.0)
    assert value.real == pytest.approx(2 * (1 - math.exp(-12)) / (1 - math.exp(-2)), rel=1e-13)


def test_measure_argument_errors():
    with pytest.raises(ValueError):
        integrate_mu_j(lambda a: a, -1.0, 0)
    with pytest.raises(ValueError):
        integrate_mu_j(lambda a: a, 1.0, 0, a_max=0.0)


def test_integrate_mu_tensor(ex42):
    sd = spectral_decompose(ex42, [1.5, 0.5])        # eta = (2, 1)

    def theta(a, b, lam):
        return np.exp(-a.sum(axis=1))

    value, _ = integrate_mu(theta, sd, 0, 60.0)
    expected = (4 / (1 - math.exp(-4))) * (2 / (1 - math.exp(-2)))
    assert value.real == pytest.approx(expected, rel=1e-12)


def test_integrate_ghat_flags_truncation(heis1):
    rule = gauss_legendre_rule(8, 0.5, 1.5)
    with pytest.raises(TruncationError):
        integrate_ghat(lambda a, b, lam: np.ones(a.shape[0]), heis1, rule, 0, 4.0)
    value, tail = integrate_ghat(lambda a, b, lam: np.exp(-a[:, 0]) * (np.asarray(b) == 0).all(),
                                 heis1, rule, 1, 60.0)
    assert tail < 1e-10
    assert value.real > 0
