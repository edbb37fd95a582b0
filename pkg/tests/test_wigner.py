import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wignerqfi.exceptions import DegenerateInputError, DomainError, UnsupportedError
from wignerqfi.wigner import (
    Boost,
    Momentum2,
    PhysicalConfig,
    WignerAngles,
    _little_group,
    boost_from_velocity,
    boost_momentum,
    euler_reconstruct,
    rot2,
    rot3,
    rotation_cos_sin,
    spin_half_rep,
    wigner_angles,
    wigner_matrix,
)

ONE = PhysicalConfig(1.0, 1.0)


def test_physical_config_validation():
    with pytest.raises(DomainError):
        PhysicalConfig(0.0, 1.0)
    with pytest.raises(DomainError):
        PhysicalConfig(1.0, -1.0)
    with pytest.raises(DomainError):
        PhysicalConfig(math.inf, 1.0)
    assert PhysicalConfig(2.0, 0.25).m_kappa == 0.5


def test_boost_at_rest():
    b = boost_from_velocity(0.0)
    assert (b.cosh_chi, b.sinh_chi) == (1.0, 0.0)


def test_boost_three_four_five():
    b = boost_from_velocity(0.6)
    assert b.cosh_chi == pytest.approx(1.25, rel=1e-15)
    assert b.sinh_chi == pytest.approx(0.75, rel=1e-15)


def test_boost_limit_marker():
    b = boost_from_velocity(1.0)
    assert b.is_limit and b.inv_gamma == 0.0


@pytest.mark.parametrize("v", [-0.1, 1.0000001, math.nan])
def test_boost_domain(v):
    with pytest.raises(DomainError):
        boost_from_velocity(v)


def test_boost_rejects_inconsistent_rapidity():
    with pytest.raises(DomainError):
        Boost(0.5, 1.2, 0.1)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.0, max_value=0.999999))
def test_boost_hyperbolic_identity(v):
    b = boost_from_velocity(v)
    assert abs(b.cosh_chi**2 - b.sinh_chi**2 - 1.0) <= 1e-12 * b.cosh_chi**2
    with mpmath.workdps(40):
        ref = 1 / mpmath.sqrt(1 - mpmath.mpf(v) ** 2)
    assert b.cosh_chi == pytest.approx(float(ref), rel=1e-12)


def test_boost_momentum_at_rest():
    np.testing.assert_array_equal(boost_momentum(Momentum2(0.3, -2.0), boost_from_velocity(0.0), ONE), [0.3, -2.0, 0.0])


def test_boost_momentum_origin():
    np.testing.assert_allclose(boost_momentum(Momentum2(0, 0), boost_from_velocity(0.6), ONE), [0, 0, -0.75])


def test_boost_momentum_light_mass_limit():
    out = boost_momentum(Momentum2(3.0, 4.0), boost_from_velocity(0.6), PhysicalConfig(1e-9, 1.0))
    np.testing.assert_allclose(out, [3.0, 4.0, -3.75], rtol=1e-12)
    # against the 4x4 boost acting on (E, p1, p2, 0)
    lam = np.eye(4)
    lam[0, 0] = lam[3, 3] = 1.25
    lam[0, 3] = lam[3, 0] = -0.75
    np.testing.assert_allclose((lam @ [5.0, 3.0, 4.0, 0.0])[1:], out, rtol=1e-9)


def test_boost_momentum_limit_unsupported():
    with pytest.raises(UnsupportedError):
        boost_momentum(Momentum2(1, 0), boost_from_velocity(1.0), ONE)


def test_angles_at_rest():
    a = wigner_angles(Momentum2(2.0, -1.0), boost_from_velocity(0.0), ONE)
    assert (a.cos_alpha, a.sin_alpha) == (1.0, 0.0)


def test_angles_at_origin():
    a = wigner_angles(Momentum2(0.0, 0.0), boost_from_velocity(0.8), ONE)
    assert a.cos_alpha == pytest.approx(1.0, abs=1e-15) and a.sin_alpha == 0.0 and a.phi == 0.0


def test_angles_direct_substitution():
    a = wigner_angles(Momentum2(1.0, 0.0), boost_from_velocity(0.6), ONE)
    r2 = math.sqrt(2.0)
    assert a.cos_alpha == pytest.approx((r2 + 1.25) / (r2 * 1.25 + 1), rel=1e-14)
    assert a.sin_alpha == pytest.approx(-0.75 / (r2 * 1.25 + 1), rel=1e-14)


def test_angles_limit_unsupported():
    with pytest.raises(UnsupportedError):
        wigner_angles(Momentum2(1, 0), boost_from_velocity(1.0), ONE)


def test_rotation_cos_sin_limit_values():
    c, s = rotation_cos_sin(np.array([0.0, 1.0, 3.0]), 2.0, 1.0)
    e = np.hypot(2.0, [0.0, 1.0, 3.0])
    np.testing.assert_allclose(c, 2.0 / e, rtol=1e-15)
    np.testing.assert_allclose(s, -np.array([0.0, 1.0, 3.0]) / e, rtol=1e-15)


def test_angles_phi_range_and_sign():
    a = wigner_angles(Momentum2(-1.0, -0.0), boost_from_velocity(0.5), ONE)
    assert a.phi == math.pi
    assert a.sin_alpha < 0 < a.cos_alpha


def test_angles_invalid():
    with pytest.raises(DomainError):
        WignerAngles(0.5, 0.5, 0.0)


def test_sin_alpha_monotone_in_v():
    vs = np.linspace(0, 0.999, 200)
    for pabs in (0.1, 1.0, 5.0):
        for m in (0.3, 1.0, 4.0):
            _, s = rotation_cos_sin(pabs, m, 0.0)
            sins = np.array([rotation_cos_sin(pabs, m, v)[1] for v in vs])
            assert np.all(np.diff(sins) < 0)


def test_angles_continuous_at_origin():
    b = boost_from_velocity(0.9)
    for eps in (1e-4, 1e-8, 1e-12):
        a = wigner_angles(Momentum2(eps, eps), b, ONE)
        assert abs(a.alpha) < 10 * eps


def test_wigner_matrix_identity_at_rest():
    np.testing.assert_allclose(wigner_matrix(Momentum2(0.7, -1.3), boost_from_velocity(0.0), ONE), np.eye(3), atol=1e-15)


def test_wigner_matrix_degenerate_at_origin():
    with pytest.raises(DegenerateInputError):
        wigner_matrix(Momentum2(0, 0), boost_from_velocity(0.5), ONE)


def test_wigner_matrix_matches_composition():
    p, b = Momentum2(0.8, -1.7), boost_from_velocity(0.75)
    cfg = PhysicalConfig(1.3, 1.0)
    full = _little_group(p, b, cfg)
    np.testing.assert_allclose(wigner_matrix(p, b, cfg), full[1:, 1:], atol=1e-13)


def test_diagonal_entries_are_not_equal():
    # (1,1) and (2,2) differ by the p1 <-> p2 exchange
    w = wigner_matrix(Momentum2(2.0, 0.3), boost_from_velocity(0.9), ONE)
    assert abs(w[0, 0] - w[1, 1]) > 0.1
    ws = wigner_matrix(Momentum2(0.3, 2.0), boost_from_velocity(0.9), ONE)
    assert w[0, 0] == pytest.approx(ws[1, 1], rel=1e-14)


@pytest.mark.parametrize("p,v", [((1.0, 1.0), 0.9), ((2.0, -1.0), 0.7)])
def test_wigner_matrix_equals_euler(p, v):
    mom, b = Momentum2(*p), boost_from_velocity(v)
    np.testing.assert_allclose(wigner_matrix(mom, b, ONE), euler_reconstruct(wigner_angles(mom, b, ONE)), atol=1e-12)


def test_reverse_euler_order_is_the_mirrored_momentum():
    b = boost_from_velocity(0.7)
    a = wigner_angles(Momentum2(2.0, -1.0), b, ONE)
    reverse = rot3(-a.phi) @ rot2(a.alpha) @ rot3(a.phi)
    np.testing.assert_allclose(reverse, wigner_matrix(Momentum2(2.0, 1.0), b, ONE), atol=1e-12)


def test_euler_special_cases():
    np.testing.assert_allclose(euler_reconstruct(WignerAngles(1.0, 0.0, 1.1)), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(euler_reconstruct(WignerAngles(0.0, 1.0, 0.0)), rot2(math.pi / 2), atol=0)


def test_random_rotation_properties():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        cfg = PhysicalConfig(float(rng.uniform(0.05, 10.0)), 1.0)
        p = Momentum2(*rng.uniform(-10, 10, size=2))
        b = boost_from_velocity(float(rng.uniform(0, 0.99)))
        w = wigner_matrix(p, b, cfg)
        a = wigner_angles(p, b, cfg)
        np.testing.assert_allclose(w.T @ w, np.eye(3), atol=1e-12)
        assert abs(np.linalg.det(w) - 1) < 1e-12
        assert abs(a.cos_alpha**2 + a.sin_alpha**2 - 1) < 1e-12
        np.testing.assert_allclose(euler_reconstruct(a), w, atol=1e-11)


def test_spin_half_identity():
    np.testing.assert_array_equal(spin_half_rep(WignerAngles(1.0, 0.0, 0.4)), np.eye(2))


@settings(max_examples=200, deadline=None)
@given(st.floats(0.05, 5), st.floats(-8, 8), st.floats(-8, 8), st.floats(0, 0.999))
def test_spin_half_is_su2(m, p1, p2, v):
    a = wigner_angles(Momentum2(p1, p2), boost_from_velocity(v), PhysicalConfig(m, 1.0))
    d = spin_half_rep(a)
    np.testing.assert_allclose(d.conj().T @ d, np.eye(2), atol=1e-12)
    assert abs(np.linalg.det(d) - 1) < 1e-12
    # the (1,1) entry squared plus the off-diagonal product is cos(alpha); minus gives det = 1
    assert abs(d[0, 0] ** 2 + d[0, 1] * d[1, 0] - a.cos_alpha) < 1e-12
    assert abs(d[0, 0] ** 2 - d[0, 1] * d[1, 0] - 1.0) < 1e-12


def test_spin_half_maps_spin_down():
    a = wigner_angles(Momentum2(0.4, 1.2), boost_from_velocity(0.8), ONE)
    col = spin_half_rep(a) @ np.array([0.0, 1.0])
    eiphi = complex(math.cos(a.phi), math.sin(a.phi))
    np.testing.assert_allclose(col, [-eiphi * a.sin_half, a.cos_half], atol=1e-15)


def test_spin_half_adjoint_in_down_up_order_is_wigner_matrix():
    p, b = Momentum2(0.9, -0.4), boost_from_velocity(0.85)
    a = wigner_angles(p, b, ONE)
    d = spin_half_rep(a)
    perm = np.array([[0, 1], [1, 0]])
    u = perm @ d @ perm
    sig = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]])]
    adj = np.array([[0.5 * np.trace(sig[i] @ u @ sig[j] @ u.conj().T).real for j in range(3)] for i in range(3)])
    np.testing.assert_allclose(adj, wigner_matrix(p, b, ONE), atol=1e-12)


def test_half_angle_precision_for_tiny_alpha():
    a = wigner_angles(Momentum2(1e-9, 0.0), boost_from_velocity(0.5), ONE)
    assert a.sin_half == pytest.approx(a.sin_alpha / 2, rel=1e-12)
    assert a.sin_half < 0
