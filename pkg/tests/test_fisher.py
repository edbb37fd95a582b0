import math

import numpy as np
import pytest

from wignerqfi.exceptions import DomainError
from wignerqfi.fisher import (
    FisherMatrix,
    InnerProducts,
    component_inner_products,
    cr_bound,
    delta_ratio,
    delta_upper_bound,
    j_moving,
    j_moving_oracle,
    j_rel,
    j_rest,
    kappa_eta_bounds,
    kappa_eta_rel,
    mixture_sld_fisher,
    pure_state_fisher,
    weak_commutativity,
)
from wignerqfi.numerics import SQRT_PI
from wignerqfi.state import eta, kappa_eta, nu, xi
from wignerqfi.wigner import PhysicalConfig


def cfg(m=1.0, kappa=1.0):
    return PhysicalConfig(m, kappa)


# -- rest frame ---------------------------------------------------------------


def test_j_rest_unit():
    np.testing.assert_array_equal(j_rest(cfg()).matrix, np.diag([2.0, 2.0]))


@pytest.mark.parametrize("k", [0.1, 0.5, 2.0])
def test_j_rest_inverse(k):
    np.testing.assert_allclose(j_rest(cfg(kappa=k)).inverse(), np.diag([k * k / 2] * 2), rtol=1e-15)


def test_j_rest_inverse_vanishes_for_narrow_spread():
    assert np.max(np.abs(j_rest(cfg(kappa=1e-6)).inverse())) < 1e-12


def test_fisher_matrix_shape_check():
    with pytest.raises(ValueError):
        FisherMatrix(np.eye(3))
    assert FisherMatrix(np.eye(2)).labels == ("theta1", "theta2")


# -- moving frame -------------------------------------------------------------


def test_j_moving_at_rest_is_j_rest():
    c = cfg(0.7, 1.3)
    np.testing.assert_array_equal(j_moving(c, 0.0).matrix, j_rest(c).matrix)


def test_j_moving_positive_definite():
    for m in (0.01, 1.0, 50.0):
        for k in (0.01, 1.0, 10.0):
            for v in (0.0, 0.5, 0.99, 1.0):
                assert j_moving(cfg(m, k), v).is_positive_definite()


def test_j_moving_below_j_rest():
    for m, k in ((1.0, 1.0), (0.2, 0.4), (3.0, 0.1)):
        c = cfg(m, k)
        for v in (0.1, 0.5, 0.9, 1.0):
            gap = np.linalg.eigvalsh(j_rest(c).matrix - j_moving(c, v).matrix)
            assert np.all(gap > 1e-10 * j_rest(c).matrix[0, 0])


@pytest.mark.parametrize("m,k,v", [(1.0, 1.0, 0.9), (1.0, 1.0, 0.7), (0.3, 2.0, 0.5), (4.0, 0.05, 0.95)])
def test_oracle_matches_closed_form(m, k, v):
    a = j_moving(cfg(m, k), v).matrix
    b = j_moving_oracle(cfg(m, k), v).matrix
    np.testing.assert_allclose(np.diag(b), np.diag(a), rtol=1e-8)
    assert abs(b[0, 1]) < 1e-10 and abs(b[1, 0]) < 1e-10


def test_oracle_inner_products_structure():
    c, v = cfg(1.0, 1.0), 0.7
    ip = component_inner_products(c, v)
    x = xi(c, v)
    assert ip.weights[0] == pytest.approx((1 + x) / 2, rel=1e-10)
    assert abs(ip.overlap) < 1e-12
    for s in ("down", "up"):
        assert np.max(np.abs(ip.d_0[s])) < 1e-12
    # the diagonal overlaps carry nu; it cancels from J
    n = nu(c, v)
    half = 1 / (2 * c.kappa**2)
    assert ip.d_d["down"][0, 0].real == pytest.approx((half + n) / (1 + x), rel=1e-10)
    assert ip.d_d["up"][0, 0].real == pytest.approx((half - n) / (1 - x), rel=1e-10)
    e = eta(c, v)
    assert abs(ip.up_d_down[0]) ** 2 == pytest.approx(e * e / (1 - x * x), rel=1e-9)


def test_oracle_domain():
    with pytest.raises(DomainError):
        j_moving_oracle(cfg(), 0.0)
    with pytest.raises(DomainError):
        j_moving_oracle(cfg(), 1.0)


def _finite_dim_sld_fisher(psis, probs, gens):
    """SLD Fisher matrix of sum_s p_s |psi_s><psi_s| under exp(-i theta_j G_j), by eigen-decomposition."""
    rho = sum(p * np.outer(v, v.conj()) for p, v in zip(probs, psis))
    lam, u = np.linalg.eigh(rho)
    drho = [-1j * (g @ rho - rho @ g) for g in gens]
    ls = []
    for d in drho:
        db = u.conj().T @ d @ u
        den = lam[:, None] + lam[None, :]
        lb = np.where(den > 1e-12, 2 * db / np.where(den > 1e-12, den, 1.0), 0.0)
        ls.append(u @ lb @ u.conj().T)
    return np.array([[np.trace(drho[j] @ ls[k]).real for k in range(2)] for j in range(2)])


def test_mixture_formula_against_direct_sld():
    rng = np.random.default_rng(8)
    n = 12
    for _ in range(20):
        raw = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
        q, _ = np.linalg.qr(raw)
        psis = [q[:, 0], q[:, 1]]
        p = float(rng.uniform(0.05, 0.95))
        gens = [np.diag(rng.normal(size=n)), np.diag(rng.normal(size=n))]
        ref = _finite_dim_sld_fisher(psis, (p, 1 - p), gens)

        d = {s: [-1j * g @ v for g in gens] for s, v in zip(("down", "up"), psis)}
        dd = {s: np.array([[np.vdot(d[s][j], d[s][k]) for k in range(2)] for j in range(2)]) for s in d}
        d0 = {s: np.array([np.vdot(d[s][j], v) for j in range(2)]) for s, v in zip(("down", "up"), psis)}
        cross = np.array([np.vdot(psis[1], d["down"][j]) for j in range(2)])
        ip = InnerProducts((p, 1 - p), dd, d0, cross, complex(np.vdot(psis[1], psis[0])))
        np.testing.assert_allclose(mixture_sld_fisher(ip), ref, rtol=1e-9, atol=1e-12)


def test_pure_state_fisher_is_rest_value():
    for m, k, v in ((1.0, 1.0, 0.9), (0.4, 0.3, 0.6)):
        np.testing.assert_allclose(pure_state_fisher(cfg(m, k), v).matrix, j_rest(cfg(m, k)).matrix,
                                   rtol=1e-8, atol=1e-8 / k**2)


# -- relativistic limit -----------------------------------------------------


def test_j_rel_is_moving_at_v_one():
    np.testing.assert_array_equal(j_rel(cfg(0.6, 1.4)).matrix, j_moving(cfg(0.6, 1.4), 1.0).matrix)


def test_j_rel_agrees_with_quadrature_at_the_limit_integrand():
    c = cfg(0.8, 0.9)
    assert kappa_eta_rel(c) == pytest.approx(kappa_eta(c, 1.0), rel=1e-12)


@pytest.mark.xfail(strict=True, reason="the gap to the limit is O(sqrt(1 - v^2)) ~ 4e-5 at v = 1 - 1e-8")
def test_j_rel_limit_of_j_moving_at_one_minus_1e8():
    a = j_moving(cfg(), 1 - 1e-8).matrix[0, 0]
    b = j_rel(cfg()).matrix[0, 0]
    assert abs(a - b) / b < 1e-6


def test_j_moving_converges_to_j_rel_like_inverse_gamma():
    b = j_rel(cfg()).matrix[0, 0]
    ratios = []
    for eps in (1e-8, 1e-10, 1e-12):
        s = math.sqrt(eps * (2 - eps))
        ratios.append((j_moving(cfg(), 1 - eps).matrix[0, 0] - b) / (b * s))
    np.testing.assert_allclose(ratios, ratios[-1], rtol=2e-3)
    assert 0 < ratios[-1] < 1


def test_j_rel_heavy_particle():
    m = 50.0
    excess = j_rel(cfg(m, 1.0)).inverse()[0, 0] - 0.5
    assert excess == pytest.approx(1 / (4 * m * m), rel=1e-2)


def test_j_rel_light_particle():
    ratio = j_rel(cfg(1e-3, 1.0)).inverse()[0, 0] / 0.5
    assert ratio == pytest.approx(1 / (1 - math.pi / 8), rel=1e-2)


def test_j_rel_finite_for_huge_mass():
    j = j_rel(cfg(1e5, 1.0)).matrix
    assert np.all(np.isfinite(j)) and j[0, 0] < 2.0


# -- Delta ----------------------------------------------------------------------


def test_delta_at_rest():
    assert delta_ratio(cfg(), 0.0).value == pytest.approx(1.0, abs=1e-10)


def test_delta_below_bound():
    for mk in np.logspace(-4, 1, 10):
        for v in np.linspace(0, 1, 21):
            assert delta_ratio(cfg(1.0, mk), v).value <= delta_upper_bound(v) + 1e-9


def test_delta_limit_light():
    d = delta_ratio(cfg(1.0, 1e-4), 1.0).value
    assert d == pytest.approx(1 / (1 - math.pi / 8), rel=5e-3)
    assert float(delta_ratio(cfg(), 0.3)) >= 1.0


def test_delta_monotone():
    vs = np.linspace(0, 1, 30)
    rows = []
    for k in (0.1, 0.5, 1.0, 3.0):
        vals = [delta_ratio(cfg(1.0, k), v).value for v in vs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        rows.append(vals)
    rows = np.array(rows)
    assert np.all(np.diff(rows[:, 1:], axis=0) < 0)


def test_delta_upper_bound_values():
    assert delta_upper_bound(0.0) == 1.0
    assert delta_upper_bound(1.0) == pytest.approx(1.647, abs=5e-4)
    assert delta_upper_bound(1.0) == pytest.approx(1 / (1 - math.pi / 8), rel=1e-15)
    assert delta_upper_bound(0.5) == pytest.approx(1 / (1 - math.pi / 32), rel=1e-15)
    with pytest.raises(DomainError):
        delta_upper_bound(1.2)


# -- bounds ---------------------------------------------------------------------


def test_bounds_small_argument():
    lo, hi = kappa_eta_bounds(1e-6)
    assert lo == pytest.approx(SQRT_PI / 4, abs=1e-5)
    assert hi == pytest.approx(SQRT_PI / 4, abs=1e-5)


def test_bounds_large_argument():
    lo, hi = kappa_eta_bounds(50.0)
    assert lo == pytest.approx(1 / 200, rel=1e-2)
    assert hi == pytest.approx(1 / 100, rel=1e-2)


def test_bounds_sandwich_single_point():
    lo, hi = kappa_eta_bounds(1.0)
    r = kappa_eta(cfg(), 0.7) / 0.7
    assert lo <= r <= hi


def test_bounds_are_the_velocity_endpoints():
    c = cfg(0.6, 1.0)
    lo, hi = kappa_eta_bounds(0.6)
    assert kappa_eta(c, 1e-6) / 1e-6 == pytest.approx(lo, rel=1e-9)
    assert kappa_eta(c, 1.0) == pytest.approx(hi, rel=1e-12)


def test_bounds_domain():
    with pytest.raises(DomainError):
        kappa_eta_bounds(0.0)


# -- weak commutativity and CR bound --------------------------------------------


def test_weak_commutativity_zero_at_rest():
    assert weak_commutativity(cfg(), 0.0) == 0.0


@pytest.mark.parametrize("v", [0.3, 0.6, 0.9])
def test_weak_commutativity_positive_and_compositional(v):
    w = weak_commutativity(cfg(), v)
    assert w > 0
    assert w == pytest.approx(8 * xi(cfg(), v) * eta(cfg(), v, method="cartesian") ** 2, rel=1e-10)


def test_weak_commutativity_limit():
    c = cfg()
    assert weak_commutativity(c, 1.0) == pytest.approx(8 * xi(c, 1.0) * kappa_eta(c, 1.0) ** 2, rel=1e-10)


def test_cr_bound_floor_and_finiteness():
    for k in (0.1, 1.0, 3.0):
        for v in (0.0, 0.5, 1.0):
            cr = cr_bound(cfg(1.0, k), v)
            assert cr.var_theta1 >= k * k / 2 * (1 - 1e-15)
            assert cr.var_theta1 == cr.var_theta2
            assert math.isfinite(cr.var_theta1)
