"""Spin amplitudes of the boosted wave packet and the scalar integrals xi, eta, nu.

In momentum space the boosted state has two components,

    F_down(p) =  phi0(p1) phi0(p2) exp(-i p.theta) cos(alpha/2)
    F_up(p)   = -phi0(p1) phi0(p2) exp(-i p.theta) exp(i phi) sin(alpha/2)

and every Fisher quantity reduces to three Gaussian-weighted integrals:

    xi  = <cos alpha>                        (spin-down weight is (1 + xi)/2)
    eta = -<(p1)^2 / |p| sin alpha>          (>= 0)
    nu  = <(p1)^2 cos alpha>

where ``<.>`` is the average over ``[phi0(p1) phi0(p2)]^2``. Each integrand
depends on ``|p|`` only (up to the ``(p1)^2`` factor), so the default
evaluation is a 1D radial quadrature in the dimensionless variable
``u = kappa |p|``; the 2D route is kept as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceError, DomainError
from .numerics import (
    QuadratureSpec,
    SQRT_PI,
    erfcx,
    integrate_2d_gaussian_weighted,
    integrate_semi_infinite,
    one_minus_sqrtpi_x_erfcx,
)
from .wigner import (
    Boost,
    Momentum2,
    PhysicalConfig,
    half_angle_cos_sin,
    rotation_cos_sin,
    wigner_angles,
)

ETA_ROUTE_TOL = 1e-9


@dataclass(frozen=True)
class SpinAmplitude:
    down: complex
    up: complex


@dataclass(frozen=True)
class SpinWeights:
    xi: float

    @property
    def p_down(self) -> float:
        return 0.5 * (1.0 + self.xi)

    @property
    def p_up(self) -> float:
        return 0.5 * (1.0 - self.xi)


def _check_velocity(v: float) -> None:
    if not (math.isfinite(v) and 0.0 <= v <= 1.0):
        raise DomainError(f"velocity must lie in [0, 1], got {v}")


def gaussian_amp(p, cfg: PhysicalConfig):
    """``phi0(p) = kappa^(1/2) pi^(-1/4) exp(-kappa^2 p^2 / 2)``."""
    k = cfg.kappa
    out = math.sqrt(k) / math.pi**0.25 * np.exp(-0.5 * (k * np.asarray(p, dtype=float)) ** 2)
    return float(out) if np.ndim(out) == 0 else out


def amplitude_arrays(theta, p1, p2, cfg: PhysicalConfig, v: float):
    """Vectorised ``(F_down, F_up)`` on arrays of momenta, valid for ``0 <= v <= 1``."""
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    r = np.hypot(p1, p2)
    ch, sh = half_angle_cos_sin(r, cfg.m, v)
    safe = np.where(r > 0, r, 1.0)
    # exp(i phi); its value at the origin is irrelevant since sin(alpha/2) = 0 there
    eiphi = np.where(r > 0, (p1 + 1j * p2) / safe, 1.0)
    env = gaussian_amp(p1, cfg) * gaussian_amp(p2, cfg) * np.exp(-1j * (p1 * theta[0] + p2 * theta[1]))
    return env * ch, -env * eiphi * sh


def amplitude(theta, p: Momentum2, b: Boost, cfg: PhysicalConfig) -> SpinAmplitude:
    a = wigner_angles(p, b, cfg)
    env = gaussian_amp(p.p1, cfg) * gaussian_amp(p.p2, cfg)
    env = env * complex(math.cos(p.p1 * theta[0] + p.p2 * theta[1]),
                        -math.sin(p.p1 * theta[0] + p.p2 * theta[1]))
    eiphi = complex(math.cos(a.phi), math.sin(a.phi))
    return SpinAmplitude(env * a.cos_half, -env * eiphi * a.sin_half)


def _radial(integrand, cfg: PhysicalConfig, spec: QuadratureSpec | None) -> float:
    # dimensionless u = kappa |p|; the integrand changes character near u ~ m kappa
    return integrate_semi_infinite(integrand, spec, breakpoints=(cfg.m_kappa,)).value


def xi(cfg: PhysicalConfig, v: float, spec: QuadratureSpec | None = None) -> float:
    """Spin-rotation indicator ``xi = <cos alpha>`` by quadrature.

    At ``v = 1`` the limiting integrand (``cos alpha = m/E``) is integrated, not
    a substituted boost.
    """
    _check_velocity(v)
    mu = cfg.m_kappa
    s = math.sqrt((1.0 - v) * (1.0 + v))

    def f(u):
        e = math.hypot(mu, u)
        return 2.0 * u * math.exp(-u * u) * (e * s + mu) / (e + mu * s)

    return _radial(f, cfg, spec)


def xi_rel(cfg: PhysicalConfig) -> float:
    """``sqrt(pi) m kappa erfcx(m kappa)``, the ``v -> 1`` value of xi."""
    mu = cfg.m_kappa
    return SQRT_PI * mu * erfcx(mu)


def spin_weights(cfg: PhysicalConfig, v: float, spec: QuadratureSpec | None = None) -> SpinWeights:
    return SpinWeights(xi(cfg, v, spec))


def spin_up_probability(cfg: PhysicalConfig, v: float, spec: QuadratureSpec | None = None) -> float:
    return 0.5 * (1.0 - xi(cfg, v, spec))


def kappa_eta(cfg: PhysicalConfig, v: float, spec: QuadratureSpec | None = None) -> float:
    """Dimensionless ``kappa * eta`` from the radial form.

    ``kappa eta = v * int_0^inf u^3 exp(-u^2) / (sqrt(mu^2 + u^2) + mu s) du``
    with ``mu = m kappa`` and ``s = sqrt(1 - v^2)``.
    """
    _check_velocity(v)
    if v == 0.0:
        return 0.0
    mu = cfg.m_kappa
    s = math.sqrt((1.0 - v) * (1.0 + v))

    def f(u):
        return u**3 * math.exp(-u * u) / (math.hypot(mu, u) + mu * s)

    return v * _radial(f, cfg, spec)


def _eta_integrand(cfg: PhysicalConfig, v: float, axis: int):
    def g(p1, p2):
        r = np.hypot(p1, p2)
        _, sin_a = rotation_cos_sin(r, cfg.m, v)
        pj = p1 if axis == 1 else p2
        return -np.where(r > 0, pj * pj / np.where(r > 0, r, 1.0), 0.0) * sin_a

    return g


def eta_cartesian(cfg: PhysicalConfig, v: float, spec: QuadratureSpec | None = None, *, axis: int = 1) -> float:
    """eta from its 2D momentum-space integral, with ``(p_axis)^2`` in the integrand."""
    _check_velocity(v)
    res = integrate_2d_gaussian_weighted(
        _eta_integrand(cfg, v, axis), cfg.kappa, spec, radial_breakpoints=(cfg.m,)
    )
    return float(res.value)


def eta(cfg: PhysicalConfig, v: float, spec: QuadratureSpec | None = None, *, method: str = "radial") -> float:
    """Overlap integral eta (momentum units, nonnegative).

    ``method`` is ``"radial"`` (1D quadrature), ``"cartesian"`` (2D quadrature)
    or ``"both"``, which evaluates both and raises :class:`ConvergenceError` if
    they disagree by more than ``1e-9`` relative.
    """
    if method == "radial":
        return kappa_eta(cfg, v, spec) / cfg.kappa
    if method == "cartesian":
        return eta_cartesian(cfg, v, spec)
    if method == "both":
        radial = kappa_eta(cfg, v, spec) / cfg.kappa
        cart = eta_cartesian(cfg, v, spec)
        if abs(radial - cart) > ETA_ROUTE_TOL * max(abs(radial), 1e-300 / cfg.kappa):
            raise ConvergenceError(
                f"eta routes disagree: radial {radial!r} vs cartesian {cart!r}",
                best_estimate=radial,
                error_estimate=abs(radial - cart),
            )
        return radial
    raise ValueError(f"unknown method {method!r}")


def nu(cfg: PhysicalConfig, v: float, spec: QuadratureSpec | None = None, *, method: str = "radial") -> float:
    """``nu = <(p1)^2 cos alpha>``; equals ``1/(2 kappa^2)`` at rest."""
    _check_velocity(v)
    if method == "cartesian":
        def g(p1, p2):
            cos_a, _ = rotation_cos_sin(np.hypot(p1, p2), cfg.m, v)
            return p1 * p1 * cos_a

        res = integrate_2d_gaussian_weighted(g, cfg.kappa, spec, radial_breakpoints=(cfg.m,))
        return float(res.value)
    if method != "radial":
        raise ValueError(f"unknown method {method!r}")

    mu = cfg.m_kappa
    s = math.sqrt((1.0 - v) * (1.0 + v))

    def f(u):
        e = math.hypot(mu, u)
        return u**3 * math.exp(-u * u) * (e * s + mu) / (e + mu * s)

    return _radial(f, cfg, spec) / cfg.kappa**2


def nu_rel(cfg: PhysicalConfig) -> float:
    """``v -> 1`` value of nu: ``(mu/2) [mu + sqrt(pi) erfcx(mu) (1/2 - mu^2)] / kappa^2``, ``mu = m kappa``."""
    mu = cfg.m_kappa
    # mu - sqrt(pi) mu^2 erfcx(mu) = mu (1 - sqrt(pi) mu erfcx(mu)), free of cancellation
    bracket = mu * one_minus_sqrtpi_x_erfcx(mu) + 0.5 * SQRT_PI * erfcx(mu)
    return 0.5 * mu * bracket / cfg.kappa**2


def spin_reduced_state(theta, cfg: PhysicalConfig, v: float, spec: QuadratureSpec | None = None) -> np.ndarray:
    """Spin density matrix after tracing out momentum, basis ``(down, up)``.

    Entry ``[s, s']`` is ``int F_s F_s'^* dp1 dp2``, integrated numerically with
    the parameter phases left in.
    """
    _check_velocity(v)
    if v == 1.0:
        raise DomainError("the spin-reduced state is defined here for v < 1")
    th = (float(theta[0]), float(theta[1]))
    norm = cfg.kappa**2 / math.pi

    def g(p1, p2):
        down, up = amplitude_arrays(th, p1, p2, cfg, v)
        # divide out the Gaussian weight, which the integrator supplies
        w = norm * np.exp(-(cfg.kappa**2) * (p1 * p1 + p2 * p2))
        w = np.where(w > 0, w, np.inf)
        return np.stack([down * down.conj(), down * up.conj(), up * up.conj()], axis=-1) / w[:, None]

    res = integrate_2d_gaussian_weighted(g, cfg.kappa, spec, radial_breakpoints=(cfg.m,))
    dd, du, uu = res.value
    return np.array([[dd, du], [np.conj(du), uu]], dtype=complex)
