"""SLD Fisher information for the shift parameters, at rest and for a moving observer.

Closed forms (all proportional to the 2x2 identity):

* at rest                      ``J = (2/kappa^2) I``
* moving, spin unobserved      ``J = (2/kappa^2) (1 - 2 (kappa eta)^2) I``
* relativistic limit           same with ``kappa eta`` replaced by
  ``mk/2 + (sqrt(pi)/4) erfcx(mk) (1 - 2 mk^2)``, ``mk = m kappa``

:func:`j_moving_oracle` rebuilds the moving-frame matrix from numerically
integrated inner products of the two normalised spin components, using the
general SLD formula for a rank-2 mixture; it shares no closed form with
:func:`j_moving`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError
from .numerics import (
    QuadratureSpec,
    SQRT_PI,
    erfcx,
    integrate_2d_gaussian_weighted,
    one_minus_sqrtpi_x_erfcx,
)
from .state import amplitude_arrays, kappa_eta, xi
from .wigner import PhysicalConfig

PARAM_LABELS = ("theta1", "theta2")


@dataclass(frozen=True)
class FisherMatrix:
    matrix: np.ndarray
    labels: tuple = field(default=PARAM_LABELS)

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=float)
        if mat.shape != (2, 2):
            raise ValueError("Fisher matrix must be 2x2")
        object.__setattr__(self, "matrix", mat)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)

    def is_positive_definite(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.T)) > tol))

    def cr_bound(self) -> "CrBound":
        inv = self.inverse()
        return CrBound(float(inv[0, 0]), float(inv[1, 1]))


@dataclass(frozen=True)
class CrBound:
    """Lower bounds on the mean-square errors of the two shift estimates."""

    var_theta1: float
    var_theta2: float


@dataclass(frozen=True)
class DeltaRatio:
    """Moving-frame over rest-frame Cramer-Rao bound (>= 1)."""

    value: float

    def __float__(self):
        return self.value


def _check_velocity(v: float) -> None:
    if not (math.isfinite(v) and 0.0 <= v <= 1.0):
        raise DomainError(f"velocity must lie in [0, 1], got {v}")


def j_rest(cfg: PhysicalConfig) -> FisherMatrix:
    return FisherMatrix((2.0 / cfg.kappa**2) * np.eye(2))


def kappa_eta_bounds(m_kappa: float) -> tuple[float, float]:
    """Closed-form sandwich ``lower * v <= kappa eta <= upper * v``.

    ``lower = (sqrt(pi)/4) erfcx(mk)`` is the ``v -> 0`` integral (denominator
    ``sqrt(1 + p^2) + 1``); ``upper = mk/2 + (sqrt(pi)/4) erfcx(mk) (1 - 2 mk^2)``
    is the ``v = 1`` integral (denominator ``sqrt(1 + p^2)``). The names follow
    the role in the inequality.
    """
    if not (math.isfinite(m_kappa) and m_kappa > 0):
        raise DomainError("m_kappa must be finite and > 0")
    return SQRT_PI / 4.0 * erfcx(m_kappa), _kappa_eta_limit(m_kappa)


def _kappa_eta_limit(mk: float) -> float:
    # mk/2 + (sqrt(pi)/4) erfcx(mk)(1 - 2 mk^2) rewritten as
    # (mk/2)(1 - r) + r/(4 mk) with r = sqrt(pi) mk erfcx(mk), free of cancellation
    r = SQRT_PI * mk * erfcx(mk)
    return 0.5 * mk * one_minus_sqrtpi_x_erfcx(mk) + r / (4.0 * mk)


def kappa_eta_rel(cfg: PhysicalConfig) -> float:
    """``kappa * eta`` in the relativistic limit (closed form)."""
    return _kappa_eta_limit(cfg.m_kappa)


def _kappa_eta_any(cfg: PhysicalConfig, v: float, spec: QuadratureSpec | None) -> float:
    # the v = 1 endpoint always goes through the closed form
    return kappa_eta_rel(cfg) if v == 1.0 else kappa_eta(cfg, v, spec)


def _moving_from_kappa_eta(cfg: PhysicalConfig, ke: float) -> FisherMatrix:
    return FisherMatrix((2.0 / cfg.kappa**2) * (1.0 - 2.0 * ke * ke) * np.eye(2))


def j_moving(cfg: PhysicalConfig, v: float, spec: QuadratureSpec | None = None) -> FisherMatrix:
    _check_velocity(v)
    return _moving_from_kappa_eta(cfg, _kappa_eta_any(cfg, v, spec))


def j_rel(cfg: PhysicalConfig) -> FisherMatrix:
    return _moving_from_kappa_eta(cfg, kappa_eta_rel(cfg))


def cr_bound(cfg: PhysicalConfig, v: float, spec: QuadratureSpec | None = None) -> CrBound:
    return j_moving(cfg, v, spec).cr_bound()


def delta_ratio(cfg: PhysicalConfig, v: float, spec: QuadratureSpec | None = None) -> DeltaRatio:
    _check_velocity(v)
    ke = _kappa_eta_any(cfg, v, spec)
    return DeltaRatio(1.0 / (1.0 - 2.0 * ke * ke))


def delta_upper_bound(v: float) -> float:
    _check_velocity(v)
    return 1.0 / (1.0 - math.pi * v * v / 8.0)


def weak_commutativity(cfg: PhysicalConfig, v: float, spec: QuadratureSpec | None = None) -> float:
    """``|tr rho [L1, L2]| = 8 xi eta^2`` (the trace itself is purely imaginary)."""
    _check_velocity(v)
    if v == 1.0:
        from .state import xi_rel

        x = xi_rel(cfg)
    else:
        x = xi(cfg, v, spec)
    eta = _kappa_eta_any(cfg, v, spec) / cfg.kappa
    return 8.0 * x * eta * eta


# -- numerical oracle -------------------------------------------------------


@dataclass(frozen=True)
class InnerProducts:
    """Overlaps of the normalised components and their theta-derivatives.

    ``d_d[s][j, k] = <d_j psi_s | d_k psi_s>``, ``d_0[s][j] = <d_j psi_s | psi_s>``
    for ``s`` in ``("down", "up")``; ``up_d_down[j] = <psi_up | d_j psi_down>``.
    """

    weights: tuple
    d_d: dict
    d_0: dict
    up_d_down: np.ndarray
    overlap: complex


def mixture_sld_fisher(ip: InnerProducts) -> np.ndarray:
    """SLD Fisher matrix of ``p_down |psi_down><psi_down| + p_up |psi_up><psi_up|``.

    Valid for orthonormal components with parameter-independent weights (the
    rank-2, non-full-rank case).
    """
    p_down, p_up = ip.weights
    out = np.zeros((2, 2))
    for s, p in (("down", p_down), ("up", p_up)):
        if p == 0.0:
            continue
        dd, d0 = ip.d_d[s], ip.d_0[s]
        out += 4.0 * p * (dd.real - np.real(np.outer(d0, d0.conj())))
    cross = np.real(np.outer(ip.up_d_down.conj(), ip.up_d_down))
    # 8 p p'/(p + p') summed over both orderings
    out -= 16.0 * p_down * p_up * cross
    return 0.5 * (out + out.T)


def component_inner_products(
    cfg: PhysicalConfig,
    v: float,
    spec: QuadratureSpec | None = None,
    theta=(0.37, -0.81),
) -> InnerProducts:
    """Integrate every overlap needed by :func:`mixture_sld_fisher` on the 2D momentum plane.

    ``d_j F = -i p_j F``. The norms of the two components come from the same
    integration, so no closed-form xi enters.
    """
    k2 = cfg.kappa**2
    norm = k2 / math.pi

    def g(p1, p2):
        down, up = amplitude_arrays(theta, p1, p2, cfg, v)
        w = norm * np.exp(-k2 * (p1 * p1 + p2 * p2))
        down, up = down / np.sqrt(w), up / np.sqrt(w)
        comps = [abs(down) ** 2, abs(up) ** 2, up.conj() * down]
        for f in (down, up):
            a2 = abs(f) ** 2
            comps += [p1 * p1 * a2, p1 * p2 * a2, p2 * p2 * a2]
            # <d_j F | F> = i int p_j |F|^2
            comps += [1j * p1 * a2, 1j * p2 * a2]
        # <F_up | d_j F_down> = int conj(F_up) (-i p_j) F_down
        comps += [-1j * p1 * up.conj() * down, -1j * p2 * up.conj() * down]
        return np.stack(comps, axis=-1).astype(complex)

    vals = integrate_2d_gaussian_weighted(g, cfg.kappa, spec, radial_breakpoints=(cfg.m,)).value
    n_down, n_up = vals[0].real, vals[1].real
    overlap = vals[2] / math.sqrt(n_down * n_up) if n_up > 0 else 0.0

    d_d, d_0 = {}, {}
    for i, (s, n) in enumerate((("down", n_down), ("up", n_up))):
        base = 3 + 5 * i
        m11, m12, m22, a1, a2 = vals[base:base + 5]
        if n > 0:
            d_d[s] = np.array([[m11, m12], [m12, m22]]) / n
            d_0[s] = np.array([a1, a2]) / n
        else:
            d_d[s] = np.zeros((2, 2), dtype=complex)
            d_0[s] = np.zeros(2, dtype=complex)
    up_d_down = vals[13:15] / math.sqrt(n_down * n_up) if n_up > 0 else np.zeros(2, dtype=complex)
    total = n_down + n_up
    return InnerProducts((n_down / total, n_up / total), d_d, d_0, up_d_down, complex(overlap))


def j_moving_oracle(cfg: PhysicalConfig, v: float, spec: QuadratureSpec | None = None) -> FisherMatrix:
    """Moving-frame SLD Fisher matrix from numerically integrated overlaps."""
    _check_velocity(v)
    if not 0.0 < v < 1.0:
        raise DomainError("the oracle needs 0 < v < 1")
    ip = component_inner_products(cfg, v, spec)
    for s in ("down", "up"):
        # odd integrands; they vanish analytically
        if np.max(np.abs(ip.d_0[s])) > 1e-8 / cfg.kappa:
            raise AssertionError(f"<d psi_{s}|psi_{s}> does not vanish: {ip.d_0[s]}")
    return FisherMatrix(mixture_sld_fisher(ip))


def pure_state_fisher(cfg: PhysicalConfig, v: float, spec: QuadratureSpec | None = None) -> FisherMatrix:
    """SLD Fisher matrix of the full boosted pure state (spin and momentum observed).

    ``J_jk = 4 Re(<d_j Psi|d_k Psi> - <d_j Psi|Psi><Psi|d_k Psi>)`` integrated
    numerically; unitary invariance says it equals :func:`j_rest`.
    """
    _check_velocity(v)
    if v == 1.0:
        raise DomainError("needs v < 1")
    k2 = cfg.kappa**2
    norm = k2 / math.pi
    theta = (0.37, -0.81)

    def g(p1, p2):
        down, up = amplitude_arrays(theta, p1, p2, cfg, v)
        a2 = (abs(down) ** 2 + abs(up) ** 2) / (norm * np.exp(-k2 * (p1 * p1 + p2 * p2)))
        return np.stack([p1 * p1 * a2, p1 * p2 * a2, p2 * p2 * a2, p1 * a2, p2 * a2], axis=-1)

    m11, m12, m22, a1, a2 = integrate_2d_gaussian_weighted(
        g, cfg.kappa, spec, radial_breakpoints=(cfg.m,)
    ).value
    # <d_j Psi|Psi> = i <p_j>, so the product term is <p_j><p_k>
    mat = 4.0 * (np.array([[m11, m12], [m12, m22]]) - np.outer([a1, a2], [a1, a2]))
    return FisherMatrix(mat)
