"""Boost kinematics, the Wigner rotation and its spin-1/2 representation.

The observer moves along z with velocity ``v``; the particle has ``p3 = 0``.
For this geometry the little-group element ``W = L^-1(Lambda p) Lambda L(p)``
is a pure spatial rotation that factors as ``R3(phi) R2(alpha) R3(-phi)`` with
``phi`` the azimuth of the transverse momentum and

    cos(alpha) = (E + m cosh chi) / (E cosh chi + m)
    sin(alpha) = -|p| sinh chi / (E cosh chi + m),      E = sqrt(m^2 + |p|^2).

Internally the angle formulas are written with ``s = sqrt(1 - v^2)`` (numerator
and denominator divided by ``cosh chi``) which stays finite at ``v = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateInputError, DomainError, UnsupportedError


@dataclass(frozen=True)
class PhysicalConfig:
    """Particle mass ``m`` and wave-packet spread ``kappa`` (natural units)."""

    m: float
    kappa: float

    def __post_init__(self):
        if not (math.isfinite(self.m) and self.m > 0):
            raise DomainError(f"m must be finite and > 0, got {self.m}")
        if not (math.isfinite(self.kappa) and self.kappa > 0):
            raise DomainError(f"kappa must be finite and > 0, got {self.kappa}")

    @property
    def m_kappa(self) -> float:
        return self.m * self.kappa


@dataclass(frozen=True)
class Boost:
    """Boost along z. ``v == 1`` is the relativistic-limit marker (infinite rapidity)."""

    v: float
    cosh_chi: float
    sinh_chi: float

    def __post_init__(self):
        if not 0.0 <= self.v <= 1.0:
            raise DomainError(f"velocity must lie in [0, 1], got {self.v}")
        if self.is_limit:
            return
        if self.cosh_chi < 1.0 or self.sinh_chi < 0.0:
            raise DomainError("need cosh_chi >= 1 and sinh_chi >= 0")
        c, s = self.cosh_chi, self.sinh_chi
        if abs((c - s) * (c + s) - 1.0) > 1e-12 * max(1.0, c * c):
            raise DomainError("cosh_chi**2 - sinh_chi**2 != 1")

    @property
    def is_limit(self) -> bool:
        return self.v == 1.0

    @property
    def inv_gamma(self) -> float:
        """``sqrt(1 - v**2)``, i.e. ``1/cosh chi``; zero at the limit."""
        return math.sqrt((1.0 - self.v) * (1.0 + self.v))


def boost_from_velocity(v: float) -> Boost:
    if not (math.isfinite(v) and 0.0 <= v <= 1.0):
        raise DomainError(f"velocity must lie in [0, 1], got {v}")
    if v == 1.0:
        return Boost(1.0, math.inf, math.inf)
    g = 1.0 / math.sqrt((1.0 - v) * (1.0 + v))
    return Boost(float(v), g, v * g)


@dataclass(frozen=True)
class Momentum2:
    """Transverse momentum ``(p1, p2)``; the longitudinal component is zero."""

    p1: float
    p2: float

    @property
    def magnitude(self) -> float:
        return math.hypot(self.p1, self.p2)


@dataclass(frozen=True)
class WignerAngles:
    cos_alpha: float
    sin_alpha: float
    phi: float

    def __post_init__(self):
        if abs(self.cos_alpha**2 + self.sin_alpha**2 - 1.0) > 1e-12:
            raise DomainError("cos_alpha**2 + sin_alpha**2 != 1")
        if not -math.pi < self.phi <= math.pi:
            raise DomainError("phi must lie in (-pi, pi]")

    @property
    def alpha(self) -> float:
        return math.atan2(self.sin_alpha, self.cos_alpha)

    @property
    def cos_half(self) -> float:
        return math.sqrt(0.5 * (1.0 + self.cos_alpha))

    @property
    def sin_half(self) -> float:
        # sin(a/2) = sin(a) / (2 cos(a/2)) keeps precision for small alpha
        return self.sin_alpha / (2.0 * self.cos_half)


def rotation_cos_sin(pabs, m: float, v: float):
    """Vectorised ``(cos alpha, sin alpha)`` for magnitudes ``pabs``.

    Valid for ``0 <= v <= 1``; at ``v = 1`` it returns the limiting values
    ``(m/E, -|p|/E)``.
    """
    pabs = np.asarray(pabs, dtype=float)
    s = math.sqrt((1.0 - v) * (1.0 + v))
    energy = np.hypot(m, pabs)
    denom = energy + m * s
    return (energy * s + m) / denom, -pabs * v / denom


def half_angle_cos_sin(pabs, m: float, v: float):
    """Vectorised ``(cos alpha/2, sin alpha/2)``; ``sin alpha/2 <= 0``."""
    cos_a, sin_a = rotation_cos_sin(pabs, m, v)
    ch = np.sqrt(0.5 * (1.0 + cos_a))
    return ch, sin_a / (2.0 * ch)


def _require_finite_boost(b: Boost) -> None:
    if b.is_limit:
        raise UnsupportedError(
            "the boost matrix has no v = 1 limit; use the closed-form limit paths"
        )


def boost_momentum(p: Momentum2, b: Boost, cfg: PhysicalConfig) -> np.ndarray:
    """Spatial part of the boosted four-momentum, ``(p1, p2, -E sinh chi)``."""
    _require_finite_boost(b)
    energy = math.hypot(cfg.m, p.magnitude)
    return np.array([p.p1, p.p2, -energy * b.sinh_chi])


def wigner_angles(p: Momentum2, b: Boost, cfg: PhysicalConfig) -> WignerAngles:
    _require_finite_boost(b)
    cos_a, sin_a = rotation_cos_sin(p.magnitude, cfg.m, b.v)
    # phi is irrelevant at the origin (every use carries a factor sin(alpha/2))
    phi = math.atan2(p.p2, p.p1) if p.magnitude > 0 else 0.0
    if phi == -math.pi:
        phi = math.pi
    return WignerAngles(float(cos_a), float(sin_a), phi)


def rot2(alpha: float) -> np.ndarray:
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])


def rot3(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def euler_reconstruct(a: WignerAngles) -> np.ndarray:
    """``R3(phi) R2(alpha) R3(-phi)``: rotation by alpha about ``z x p_hat``.

    With ``R2``/``R3`` as defined by :func:`rot2`/:func:`rot3` this is the
    ordering that reproduces :func:`wigner_matrix`; the reverse ordering
    ``R3(-phi) R2(alpha) R3(phi)`` gives the matrix at the mirrored momentum
    ``(p1, -p2)``.
    """
    return rot3(a.phi) @ rot2(a.alpha) @ rot3(-a.phi)


def _standard_boost(p3: np.ndarray, m: float) -> np.ndarray:
    """Pure boost ``L(p)`` taking ``(m, 0, 0, 0)`` to ``(E, p)``."""
    pp = float(p3 @ p3)
    energy = math.sqrt(m * m + pp)
    out = np.eye(4)
    out[0, 0] = energy / m
    out[0, 1:] = out[1:, 0] = p3 / m
    if pp > 0:
        out[1:, 1:] += (energy - m) * np.outer(p3, p3) / (m * pp)
    return out


def _lorentz_z(b: Boost) -> np.ndarray:
    lam = np.eye(4)
    lam[0, 0] = lam[3, 3] = b.cosh_chi
    lam[0, 3] = lam[3, 0] = -b.sinh_chi
    return lam


def _little_group(p: Momentum2, b: Boost, cfg: PhysicalConfig) -> np.ndarray:
    """Full 4x4 ``L^-1(Lambda p) Lambda L(p)`` by direct matrix composition."""
    p3 = np.array([p.p1, p.p2, 0.0])
    q3 = boost_momentum(p, b, cfg)
    # inverse of a pure boost is the boost with reversed 3-momentum
    return _standard_boost(-q3, cfg.m) @ _lorentz_z(b) @ _standard_boost(p3, cfg.m)


def wigner_matrix(p: Momentum2, b: Boost, cfg: PhysicalConfig) -> np.ndarray:
    """Spatial 3x3 block of the Wigner rotation from its entry-wise closed forms.

    The ``(2, 2)`` entry is the ``(1, 1)`` formula with ``p1`` and ``p2``
    exchanged; the two are not equal in general.
    """
    _require_finite_boost(b)
    pp = p.p1**2 + p.p2**2
    if pp == 0.0:
        raise DegenerateInputError("|p| = 0: use wigner_angles (alpha = 0) instead")
    m, ch, sh = cfg.m, b.cosh_chi, b.sinh_chi
    e = math.sqrt(m * m + pp)
    p1, p2 = p.p1, p.p2
    d = e * ch + m

    def diag(a, c):
        num = e * (m * a * a + e * c * c) * sh * sh + pp * (a * a * ch + c * c)
        return num / (pp * (e * e * sh * sh + pp))

    w11 = diag(p1, p2)
    w22 = diag(p2, p1)
    w12 = -p1 * p2 * (ch - 1.0) * (e - m) / (pp * d)
    w31 = -p1 * sh / d
    w32 = -p2 * sh / d
    w33 = (e + m * ch) / (m + e * ch)
    rot = np.array([[w11, w12, -w31], [w12, w22, -w32], [w31, w32, w33]])

    composed = _little_group(p, b, cfg)
    tol = 1e-10 * ch * ch
    assert abs(composed[0, 0] - 1.0) < tol, "time-time entry of W is not 1"
    assert np.all(np.abs(composed[0, 1:]) < tol) and np.all(np.abs(composed[1:, 0]) < tol), (
        "W mixes time and space"
    )
    return rot


def spin_half_rep(a: WignerAngles) -> np.ndarray:
    """SU(2) matrix ``[[c, -e^{i phi} s], [e^{-i phi} s, c]]`` with ``c, s = cos, sin(alpha/2)``.

    Acting on the spin-down column ``(0, 1)`` it yields the ``(up, down)``
    amplitudes used for the boosted state. Read in the ``(up, down)`` basis its
    adjoint action is ``R3(-phi) R2(-alpha) R3(phi)``; read in ``(down, up)``
    order it is exactly :func:`wigner_matrix`. The two differ by
    ``phi -> -phi, alpha -> -alpha``, to which no Fisher quantity is sensitive.
    """
    c, s = a.cos_half, a.sin_half
    ph = complex(math.cos(a.phi), math.sin(a.phi))
    return np.array([[c, -ph * s], [ph.conjugate() * s, c]], dtype=complex)
