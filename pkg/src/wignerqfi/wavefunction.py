"""Coordinate-space densities of the two spin components and the position-measurement Fisher information.

The coordinate wavefunction of a component with momentum amplitude ``F`` is
the 2D unitary Fourier transform

    psi(x1, x2) = (1/2pi) int dp1 dp2 exp(-i p.x) F(p1, p2)

on the ``x3 = 0`` slice (the ``p3``/``x3`` direction only contributes the
``sqrt(cosh chi)`` amplitude factor of the raw convention). Integrals are
evaluated with the trapezoid rule on a uniform momentum window
``|p_j| <= p_max``, which is spectrally accurate because every integrand is a
smooth function damped by a Gaussian. ``x``-derivatives are taken under the
integral (multiply by ``-i p1``).

Normalisation modes:

``"2d-normalized"``
    each component divided by the square root of its weight, so its 2D
    density integrates to 1.
``"appendix-c-raw"``
    the normalised amplitude times ``sqrt(cosh chi) / (2 pi)``, i.e. the
    density scaled by ``cosh chi / (2 pi)^2``. This is the absolute scale used
    by the ``fig2`` and ``fig3`` data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .exceptions import DegenerateInputError, DomainError, ResolutionError
from .numerics import QuadratureSpec
from .state import amplitude_arrays, xi
from .wigner import PhysicalConfig, boost_from_velocity

MODES = ("appendix-c-raw", "2d-normalized")
DENSITY_FLOOR = 1e-300


@dataclass(frozen=True)
class MomentumGrid:
    """Uniform ``n x n`` momentum grid on ``[-p_max, p_max)``; ``p_max`` defaults to ``8/kappa``."""

    n: int = 512
    p_max_kappa: float = 8.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 16 or self.n % 2:
            raise DomainError(f"grid size must be an even integer >= 16, got {self.n}")
        if not (math.isfinite(self.p_max_kappa) and self.p_max_kappa > 0):
            raise DomainError("p_max_kappa must be finite and > 0")

    def p_max(self, cfg: PhysicalConfig) -> float:
        return self.p_max_kappa / cfg.kappa

    def dp(self, cfg: PhysicalConfig) -> float:
        return 2.0 * self.p_max(cfg) / self.n

    def axis(self, cfg: PhysicalConfig) -> np.ndarray:
        # zero sits at index n/2, as fftshift expects
        return (np.arange(self.n) - self.n // 2) * self.dp(cfg)

    def x_limit(self, cfg: PhysicalConfig) -> float:
        """Largest resolvable ``|x|`` (Nyquist): ``pi / dp``."""
        return math.pi / self.dp(cfg)


DEFAULT_GRID = MomentumGrid()


@dataclass(frozen=True)
class DensityProfile:
    grid: np.ndarray
    values: np.ndarray
    normalization_mode: str

    def __post_init__(self):
        if self.normalization_mode not in MODES + ("derivative",):
            raise ValueError(f"unknown mode {self.normalization_mode!r}")
        if len(self.grid) != len(self.values):
            raise ValueError("grid and values differ in length")


@dataclass(frozen=True)
class ClassicalFisher:
    fi_theta1: float
    fi_theta2: float
    excluded_mass: float
    grid_spec: dict


def _check_open_velocity(v: float) -> None:
    if not (math.isfinite(v) and 0.0 < v < 1.0):
        raise DomainError(f"need 0 < v < 1, got {v}")


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _check_x(x, cfg: PhysicalConfig, grid: MomentumGrid) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.ndim != 1 or not np.all(np.isfinite(x)):
        raise DomainError("x grid must be a finite 1D array")
    lim = grid.x_limit(cfg)
    if x.size and np.max(np.abs(x)) >= lim:
        raise ResolutionError(
            f"max |x| = {np.max(np.abs(x)):.4g} exceeds the Nyquist limit {lim:.4g} of a "
            f"{grid.n}-point momentum grid; increase the grid size or reduce the x range"
        )
    return x


def _components(cfg: PhysicalConfig, v: float, grid: MomentumGrid):
    """Unnormalised ``(F_down, F_up)`` at ``theta = 0`` on the 2D momentum grid (index ``[p1, p2]``)."""
    p = grid.axis(cfg)
    p1, p2 = np.meshgrid(p, p, indexing="ij")
    return amplitude_arrays((0.0, 0.0), p1, p2, cfg, v)


def _scale(cfg: PhysicalConfig, v: float, weight: float, mode: str) -> float:
    """Amplitude factor turning an unnormalised component into the requested mode."""
    s = 1.0 / math.sqrt(weight)
    if mode == "appendix-c-raw":
        s *= math.sqrt(boost_from_velocity(v).cosh_chi) / (2.0 * math.pi)
    return s


def _slice(f: np.ndarray, x: np.ndarray, cfg: PhysicalConfig, grid: MomentumGrid, derivative: bool = False):
    """``psi(x1, 0)`` (and optionally ``d psi/dx1``) by direct summation over ``p1``."""
    p = grid.axis(cfg)
    dp = grid.dp(cfg)
    g = f.sum(axis=1) * dp
    kernel = np.exp(-1j * np.outer(x, p)) * (dp / (2.0 * math.pi))
    psi = kernel @ g
    if not derivative:
        return psi
    return psi, kernel @ (-1j * p * g)


def _weights(cfg: PhysicalConfig, v: float, spec: QuadratureSpec | None):
    x = xi(cfg, v, spec)
    return 0.5 * (1.0 + x), 0.5 * (1.0 - x)


def psi_up_profile(
    cfg: PhysicalConfig,
    v: float,
    x,
    mode: str = "2d-normalized",
    grid: MomentumGrid = DEFAULT_GRID,
    spec: QuadratureSpec | None = None,
) -> DensityProfile:
    """``|psi_up(x1, 0)|^2`` of the normalised spin-up component."""
    _check_open_velocity(v)
    _check_mode(mode)
    x = _check_x(x, cfg, grid)
    _, up = _components(cfg, v, grid)
    psi = _slice(up, x, cfg, grid) * _scale(cfg, v, _weights(cfg, v, spec)[1], mode)
    return DensityProfile(x, np.abs(psi) ** 2, mode)


def psi_down_profile(
    cfg: PhysicalConfig,
    v: float,
    x,
    mode: str = "2d-normalized",
    grid: MomentumGrid = DEFAULT_GRID,
    spec: QuadratureSpec | None = None,
) -> DensityProfile:
    """``|psi_down(x1, 0)|^2`` of the normalised spin-down component (``0 <= v < 1``)."""
    if not (math.isfinite(v) and 0.0 <= v < 1.0):
        raise DomainError(f"need 0 <= v < 1, got {v}")
    _check_mode(mode)
    x = _check_x(x, cfg, grid)
    down, _ = _components(cfg, v, grid)
    psi = _slice(down, x, cfg, grid) * _scale(cfg, v, _weights(cfg, v, spec)[0], mode)
    return DensityProfile(x, np.abs(psi) ** 2, mode)


def density_derivative_profile(
    cfg: PhysicalConfig,
    v: float,
    x,
    mode: str = "appendix-c-raw",
    grid: MomentumGrid = DEFAULT_GRID,
    spec: QuadratureSpec | None = None,
) -> DensityProfile:
    """``d/dx1 |psi_up(x1, 0)|^2``, differentiated under the integral."""
    _check_open_velocity(v)
    _check_mode(mode)
    x = _check_x(x, cfg, grid)
    _, up = _components(cfg, v, grid)
    psi, dpsi = _slice(up, x, cfg, grid, derivative=True)
    s2 = _scale(cfg, v, _weights(cfg, v, spec)[1], mode) ** 2
    return DensityProfile(x, 2.0 * s2 * np.real(np.conj(psi) * dpsi), "derivative")


def _up_slice_functions(cfg: PhysicalConfig, v: float, grid: MomentumGrid):
    _, up = _components(cfg, v, grid)
    p = grid.axis(cfg)
    dp = grid.dp(cfg)
    g = up.sum(axis=1) * dp

    def density(xv):
        k = np.exp(-1j * np.multiply.outer(xv, p))
        return np.abs(k @ g) ** 2

    def derivative(xv):
        k = np.exp(-1j * np.multiply.outer(xv, p))
        return 2.0 * np.real(np.conj(k @ g) * (k @ (-1j * p * g)))

    return density, derivative


def peak_location(
    cfg: PhysicalConfig,
    v: float,
    grid: MomentumGrid = DEFAULT_GRID,
    *,
    n_scan: int = 600,
    x_max: float | None = None,
) -> float:
    """Positive ``x1`` of the spin-up density maximum on the ``x2 = 0`` slice.

    A coarse scan brackets the maximum, then the root of the spectral
    derivative inside the bracketing cells is found with Brent's method.
    """
    _check_open_velocity(v)
    if x_max is None:
        x_max = min(8.0 * cfg.kappa + 4.0 / cfg.m, 0.9 * grid.x_limit(cfg))
    _check_x([x_max], cfg, grid)
    density, derivative = _up_slice_functions(cfg, v, grid)
    xs = np.linspace(0.0, x_max, n_scan + 1)[1:]
    vals = density(xs)
    i = int(np.argmax(vals))
    if i == 0 or i == len(xs) - 1:
        raise DegenerateInputError("no interior maximum of the spin-up density in the scan range")
    lo, hi = xs[i - 1], xs[i + 1]
    d_lo, d_hi = derivative(lo), derivative(hi)
    if not (d_lo > 0 > d_hi):
        # flat-topped bracket; the coarse maximum is the best estimate
        return float(xs[i])
    return float(brentq(derivative, lo, hi, xtol=1e-14 * max(1.0, hi), rtol=1e-14))


def coordinate_grid(cfg: PhysicalConfig, grid: MomentumGrid = DEFAULT_GRID) -> np.ndarray:
    """The ``x`` axis conjugate to the momentum grid (spacing ``2 pi / (n dp)``)."""
    dx = 2.0 * math.pi / (grid.n * grid.dp(cfg))
    return (np.arange(grid.n) - grid.n // 2) * dx


def _fft2(f: np.ndarray, cfg: PhysicalConfig, grid: MomentumGrid) -> np.ndarray:
    # psi(x_j) = (1/2pi) sum_k F(p_k) exp(-i p_k x_j) dp^2; numpy's forward FFT has the minus sign
    dp = grid.dp(cfg)
    return np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(f))) * (dp * dp / (2.0 * math.pi))


def density_2d(
    cfg: PhysicalConfig,
    v: float,
    component: str,
    grid: MomentumGrid = DEFAULT_GRID,
    spec: QuadratureSpec | None = None,
) -> np.ndarray:
    """Normalised 2D density of ``component`` (``"up"`` or ``"down"``) on :func:`coordinate_grid`."""
    if component == "up":
        _check_open_velocity(v)
        f = _components(cfg, v, grid)[1]
        w = _weights(cfg, v, spec)[1]
    elif component == "down":
        if not (math.isfinite(v) and 0.0 <= v < 1.0):
            raise DomainError(f"need 0 <= v < 1, got {v}")
        f = _components(cfg, v, grid)[0]
        w = _weights(cfg, v, spec)[0]
    else:
        raise ValueError("component must be 'up' or 'down'")
    return np.abs(_fft2(f, cfg, grid)) ** 2 / w


def total_probability(
    cfg: PhysicalConfig,
    v: float,
    component: str,
    grid: MomentumGrid = DEFAULT_GRID,
    spec: QuadratureSpec | None = None,
) -> float:
    """``int int |psi|^2 dx1 dx2`` of a normalised component on the coordinate grid."""
    x = coordinate_grid(cfg, grid)
    dx = x[1] - x[0]
    return float(density_2d(cfg, v, component, grid, spec).sum() * dx * dx)


def classical_fisher_position(
    cfg: PhysicalConfig,
    v: float,
    grid: MomentumGrid = DEFAULT_GRID,
) -> ClassicalFisher:
    """Fisher information of a position measurement on the spin-unobserved state.

    The outcome density is ``p = |psi_down|^2 + |psi_up|^2`` with the weights
    ``(1 +- xi)/2`` already carried by the unnormalised components. Because
    ``theta`` is a pure translation, ``d p / d theta_j = -d p / d x_j``, and both
    derivatives are spectral. Points with ``p`` below ``1e-300`` times its
    maximum are dropped; their mass is reported as ``excluded_mass``.
    """
    if not (math.isfinite(v) and 0.0 <= v < 1.0):
        raise DomainError(f"need 0 <= v < 1, got {v}")
    down, up = _components(cfg, v, grid)
    p = grid.axis(cfg)
    p1 = p[:, None]
    p2 = p[None, :]
    x = coordinate_grid(cfg, grid)
    dx = x[1] - x[0]

    dens = np.zeros((grid.n, grid.n))
    d1 = np.zeros_like(dens)
    d2 = np.zeros_like(dens)
    for f in (down, up):
        psi = _fft2(f, cfg, grid)
        dens += np.abs(psi) ** 2
        d1 += 2.0 * np.real(np.conj(psi) * _fft2(-1j * p1 * f, cfg, grid))
        d2 += 2.0 * np.real(np.conj(psi) * _fft2(-1j * p2 * f, cfg, grid))

    keep = dens > DENSITY_FLOOR * dens.max()
    fi1 = float(np.sum(d1[keep] ** 2 / dens[keep]) * dx * dx)
    fi2 = float(np.sum(d2[keep] ** 2 / dens[keep]) * dx * dx)
    excluded = float(dens[~keep].sum() * dx * dx)
    spec = {
        "n": grid.n,
        "p_max": grid.p_max(cfg),
        "dx": float(dx),
        "x_extent": float(grid.n * dx),
        "floor": DENSITY_FLOOR,
    }
    return ClassicalFisher(fi1, fi2, excluded, spec)
