"""Special functions and Gaussian-weighted integration.

Everything downstream reduces to integrals of smooth functions against a
Gaussian weight ``exp(-kappa**2 |p|**2)``, plus the scaled complementary error
function that appears in the closed forms. This module supplies:

* :func:`erfcx` / :func:`erfc` -- domain-checked wrappers around
  ``scipy.special.erfcx``, so ``exp(x**2) * erfc(x)`` never overflows;
* :func:`integrate_semi_infinite` -- adaptive quadrature on ``[0, inf)`` with a
  Gaussian cutoff;
* :func:`integrate_2d_gaussian_weighted` -- integrals against the normalised
  2D Gaussian density, done in polar form (periodic trapezoid in angle,
  adaptive Gauss-Kronrod in radius);
* :func:`mc_integrate` -- an explicitly seeded Monte-Carlo estimate of the
  same 2D integrals, used as an independent oracle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, special

from .exceptions import ConvergenceError, DomainError

SQRT_PI = math.sqrt(math.pi)

# asymptotic expansion of 1 - sqrt(pi) x erfcx(x) is used at and above this
_ASYMPTOTIC_CUTOFF = 8.0


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be > 0, got {self.rel_tol}")
        if not self.abs_tol >= 0:
            raise DomainError(f"abs_tol must be >= 0, got {self.abs_tol}")
        if int(self.max_subdivisions) < 1:
            raise DomainError("max_subdivisions must be >= 1")

    @property
    def cutoff(self) -> float:
        """Dimensionless radius beyond which the Gaussian tail is below abs_tol."""
        floor = max(self.abs_tol, 1e-300)
        return math.sqrt(-math.log(floor)) + 3.0


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class IntegralResult:
    value: float | complex | np.ndarray
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if not self.error_estimate >= 0:
            raise ValueError("error_estimate must be >= 0")
        if self.evaluations < 1:
            raise ValueError("evaluations must be >= 1")


@dataclass(frozen=True)
class McResult:
    value: float | complex
    std_error: float
    n_samples: int
    seed: int


def _check_finite(x: np.ndarray, name: str = "x") -> None:
    if not np.all(np.isfinite(x)):
        raise DomainError(f"{name} must be finite")


def _erfcx_nonneg(x: np.ndarray) -> np.ndarray:
    return special.erfcx(x)


def erfcx(x):
    """Scaled complementary error function ``exp(x**2) * erfc(x)`` for ``x >= 0``.

    Accepts scalars or arrays. Negative arguments raise :class:`DomainError`;
    only nonnegative ones occur in the physics (they are ``m * kappa``).
    """
    arr = np.asarray(x, dtype=float)
    _check_finite(arr)
    if np.any(arr < 0):
        raise DomainError("erfcx is only provided for x >= 0")
    out = _erfcx_nonneg(np.atleast_1d(arr).ravel()).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def erfc(x):
    """Complementary error function, built on :func:`erfcx`.

    For ``x > ~26.5`` the true value is below the smallest normal double and the
    result degrades into subnormals, then zero.
    """
    arr = np.asarray(x, dtype=float)
    _check_finite(arr)
    flat = np.atleast_1d(arr).ravel()
    a = np.abs(flat)
    tail = _erfcx_nonneg(a) * np.exp(-a * a)
    out = np.where(flat >= 0, tail, 2.0 - tail).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def one_minus_sqrtpi_x_erfcx(x):
    """``1 - sqrt(pi) * x * erfcx(x)`` for ``x >= 0`` without cancellation.

    The difference shrinks like ``1/(2 x**2)``; for large ``x`` it is summed from
    the asymptotic series of erfc instead of being formed by subtraction.
    """
    arr = np.asarray(x, dtype=float)
    _check_finite(arr)
    if np.any(arr < 0):
        raise DomainError("argument must be >= 0")
    flat = np.atleast_1d(arr).ravel()
    out = np.empty_like(flat)

    low = flat < _ASYMPTOTIC_CUTOFF
    if np.any(low):
        xl = flat[low]
        out[low] = 1.0 - SQRT_PI * xl * _erfcx_nonneg(xl)
    if np.any(~low):
        xh = flat[~low]
        inv = 1.0 / (2.0 * xh * xh)
        # sum_{n>=1} (-1)^(n+1) (2n-1)!! / (2x^2)^n, truncated at its smallest term
        term = inv.copy()
        total = term.copy()
        for n in range(2, 60):
            nxt = -term * (2 * n - 1) * inv
            if np.all(np.abs(nxt) < 1e-18 * np.abs(total)):
                break
            total += nxt
            term = nxt
        out[~low] = total
    out = out.reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def _resolve(spec: QuadratureSpec | None) -> QuadratureSpec:
    return DEFAULT_SPEC if spec is None else spec


def integrate_semi_infinite(
    f: Callable[[float], float],
    spec: QuadratureSpec | None = None,
    *,
    scale: float = 1.0,
    breakpoints: Sequence[float] = (),
) -> IntegralResult:
    """Integrate ``f`` over ``[0, inf)``.

    ``f`` must decay at least like ``exp(-(p/scale)**2)``; the range is cut at
    ``scale * spec.cutoff`` where the neglected Gaussian tail is below
    ``spec.abs_tol``. ``breakpoints`` marks interior points where ``f`` changes
    character (e.g. ``p ~ m``), which helps the adaptive subdivision.
    """
    spec = _resolve(spec)
    if not scale > 0:
        raise DomainError("scale must be > 0")
    upper = scale * spec.cutoff
    points = sorted(b for b in breakpoints if 0 < b < upper) or None

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(
            f,
            0.0,
            upper,
            epsabs=spec.abs_tol,
            epsrel=spec.rel_tol,
            limit=int(spec.max_subdivisions),
            points=points,
            full_output=1,
        )
    value, abserr, info = out[0], out[1], out[2]
    # guard for truncation and accumulated rounding
    err = abserr + abs(f(upper)) * scale + 50 * np.finfo(float).eps * abs(value)
    if len(out) > 3 and err > max(spec.abs_tol, spec.rel_tol * abs(value)):
        raise ConvergenceError(
            f"semi-infinite quadrature did not converge: {out[3]}",
            best_estimate=value,
            error_estimate=err,
        )
    return IntegralResult(float(value), float(err), int(info["neval"]) + 1)


def integrate_2d_gaussian_weighted(
    g: Callable[[np.ndarray, np.ndarray], np.ndarray],
    kappa: float,
    spec: QuadratureSpec | None = None,
    *,
    radial_breakpoints: Sequence[float] = (),
    n_angles: int = 32,
    max_angles: int = 2048,
) -> IntegralResult:
    """Integrate ``g(p1, p2)`` against ``(kappa**2/pi) exp(-kappa**2 |p|**2)``.

    ``g`` is called with two equal-shape 1D arrays and must return an array of
    that leading shape; extra trailing axes are integrated component-wise and
    complex output is allowed.  ``radial_breakpoints`` are given in momentum
    units.

    The angle is handled by the periodic trapezoid rule (spectrally accurate
    for smooth ``g``) with doubling until the ``n`` and ``n/2`` rules agree;
    the radius by adaptive Gauss-Kronrod on the cut-off range.
    """
    spec = _resolve(spec)
    if not kappa > 0:
        raise DomainError("kappa must be > 0")
    if n_angles < 4 or n_angles % 2:
        raise DomainError("n_angles must be an even integer >= 4")

    upper = spec.cutoff
    points = sorted(kappa * b for b in radial_breakpoints if 0 < kappa * b < upper) or None

    probe = np.asarray(g(np.array([0.3 / kappa]), np.array([0.2 / kappa])))
    trailing = probe.shape[1:] if probe.ndim else ()
    is_complex = np.iscomplexobj(probe)

    n = n_angles
    while True:
        theta = (np.arange(n) + 0.5) * (2.0 * math.pi / n)
        cos_t, sin_t = np.cos(theta), np.sin(theta)

        def radial(u, cos_t=cos_t, sin_t=sin_t):
            r = u / kappa
            vals = np.broadcast_to(np.asarray(g(r * cos_t, r * sin_t)), (cos_t.size,) + trailing)
            full = vals.mean(axis=0)
            half = vals[::2].mean(axis=0)
            w = 2.0 * u * math.exp(-u * u)
            stacked = np.stack([full, half]) * w
            if is_complex:
                return np.concatenate([stacked.real.ravel(), stacked.imag.ravel()])
            return stacked.ravel().astype(float)

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            res, err, info = integrate.quad_vec(
                radial,
                0.0,
                upper,
                epsabs=spec.abs_tol,
                epsrel=spec.rel_tol,
                norm="max",
                limit=int(spec.max_subdivisions),
                points=points,
                full_output=True,
            )
        if is_complex:
            half_len = res.size // 2
            res = res[:half_len] + 1j * res[half_len:]
        res = res.reshape((2,) + trailing)
        full, half = res[0], res[1]
        angular_err = float(np.max(np.abs(full - half)))
        scale = float(np.max(np.abs(full))) if full.size else 0.0
        target = max(spec.abs_tol, spec.rel_tol * scale)
        total_err = float(err) + 50 * np.finfo(float).eps * scale
        evaluations = int(info.neval) * n
        if info.status != 0 and err > target:
            raise ConvergenceError(
                f"radial quadrature did not converge: {info.message}",
                best_estimate=full,
                error_estimate=total_err,
            )
        if angular_err <= target:
            value = full.item() if full.ndim == 0 else full
            # the half rule's discrepancy bounds the full rule's error many times over
            return IntegralResult(value, total_err, evaluations)
        if n >= max_angles:
            raise ConvergenceError(
                f"angular trapezoid did not converge with {n} nodes",
                best_estimate=full,
                error_estimate=total_err + angular_err,
            )
        n *= 2


def mc_integrate(
    g: Callable[[np.ndarray, np.ndarray], np.ndarray],
    kappa: float,
    n_samples: int,
    seed: int,
    *,
    chunk_size: int = 1 << 18,
) -> McResult:
    """Monte-Carlo estimate of the same integral as :func:`integrate_2d_gaussian_weighted`.

    Samples are drawn directly from the weight (each momentum component is
    normal with variance ``1/(2 kappa**2)``), so the estimate is the sample
    mean of ``g``. A PCG64 generator seeded with ``seed`` makes the result
    bit-reproducible.
    """
    if not kappa > 0:
        raise DomainError("kappa must be > 0")
    if n_samples < 1000:
        raise DomainError("n_samples must be >= 1000")
    if not 0 <= seed < 2**64:
        raise DomainError("seed must be a 64-bit unsigned integer")

    rng = np.random.Generator(np.random.PCG64(seed))
    sigma = 1.0 / (math.sqrt(2.0) * kappa)
    values = []
    remaining = n_samples
    while remaining:
        k = min(chunk_size, remaining)
        pts = rng.standard_normal((2, k)) * sigma
        values.append(np.broadcast_to(np.asarray(g(pts[0], pts[1])), (k,)))
        remaining -= k
    samples = np.concatenate(values)
    mean = samples.mean()
    if np.iscomplexobj(samples):
        spread = math.sqrt(samples.real.var(ddof=1) + samples.imag.var(ddof=1))
    else:
        mean = float(mean)
        spread = float(samples.std(ddof=1))
    return McResult(mean, spread / math.sqrt(n_samples), n_samples, int(seed))
