"""Data behind the five figures and the single-point ``compute`` record.

Every ``cmd_*`` function takes a :class:`RunConfig` and returns plain data
(a list of :class:`CurveSeries` or a dict); writing files is left to the CLI.
Points at ``v = 1`` always come from closed forms.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import __version__
from .exceptions import DomainError
from .fisher import (
    delta_ratio,
    delta_upper_bound,
    j_moving,
    j_rel,
    j_rest,
    kappa_eta_bounds,
    kappa_eta_rel,
    weak_commutativity,
)
from .numerics import QuadratureSpec
from .series import CurveSeries
from .state import kappa_eta, nu, nu_rel, spin_up_probability, xi, xi_rel
from .wavefunction import (
    MomentumGrid,
    classical_fisher_position,
    density_derivative_profile,
    psi_up_profile,
)
from .wigner import PhysicalConfig

COMMANDS = ("fig1", "fig2", "fig3", "fig4", "fig5", "compute", "validate")

# per-figure defaults for the velocity and kappa sets
FIG_DEFAULTS = {
    "fig1": {"v_list": (0.1, 0.5, 0.95, 1.0), "kappa": 1.0},
    "fig2": {"v_list": (0.99, 0.98, 0.9, 0.7, 0.1), "kappa": 0.1, "m": 1.0},
    "fig3": {"v_list": (0.98, 0.9, 0.7, 0.1), "kappa": 0.1, "m": 1.0},
    "fig4": {"kappa_list": (0.1, 0.5, 1.0, 3.0), "m": 1.0},
    "fig5": {"v_list": (0.95, 0.7, 0.1), "kappa": 1.0},
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    m: float = 1.0
    kappa: float = 1.0
    v: float = 0.5
    v_list: tuple = ()
    kappa_list: tuple = ()
    mk_min: float = 1e-2
    mk_max: float = 10.0
    mk_points: int = 200
    v_points: int = 200
    grid_points: int = 512
    x_max: float = 0.5
    x_points: int = 401
    out: str | None = None
    format: str = "csv"
    seed: int = 12345
    rel_tol: float = 1e-10
    classical_fi: bool = False
    jobs: int = 1
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        for name in ("m", "kappa", "x_max", "mk_min", "mk_max"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val > 0):
                raise DomainError(f"{name} must be finite and > 0, got {val}")
        if self.mk_min >= self.mk_max:
            raise DomainError("mk_min must be below mk_max")
        for v in (self.v,) + tuple(self.v_list):
            if not (math.isfinite(v) and 0.0 <= v <= 1.0):
                raise DomainError(f"velocities must lie in [0, 1], got {v}")
        for k in self.kappa_list:
            if not (math.isfinite(k) and k > 0):
                raise DomainError(f"kappa values must be finite and > 0, got {k}")
        for name in ("grid_points", "x_points", "mk_points", "v_points"):
            if getattr(self, name) < 16:
                raise DomainError(f"{name} must be >= 16")
        if self.grid_points % 2:
            raise DomainError("grid_points must be even")
        if self.format not in ("csv", "json"):
            raise DomainError("format must be csv or json")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if not (self.rel_tol > 0):
            raise DomainError("rel_tol must be > 0")
        if self.jobs < 1:
            raise DomainError("jobs must be >= 1")

    @property
    def spec(self) -> QuadratureSpec:
        return QuadratureSpec(rel_tol=self.rel_tol)

    @property
    def grid(self) -> MomentumGrid:
        return MomentumGrid(self.grid_points)

    def with_figure_defaults(self, explicit: set) -> "RunConfig":
        """Fill per-figure defaults for every field the user did not set."""
        defaults = FIG_DEFAULTS.get(self.command, {})
        return replace(self, **{k: v for k, v in defaults.items() if k not in explicit})

    def to_dict(self) -> dict:
        d = asdict(self)
        d["v_list"] = list(self.v_list)
        d["kappa_list"] = list(self.kappa_list)
        return d


def _map(fn, items, jobs: int):
    # results come back in input order regardless of completion order
    if jobs == 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _base_meta(cfg: RunConfig) -> dict:
    return {"rel_tol": cfg.rel_tol, "version": __version__}


def _mk_grid(cfg: RunConfig) -> np.ndarray:
    return np.logspace(math.log10(cfg.mk_min), math.log10(cfg.mk_max), cfg.mk_points)


def cmd_fig1(cfg: RunConfig) -> list:
    """Spin-up probability ``(1 - xi)/2`` against ``m kappa``."""
    mks = _mk_grid(cfg)
    out = []
    for v in cfg.v_list:
        def point(mk, v=v):
            pc = PhysicalConfig(mk / cfg.kappa, cfg.kappa)
            return 0.5 * (1.0 - xi_rel(pc)) if v == 1.0 else spin_up_probability(pc, v, cfg.spec)

        ys = _map(point, mks, cfg.jobs)
        meta = {**_base_meta(cfg), "v": v, "kappa": cfg.kappa,
                "path": "closed-form" if v == 1.0 else "quadrature"}
        out.append(CurveSeries(f"fig1_v{v!r}", "m_kappa", "p_up", mks, ys, meta))
    return out


def _x_grid(cfg: RunConfig) -> np.ndarray:
    return np.linspace(-cfg.x_max, cfg.x_max, cfg.x_points)


def cmd_fig2(cfg: RunConfig) -> list:
    """Spin-up density on the ``x2 = 0`` slice, raw normalisation."""
    pc = PhysicalConfig(cfg.m, cfg.kappa)
    xs = _x_grid(cfg)
    out = []
    for v in cfg.v_list:
        prof = psi_up_profile(pc, v, xs, "appendix-c-raw", cfg.grid, cfg.spec)
        meta = {**_base_meta(cfg), "v": v, "m": cfg.m, "kappa": cfg.kappa,
                "mode": "appendix-c-raw", "grid_points": cfg.grid_points}
        out.append(CurveSeries(f"fig2_v{v!r}", "x1", "density_up", xs, prof.values, meta))
    return out


def cmd_fig3(cfg: RunConfig) -> list:
    """``x1``-derivative of the spin-up density."""
    pc = PhysicalConfig(cfg.m, cfg.kappa)
    xs = _x_grid(cfg)
    out = []
    for v in cfg.v_list:
        prof = density_derivative_profile(pc, v, xs, "appendix-c-raw", cfg.grid, cfg.spec)
        meta = {**_base_meta(cfg), "v": v, "m": cfg.m, "kappa": cfg.kappa,
                "mode": "appendix-c-raw", "grid_points": cfg.grid_points}
        out.append(CurveSeries(f"fig3_v{v!r}", "x1", "d_density_up_dx1", xs, prof.values, meta))
    return out


def cmd_fig4(cfg: RunConfig) -> list:
    """Bound ratio Delta(V) for each kappa."""
    vs = np.linspace(0.0, 1.0, cfg.v_points)
    out = []
    for k in cfg.kappa_list:
        pc = PhysicalConfig(cfg.m, k)
        ys = _map(lambda v: delta_ratio(pc, float(v), cfg.spec).value, vs, cfg.jobs)
        meta = {**_base_meta(cfg), "m": cfg.m, "kappa": k}
        out.append(CurveSeries(f"fig4_kappa{k!r}", "v", "delta", vs, ys, meta))
    return out


def cmd_fig5(cfg: RunConfig) -> list:
    """``kappa eta / V`` against ``m kappa`` with the two closed-form bounds."""
    mks = _mk_grid(cfg)
    out = []
    for v in cfg.v_list:
        if v == 0.0:
            raise DomainError("kappa eta / V is undefined at V = 0")

        def point(mk, v=v):
            pc = PhysicalConfig(mk / cfg.kappa, cfg.kappa)
            ke = kappa_eta_rel(pc) if v == 1.0 else kappa_eta(pc, v, cfg.spec)
            return ke / v

        ys = _map(point, mks, cfg.jobs)
        meta = {**_base_meta(cfg), "v": v, "kappa": cfg.kappa}
        out.append(CurveSeries(f"fig5_v{v!r}", "m_kappa", "kappa_eta_over_v", mks, ys, meta))
    bounds = np.array([kappa_eta_bounds(mk) for mk in mks])
    out.append(CurveSeries("fig5_lower_bound", "m_kappa", "kappa_eta_over_v", mks, bounds[:, 0],
                           {**_base_meta(cfg), "path": "closed-form"}))
    out.append(CurveSeries("fig5_upper_bound", "m_kappa", "kappa_eta_over_v", mks, bounds[:, 1],
                           {**_base_meta(cfg), "path": "closed-form"}))
    return out


def _mat(a) -> list:
    return [[float(x) for x in row] for row in np.asarray(a)]


def cmd_compute(cfg: RunConfig) -> dict:
    """All scalar and matrix quantities at a single ``(m, kappa, v)``."""
    pc = PhysicalConfig(cfg.m, cfg.kappa)
    v = cfg.v
    limit = v == 1.0
    spec = cfg.spec
    x = xi_rel(pc) if limit else xi(pc, v, spec)
    ke = kappa_eta_rel(pc) if limit else kappa_eta(pc, v, spec)
    jm = j_moving(pc, v, spec)
    cr = jm.cr_bound()
    rec = {
        "inputs": {"m": cfg.m, "kappa": cfg.kappa, "v": v},
        "xi": x,
        "xi_rel": xi_rel(pc),
        "p_up": 0.5 * (1.0 - x),
        "eta": ke / cfg.kappa,
        "kappa_eta": ke,
        "nu": nu_rel(pc) if limit else nu(pc, v, spec),
        "J_rest": _mat(j_rest(pc).matrix),
        "J_moving": _mat(jm.matrix),
        "J_rel": _mat(j_rel(pc).matrix),
        "delta": delta_ratio(pc, v, spec).value,
        "delta_upper_bound": delta_upper_bound(v),
        "weak_commutativity": weak_commutativity(pc, v, spec),
        "cr_variances": [cr.var_theta1, cr.var_theta2],
        "tolerances": {"rel_tol": spec.rel_tol, "abs_tol": spec.abs_tol},
        "provenance": {
            "package": "wignerqfi",
            "version": __version__,
            "path": "closed-form" if limit else "quadrature",
        },
    }
    if cfg.classical_fi:
        if limit:
            raise DomainError("the classical position Fisher information needs v < 1")
        fi = classical_fisher_position(pc, v, cfg.grid)
        rec["classical_fi"] = {"theta1": fi.fi_theta1, "theta2": fi.fi_theta2,
                               "excluded_mass": fi.excluded_mass, "grid": fi.grid_spec}
    return rec


FIGURE_COMMANDS = {
    "fig1": cmd_fig1,
    "fig2": cmd_fig2,
    "fig3": cmd_fig3,
    "fig4": cmd_fig4,
    "fig5": cmd_fig5,
}
