"""Quantum Fisher information of a spin-1/2 wave packet seen by a moving observer."""

__version__ = "0.1.0"

from .exceptions import (
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    ResolutionError,
    UnsupportedError,
)
from .fisher import (
    CrBound,
    DeltaRatio,
    FisherMatrix,
    cr_bound,
    delta_ratio,
    delta_upper_bound,
    j_moving,
    j_moving_oracle,
    j_rel,
    j_rest,
    kappa_eta_bounds,
    pure_state_fisher,
    weak_commutativity,
)
from .numerics import QuadratureSpec, erfc, erfcx
from .state import eta, kappa_eta, nu, spin_reduced_state, spin_up_probability, xi, xi_rel
from .wigner import Boost, Momentum2, PhysicalConfig, boost_from_velocity

__all__ = [
    "Boost",
    "ConvergenceError",
    "CrBound",
    "DegenerateInputError",
    "DeltaRatio",
    "DomainError",
    "FisherMatrix",
    "Momentum2",
    "PhysicalConfig",
    "QuadratureSpec",
    "ResolutionError",
    "UnsupportedError",
    "boost_from_velocity",
    "cr_bound",
    "delta_ratio",
    "delta_upper_bound",
    "erfc",
    "erfcx",
    "eta",
    "j_moving",
    "j_moving_oracle",
    "j_rel",
    "j_rest",
    "kappa_eta",
    "kappa_eta_bounds",
    "nu",
    "pure_state_fisher",
    "spin_reduced_state",
    "spin_up_probability",
    "weak_commutativity",
    "xi",
    "xi_rel",
]
