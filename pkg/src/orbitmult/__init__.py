"""Numerical toolkit for periodic-orbit multipliers of centered monic
complex polynomials: orbit enumeration, the multiplier map with its
Jacobian and rank certificates, a Blaschke disk model, and Newton
continuation up to the construction of polynomials with n-1 attracting
cycles of prescribed exact periods."""

__version__ = "0.1.0"

from .errors import OrbitmultError
from .poly import CentPoly, DensePoly, compose_self_minus_id, iterate
from .roots import RootSet, all_roots, refine_root
from .orbits import (
    Config,
    PeriodicOrbit,
    orbit_multiplier,
    orbits_of_exact_period,
    periodic_points,
    refine_periodic_point,
    sample_config,
)
from .multmap import (
    MultJacobian,
    fixed_point_residual,
    independence_certificate,
    lambda_jacobian,
    lambda_jacobian_fd,
    lambda_map,
)
from .hypmodel import (
    BlaschkeParam,
    attracting_audit,
    mu_eval,
    mu_multiplier,
    mu_param_from_multiplier,
)
from .steer import (
    SteerOptions,
    SteerPath,
    construct_attracting,
    continue_path,
    newton_invert,
    seed_fixed_attracting,
)

__all__ = [
    "OrbitmultError",
    "CentPoly",
    "DensePoly",
    "compose_self_minus_id",
    "iterate",
    "RootSet",
    "all_roots",
    "refine_root",
    "Config",
    "PeriodicOrbit",
    "orbit_multiplier",
    "orbits_of_exact_period",
    "periodic_points",
    "refine_periodic_point",
    "sample_config",
    "MultJacobian",
    "fixed_point_residual",
    "independence_certificate",
    "lambda_jacobian",
    "lambda_jacobian_fd",
    "lambda_map",
    "BlaschkeParam",
    "attracting_audit",
    "mu_eval",
    "mu_multiplier",
    "mu_param_from_multiplier",
    "SteerOptions",
    "SteerPath",
    "construct_attracting",
    "continue_path",
    "newton_invert",
    "seed_fixed_attracting",
]
