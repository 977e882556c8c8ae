"""Numerical toolkit for Yamabe-type equations along isoparametric functions.

Reduces the semilinear problem -Delta u + lam*u = lam*u^q on families of
homogeneous and isoparametric geometries to a singular two-point ODE,
computes the invariant Laplacian spectrum by Wronskian shooting, follows
nontrivial solution branches by pseudo-arclength continuation, counts
solutions at fixed lam, and verifies the curvature and polynomial identities
behind the geometric examples.
"""

from .config import DEFAULT_CONFIG, RunConfig, load_config
from .geometry import (
    GeometryEntry,
    MunznerProfile,
    catalog,
    closed_form_mu,
    get_entry,
    h_eval,
    validate_exponent,
)
from .odecore import EquationParams, IVPTrace, endpoint_accel, integrate, integrate_linearized, miss

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONFIG",
    "RunConfig",
    "load_config",
    "GeometryEntry",
    "MunznerProfile",
    "catalog",
    "closed_form_mu",
    "get_entry",
    "h_eval",
    "validate_exponent",
    "EquationParams",
    "IVPTrace",
    "endpoint_accel",
    "integrate",
    "integrate_linearized",
    "miss",
    "__version__",
]
