"""Hermite polynomial asymptotics in the Plancherel-Rotach scale, with
explicit error bounds checked against a high-precision oracle."""

from .coeffs import RationalPoly, a_poly, d_coeff, p_polys, q_polys
from .expansion import (
    Case,
    CertifiedValue,
    ExpansionRequest,
    OrderError,
    PiMultiple,
    eval_oscillatory,
    eval_outer,
    eval_turning,
    evaluate,
    parse_param,
)
from .highprec import BigComplex, BigReal, CapabilityError, DomainError
from .oracle import actual_epsilon, hermite_recurrence

__version__ = "0.1.0"

__all__ = [
    "BigComplex",
    "BigReal",
    "CapabilityError",
    "Case",
    "CertifiedValue",
    "DomainError",
    "ExpansionRequest",
    "OrderError",
    "PiMultiple",
    "RationalPoly",
    "a_poly",
    "actual_epsilon",
    "d_coeff",
    "eval_oscillatory",
    "eval_outer",
    "eval_turning",
    "evaluate",
    "hermite_recurrence",
    "p_polys",
    "parse_param",
    "q_polys",
]
